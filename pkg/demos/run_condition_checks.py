"""Walk through the necessary-condition checks on five small hand examples.

Each block prints the numbers the check is built on, then the verdict.
Run as: python3 demos/run_condition_checks.py
"""

import numpy as np

from corrgen import (
    Correlation,
    SchmidtSpectrum,
    check_all,
    mutual_information,
    shannon_entropy,
    v2_classical,
)


def show(title, spectrum, target):
    print(f"\n=== {title} ===")
    print("target P =")
    print(np.array_str(target.matrix, precision=4))
    print("seed spectrum λ =", np.array_str(spectrum.lambdas, precision=4))
    print(f"I(P) = {mutual_information(target):.4f} bits, "
          f"H(λ) = {shannon_entropy(spectrum.lambdas):.4f} bits, "
          f"V2'(P) = {v2_classical(target):.4f}")
    report = check_all(spectrum, target)
    for rec in report.records:
        tag = "ok " if rec.satisfied else "VIOLATED"
        alpha = f" (α={rec.alpha})" if rec.alpha is not None else ""
        print(f"  {tag}  {rec.name}{alpha}: lhs={rec.lhs:.6g} rhs={rec.rhs:.6g}")
    print("verdict:", report.verdict)


bell = SchmidtSpectrum([0.5, 0.5])

# A biased perfect correlation is beyond a Bell pair: the smallest Schmidt
# coefficient is too large for the 0.3 cell.
show("biased perfect bit vs Bell pair",
     bell, Correlation([[0.3, 0.0], [0.0, 0.7]]))

# Here the mutual information of the target exceeds what the seed's
# entropy allows, even though the min-Schmidt test is blind to it.
show("Holevo-limited target",
     SchmidtSpectrum([8 / 9, 1 / 9]),
     Correlation(np.array([[1, 4], [4, 0]]) / 9))

# The quadratic correlation measure V2 catches this pair while the
# entropy-based test does not.
show("V2-limited target",
     SchmidtSpectrum([0.9, 0.1]),
     Correlation(np.array([[2, 6], [3, 0]]) / 11))

# Fidelity-sum and V2 are incomparable: this seed passes V2 but fails
# the row-fidelity bound on the same target.
show("fidelity-sum-limited seed",
     SchmidtSpectrum([21 / 25, 4 / 25]),
     Correlation(np.array([[2, 6], [3, 0]]) / 11))

# A 3x3 target where the fidelity bound is happy but the sharpest cell
# ratio still rules the Bell seed out.
show("3x3 target vs Bell pair",
     bell, Correlation(np.array([[4, 1, 1], [1, 1, 0], [1, 0, 1]]) / 10))
