"""
Period matrices, logarithmic derivatives and the canonical map
==============================================================

"""

import warnings
from pathlib import Path

from schottky_theta import canonical_embedding, load_group, period_matrix, u_gamma_dlog

GROUPS = Path(__file__).resolve().parent.parent / "groups"
group = load_group(str(GROUPS / "q3_plain.json"), 40)
desc = group.desc

# Q_ij pairs the i-th generator against the j-th; the matrix presents the
# Jacobian of the quotient curve as a multiplicative torus modulo its rows
P = period_matrix(group, 10)
for i in range(group.genus):
    for j in range(group.genus):
        print(f"Q[{i + 1}][{j + 1}] =", P.entries[i][j])

# symmetry is a theorem, so the observed asymmetry valuation doubles as an
# accuracy readout
print("asymmetry valuation:", P.asymmetry_valuation())

# automorphic forms u_gamma have computable logarithmic derivatives; their
# values at a point are the coordinates of the canonical map
z = desc.from_int(7, 40)
print("dlog u_1 at 7:", u_gamma_dlog(group, (1,), z, 12))

# genus 2 is too small for the canonical map to embed the curve, and the
# library says so
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    x = canonical_embedding(group, z, 10)
print("canonical point:", tuple(str(c) for c in x))
