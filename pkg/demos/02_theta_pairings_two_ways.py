"""
The theta pairing of two divisors, by word products and by power series
=======================================================================

"""

from pathlib import Path

from schottky_theta import (
    Divisor0,
    compute_bounds,
    load_group,
    nu_for_target,
    pair_truncation,
    theta_naive,
    theta_pair,
)

GROUPS = Path(__file__).resolve().parent.parent / "groups"
group = load_group(str(GROUPS / "q3_plain.json"), 60)
desc = group.desc

# two degree-zero divisors supported in the fundamental domain
pt = lambda n: desc.from_int(n, 60)
D = Divisor0([(pt(7), 1), (pt(0), -1)])
E = Divisor0([(pt(3), 1), (pt(8), -1)])

# contraction data of the group decides how long a truncation is needed
# for m correct digits; the growth is linear in m
bounds = compute_bounds(group)
for m in (5, 10, 20, 40):
    print(f"m = {m:3d} digits -> truncate at word length {nu_for_target(m, D, bounds)}")

# the transparent way: multiply (D, gamma E) over every reduced word up to
# the truncation length; cost grows exponentially with the length
m = 12
nu = pair_truncation(group, D, m)
slow = theta_naive(group, D, E, nu).value
print("word product :", slow)

# the fast way: one power series per ball, squeezed through the iteration
# that replaces enumeration; same first m digits
fast = theta_pair(group, D, E, m)
print("power series :", fast)
print("agreement to valuation", (fast / slow - pt(1)).valuation())
