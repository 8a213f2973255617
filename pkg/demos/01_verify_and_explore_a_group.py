"""
Loading a Schottky group and checking it is in good position
============================================================

"""

from pathlib import Path

# a group file names a prime, generator matrices over Q, and 2g balls
from schottky_theta import load_group, word_count

GROUPS = Path(__file__).resolve().parent.parent / "groups"
group = load_group(str(GROUPS / "q3_plain.json"), 40)

# every condition of the good-position definition, one line each: the balls
# are pairwise disjoint and each generator maps the outside of its partner
# ball onto the closure of its own
print(group.verify_good_position())

# the domain is what is left of the line after removing the open balls;
# small integers give handy sample points
desc = group.desc
for n in range(9):
    z = desc.from_int(n, 40)
    where = group.ball_containing(z)
    print(f"z = {n}: {'ball B_' + str(where) if where is not None else 'fundamental domain'}")

# any point outside the limit set reduces into the closed domain by a
# unique group element; points already inside do not move
word, z0 = group.reduce_point(desc.from_fraction("1/5", 40))
print("1/5 reduces by word", word, "to", z0)

# the group is free on g generators, so counting reduced words is a closed
# formula; the enumerator and the formula agree
print("words of length <= 6:", word_count(group.genus, 6))
