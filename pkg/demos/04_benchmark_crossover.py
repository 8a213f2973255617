"""
Where word products stop and power series keep going
====================================================

"""

import csv
import tempfile
from pathlib import Path

# the benchmark lives behind the command line front end; drive it in
# process and read back its CSV
from schottky_theta.cli import main

GROUPS = Path(__file__).resolve().parent.parent / "groups"
out = Path(tempfile.mkdtemp()) / "bench.csv"

# time both algorithms on the same divisors for a sweep of digit targets;
# the naive column is skipped automatically once the word budget is blown
main([
    "bench", str(GROUPS / "q3_plain.json"),
    "--m-start", "4", "--m-end", "20", "--m-step", "5",
    "--budget", "100000",
    "--seed", "0",
    "--out", str(out),
])

with open(out, newline="") as fh:
    rows = list(csv.DictReader(fh))

print(f"{'m':>4} {'algo':>6} {'nu':>4} {'time':>12}")
for r in rows:
    print(f"{r['m']:>4} {r['algo']:>6} {r['nu']:>4} {int(r['time_ns']) / 1e6:>10.1f}ms")

# each extra truncation level multiplies the word count by 2g - 1, and the
# budget cuts the naive column off entirely once the count passes it; the
# series column keeps growing only polynomially
naive_ms = {r["m"] for r in rows if r["algo"] == "naive"}
fast_ms = {r["m"] for r in rows if r["algo"] == "fast"}
print("naive gave up at m in", sorted(int(m) for m in fast_ms - naive_ms))
