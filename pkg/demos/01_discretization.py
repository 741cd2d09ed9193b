"""Turning stage efforts into fuzzy intervals.

Each development stage gets its own universe of discourse: the observed
range widened by a pad on either side, cut into n equal-width intervals.
Run with ``python demos/01_discretization.py``.
"""

# %%
# A specification stage observed between 22 and 162 effort units, padded by
# 12 below and 8 above, split four ways.
from stage_effort import Explicit, Fraction, Stage, build_universe, defuzzify, locate, membership, partition

universe = build_universe([22.0, 80.0, 162.0], Explicit(12, 8))
scheme = partition(universe, 4, stage=Stage.ES)
print(f"U = [{scheme.lower:g}, {scheme.upper:g}], L = {scheme.length:g}")
for j in range(1, scheme.n + 1):
    lo, hi = scheme.interval(j)
    print(f"  W{j}: [{lo:g}, {hi:g}{']' if j == scheme.n else ')'}  centre {scheme.midpoints[j - 1]:g}")

# %%
# Values map to an interval index. Anything outside the universe is clamped
# to the nearest end interval and flagged.
for value in (10.0, 49.999, 50.0, 170.0, 400.0):
    where = locate(scheme, value)
    print(f"{value:>8g} -> W{where.index}{'  (out of universe)' if where.out_of_universe else ''}")

# %%
# Membership is 1 inside an interval and 0.5 on its immediate neighbours, so
# a fuzzy term W_j stands for the weighted mean of up to three centres.
print([membership(3, j, scheme.n) for j in range(1, 5)])
print("defuzzified W1..W4:", [defuzzify(scheme, j) for j in range(1, 5)])

# %%
# Defuzzification also accepts any list of centres. With centres 20, 35, 55
# and 70 the fourth term gives 65 and the third 53.75.
print(defuzzify([20, 35, 55, 70], 4), defuzzify([20, 35, 55, 70], 3))

# %%
# Without explicit pads the default widens each side by 5 % of the range.
print(build_universe([22.0, 162.0], Fraction(0.05)))
