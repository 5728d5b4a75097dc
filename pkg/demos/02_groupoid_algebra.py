"""Arithmetic in the groupoid convolution algebra of the Fibonacci subshift.

Run: python3 demos/02_groupoid_algebra.py
"""
from liegrowth.groupoid import Subshift, filtration_growth, truncated_center_check
from liegrowth.words import factor_language, fibonacci

lang = factor_language(fibonacci(), 160, 10_000)
X = Subshift(lang)
Dx, Dy, T = X.D("0"), X.D("1"), X.T()

# The two cylinders partition the unit space, and T is invertible.
print("D_x + D_y == 1:", Dx + Dy == X.one())
print("T T^-1 == 1:  ", T * X.T(-1) == X.one())

# phi(v) is the product of D_a T over the letters of v.  It vanishes exactly
# on non-factors: "11" and "000" never occur in the Fibonacci word.
for v in ("00", "010", "11", "000"):
    e = X.phi(v)
    print(f"phi({v}) =", e.dump() if not e.is_zero() else "0")

# Growth of the filtration generated by 1, D_x, D_y, T, T^-1 is sandwiched
# between n c(n/C)/C and C n c(C n).
g = filtration_growth(lang, 10)
print("dims:", g.dims, " sandwich constant C =", g.sandwich_C)
print("centre beyond scalars, levels 0..6:", [truncated_center_check(g, n) for n in range(7)])
