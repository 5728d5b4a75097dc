"""q-dimensions: the scale Phi^q_alpha and a function that falls between levels.

Run: python3 demos/03_q_dimensions.py
"""
import mpmath

from liegrowth.qdim import dim_estimate, verify_doubling, verify_layer_gap
from liegrowth.regularize import GrowthSeries, check_conditions, dyadic, f_prime, formula

# ceil(Phi^3_0.5) is recovered at level 3.
est = dim_estimate(3, formula("phi", q=3, sigma=0.5), dyadic(30))
print("level 3 estimate for Phi^3_0.5:", float(est.dim), float(est.dimsup))

# n^{ln n} outgrows every polynomial but stays under every exp(n^a); the level-2
# value grows like ln n and the level-3 value decays like 2 ln ln n / ln n.
for k in (64, 512, 4400):
    pts = dyadic(k, 1)
    logs = GrowthSeries({n: mpmath.log(n) ** 2 for n in pts}, meta={"log": True})
    print(f"grid to 2^{k}:  Dim2 ~ {float(dim_estimate(2, logs, pts).dim):8.1f}"
          f"   Dim3 ~ {float(dim_estimate(3, logs, pts).dim):.4f}")

# The regularised function f' of n^{ln n} meets the three dyadic conditions.
print(check_conditions(f_prime(formula("n_pow_ln"), 1), 1).summary())

# Doubling estimates for ceil(Phi^q_sigma), and the between-layer family.
for q, s in ((3, 0.9), (4, 0.5)):
    c = verify_doubling(q, s).check("doubling")
    print(f"q={q} sigma={s}: phi(2n) >= n phi(n) from n = {c.onset_n}")
for q in (2, 3, 4):
    print(f"f_{q}:", verify_layer_gap(q).trends)
