"""From a substitution word to the commutator Lie algebra of its monomial algebra.

Run: python3 demos/01_words_to_lie_algebra.py
"""
from liegrowth.liecomm import lie_growth_proxy, verify_quarter_bound
from liegrowth.monomial import MonomialAlgebra
from liegrowth.words import factor_language, fibonacci, thue_morse

# %% Factor complexity.  Sturmian words have c(n) = n + 1; Thue-Morse grows
# a little faster but is still linear.
for src in (fibonacci(), thue_morse()):
    lang = factor_language(src, 16, 10_000)
    print(f"{src.describe():12s} c(1..16) = {lang.complexity}")

# %% The monomial algebra A_w has A(n) spanned by the length-n factors, so its
# growth is the running sum of c(n).
alg = MonomialAlgebra(factor_language(fibonacci(), 13, 10_000))
print("gamma_A(1..12) =", [alg.growth(n) for n in range(1, 13)])

# %% Degree by degree, [A, A] is a large share of A: at least a quarter of
# dim A(n-2).  The report keeps the split used in the argument.
for n in range(3, 13):
    r = verify_quarter_bound(alg, n)
    print(f"n={n:2d}  dim A(n)={r.dimA:3d}  dim [A,A](n)={r.commDim:3d}  "
          f">= {float(r.bound):5.2f}  split {r.split_dims}  ok={r.passed and r.chain_ok}")

# %% Summing the commutator dimensions gives a growth proxy squeezed between
# a quarter of gamma_A(n-2) and gamma_A(n).
for row in lie_growth_proxy(alg, 12):
    print(row.n, float(row.lower), row.proxy, row.upper)
