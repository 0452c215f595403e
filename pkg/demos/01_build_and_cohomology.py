"""Build almost abelian Lie algebras from Jordan data and read off cohomology.

An algebra is R f_1 acting on an abelian ideal R f_2 + u_0 through a structure
matrix A; everything about it is encoded by the Jordan blocks of A restricted
to u_0 (eigenvalue, size, multiplicity), plus an optional shift vector when 0
is an eigenvalue.  All arithmetic is exact rational, so every Betti number
below is a theorem about the specific algebra, not a numerical estimate.
"""

from llab import JordanSpec, betti_numbers, build, cohomology

EXAMPLES = [
    ("abelian plane", []),
    ("flat torus (dim 6)", [(0, 1, 4)]),
    ("diagonal +-1", [(1, 1, 1), (-1, 1, 1)]),
    ("paired size-2 Jordan blocks", [(1, 2, 1), (-1, 2, 1)]),
    ("nilpotent chain J2(0)", [(0, 2, 1)]),
    ("mixed: zero plane + paired blocks", [(0, 1, 2), (1, 2, 1), (-1, 2, 1)]),
]

for name, blocks in EXAMPLES:
    alg = build(JordanSpec.make(blocks))
    print(f"== {name}: dim {alg.dim}")
    print("   structure matrix rows:", [[str(v) for v in r] for r in alg.structure_matrix.to_lists()])
    print("   betti:", betti_numbers(alg))
    h1 = cohomology(alg, 1)
    print("   H^1 representatives:", [alg.form_text(r) for r in h1.representatives])
    h2 = cohomology(alg, 2)
    print("   H^2 representatives:", [alg.form_text(r) for r in h2.representatives])
    print()

# the differential never leaves the complex: d . d = 0, exactly
alg = build(JordanSpec.make([(0, 2, 1), (1, 1, 1), (-1, 1, 1)], v=[0, 1]))
print("shift vector present: d f^2 =", alg.form_text(alg.d(__import__("llab").KForm.monomial(alg.dim, [1]))))
for k in range(alg.dim):
    assert (alg.differential(k + 1) * alg.differential(k)).is_zero()
print("d_{k+1} d_k = 0 for every k on the shifted example: verified exactly")
