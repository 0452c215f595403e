"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria 1, 6, 7 and 8 share a single sweep of every enumerated spec up to
dimension 12 (Lefschetz verdicts up to 10, twenty seeded exact perturbations
per spec up to 8); the remaining criteria drive the library directly.  All
checks are exact: no tolerances anywhere except the 1e-9 interval-width
bound in the lattice certificates, which is itself part of the criterion.
"""

import random
import time
from fractions import Fraction as F

import pytest

from llab.algebra import JordanSpec, build
from llab.cohomology import (
    circuit_form,
    circuits_of,
    closed_two_form_structure,
    cohomology,
    companion,
    delta_form,
    is_exact,
    poincare_pairing,
)
from llab.exact import SpanReducer
from llab.exterior import KForm, power, wedge
from llab.lattice import LatticeSpec, certify
from llab.lefschetz import (
    SymplecticError,
    default_symplectic,
    kernel_witness_check,
    normalize_symplectic,
    pullback,
    validate_symplectic,
)
from llab.sweep import run_sweep

SWEEP_BUDGET_SECONDS = 300.0


def report(criterion: int, passed: bool, detail: str):
    marker = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {criterion} {marker}: {detail}")
    assert passed, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def sweep():
    t0 = time.time()
    summary = run_sweep(
        max_dim=12, lefschetz_cap=10, perturb_cap=8, perturbations=20, seed=0
    )
    summary.elapsed = time.time() - t0
    return summary


def make(blocks, v=None):
    return build(JordanSpec.make(blocks, v=v))


def test_criterion_1_differential_soundness(sweep):
    ok = (
        sweep.failed("d_squared_zero") == 0
        and sweep.passed("d_squared_zero") == sweep.specs_checked
        and sweep.elapsed < SWEEP_BUDGET_SECONDS
    )
    report(
        1,
        ok,
        f"d.d = 0 on all {sweep.specs_checked} specs up to dim 12 "
        f"({sweep.elapsed:.1f}s < {SWEEP_BUDGET_SECONDS:.0f}s)",
    )


def test_criterion_2_low_and_top_betti_values():
    ok = True
    for m in range(1, 6):
        alg = make([(1, m, 1), (-1, m, 1)])
        from llab.cohomology import betti

        values = (
            betti(alg, 1),
            betti(alg, 2),
            betti(alg, alg.dim - 2),
            betti(alg, alg.dim - 1),
        )
        if values != (2, m + 1, m + 1, 2):
            ok = False
            break
    report(2, ok, "b1 = 2, b2 = b_{2n-2} = m+1, b_{2n-1} = 2 for m = 1..5")


def test_criterion_3_circuit_counts_and_independence():
    rng = random.Random(3)
    ok = True
    detail = "counts, closedness, non-exactness, independence over (r,s) in {1..4}^2"
    for r in range(1, 5):
        for s in range(r, 5):
            if r == s:
                alg = make([(1, r, 2), (-1, r, 2)])
            else:
                alg = make([(1, r, 1), (1, s, 1), (-1, r, 1), (-1, s, 1)])
            same = circuits_of(alg, 0, 0)
            distinct = circuits_of(alg, 0, 1)
            if len(same) != alg.layout.double_blocks[0].size:
                ok, detail = False, f"same-block count wrong at (r,s)=({r},{s})"
                break
            if len(distinct) != r + s + 2 * min(r, s):
                ok, detail = False, f"pair count wrong at (r,s)=({r},{s})"
                break
            red = SpanReducer()
            for i, c in enumerate(distinct):
                if not alg.d(c.form).is_zero() or is_exact(alg, c.form) is not None:
                    ok, detail = False, f"circuit not closed/non-exact at ({r},{s})"
                    break
                if red.insert(dict(c.form.terms), i) is not None:
                    ok, detail = False, f"dependent circuits at ({r},{s})"
                    break
            if not ok:
                break
            combo = KForm(alg.dim, 2)
            for c in distinct:
                combo = combo + rng.choice([1, -1, 2, F(1, 2)]) * c.form
            if is_exact(alg, combo) is not None:
                ok, detail = False, f"circuit combination exact at ({r},{s})"
                break
        if not ok:
            break
    report(3, ok, detail)


def test_criterion_4_pairing_identity():
    ok = True
    for m in range(1, 6):
        alg = make([(1, m, 1), (-1, m, 1)])
        for circ in circuits_of(alg, 0, 0):
            h = companion(alg, circ)
            if poincare_pairing(alg, circ.form, h) != circ.length:
                ok = False
                break
        if not ok:
            break
    report(4, ok, "top_coefficient(g_l ^ h_l) = l for all 1 <= l <= m <= 5, exact")


def test_criterion_5_kernel_witness():
    ok = True
    for m in (2, 3, 4):
        alg = make([(1, m, 1), (-1, m, 1)])
        db = alg.layout.double_blocks[0]
        omega = delta_form(alg) + circuit_form(alg, db, db, m)
        image = wedge(power(omega, alg.n - 2), circuit_form(alg, db, db, 1))
        if is_exact(alg, image) is None:
            ok = False
            break
        proof = kernel_witness_check(alg)
        if not (proof.primitive_matches and proof.engine_primitive_agrees):
            ok = False
            break
    report(
        5,
        ok,
        "omega^(n-2) ^ (x^1^x^(m+1)) exact with the scaled explicit primitive, m = 2..4",
    )


def test_criterion_6_main_theorem_conformance(sweep):
    ran = sweep.passed("verdict_agreement") + sweep.failed("verdict_agreement")
    ok = sweep.failed("verdict_agreement") == 0 and ran >= 100
    report(
        6,
        ok,
        f"verdict and failure degree match the prediction on all {ran} admissible "
        "specs up to dim 10 (zero disagreements)",
    )


def test_criterion_6_regimes_spot_checks():
    # the three structural regimes, asserted directly
    from llab.lefschetz import hard_lefschetz_report

    semi = make([(1, 1, 1), (-1, 1, 1), (2, 1, 1), (-2, 1, 1)])
    r = hard_lefschetz_report(semi, default_symplectic(semi))
    report(6, r.verdict == "HLC" and all(d.bijective for d in r.degrees),
           "semisimple spectrum: every operator bijective")
    nil = make([(0, 2, 1), (1, 1, 1), (-1, 1, 1)], v=None)
    r = hard_lefschetz_report(nil, default_symplectic(nil))
    report(6, (r.verdict, r.first_failure_degree) == ("fails", 1),
           "nonzero nilpotent action on the zero part: failure at degree 1")
    pair = make([(1, 2, 1), (-1, 2, 1)])
    r = hard_lefschetz_report(pair, default_symplectic(pair))
    report(6, (r.verdict, r.first_failure_degree) == ("fails", 2) and r.degrees[1].bijective,
           "invertible action with a big block: failure at degree 2, degree 1 bijective")


def test_criterion_7_verdict_invariance(sweep):
    ran = sweep.passed("verdict_invariance") + sweep.failed("verdict_invariance")
    ok = sweep.failed("verdict_invariance") == 0 and ran >= 30
    report(
        7,
        ok,
        f"verdict and failure degree unchanged under 20 seeded exact perturbations "
        f"on all {ran} admissible specs up to dim 8",
    )


def test_criterion_8_poincare_duality(sweep):
    ok = (
        sweep.failed("poincare_duality") == 0
        and sweep.passed("poincare_duality") == sweep.specs_checked
    )
    report(8, ok, f"b_k = b_(2n-k) on all {sweep.specs_checked} unimodular sweep specs")


def test_criterion_9_normalization():
    palette = [1, -1, 2, -2, F(1, 2), F(-1, 2), F(3, 2)]
    ok = True
    detail = "10 seeds per block count p in {1,2}: d phi* = phi* d and normal shape"
    for p, blocks in ((1, [(1, 3, 1), (-1, 3, 1)]), (2, [(1, 2, 2), (-1, 2, 2)])):
        alg = make(blocks)
        dbs = alg.layout.double_blocks
        target = delta_form(alg)
        for db in dbs:
            target = target + circuit_form(alg, db, db, db.size)
        for seed in range(10):
            rng = random.Random(f"{p}|{seed}")
            while True:
                om = delta_form(alg)
                for a in dbs:
                    for b in dbs:
                        if a.lam != b.lam:
                            continue
                        top = min(a.size, b.size)
                        for l in range(1, top + 1):
                            c = rng.choice(palette + [0, 0])
                            if a is b and l == a.size:
                                c = rng.choice(palette)  # keep the top term nonzero
                            if c:
                                om = om + c * circuit_form(alg, a, b, l)
                try:
                    sym = validate_symplectic(alg, om)
                    break
                except SymplecticError:
                    continue
            res = normalize_symplectic(alg, sym)
            if res.normal_form.form != target:
                ok, detail = False, f"wrong normal form (p={p}, seed={seed})"
                break
            P = res.basis_change
            for g in range(alg.dim):
                e = KForm.monomial(alg.dim, [g])
                if not (alg.d(pullback(P, e)) - pullback(P, alg.d(e))).is_zero():
                    ok, detail = False, f"substitution not a morphism (p={p}, seed={seed})"
                    break
            if not ok:
                break
            residue = (F(1) / res.scale) * om - pullback(P, target)
            if is_exact(alg, residue) is None:
                ok, detail = False, f"residue not exact (p={p}, seed={seed})"
                break
        if not ok:
            break
    report(9, ok, detail)


def test_criterion_10_lattice_certificates():
    specs = (
        [LatticeSpec("i", t=t) for t in (1, 2, 3)]
        + [LatticeSpec("ii", pairs=((k, m),)) for k in (3, 4, 5) for m in (2, 3)]
        + [LatticeSpec("iii", t=1, pairs=((3, 1),))]
    )
    ok = True
    for spec in specs:
        cert = certify(spec)
        if not all(isinstance(c, int) for c in cert.char_poly):
            ok = False
            break
        if cert.determinant != 1 or cert.max_interval_width > 1e-9:
            ok = False
            break
    report(
        10,
        ok,
        f"{len(specs)} certificates: integer char polys, det 1, interval width <= 1e-9",
    )


def test_criterion_11_closed_two_form_patterns():
    alg1 = make([(1, 4, 1), (-1, 4, 1)])
    rep1 = closed_two_form_structure(alg1)
    grid1 = {(g.plus_block, g.minus_block): g.free_params for g in rep1.grids}
    ok = grid1 == {(0, 0): 4} and all(g.hankel_ok for g in rep1.grids)

    alg2 = make([(1, 4, 1), (1, 3, 1), (-1, 4, 1), (-1, 3, 1)])
    rep2 = closed_two_form_structure(alg2)
    grid2 = {(g.plus_block, g.minus_block): g.free_params for g in rep2.grids}
    ok = ok and grid2 == {(0, 0): 4, (0, 1): 3, (1, 0): 3, (1, 1): 3}
    ok = ok and all(g.hankel_ok for g in rep2.grids)
    ok = ok and rep1.orthogonality_ok and rep2.orthogonality_ok
    report(
        11,
        ok,
        "antidiagonal alternating patterns with free parameters 4 and 4+3+3+3",
    )
