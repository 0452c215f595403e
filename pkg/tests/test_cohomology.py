"""cohomology: Betti numbers, exactness, circuits, companions, structure."""

import random
from itertools import combinations
from fractions import Fraction as F
from math import comb

import pytest

from llab.algebra import JordanSpec, build
from llab.cohomology import (
    NotClosedError,
    betti,
    betti_numbers,
    circuit_form,
    circuits_of,
    closed_two_form_structure,
    cohomology,
    companion,
    delta_form,
    gamma_form,
    is_exact,
    poincare_pairing,
    verify_h2_structure,
)
from llab.exact import QMatrix, nullspace_basis, rank
from llab.exterior import KForm, to_text, top_coefficient, wedge


def make(blocks, v=None):
    return build(JordanSpec.make(blocks, v=v))


def single_block(m, lam=1):
    return make([(lam, m, 1), (-lam, m, 1)])


# -- Betti numbers -----------------------------------------------------------


@pytest.mark.parametrize("dim", [2, 4, 6])
def test_betti_abelian_binomials(dim):
    alg = make([(0, 1, dim - 2)] if dim > 2 else [])
    assert betti_numbers(alg) == [comb(dim, k) for k in range(dim + 1)]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_betti_first_is_two_without_zero_eigenvalue(m):
    alg = single_block(m)
    assert betti(alg, 1) == 2


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_betti_second_counts_circuits(m):
    alg = single_block(m)
    assert betti(alg, 2) == m + 1


def test_betti_against_generic_matrix_ranks():
    # independent oracle: b_k = dim ker d_k - rank d_(k-1), both via the
    # generic elimination on the full differential matrices
    for blocks, v in [
        ([(1, 2, 1), (-1, 2, 1)], None),
        ([(0, 2, 1), (1, 1, 1), (-1, 1, 1)], [0, 1]),
        ([(F(1, 2), 1, 2), (F(-1, 2), 1, 2)], None),
    ]:
        alg = make(blocks, v)
        for k in range(alg.dim + 1):
            dk = alg.differential(k)
            rk = rank(dk)
            rkm1 = rank(alg.differential(k - 1)) if k else 0
            assert betti(alg, k) == dk.cols - rk - rkm1


def test_representatives_are_cocycles_and_independent():
    alg = make([(0, 2, 1), (1, 1, 1), (-1, 1, 1)], v=[0, 1])
    for k in range(alg.dim + 1):
        space = cohomology(alg, k)
        assert space.betti == len(space.representatives)
        for rep in space.representatives:
            assert alg.d(rep).is_zero()
        # projection of each representative is the matching unit vector
        for i, rep in enumerate(space.representatives):
            coords = space.project(rep)
            assert coords == [F(int(j == i)) for j in range(space.betti)]


def test_project_rejects_non_cocycles():
    alg = single_block(2)
    x1 = KForm.monomial(alg.dim, [2])
    with pytest.raises(NotClosedError):
        cohomology(alg, 1).project(x1)


def test_express_splits_off_exact_part():
    alg = single_block(2)
    space = cohomology(alg, 2)
    rep = space.representatives[1]
    eta = KForm.monomial(alg.dim, [3])
    shifted = rep + alg.d(eta)
    coords, exact_part = space.express(shifted)
    assert coords == space.project(rep)
    assert is_exact(alg, exact_part) is not None


# -- exactness ---------------------------------------------------------------


def test_delta_closed_non_exact():
    alg = single_block(2)
    assert is_exact(alg, delta_form(alg)) is None


def test_zero_form_has_zero_primitive():
    alg = single_block(1)
    prim = is_exact(alg, KForm(alg.dim, 2))
    assert prim is not None and prim.is_zero()


def test_f1_wedge_covector_exact_when_action_invertible():
    rng = random.Random(17)
    alg = make([(1, 2, 1), (-1, 2, 1), (2, 1, 1), (-2, 1, 1)])
    for _ in range(10):
        nu = KForm(alg.dim, 1)
        for g in range(2, alg.dim):
            nu = nu + KForm.monomial(alg.dim, [g], rng.choice([0, 1, -2, F(1, 3)]))
        form = wedge(KForm.monomial(alg.dim, [0]), nu)
        prim = is_exact(alg, form)
        assert prim is not None
        assert (alg.d(prim) - form).is_zero()


def test_f1_wedge_chain_covector_non_exact_over_zero_eigenvalue():
    # two nilpotent chains: f^1 ^ x^2 survives in cohomology
    alg = make([(0, 2, 2)])
    form = KForm(alg.dim, 2, {(1 << 0) | (1 << 3): F(1)})
    assert alg.d(form).is_zero()
    assert is_exact(alg, form) is None


def test_is_exact_requires_closed_input():
    alg = single_block(2)
    with pytest.raises(NotClosedError):
        is_exact(alg, KForm.monomial(alg.dim, [2, 3]))


# -- circuits ----------------------------------------------------------------


def test_shortest_mixed_circuit_is_a_monomial():
    alg = make([(1, 2, 1), (1, 1, 1), (-1, 2, 1), (-1, 1, 1)])
    A, B = alg.layout.double_blocks[0], alg.layout.double_blocks[1]
    g1 = circuit_form(alg, A, B, 1)
    # x^1 of the first block against the first minus covector of the second
    assert g1.terms == {(1 << A.plus_gen(1)) | (1 << B.minus_gen(1)): F(1)}


def test_circuit_counts_same_block():
    alg = single_block(3)
    assert len(circuits_of(alg, 0, 0)) == 3


@pytest.mark.parametrize("r,s", [(1, 2), (2, 2), (3, 1), (3, 2)])
def test_circuit_counts_distinct_blocks(r, s):
    if r == s:
        alg = make([(1, r, 2), (-1, r, 2)])
    else:
        alg = make([(1, r, 1), (1, s, 1), (-1, r, 1), (-1, s, 1)])
    circuits = circuits_of(alg, 0, 1)
    assert len(circuits) == r + s + 2 * min(r, s)
    for c in circuits:
        assert alg.d(c.form).is_zero()
        assert is_exact(alg, c.form) is None


def test_circuits_reject_mismatched_blocks():
    alg = make([(1, 1, 1), (-1, 1, 1), (2, 1, 1), (-2, 1, 1)])
    with pytest.raises(ValueError):
        circuits_of(alg, 0, 1)


def test_circuit_combinations_never_exact():
    rng = random.Random(23)
    alg = make([(1, 2, 1), (1, 1, 1), (-1, 2, 1), (-1, 1, 1)])
    circuits = circuits_of(alg, 0, 1)
    for _ in range(20):
        combo = KForm(alg.dim, 2)
        for c in circuits:
            combo = combo + rng.choice([0, 1, -1, F(2, 3)]) * c.form
        if combo.is_zero():
            continue
        assert is_exact(alg, combo) is None


# -- companions and the duality pairing --------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_companion_pairing_equals_length(m):
    alg = single_block(m)
    for circ in circuits_of(alg, 0, 0):
        h = companion(alg, circ)
        # divisible by f^1, hence closed
        assert all(mask & 1 for mask in h.terms)
        assert alg.d(h).is_zero()
        assert is_exact(alg, h) is None
        assert poincare_pairing(alg, circ.form, h) == circ.length


def test_companion_smallest_case_is_delta():
    alg = single_block(1)
    (circ,) = circuits_of(alg, 0, 0)
    assert companion(alg, circ) == delta_form(alg)


def test_pairing_examples():
    alg = single_block(2)
    f1 = KForm.monomial(alg.dim, [0])
    f2 = KForm.monomial(alg.dim, [1])
    gamma = gamma_form(alg)
    assert poincare_pairing(alg, f1, wedge(f2, gamma)) == 1
    assert poincare_pairing(alg, f2, wedge(f1, gamma)) == -1


def test_pairing_kills_exact_forms():
    alg = single_block(2)
    exact = alg.d(KForm.monomial(alg.dim, [2, 3, 4]))
    for rep in cohomology(alg, 2).representatives:
        assert poincare_pairing(alg, exact, rep) == 0


def test_pairing_matrix_nondegenerate():
    for m in (1, 2, 3):
        alg = single_block(m)
        h2 = cohomology(alg, 2).representatives
        h2n2 = cohomology(alg, alg.dim - 2).representatives
        ent = {}
        for i, a in enumerate(h2n2):
            for j, b in enumerate(h2):
                v = poincare_pairing(alg, a, b)
                if v:
                    ent[(i, j)] = v
        mat = QMatrix(len(h2n2), len(h2), ent)
        assert rank(mat) == m + 1


def test_top_degree_representatives_in_invertible_case():
    for blocks in ([(1, 2, 1), (-1, 2, 1)], [(1, 1, 1), (-1, 1, 1), (2, 1, 1), (-2, 1, 1)]):
        alg = make(blocks)
        reps = cohomology(alg, alg.dim - 1).representatives
        gamma_mask = ((1 << alg.dim) - 1) ^ 3
        assert reps[0].terms == {gamma_mask | 2: F(1)}  # f^2 ^ Gamma
        assert reps[1].terms == {gamma_mask | 1: F(1)}  # f^1 ^ Gamma
        assert cohomology(alg, 1).representatives == [
            KForm.monomial(alg.dim, [0]),
            KForm.monomial(alg.dim, [1]),
        ]


def test_poincare_duality_unimodular():
    for blocks, v in [
        ([(1, 2, 1), (-1, 2, 1)], None),
        ([(0, 2, 1), (1, 1, 1), (-1, 1, 1)], [1, 0]),
        ([(0, 1, 2), (F(1, 2), 2, 1), (F(-1, 2), 2, 1)], None),
    ]:
        alg = make(blocks, v)
        b = betti_numbers(alg)
        assert b == b[::-1]


# -- H^2 structure ------------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3])
def test_h2_single_block(m):
    alg = single_block(m)
    dec = verify_h2_structure(alg)
    assert dec.b2 == m + 1
    assert dec.u_dim == 1 and dec.u_canonical
    assert dec.u_reps[0] == delta_form(alg)
    assert dec.v_dim == 0 and dec.w0_dim == 0
    assert sum(p["dim"] for p in dec.pair_parts) == m


def test_h2_shift_vector_keeps_mixing_empty():
    alg = make([(0, 2, 1), (1, 1, 1), (-1, 1, 1)], v=[0, 1])
    dec = verify_h2_structure(alg)
    assert dec.v_dim == 0
    assert dec.total() == dec.b2


def test_h2_zero_chains_give_w0_part():
    alg = make([(0, 2, 2)])
    dec = verify_h2_structure(alg)
    assert dec.w0_dim > 0
    assert not dec.u_canonical
    # the f^1 ^ x^2 class lives in the non-canonical U part
    target = KForm(alg.dim, 2, {(1 << 0) | (1 << 3): F(1)})
    assert is_exact(alg, target) is None
    coords = cohomology(alg, 2).project(target)
    assert any(coords)


def test_h2_multi_pair_decomposition():
    alg = make([(1, 2, 1), (1, 1, 1), (-1, 2, 1), (-1, 1, 1), (2, 1, 1), (-2, 1, 1)])
    dec = verify_h2_structure(alg)
    # unmixed: 2 + 1 + 1, mixed within the lambda=1 group: 2 * min(2,1)
    assert sum(p["dim"] for p in dec.pair_parts) == 2 + 1 + 1 + 2
    assert dec.b2 == dec.total()


# -- closed 2-form patterns ---------------------------------------------------


def test_closed_two_forms_single_pair_pattern():
    alg = make([(1, 4, 1), (-1, 4, 1)])
    report = closed_two_form_structure(alg)
    assert report.orthogonality_ok and report.isotropy_ok
    grid = next(g for g in report.grids if (g.plus_block, g.minus_block) == (0, 0))
    assert grid.free_params == 4 and grid.hankel_ok


def test_closed_two_forms_two_pairs_pattern():
    alg = make([(1, 4, 1), (1, 3, 1), (-1, 4, 1), (-1, 3, 1)])
    report = closed_two_form_structure(alg)
    dims = {(g.plus_block, g.minus_block): g.free_params for g in report.grids}
    assert dims == {(0, 0): 4, (0, 1): 3, (1, 0): 3, (1, 1): 3}


def test_closed_two_forms_diagonal_case_vacuous():
    alg = make([(1, 1, 1), (-1, 1, 1)])
    report = closed_two_form_structure(alg)
    grid = report.grids[0]
    assert grid.free_params == 1 and grid.expected == 1
