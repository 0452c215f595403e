"""exact: rank / nullspace / solve against independent oracles."""

import random
from fractions import Fraction as F

import pytest

from llab.exact import (
    Echelon,
    QMatrix,
    SpanReducer,
    char_poly,
    det,
    in_column_space,
    nullspace_basis,
    qf,
    rank,
)


def oracle_rank(rows, ncols):
    """Plain fraction Gauss-Jordan, written independently of the engine."""
    rr = [list(map(F, r)) for r in rows]
    rk = 0
    for c in range(ncols):
        piv = next((r for r in range(rk, len(rr)) if rr[r][c]), None)
        if piv is None:
            continue
        rr[rk], rr[piv] = rr[piv], rr[rk]
        pv = rr[rk][c]
        for r in range(len(rr)):
            if r != rk and rr[r][c]:
                f = rr[r][c] / pv
                for cc in range(ncols):
                    rr[r][cc] -= f * rr[rk][cc]
        rk += 1
    return rk


def test_rank_identity():
    assert rank(QMatrix.identity(3)) == 3


def test_rank_zero_matrix():
    assert rank(QMatrix.zeros(4, 7)) == 0


def test_rank_proportional_rows():
    assert rank(QMatrix.from_rows([[1, 2], [2, 4]])) == 1


def test_nullspace_identity_empty():
    assert nullspace_basis(QMatrix.identity(5)) == []


def test_nullspace_zero_matrix_standard_vectors():
    basis = nullspace_basis(QMatrix.zeros(2, 3))
    assert basis == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_nullspace_single_row():
    basis = nullspace_basis(QMatrix.from_rows([[1, 1]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0] + v[1] == 0 and any(v)


def test_solve_identity():
    m = QMatrix.identity(3)
    v = [F(1), F(-2), F(7, 3)]
    assert in_column_space(m, v) == v


def test_solve_zero_matrix_absent():
    assert in_column_space(QMatrix.zeros(2, 3), [1, 0]) is None
    assert in_column_space(QMatrix.zeros(2, 3), [0, 0]) == [0, 0, 0]


def test_solve_column_scaling():
    m = QMatrix.from_rows([[2], [0]])
    assert in_column_space(m, [1, 0]) == [F(1, 2)]


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        in_column_space(QMatrix.zeros(2, 3), [1, 0, 0])


def test_rank_nullity_and_membership_randomized():
    rng = random.Random(20240801)
    palette = [0, 0, 0, 1, -1, 2, -3, F(1, 2), F(2, 3), 5]
    for _ in range(400):
        nr, nc = rng.randint(1, 9), rng.randint(1, 9)
        rows = [[rng.choice(palette) for _ in range(nc)] for _ in range(nr)]
        m = QMatrix.from_rows(rows)
        r = rank(m)
        assert r == oracle_rank(rows, nc)
        basis = nullspace_basis(m)
        assert r + len(basis) == nc
        for v in basis:
            assert all(x == 0 for x in m.apply(v))
        coeffs = [rng.choice([0, 1, -2, F(1, 3)]) for _ in range(nc)]
        v = m.apply(coeffs)
        sol = in_column_space(m, v)
        assert sol is not None and m.apply(sol) == v
        w = [rng.choice([0, 1, -1]) for _ in range(nr)]
        sol2 = in_column_space(m, w)
        if sol2 is None:
            aug = QMatrix(
                nr, nc + 1, {**m.entries, **{(i, nc): x for i, x in enumerate(w) if x}}
            )
            assert rank(aug) == r + 1
        else:
            assert m.apply(sol2) == [F(x) for x in w]


def test_rank_equals_transpose_rank():
    rng = random.Random(5)
    for _ in range(100):
        nr, nc = rng.randint(1, 7), rng.randint(1, 7)
        rows = [[rng.choice([0, 0, 1, -1, 3]) for _ in range(nc)] for _ in range(nr)]
        m = QMatrix.from_rows(rows)
        assert rank(m) == rank(m.transpose())


def test_nullspace_deterministic_and_pivot_normalized():
    m = QMatrix.from_rows([[1, 2, 0, 1], [0, 0, 1, 3]])
    b1 = nullspace_basis(m)
    b2 = nullspace_basis(QMatrix.from_rows([[1, 2, 0, 1], [0, 0, 1, 3]]))
    assert b1 == b2
    # one vector per free column, unit there, zero at the other free columns
    free = [1, 3]
    for vec, f in zip(b1, free):
        assert vec[f] == 1
        assert all(vec[g] == 0 for g in free if g != f)


def test_span_reducer_matches_rank_and_solves():
    rng = random.Random(99)
    for _ in range(150):
        nr, nc = rng.randint(1, 8), rng.randint(1, 8)
        rows = [[rng.choice([0, 0, 1, -1, F(1, 2), 4]) for _ in range(nc)] for _ in range(nr)]
        m = QMatrix.from_rows(rows)
        red = SpanReducer()
        cols = m.col_dicts()
        for j, col in enumerate(cols):
            red.insert(col, j)
        assert red.rank == rank(m)
        # reduce a vector known to be in the span; combo must reproduce it
        coeffs = [rng.choice([0, 1, 2]) for _ in range(nc)]
        target = m.apply(coeffs)
        tvec = {i: x for i, x in enumerate(target) if x}
        rem, combo = red.reduce(tvec)
        assert not rem
        recon = [F(0)] * nr
        for tag, c in combo.items():
            for i, x in cols[tag].items():
                recon[i] += c * x
        assert recon == target


def test_fraction_entries_are_cleared_before_elimination():
    m = QMatrix.from_rows([[F(1, 2), F(1, 3)], [F(1, 5), F(2, 7)]])
    ech = Echelon(m)
    assert ech.rank == 2
    for row in ech.prows:
        assert all(isinstance(v, int) for v in row.values())


def test_char_poly_and_det():
    m = QMatrix.from_rows([[2, 1], [1, 2]])
    assert char_poly(m) == [3, -4, 1]  # (x-1)(x-3), ascending
    assert det(m) == 3
    c = QMatrix.from_rows([[0, -1], [1, 3]])
    assert char_poly(c) == [1, -3, 1]
    assert det(c) == 1


def test_qf_rejects_floats():
    with pytest.raises(TypeError):
        qf(0.5)
    assert qf("3/2") == F(3, 2)
