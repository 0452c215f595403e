"""Exact linear algebra over the rationals.

Scalars are arbitrary-precision rationals (`fractions.Fraction`: always in
lowest terms, positive denominator, no rounding anywhere).  Matrices are
sparse maps (row, col) -> Fraction with no stored zeros.

Rank, nullspace and solve run in two phases: rows are cleared to integers,
a Bareiss-style fraction-free forward elimination bounds coefficient growth,
and back-substitution happens in plain rationals.  Pivoting is deterministic
(first nonzero in row-major order, tie-broken by column index) so every
downstream basis is reproducible.

All values here are immutable in practice: nothing mutates a QMatrix after
construction, so they are safe to share across threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional


def qf(x) -> Fraction:
    """Coerce ints, strings like '3/2', and Fractions to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class QMatrix:
    """Sparse exact rational matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        ent = {}
        if entries:
            for (r, c), v in entries.items():
                v = qf(v)
                if v:
                    if not (0 <= r < rows and 0 <= c < cols):
                        raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
                    ent[(r, c)] = v
        self.entries = ent

    @classmethod
    def from_rows(cls, data) -> "QMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {}
        for r, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                v = qf(v)
                if v:
                    ent[(r, c)] = v
        return cls(rows, cols, ent)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols)

    def __getitem__(self, rc) -> Fraction:
        return self.entries.get(rc, Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def is_zero(self) -> bool:
        return not self.entries

    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def col_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def apply(self, vec) -> list[Fraction]:
        """Matrix-vector product; vec is a sequence of length cols."""
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.rows
        for (r, c), v in self.entries.items():
            x = vec[c]
            if x:
                out[r] += v * x
        return out

    def __mul__(self, other: "QMatrix") -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        my_cols = self.col_dicts()
        ent: dict = {}
        for (r, c), v in other.entries.items():
            for rr, vv in my_cols[r].items():
                key = (rr, c)
                s = ent.get(key)
                s = v * vv if s is None else s + v * vv
                if s:
                    ent[key] = s
                elif key in ent:
                    del ent[key]
        return QMatrix(self.rows, other.cols, ent)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("dimension mismatch")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            s = ent.get(k, Fraction(0)) + v
            if s:
                ent[k] = s
            elif k in ent:
                del ent[k]
        return QMatrix(self.rows, self.cols, ent)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "QMatrix":
        c = qf(c)
        if not c:
            return QMatrix(self.rows, self.cols)
        return QMatrix(self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum((v for (r, c), v in self.entries.items() if r == c), Fraction(0))

    def to_lists(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


def _integer_rows(m: QMatrix, extra_col: Optional[dict] = None) -> list[dict]:
    """Rows as integer-valued dicts (each row scaled by its denominator lcm).

    Row scaling changes neither rank, nullspace, nor solution sets of
    [m | v] systems.  `extra_col`, when given, is appended at column index
    m.cols and scaled along with its row.
    """
    rows = m.row_dicts()
    if extra_col is not None:
        for r, v in extra_col.items():
            if v:
                rows[r][m.cols] = qf(v)
    out = []
    for row in rows:
        if not row:
            out.append({})
            continue
        denom = 1
        for v in row.values():
            denom = denom * v.denominator // gcd(denom, v.denominator)
        out.append({c: int(v * denom) for c, v in row.items()})
    return out


class Echelon:
    """Fraction-free row echelon of an integer-cleared matrix.

    Forward pass is Bareiss: every update divides exactly by the previous
    pivot, keeping entries as minors of the input.  `pivots` records
    (step, original row index, pivot column); rows never chosen as pivots
    end empty.  Columns >= `ncols_main` are carried along (augmented RHS)
    but never pivoted on.
    """

    def __init__(self, m: QMatrix, extra_col: Optional[dict] = None):
        self.ncols_main = m.cols
        rows = _integer_rows(m, extra_col)
        self.pivots: list[tuple[int, int]] = []  # (orig row, pivot col)
        self.prows: list[dict] = []
        prev = 1
        active = list(range(len(rows)))
        while True:
            pick = None
            for idx in active:
                support = [c for c in rows[idx] if c < self.ncols_main]
                if support:
                    pick = (idx, min(support))
                    break
            if pick is None:
                break
            ridx, pcol = pick
            prow = rows[ridx]
            p = prow[pcol]
            active.remove(ridx)
            for idx in active:
                row = rows[idx]
                if not row:
                    continue
                f = row.get(pcol, 0)
                # p*row - f*prow over the union of supports; rows missing the
                # pivot column still rescale by p/prev so every entry stays a
                # minor of the input and the division is exact
                acc = {c: p * v for c, v in row.items()}
                if f:
                    for c, v in prow.items():
                        acc[c] = acc.get(c, 0) - f * v
                new = {}
                for c, w in acc.items():
                    if w:
                        q, rem = divmod(w, prev)
                        assert rem == 0, "fraction-free division failed"
                        new[c] = q
                new.pop(pcol, None)
                rows[idx] = new
            self.pivots.append((ridx, pcol))
            self.prows.append(prow)
            prev = p
        self.residual_rows = [rows[idx] for idx in active]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def pivot_cols(self) -> list[int]:
        return sorted(c for _, c in self.pivots)

    def back_substitute(self, fixed: dict) -> list[Fraction]:
        """Solve for pivot variables given values of all non-pivot columns.

        `fixed` maps non-pivot column -> value; the homogeneous system
        (or augmented one, via the extra column valued -1) determines the
        pivot variables bottom-up in plain rationals.
        """
        x: dict[int, Fraction] = {c: qf(v) for c, v in fixed.items()}
        for (_, pcol), prow in zip(reversed(self.pivots), reversed(self.prows)):
            s = Fraction(0)
            for c, v in prow.items():
                if c != pcol:
                    xv = x.get(c)
                    if xv:
                        s += v * xv
            x[pcol] = -s / prow[pcol]
        return [x.get(c, Fraction(0)) for c in range(self.ncols_main)]


def rank(m: QMatrix) -> int:
    """Exact rank over the rationals."""
    return Echelon(m).rank


def nullspace_basis(m: QMatrix) -> list[list[Fraction]]:
    """Deterministic basis of the right kernel, one vector per free column.

    The vector for free column f has entry 1 at f and 0 at the other free
    columns, so coordinates relative to this basis can be read off directly.
    """
    ech = Echelon(m)
    pivot_cols = set(c for _, c in ech.pivots)
    free = [c for c in range(m.cols) if c not in pivot_cols]
    basis = []
    for f in free:
        vec = ech.back_substitute({f: Fraction(1)})
        basis.append(vec)
    return basis


def in_column_space(m: QMatrix, v) -> Optional[list[Fraction]]:
    """Coefficients c with m @ c = v, or None when v is outside im(m).

    Free variables are fixed to zero, so the returned representative is
    deterministic.
    """
    if len(v) != m.rows:
        raise ValueError("dimension mismatch")
    extra = {i: qf(x) for i, x in enumerate(v) if qf(x)}
    if not extra:
        return [Fraction(0)] * m.cols
    ech = Echelon(m, extra_col=extra)
    aug = m.cols
    for row in ech.residual_rows:
        if row.get(aug):
            return None
    sol = ech.back_substitute({aug: Fraction(-1)})
    return sol


class SpanReducer:
    """Incremental reduced echelon of a growing vector family.

    Vectors are sparse dicts index -> Fraction.  Every inserted vector is
    either absorbed (a combination of earlier ones, returned as tag -> coeff)
    or becomes a new normalized row; rows are kept mutually reduced so
    `reduce` is a single pass.  Used where the same span must absorb many
    vectors (image reductions, coordinate solves); plain rationals
    throughout.
    """

    __slots__ = ("rows",)

    def __init__(self):
        # pivot index -> (vector dict, combo dict tag->coeff)
        self.rows: dict[int, tuple[dict, dict]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> set[int]:
        return set(self.rows)

    def reduce(self, vec: dict) -> tuple[dict, dict]:
        """Return (remainder, combo) with vec = sum(combo * inserted) + remainder."""
        rem = {k: qf(v) for k, v in vec.items() if v}
        combo: dict = {}
        while True:
            hit = None
            for p in rem:
                if p in self.rows:
                    hit = p
                    break
            if hit is None:
                return rem, combo
            coef = rem[hit]
            rvec, rcombo = self.rows[hit]
            for c, v in rvec.items():
                s = rem.get(c, Fraction(0)) - coef * v
                if s:
                    rem[c] = s
                else:
                    rem.pop(c, None)
            for t, v in rcombo.items():
                s = combo.get(t, Fraction(0)) + coef * v
                if s:
                    combo[t] = s
                else:
                    combo.pop(t, None)

    def insert(self, vec: dict, tag) -> Optional[dict]:
        """Insert a tagged vector; return its combo over earlier tags if dependent."""
        rem, combo = self.reduce(vec)
        if not rem:
            return combo
        pivot = min(rem)
        c = rem[pivot]
        nvec = {k: v / c for k, v in rem.items()}
        ncombo = {t: -v / c for t, v in combo.items()}
        ncombo[tag] = ncombo.get(tag, Fraction(0)) + 1 / c
        if not ncombo[tag]:
            del ncombo[tag]
        # keep existing rows reduced against the new pivot
        for p, (rvec, rcombo) in list(self.rows.items()):
            f = rvec.get(pivot)
            if not f:
                continue
            for k, v in nvec.items():
                s = rvec.get(k, Fraction(0)) - f * v
                if s:
                    rvec[k] = s
                else:
                    rvec.pop(k, None)
            for t, v in ncombo.items():
                s = rcombo.get(t, Fraction(0)) - f * v
                if s:
                    rcombo[t] = s
                else:
                    rcombo.pop(t, None)
        self.rows[pivot] = (nvec, ncombo)
        return None

    def contains(self, vec: dict) -> bool:
        rem, _ = self.reduce(vec)
        return not rem


def char_poly(m: QMatrix) -> list[Fraction]:
    """Characteristic polynomial det(xI - m), coefficients ascending in x.

    Faddeev-LeVerrier; exact, O(n^4), intended for the small matrices that
    show up in certificates.
    """
    n = m.rows
    if n != m.cols:
        raise ValueError("char_poly of a non-square matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    N = QMatrix.identity(n)
    for k in range(1, n + 1):
        MN = m * N
        c = -MN.trace() / k
        coeffs[n - k] = c
        N = MN + QMatrix.identity(n).scale(c)
    return coeffs


def det(m: QMatrix) -> Fraction:
    c0 = char_poly(m)[0]
    return c0 if m.rows % 2 == 0 else -c0
