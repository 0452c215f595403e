"""Lattice existence certificates for the one-parameter exponential.

A unimodular almost abelian group admits a lattice exactly when some
exp(t0 A) is conjugate to an integer matrix of determinant one.  The specs
handled here pin A so that t0 = 1 works and the characteristic polynomial
of exp(A) is an explicit integer polynomial:

  case i    (x - 1)^(2t+1)                  one nilpotent chain of size 2t
  case ii   (x - 1) * p_k(x)^m              a size-m pair at +-t_k, m >= 2
  case iii  (x - 1)^(2t+1) * prod p_kj^mj   a mix of both

with p_k(x) = x^2 - k x + 1, whose roots are exp(+-t_k) for
t_k = log((k + sqrt(k^2 - 4)) / 2), k >= 3.

The integer witness is assembled block by block: a 1x1 identity block, the
companion matrix of (x - 1)^(2t) for the nilpotent chain, and the companion
matrix of p_k(x)^m per pair.  Each block is nonderogatory and matches the
characteristic (= minimal) polynomial of the corresponding factor of
exp(A), so the block diagonal is genuinely conjugate to exp(A); note that
exp(A) itself is *not* conjugate to the companion matrix of its full
characteristic polynomial once t >= 1, because the unipotent part splits as
a 1-block plus a 2t-block.  Certification is exact (integer polynomial
arithmetic, exact characteristic polynomial and determinant of the witness)
plus an interval cross-check on the transcendental eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy
import sympy

from .algebra import SpecError
from .exact import QMatrix, char_poly, det

INTERVAL_WIDTH_BOUND = 1e-9


# -- small integer polynomial helpers (ascending coefficient lists) ---------


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_pow(a: list[int], k: int) -> list[int]:
    out = [1]
    for _ in range(k):
        out = poly_mul(out, a)
    return out


def p_k(k: int) -> list[int]:
    """x^2 - k x + 1; both roots are units, exp(t_k) and exp(-t_k)."""
    return [1, -k, 1]


X_MINUS_1 = [-1, 1]


@dataclass(frozen=True)
class LatticeSpec:
    case: str  # 'i' | 'ii' | 'iii'
    t: int = 0
    pairs: tuple = ()  # ((k, m), ...)

    def __post_init__(self):
        pairs = tuple((int(k), int(m)) for k, m in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        ks = [k for k, _ in pairs]
        if len(set(ks)) != len(ks):
            raise SpecError("pair moduli k must be distinct")
        if any(k < 3 for k in ks) or any(m < 1 for _, m in pairs):
            raise SpecError("pairs need k >= 3 and m >= 1")
        if self.t < 0:
            raise SpecError("t must be >= 0")
        if self.case == "i":
            if pairs or self.t < 1:
                raise SpecError("case i needs t >= 1 and no pairs")
        elif self.case == "ii":
            if self.t != 0 or len(pairs) != 1 or pairs[0][1] < 2:
                raise SpecError("case ii needs t = 0 and one pair with m >= 2")
        elif self.case == "iii":
            if not pairs:
                raise SpecError("case iii needs at least one pair")
            if self.t == 0 and all(m < 2 for _, m in pairs):
                raise SpecError("case iii needs t != 0 or some m >= 2")
        else:
            raise SpecError(f"unknown case {self.case!r}")

    @classmethod
    def from_json_dict(cls, data: dict) -> "LatticeSpec":
        try:
            pairs = []
            for p in data.get("pairs", []) or []:
                if isinstance(p, dict):
                    pairs.append((int(p["k"]), int(p["m"])))
                else:
                    pairs.append((int(p[0]), int(p[1])))
            return cls(str(data["case"]), int(data.get("t", 0)), tuple(pairs))
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"malformed lattice spec: {exc}") from exc


def char_poly_exp(spec: LatticeSpec) -> list[int]:
    """Integer characteristic polynomial of exp(A), ascending coefficients."""
    out = poly_pow(X_MINUS_1, 2 * spec.t + 1)
    for k, m in spec.pairs:
        out = poly_mul(out, poly_pow(p_k(k), m))
    return out


def companion_matrix(poly: list[int]) -> QMatrix:
    """Companion matrix of a monic integer polynomial (ones on the
    subdiagonal, minus the coefficients in the last column)."""
    if poly[-1] != 1:
        raise SpecError("companion matrix needs a monic polynomial")
    n = len(poly) - 1
    if n < 1:
        raise SpecError("companion matrix needs degree >= 1")
    if any(not isinstance(c, int) for c in poly):
        raise SpecError("companion matrix needs integer coefficients")
    ent = {}
    for i in range(n):
        c = poly[i]
        if c:
            ent[(i, n - 1)] = Fraction(-c)
    for i in range(n - 1):
        ent[(i + 1, i)] = Fraction(1)
    return QMatrix(n, n, ent)


def _block_diag(blocks: list[QMatrix]) -> QMatrix:
    size = sum(b.rows for b in blocks)
    ent = {}
    off = 0
    for b in blocks:
        for (r, c), v in b.entries.items():
            ent[(off + r, off + c)] = v
        off += b.rows
    return QMatrix(size, size, ent)


@dataclass
class TkValue:
    """log((k + sqrt(k^2-4))/2), symbolically and as an interval enclosure."""

    k: int
    symbolic: sympy.Expr
    lower: float
    upper: float
    width: float

    @property
    def approx(self) -> float:
        return (self.lower + self.upper) / 2


def t_k(k: int) -> TkValue:
    """Exact expression plus an interval enclosure of width <= 1e-9.

    The two defining identities (the exponentials sum to k and multiply
    to 1) are verified symbolically on every call.
    """
    if k < 3:
        raise SpecError("t_k needs k >= 3")
    kk = sympy.Integer(k)
    expr = sympy.log((kk + sympy.sqrt(kk * kk - 4)) / 2)
    plus = sympy.exp(expr)
    minus = sympy.exp(-expr)
    if sympy.simplify(plus * minus - 1) != 0:
        raise AssertionError("root product identity failed symbolically")
    if sympy.simplify(plus + minus - kk) != 0:
        raise AssertionError("root sum identity failed symbolically")
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = 120
        kv = iv.mpf(k)
        root = (kv + iv.sqrt(kv * kv - 4)) / 2
        enclosure = iv.log(root)
        lower = float(enclosure.a)
        upper = float(enclosure.b)
        width = max(upper - lower, float(enclosure.delta))
    finally:
        iv.prec = old
    if width > INTERVAL_WIDTH_BOUND:
        raise AssertionError(f"enclosure width {width} exceeds {INTERVAL_WIDTH_BOUND}")
    return TkValue(k, expr, lower, upper, width)


@dataclass
class LatticeCertificate:
    spec: LatticeSpec
    char_poly: list[int]
    companion: QMatrix  # integer block-diagonal witness, conjugate to exp(A)
    determinant: Fraction
    t0: int
    tk_values: list[TkValue]
    max_interval_width: float
    eigenvalue_check: float  # worst float distance in the eigenvalue match

    def to_json_dict(self) -> dict:
        mat = [[int(v) for v in row] for row in self.companion.to_lists()]
        return {
            "case": self.spec.case,
            "char_poly": list(self.char_poly),
            "companion": mat,
            "det": int(self.determinant),
            "t0": self.t0,
            "spectral_check": {
                "max_interval_width": self.max_interval_width,
                "eigenvalue_mismatch": self.eigenvalue_check,
            },
        }


def certify(spec: LatticeSpec) -> LatticeCertificate:
    """Assemble and verify the integer witness for exp(A).

    Exact checks: the characteristic polynomial of the witness equals the
    stated factorization coefficient by coefficient, every entry is an
    integer, and the determinant is exactly 1 (a non-unit determinant would
    refuse the certificate).  Numeric cross-check: the float eigenvalues of
    the witness match the multiset {1, exp(+-t_kj)} with the expected
    multiplicities, against midpoints of interval enclosures of width
    <= 1e-9.
    """
    target = char_poly_exp(spec)
    blocks = [QMatrix.identity(1)]
    if spec.t >= 1:
        blocks.append(companion_matrix(poly_pow(X_MINUS_1, 2 * spec.t)))
    tks = []
    for k, m in spec.pairs:
        blocks.append(companion_matrix(poly_pow(p_k(k), m)))
        tks.append(t_k(k))
    witness = _block_diag(blocks)
    got = char_poly(witness)
    if [Fraction(c) for c in target] != got:
        raise AssertionError("witness characteristic polynomial mismatch")
    if any(v.denominator != 1 for v in witness.entries.values()):
        raise AssertionError("witness has non-integer entries")
    d = det(witness)
    if d != 1:
        raise SpecError("certificate refused: witness determinant is not 1")

    clusters = [(1.0, 2 * spec.t + 1)]
    for tk, (_, m) in zip(tks, spec.pairs):
        mid = tk.approx
        clusters.append((float(numpy.exp(mid)), m))
        clusters.append((float(numpy.exp(-mid)), m))
    dense = numpy.array(
        [[float(v) for v in row] for row in witness.to_lists()], dtype=float
    )
    eigs = numpy.linalg.eigvals(dense)
    # defective clusters smear individual float eigenvalues like eps^(1/m),
    # but each cluster's mean is trace-stable; match greedily and compare means
    assigned: dict[int, list] = {i: [] for i in range(len(clusters))}
    for e in eigs:
        i = min(range(len(clusters)), key=lambda j: abs(e - clusters[j][0]))
        assigned[i].append(e)
    worst = 0.0
    for i, (center, mult) in enumerate(clusters):
        got = assigned[i]
        if len(got) != mult:
            raise AssertionError("float eigenvalue cluster sizes disagree")
        mean = sum(got) / mult
        worst = max(worst, abs(mean - center) / max(1.0, abs(center)))
    if worst > 1e-8:
        raise AssertionError(f"float eigenvalue cross-check failed ({worst})")
    width = max((tk.width for tk in tks), default=0.0)
    return LatticeCertificate(
        spec=spec,
        char_poly=list(target),
        companion=witness,
        determinant=d,
        t0=1,
        tk_values=tks,
        max_interval_width=width,
        eigenvalue_check=worst,
    )


def failure_prediction_from_lattice(spec: LatticeSpec):
    """Jordan data of the certified algebra with a rational stand-in spectrum.

    The verdict depends only on the zero/pairing pattern and block sizes, so
    each +-t_k pair is replaced by a distinct rational pair; the zero chain
    keeps its size.  Returns the surrogate JordanSpec.
    """
    from .algebra import JordanSpec

    blocks = []
    if spec.t >= 1:
        blocks.append((Fraction(0), 2 * spec.t, 1))
    for i, (_, m) in enumerate(spec.pairs):
        lam = Fraction(i + 1)
        blocks.append((lam, m, 1))
        blocks.append((-lam, m, 1))
    return JordanSpec.make(blocks)
