"""Almost abelian Lie algebras built from Jordan spectral data.

An algebra here is R f_1 acting on an abelian ideal u = R f_2 + u_0 by a
structure matrix A: the only nonzero brackets are [f_1, u] = A u.  The input
is symbolic: a list of Jordan blocks (eigenvalue, size, multiplicity) for the
action on u_0, an optional shift vector v coupling the zero-eigenvalue part
to f_2, and the f_2-eigenvalue a (zero in unimodular mode, which is the
default and the only mode the structural results care about).

Basis layout convention.  Generators are indexed 0 = f^1, 1 = f^2, then the
u_0 covectors: elementary Jordan chains sorted by |eigenvalue| ascending,
size descending, positive sign before negative, so each size-r block with
eigenvalue lam sits right before its size-r partner at -lam; chains for
eigenvalue 0 come last.  Within a chain of size r the basis is a Jordan
basis: [f_1, x_j] = lam x_j + x_{j+1} for j < r and [f_1, x_r] = lam x_r.
A zero-eigenvalue chain additionally picks up v_k f_2 in [f_1, y_k] when the
shift vector is present.

Eigenvalues are restricted to exact rationals: verdicts downstream depend
only on the zero/pairing pattern and block sizes of the spectrum, so
irrational spectra are analyzed by substituting rational eigenvalues with
the same pattern (the lattice module handles the genuine transcendental
values symbolically).  Reports always echo the eigenvalues actually used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exact import QMatrix, qf
from .exterior import KForm, replace_sign

MAX_TOTAL_DIM = 32


@dataclass(frozen=True)
class JordanBlock:
    lam: Fraction
    size: int
    mult: int

    def __post_init__(self):
        if self.size < 1 or self.mult < 1:
            raise ValueError("block size and multiplicity must be >= 1")


@dataclass
class JordanSpec:
    """Symbolic description of the structure matrix: the single source of truth."""

    blocks: list[JordanBlock]
    v: Optional[list[Fraction]] = None
    a: Fraction = field(default_factory=lambda: Fraction(0))

    @classmethod
    def make(cls, blocks, v=None, a=0) -> "JordanSpec":
        bl = [
            b if isinstance(b, JordanBlock) else JordanBlock(qf(b[0]), int(b[1]), int(b[2]))
            for b in blocks
        ]
        vv = None if v is None else [qf(x) for x in v]
        return cls(bl, vv, qf(a))

    def u0_dim(self) -> int:
        return sum(b.size * b.mult for b in self.blocks)

    def dim(self) -> int:
        return 2 + self.u0_dim()

    def v0_dim(self) -> int:
        return sum(b.size * b.mult for b in self.blocks if b.lam == 0)

    def zero_in_spec(self) -> bool:
        return any(b.lam == 0 for b in self.blocks)

    def has_shift(self) -> bool:
        return self.v is not None and any(self.v)

    def nilpotent_zero_part(self) -> bool:
        """True when A restricted to W_0 = R f_2 + V_0 is nonzero."""
        return self.has_shift() or any(b.lam == 0 and b.size >= 2 for b in self.blocks)

    def semisimple(self) -> bool:
        return (not self.has_shift()) and all(b.size == 1 for b in self.blocks)

    def trace(self) -> Fraction:
        return self.a + sum((b.lam * b.size * b.mult for b in self.blocks), Fraction(0))

    def spectrum_summary(self) -> list[dict]:
        return [
            {"lambda": str(b.lam), "size": b.size, "mult": b.mult}
            for b in sorted(self.blocks, key=lambda b: (b.lam, -b.size))
        ]

    def to_json_dict(self) -> dict:
        return {
            "a": str(self.a),
            "v": None if self.v is None else [str(x) for x in self.v],
            "blocks": [
                {"lambda": str(b.lam), "size": b.size, "mult": b.mult} for b in self.blocks
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "JordanSpec":
        try:
            blocks = [
                JordanBlock(qf(b["lambda"]), int(b["size"]), int(b["mult"]))
                for b in data["blocks"]
            ]
            v = data.get("v")
            vv = None if v is None else [qf(x) for x in v]
            a = qf(data.get("a", "0"))
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"malformed spec: {exc}") from exc
        return cls(blocks, vv, a)

    @classmethod
    def from_json(cls, text: str) -> "JordanSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc}") from exc
        return cls.from_json_dict(data)


class SpecError(ValueError):
    """Bad input data (malformed spec, inadmissible request)."""


@dataclass(frozen=True)
class SpectrumVerdict:
    """Outcome of the symplectic-admissibility test on a spectrum."""

    admissible: bool
    failures: tuple

    def messages(self) -> list[str]:
        return [m for _, m in self.failures]


def validate_spectrum(spec: JordanSpec) -> SpectrumVerdict:
    """Decide whether A_0 is conjugate to an infinitesimally symplectic matrix.

    Condition 1: in the zero-eigenvalue part, every odd block size occurs
    with even multiplicity.  Condition 2: nonzero eigenvalues occur in
    +/- pairs with identical size multisets.
    """
    groups: dict[Fraction, dict[int, int]] = {}
    for b in spec.blocks:
        sizes = groups.setdefault(b.lam, {})
        sizes[b.size] = sizes.get(b.size, 0) + b.mult
    failures = []
    zero = groups.get(Fraction(0), {})
    for size, mult in sorted(zero.items()):
        if size % 2 == 1 and mult % 2 == 1:
            failures.append(
                (1, f"zero-eigenvalue blocks of odd size {size} occur {mult} times (must be even)")
            )
    seen = set()
    for lam in sorted(groups):
        if lam == 0 or lam in seen:
            continue
        seen.add(lam)
        seen.add(-lam)
        mine = groups[lam]
        partner = groups.get(-lam)
        if partner != mine:
            failures.append(
                (2, f"eigenvalue {lam} is not paired with a matching {-lam} block family")
            )
    return SpectrumVerdict(not failures, tuple(failures))


@dataclass(frozen=True)
class Chain:
    """One elementary Jordan chain: contiguous generator indices, fixed eigenvalue."""

    lam: Fraction
    size: int
    start: int  # first generator index

    @property
    def gens(self) -> tuple:
        return tuple(range(self.start, self.start + self.size))


@dataclass(frozen=True)
class DoubleBlock:
    """A size-r chain at +lam paired with its size-r partner at -lam."""

    lam: Fraction
    size: int
    plus: Chain
    minus: Chain

    def plus_gen(self, i: int) -> int:
        """Generator index of the i-th (1-based) covector on the +lam side."""
        return self.plus.start + i - 1

    def minus_gen(self, j: int) -> int:
        return self.minus.start + j - 1

    def label(self) -> str:
        return f"J{self.size}({self.lam})+J{self.size}({-self.lam})@{self.plus.start}"


class BasisLayout:
    """Generator bookkeeping: indices, eigenvalues, chain structure, block ranges."""

    def __init__(self, spec: JordanSpec):
        dim = spec.dim()
        if dim % 2:
            raise SpecError("total dimension must be even")
        if dim > MAX_TOTAL_DIM:
            raise SpecError(f"dimension {dim} exceeds the {MAX_TOTAL_DIM} cap")
        self.dim = dim
        self.n = dim // 2
        chains: list[Chain] = []
        # nonzero eigenvalues first: |lam| ascending, size descending, + before -
        items = []
        for b in spec.blocks:
            if b.lam != 0:
                for _ in range(b.mult):
                    items.append((abs(b.lam), -b.size, 0 if b.lam > 0 else 1, b.lam, b.size))
        items.sort(key=lambda t: (t[0], t[1], t[2]))
        # interleave so each +lam chain is immediately followed by its -lam partner
        pos = [t for t in items if t[3] > 0]
        neg = [t for t in items if t[3] < 0]
        ordered = []
        unpaired_neg = list(neg)
        for p in pos:
            ordered.append(p)
            match = next(
                (q for q in unpaired_neg if q[0] == p[0] and q[4] == p[4]), None
            )
            if match is not None:
                unpaired_neg.remove(match)
                ordered.append(match)
        ordered.extend(unpaired_neg)
        cursor = 2
        for _, _, _, lam, size in ordered:
            chains.append(Chain(lam, size, cursor))
            cursor += size
        # zero-eigenvalue chains last, size descending
        zero_sizes = []
        for b in spec.blocks:
            if b.lam == 0:
                zero_sizes.extend([b.size] * b.mult)
        zero_sizes.sort(reverse=True)
        self.v0_start = cursor
        for size in zero_sizes:
            chains.append(Chain(Fraction(0), size, cursor))
            cursor += size
        assert cursor == dim
        self.chains = chains
        self.zero_chains = [c for c in chains if c.lam == 0]
        self.v0_gens = tuple(range(self.v0_start, dim))

        # pair up +lam/-lam chains of equal size into double blocks
        self.double_blocks: list[DoubleBlock] = []
        used = set()
        plus_chains = [c for c in chains if c.lam > 0]
        minus_chains = [c for c in chains if c.lam < 0]
        for pc in plus_chains:
            mate = next(
                (
                    mc
                    for mc in minus_chains
                    if mc.start not in used and mc.lam == -pc.lam and mc.size == pc.size
                ),
                None,
            )
            if mate is not None:
                used.add(mate.start)
                self.double_blocks.append(DoubleBlock(pc.lam, pc.size, pc, mate))

        # per-generator eigenvalue (f^2 carries a) and chain predecessor
        self.weight = [Fraction(0)] * dim
        self.weight[1] = spec.a
        self.chain_prev: list[Optional[int]] = [None] * dim
        for c in chains:
            for k, g in enumerate(c.gens):
                self.weight[g] = c.lam
                if k:
                    self.chain_prev[g] = g - 1
        self.names = ["f1", "f2"] + [f"x{i}" for i in range(1, dim - 1)]

    def name(self, g: int) -> str:
        return self.names[g]

    def mask_weight(self, mask: int) -> Fraction:
        w = Fraction(0)
        g = 0
        while mask:
            if mask & 1:
                w += self.weight[g]
            mask >>= 1
            g += 1
        return w


class Algebra:
    """Immutable almost abelian Lie algebra with cached cochain data."""

    def __init__(self, spec: JordanSpec, layout: BasisLayout, structure_matrix: QMatrix):
        self.spec = spec
        self.layout = layout
        self.structure_matrix = structure_matrix
        self.dim = layout.dim
        self.n = layout.n
        # covector shift action: generator -> list of (target generator, coeff)
        shifts: dict[int, list] = {}
        for g in range(2, self.dim):
            prev = layout.chain_prev[g]
            if prev is not None:
                shifts[g] = [(prev, Fraction(1))]
        if spec.v is not None:
            f2_targets = [
                (layout.v0_gens[i], coeff) for i, coeff in enumerate(spec.v) if coeff
            ]
            if f2_targets:
                shifts[1] = f2_targets
        self._shifts = shifts
        self._mono: dict[int, list[int]] = {}
        self._diff: dict[int, QMatrix] = {}
        self._cache: dict = {}

    # -- monomial bases -------------------------------------------------

    def monomials(self, k: int) -> list[int]:
        """All degree-k basis masks over the full dual space, ascending."""
        if k not in self._mono:
            if not (0 <= k <= self.dim):
                raise ValueError("degree out of range")
            self._mono[k] = _masks_of_degree(self.dim, k)
        return self._mono[k]

    def u_monomials(self, k: int) -> list[int]:
        """Degree-k masks avoiding f^1 (the abelian-ideal part of the basis)."""
        return [m for m in self.monomials(k) if not (m & 1)]

    # -- differential ---------------------------------------------------

    def coboundary_action(self, mask: int) -> dict[int, Fraction]:
        """Derivation extension of the dual structure map to a u-monomial.

        Diagonal part: (sum of generator eigenvalues) * mask.  Shift part:
        each generator steps down its Jordan chain (f^2 scatters onto the
        shift vector's targets), with the substitution sign.
        """
        out: dict[int, Fraction] = {}
        w = self.layout.mask_weight(mask)
        if w:
            out[mask] = w
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            g = low.bit_length() - 1
            for target, coeff in self._shifts.get(g, ()):
                tbit = 1 << target
                if mask & tbit:
                    continue
                sgn = replace_sign(mask, g, target)
                nm = (mask ^ low) | tbit
                s = out.get(nm, Fraction(0)) + sgn * coeff
                if s:
                    out[nm] = s
                else:
                    out.pop(nm, None)
        return out

    def dmono(self, mask: int) -> dict[int, Fraction]:
        """Differential of a basis form, as mask -> coefficient."""
        if mask & 1:
            return {}
        return {(m | 1): -c for m, c in self.coboundary_action(mask).items()}

    def differential(self, k: int) -> QMatrix:
        """Matrix of d on degree-k forms in the monomial bases."""
        if k not in self._diff:
            if not (0 <= k <= self.dim):
                raise ValueError("degree out of range")
            src = self.monomials(k)
            if k == self.dim:
                self._diff[k] = QMatrix(0, len(src))
            else:
                dst = self.monomials(k + 1)
                index = {m: i for i, m in enumerate(dst)}
                ent = {}
                for j, mask in enumerate(src):
                    for m, c in self.dmono(mask).items():
                        ent[(index[m], j)] = c
                self._diff[k] = QMatrix(len(dst), len(src), ent)
        return self._diff[k]

    def d(self, form: KForm) -> KForm:
        """Differential applied to a sparse form."""
        if form.dimension != self.dim:
            raise ValueError("form dimension mismatch")
        out = KForm(self.dim, min(form.degree + 1, self.dim))
        terms: dict[int, Fraction] = {}
        for mask, coeff in form.terms.items():
            for m, c in self.dmono(mask).items():
                s = terms.get(m, Fraction(0)) + coeff * c
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        if form.degree + 1 <= self.dim:
            out.terms = terms
        return out

    # -- bracket ----------------------------------------------------------

    def bracket(self, x, y) -> list[Fraction]:
        """Lie bracket of two vectors in f_1 + u coordinates (length 2n)."""
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("vectors must have length equal to the dimension")
        x = [qf(t) for t in x]
        y = [qf(t) for t in y]
        A = self.structure_matrix
        ay = A.apply(y[1:])
        ax = A.apply(x[1:])
        out = [Fraction(0)] * self.dim
        for i in range(self.dim - 1):
            out[i + 1] = x[0] * ay[i] - y[0] * ax[i]
        return out

    def basis_vector(self, g: int) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[g] = Fraction(1)
        return v

    def is_unimodular(self) -> bool:
        return self.structure_matrix.trace() == 0

    def form_text(self, form: KForm) -> str:
        from .exterior import to_text

        return to_text(form, self.layout.names)

    def __repr__(self):
        return f"Algebra(dim={self.dim}, blocks={self.spec.spectrum_summary()})"


def _masks_of_degree(dim: int, k: int) -> list[int]:
    from itertools import combinations

    out = []
    for gens in combinations(range(dim), k):
        m = 0
        for g in gens:
            m |= 1 << g
        out.append(m)
    out.sort()
    return out


def build(spec: JordanSpec, allow_nonunimodular: bool = False) -> Algebra:
    """Assemble the algebra: layout, structure matrix, bracket relations.

    The shift vector is legal only when the spectrum contains 0; a nonzero
    f_2-eigenvalue (non-unimodular mode) is accepted only behind the flag
    and only without a shift vector.
    """
    if spec.u0_dim() % 2:
        raise SpecError("u_0 dimension must be even (total dimension 2n)")
    if spec.a != 0:
        if not allow_nonunimodular:
            raise SpecError("nonzero f2-eigenvalue requires allow_nonunimodular=True")
        if spec.v is not None:
            raise SpecError("shift vector is not supported in non-unimodular mode")
    if spec.v is not None:
        if not spec.zero_in_spec():
            raise SpecError("shift vector given but 0 is not an eigenvalue")
        if len(spec.v) != spec.v0_dim():
            raise SpecError("shift vector length must match the zero-eigenvalue part")
    layout = BasisLayout(spec)
    m = layout.dim - 1  # u = f_2 + u_0
    ent: dict = {}
    if spec.a:
        ent[(0, 0)] = spec.a
    for c in layout.chains:
        for k, g in enumerate(c.gens):
            col = g - 1
            if c.lam:
                ent[(col, col)] = c.lam
            if k + 1 < c.size:
                ent[(col + 1, col)] = Fraction(1)
    if spec.v is not None:
        for i, coeff in enumerate(spec.v):
            if coeff:
                ent[(0, layout.v0_gens[i] - 1)] = coeff
    return Algebra(spec, layout, QMatrix(m, m, ent))
