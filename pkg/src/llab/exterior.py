"""Exterior algebra on the dual of a 2n-dimensional space.

Basis k-forms are subsets of generator indices {0, ..., 2n-1} encoded as
bitmasks (index 0 is f^1, index 1 is f^2, the rest are the abelian-part
covectors in layout order).  Signs come from popcount parity of the
interleaving permutation, so wedge products are O(1) per term pair.
Multivectors (KForm) are sparse maps basis-mask -> rational with no stored
zero coefficients; addition, scaling and wedge are exact.

The dimension is capped at 2n <= 32 so masks fit comfortably in machine-size
ints; plenty for desk scale.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .exact import qf

MAX_DIM = 32


def mask_of(generators) -> int:
    """Bitmask of a strictly increasing generator list."""
    m = 0
    last = -1
    for g in generators:
        if g <= last:
            raise ValueError("generators must be strictly increasing")
        last = g
        m |= 1 << g
    return m


def generators_of(mask: int) -> tuple[int, ...]:
    out = []
    g = 0
    while mask:
        if mask & 1:
            out.append(g)
        mask >>= 1
        g += 1
    return tuple(out)


def mask_degree(mask: int) -> int:
    return mask.bit_count()


def wedge_masks(a: int, b: int):
    """(sign, union) for basis forms a ^ b, or None when they share a generator.

    The sign is the parity of moving each generator of b past the generators
    of a that exceed it.
    """
    if a & b:
        return None
    sign = 1
    rest = a
    while rest:
        low = rest & -rest
        if (b & (low - 1)).bit_count() & 1:
            sign = -sign
        rest ^= low
    return sign, a | b


def replace_sign(mask: int, old: int, new: int) -> int:
    """Sign of substituting generator `old` by `new` inside a basis form.

    Only generators strictly between the two indices contribute swaps.
    """
    lo, hi = (old, new) if old < new else (new, old)
    between = mask & ~((1 << (lo + 1)) - 1) & ((1 << hi) - 1)
    return -1 if between.bit_count() & 1 else 1


class KForm:
    """Sparse exterior form of fixed degree with exact rational coefficients."""

    __slots__ = ("dimension", "degree", "terms")

    def __init__(self, dimension: int, degree: int, terms=None):
        if not (0 <= dimension <= MAX_DIM):
            raise ValueError(f"dimension must be between 0 and {MAX_DIM}")
        if not (0 <= degree <= dimension):
            raise ValueError("degree out of range")
        self.dimension = dimension
        self.degree = degree
        tdict = {}
        if terms:
            for mask, coeff in terms.items():
                coeff = qf(coeff)
                if not coeff:
                    continue
                if mask_degree(mask) != degree:
                    raise ValueError("term degree mismatch")
                if mask >> dimension:
                    raise ValueError("generator outside dimension")
                tdict[mask] = coeff
        self.terms = tdict

    @classmethod
    def zero(cls, dimension: int, degree: int) -> "KForm":
        return cls(dimension, degree)

    @classmethod
    def unit(cls, dimension: int) -> "KForm":
        return cls(dimension, 0, {0: Fraction(1)})

    @classmethod
    def monomial(cls, dimension: int, generators, coeff=1) -> "KForm":
        m = mask_of(generators)
        return cls(dimension, mask_degree(m), {m: qf(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KForm)
            and self.dimension == other.dimension
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.dimension, self.degree, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "KForm") -> "KForm":
        self._compat(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        out = KForm(self.dimension, self.degree)
        out.terms = terms
        return out

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __neg__(self) -> "KForm":
        return self.scale(-1)

    def __rmul__(self, c) -> "KForm":
        return self.scale(c)

    def scale(self, c) -> "KForm":
        c = qf(c)
        out = KForm(self.dimension, self.degree)
        if c:
            out.terms = {m: c * v for m, v in self.terms.items()}
        return out

    def coefficient(self, generators) -> Fraction:
        return self.terms.get(mask_of(generators), Fraction(0))

    def _compat(self, other: "KForm"):
        if self.dimension != other.dimension:
            raise ValueError("forms live in different dimensions")
        if self.degree != other.degree:
            raise ValueError("degree mismatch")

    def __repr__(self):
        return f"KForm(dim={self.dimension}, deg={self.degree}, {to_text(self)})"


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; degree overflow past the dimension gives the zero form."""
    if a.dimension != b.dimension:
        raise ValueError("forms live in different dimensions")
    deg = a.degree + b.degree
    if deg > a.dimension:
        return KForm(a.dimension, a.dimension)  # zero top-degree overflow
    terms: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            w = wedge_masks(ma, mb)
            if w is None:
                continue
            sign, m = w
            s = terms.get(m, Fraction(0)) + sign * ca * cb
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
    out = KForm(a.dimension, deg)
    out.terms = terms
    return out


def power(a: KForm, p: int) -> KForm:
    """Iterated wedge a^p for even-degree forms; p = 0 is the scalar 1."""
    if a.degree % 2:
        raise ValueError("power is defined for even-degree forms")
    if p < 0:
        raise ValueError("negative power")
    out = KForm.unit(a.dimension)
    for _ in range(p):
        if out.is_zero():
            break
        out = wedge(out, a)
    return out


def top_coefficient(a: KForm) -> Fraction:
    """The scalar C with a = C * (full wedge of all generators); 0 for the zero form."""
    if a.is_zero():
        return Fraction(0)
    if a.degree != a.dimension:
        raise ValueError("top_coefficient needs a top-degree form")
    full = (1 << a.dimension) - 1
    return a.terms.get(full, Fraction(0))


def evaluate(form: KForm, vectors) -> Fraction:
    """Evaluate a k-form on k coordinate vectors (alternating multilinear).

    Expansion over permutations; fine for the small degrees used in checks.
    """
    k = form.degree
    if len(vectors) != k:
        raise ValueError("need exactly degree-many vectors")
    total = Fraction(0)
    for mask, coeff in form.terms.items():
        gens = generators_of(mask)
        sub = Fraction(0)
        for perm in permutations(range(k)):
            inv = sum(
                1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j]
            )
            prod = Fraction(1)
            for slot, vi in enumerate(perm):
                prod *= qf(vectors[vi][gens[slot]])
                if not prod:
                    break
            sub += (-1 if inv & 1 else 1) * prod
        total += coeff * sub
    return total


def default_names(dimension: int) -> list[str]:
    return ["f1", "f2"] + [f"x{i}" for i in range(1, dimension - 1)]


def to_text(form: KForm, names=None) -> str:
    """Render e.g. 'f1^f2 + 3/2 x1^x4 - x2^x3' (caret = wedge)."""
    if form.is_zero():
        return "0"
    if names is None:
        names = default_names(form.dimension)
    items = sorted(form.terms.items(), key=lambda kv: generators_of(kv[0]))
    chunks = []
    for mask, coeff in items:
        gens = generators_of(mask)
        word = "^".join(names[g] for g in gens) if gens else "1"
        mag = -coeff if coeff < 0 else coeff
        body = word if (mag == 1 and gens) else (f"{mag} {word}" if gens else f"{mag}")
        if not chunks:
            chunks.append(body if coeff > 0 else f"-{body}")
        else:
            chunks.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(chunks)


def from_terms(dimension: int, termlist) -> KForm:
    """Build a form from (generator list, coeff) pairs; degrees must agree."""
    termlist = list(termlist)
    if not termlist:
        raise ValueError("empty term list (degree would be ambiguous)")
    deg = len(termlist[0][0])
    out = KForm(dimension, deg)
    for gens, coeff in termlist:
        if len(gens) != deg:
            raise ValueError("mixed degrees in term list")
        out = out + KForm.monomial(dimension, gens, coeff)
    return out
