"""Exact Lie algebra cohomology for the almost abelian family.

Structure exploited throughout: d vanishes on forms divisible by f^1 and
sends a pure-u form b to -f^1 ^ (T b), where T is the derivation extension
of the dual structure map.  T preserves the eigenvalue weight of a monomial
(sum of generator eigenvalues), so every degree splits into weight blocks:
blocks of nonzero weight are invertible (weight times identity plus a
nilpotent chain shift) and contribute nothing to cohomology, while the
zero-weight blocks carry everything.  Kernels, image reductions and
primitives are computed exactly per block.

Representatives of H^k are the quotient monomials f^1 ^ q (q running over
non-pivot monomials of degree k-1 modulo im T) followed by a kernel basis of
T on degree k.  Pivots are deterministic, so representatives are stable
across runs.  In the settings with a canonical choice (no zero eigenvalue,
degrees 1, 2, 2n-2, 2n-1) the generic basis is swapped for the canonical one
after an exact change-of-basis check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import Algebra, DoubleBlock
from .exact import SpanReducer, qf
from .exterior import KForm, mask_degree, wedge, top_coefficient


class NotClosedError(ValueError):
    """Raised when an operation requiring a cocycle receives a non-closed form."""


class InternalCheckError(AssertionError):
    """An internal invariant of the engine failed (would falsify the build)."""


# ---------------------------------------------------------------------------
# weight-block data for the derivation operator on each degree
# ---------------------------------------------------------------------------


class _Block:
    """One weight block of the derivation operator on degree-k u-monomials."""

    __slots__ = (
        "w",
        "masks",
        "index",
        "cols",
        "reducer",
        "kernel",
        "free_cols",
        "quotient_rows",
        "_nilcols",
    )

    def __init__(self, w: Fraction, masks: list[int], algebra: Algebra):
        self.w = w
        self.masks = masks
        self.index = {m: i for i, m in enumerate(masks)}
        cols = []
        for m in masks:
            action = algebra.coboundary_action(m)
            cols.append([(self.index[t], c) for t, c in sorted(action.items())])
        self.cols = cols
        self.reducer = None
        self.kernel = None
        self.free_cols = None
        self.quotient_rows = None
        self._nilcols = None
        if w == 0:
            red = SpanReducer()
            kernel = []
            free_cols = []
            for j in range(len(masks)):
                vec = {r: c for r, c in cols[j]}
                combo = red.insert(vec, j)
                if combo is not None:
                    kv = {j: Fraction(1)}
                    for tag, coeff in combo.items():
                        s = kv.get(tag, Fraction(0)) - coeff
                        if s:
                            kv[tag] = s
                        else:
                            kv.pop(tag, None)
                    kernel.append(kv)
                    free_cols.append(j)
            self.reducer = red
            self.kernel = kernel
            self.free_cols = free_cols
            pivots = red.pivots()
            self.quotient_rows = [r for r in range(len(masks)) if r not in pivots]
        else:
            # nilpotent part only, for terminating Neumann solves
            nil = []
            for j, col in enumerate(cols):
                nil.append([(r, c) for r, c in col if r != j])
            self._nilcols = nil

    @property
    def rank(self) -> int:
        if self.w != 0:
            return len(self.masks)
        return self.reducer.rank

    def _apply_nil(self, x: dict) -> dict:
        out: dict = {}
        for j, v in x.items():
            for r, c in self._nilcols[j]:
                s = out.get(r, Fraction(0)) + c * v
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def solve(self, b: dict) -> Optional[dict]:
        """x with (T restricted to this block) x = b, or None if unsolvable."""
        if not b:
            return {}
        if self.w != 0:
            # (wI + N) x = b with N nilpotent: x = sum (-N/w)^j b / w
            x: dict = {}
            term = {k: v / self.w for k, v in b.items()}
            while term:
                for k, v in term.items():
                    s = x.get(k, Fraction(0)) + v
                    if s:
                        x[k] = s
                    else:
                        x.pop(k, None)
                nxt = self._apply_nil(term)
                term = {k: -v / self.w for k, v in nxt.items()}
            return x
        rem, combo = self.reducer.reduce(b)
        if rem:
            return None
        return dict(combo)

    def kernel_coordinates(self, b: dict) -> Optional[list[Fraction]]:
        """Coordinates of b in the kernel basis, or None if b is outside it."""
        if self.w != 0:
            return None if b else []
        coords = [b.get(j, Fraction(0)) for j in self.free_cols]
        # verify exact membership
        residual = dict(b)
        for coef, kv in zip(coords, self.kernel):
            if not coef:
                continue
            for j, v in kv.items():
                s = residual.get(j, Fraction(0)) - coef * v
                if s:
                    residual[j] = s
                else:
                    residual.pop(j, None)
        if residual:
            return None
        return coords


class _LData:
    """All weight blocks of the derivation operator on one degree."""

    def __init__(self, algebra: Algebra, k: int):
        self.k = k
        groups: dict[Fraction, list[int]] = {}
        for m in algebra.u_monomials(k):
            groups.setdefault(algebra.layout.mask_weight(m), []).append(m)
        self.blocks = [
            _Block(w, groups[w], algebra) for w in sorted(groups)
        ]
        self.block_of_mask = {}
        for b in self.blocks:
            for m in b.masks:
                self.block_of_mask[m] = b

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self.blocks)

    @property
    def dim(self) -> int:
        return sum(len(b.masks) for b in self.blocks)

    def split(self, terms: dict) -> dict:
        """Group a sparse u-form by block, in local coordinates."""
        out: dict[_Block, dict] = {}
        for m, c in terms.items():
            b = self.block_of_mask[m]
            out.setdefault(b, {})[b.index[m]] = c
        return out


def _ldata(algebra: Algebra, k: int) -> _LData:
    cache = algebra._cache.setdefault("ldata", {})
    if k not in cache:
        cache[k] = _LData(algebra, k)
    return cache[k]


def _split_form(form: KForm) -> tuple[dict, dict]:
    """(pure-u terms, f^1-part terms with the f^1 bit stripped)."""
    pure, fpart = {}, {}
    for m, c in form.terms.items():
        if m & 1:
            fpart[m ^ 1] = c
        else:
            pure[m] = c
    return pure, fpart


# ---------------------------------------------------------------------------
# cohomology spaces
# ---------------------------------------------------------------------------


@dataclass
class CohomologySpace:
    """Degree, Betti number, representative cocycles, coordinate projection."""

    algebra: Algebra
    degree: int
    betti: int
    representatives: list[KForm]
    _canonical: Optional[SpanReducer] = None  # change of basis for overridden reps
    _canonical_tags: Optional[list[int]] = None

    def project(self, form: KForm) -> list[Fraction]:
        """Coordinates of a cocycle in the representative basis (exact)."""
        coords = self._generic_coords(form)
        if self._canonical is None:
            return coords
        vec = {i: c for i, c in enumerate(coords) if c}
        rem, combo = self._canonical.reduce(vec)
        if rem:
            raise InternalCheckError("canonical basis failed to span a cocycle class")
        return [combo.get(t, Fraction(0)) for t in self._canonical_tags]

    def express(self, form: KForm) -> tuple[list[Fraction], KForm]:
        """(coordinates, exact part): form = sum(c * rep) + exact part."""
        coords = self.project(form)
        rest = form
        for c, rep in zip(coords, self.representatives):
            if c:
                rest = rest - c * rep
        return coords, rest

    def _generic_coords(self, form: KForm) -> list[Fraction]:
        alg = self.algebra
        k = self.degree
        if form.degree != k or form.dimension != alg.dim:
            raise ValueError("form degree/dimension mismatch")
        pure, fpart = _split_form(form)
        coords: list[Fraction] = []
        if k >= 1:
            prev = _ldata(alg, k - 1)
            by_block = prev.split(fpart)
            for b in prev.blocks:
                if b.w != 0:
                    continue  # everything there is exact
                local = by_block.get(b, {})
                rem, _ = b.reducer.reduce(local)
                for r in b.quotient_rows:
                    coords.append(rem.pop(r, Fraction(0)))
                if rem:
                    raise InternalCheckError("image reduction left non-quotient residue")
        cur = _ldata(alg, k)
        by_block = cur.split(pure)
        for b in cur.blocks:
            local = by_block.get(b, {})
            if b.w != 0:
                if local:
                    raise NotClosedError("pure part has nonzero-weight components")
                continue
            kc = b.kernel_coordinates(local)
            if kc is None:
                raise NotClosedError("pure part is not in the cocycle span")
            coords.extend(kc)
        return coords


def _generic_representatives(algebra: Algebra, k: int) -> list[KForm]:
    dim = algebra.dim
    reps: list[KForm] = []
    if k >= 1:
        prev = _ldata(algebra, k - 1)
        for b in prev.blocks:
            if b.w != 0:
                continue
            for r in b.quotient_rows:
                reps.append(KForm(dim, k, {b.masks[r] | 1: Fraction(1)}))
    cur = _ldata(algebra, k)
    for b in cur.blocks:
        if b.w != 0:
            continue
        for kv in b.kernel:
            terms = {b.masks[j]: c for j, c in kv.items()}
            reps.append(KForm(dim, k, terms))
    return reps


def cohomology(algebra: Algebra, k: int) -> CohomologySpace:
    """Cohomology space at degree k with cached representatives."""
    if not (0 <= k <= algebra.dim):
        raise ValueError("degree out of range")
    cache = algebra._cache.setdefault("cohom", {})
    if k in cache:
        return cache[k]
    reps = _generic_representatives(algebra, k)
    space = CohomologySpace(algebra, k, len(reps), reps)
    canonical = _canonical_representatives(algebra, k)
    if canonical is not None and len(canonical) == len(reps):
        reducer = SpanReducer()
        ok = True
        for i, rep in enumerate(canonical):
            coords = space._generic_coords(rep)
            vec = {j: c for j, c in enumerate(coords) if c}
            if reducer.insert(vec, i) is not None:
                ok = False
                break
        if ok:
            space = CohomologySpace(
                algebra, k, len(canonical), canonical, reducer, list(range(len(canonical)))
            )
        else:
            raise InternalCheckError(
                f"canonical representatives at degree {k} are not a basis"
            )
    cache[k] = space
    return space


def betti(algebra: Algebra, k: int) -> int:
    return cohomology(algebra, k).betti


def betti_numbers(algebra: Algebra) -> list[int]:
    return [betti(algebra, k) for k in range(algebra.dim + 1)]


def is_exact(algebra: Algebra, form: KForm) -> Optional[KForm]:
    """A primitive of a closed form, or None when the class is nonzero.

    Exact forms are divisible by f^1, so a nonzero pure-u part rules
    exactness out immediately; the f^1 part is solved block by block.
    """
    if not algebra.d(form).is_zero():
        raise NotClosedError("is_exact needs a closed form")
    if form.is_zero():
        return KForm(algebra.dim, max(form.degree - 1, 0))
    pure, fpart = _split_form(form)
    if pure:
        return None
    k = form.degree
    prev = _ldata(algebra, k - 1)
    by_block = prev.split(fpart)
    eta_terms: dict = {}
    for b, local in by_block.items():
        x = b.solve({j: -c for j, c in local.items()})
        if x is None:
            return None
        for j, c in x.items():
            eta_terms[b.masks[j]] = c
    eta = KForm(algebra.dim, k - 1, eta_terms)
    if not (algebra.d(eta) - form).is_zero():
        raise InternalCheckError("primitive verification failed")
    return eta


# ---------------------------------------------------------------------------
# circuits and companions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Circuit:
    """Closed non-exact 2-form pairing the plus side of one Jordan block
    against the minus side of another (alternating antidiagonal sum)."""

    kind: str  # '(x,x)', '(x,y)', '(y,x)', '(y,y)'
    length: int
    source: int  # index into layout.double_blocks
    target: int
    form: KForm


def circuit_form(algebra: Algebra, src: DoubleBlock, dst: DoubleBlock, length: int) -> KForm:
    """sum_{i=1..l} (-1)^{i+1} (i-th plus covector of src) ^ ((l+1-i)-th minus covector of dst)."""
    dim = algebra.dim
    out = KForm(dim, 2)
    for i in range(1, length + 1):
        p = src.plus_gen(i)
        q = dst.minus_gen(length + 1 - i)
        coeff = Fraction(1) if i % 2 == 1 else Fraction(-1)
        if p > q:
            p, q, coeff = q, p, -coeff
        out = out + KForm(dim, 2, {(1 << p) | (1 << q): coeff})
    return out


def circuits_of(algebra: Algebra, block_a: int, block_b: int) -> list[Circuit]:
    """All circuits of two double blocks attached to the same eigenvalue pair.

    For distinct blocks of sizes r and s this yields r + s + 2*min(r,s)
    closed non-exact 2-forms; a block against itself yields its size many
    unmixed circuits.
    """
    blocks = algebra.layout.double_blocks
    A, B = blocks[block_a], blocks[block_b]
    if A.lam == 0 or B.lam == 0:
        raise ValueError("circuits need nonzero eigenvalues")
    if A.lam != B.lam:
        raise ValueError("circuits need blocks from the same eigenvalue pair")
    out: list[Circuit] = []
    if block_a == block_b:
        for l in range(1, A.size + 1):
            out.append(Circuit("(x,x)", l, block_a, block_a, circuit_form(algebra, A, A, l)))
        return out
    m = min(A.size, B.size)
    for l in range(1, A.size + 1):
        out.append(Circuit("(x,x)", l, block_a, block_a, circuit_form(algebra, A, A, l)))
    for l in range(1, B.size + 1):
        out.append(Circuit("(y,y)", l, block_b, block_b, circuit_form(algebra, B, B, l)))
    for l in range(1, m + 1):
        out.append(Circuit("(x,y)", l, block_a, block_b, circuit_form(algebra, A, B, l)))
    for l in range(1, m + 1):
        out.append(Circuit("(y,x)", l, block_b, block_a, circuit_form(algebra, B, A, l)))
    return out


def u0_top_mask(algebra: Algebra) -> int:
    """Mask of the top form on u_0 (every generator except f^1, f^2)."""
    return ((1 << algebra.dim) - 1) ^ 3


def gamma_form(algebra: Algebra) -> KForm:
    return KForm(algebra.dim, algebra.dim - 2, {u0_top_mask(algebra): Fraction(1)})


def gamma_omitting(algebra: Algebra, *positions: int) -> KForm:
    """Top form on u_0 with the listed covectors (1-based x-positions) removed."""
    mask = u0_top_mask(algebra)
    for p in positions:
        bit = 1 << (p + 1)
        if not (mask & bit):
            raise ValueError("position already removed or out of range")
        mask ^= bit
    return KForm(algebra.dim, mask_degree(mask), {mask: Fraction(1)})


def companion(algebra: Algebra, circuit: Circuit) -> KForm:
    """Top-degree-minus-2 partner of an unmixed circuit in the one-block setting.

    Built from f^1^f^2 wedged with the u_0 top form missing two antidiagonal
    covectors; divisible by f^1, hence closed, and the wedge with its circuit
    hits the volume class with coefficient equal to the circuit length (the
    overall sign is normalized so the pairing comes out positive).
    """
    layout = algebra.layout
    if algebra.spec.zero_in_spec():
        raise ValueError("companions need an invertible structure action on u_0")
    if len(layout.double_blocks) != 1 or circuit.kind != "(x,x)":
        raise ValueError("companions are defined for the single-block unmixed case")
    m = layout.double_blocks[0].size
    l = circuit.length
    dim = algebra.dim
    out = KForm(dim, dim - 2)
    norm = Fraction(-1) if m % 2 else Fraction(1)
    for i in range(1, l + 1):
        sign = Fraction(1) if (l + i + 1) % 2 == 0 else Fraction(-1)
        piece = gamma_omitting(algebra, i, m + l + 1 - i)
        mask = next(iter(piece.terms)) | 3
        out = out + KForm(dim, dim - 2, {mask: norm * sign})
    return out


def delta_form(algebra: Algebra) -> KForm:
    return KForm(algebra.dim, 2, {3: Fraction(1)})


def poincare_pairing(algebra: Algebra, theta: KForm, eta: KForm) -> Fraction:
    """The scalar C with theta ^ eta = C * (f^1^f^2^x^1^...^x^{2n-2})."""
    if theta.degree + eta.degree != algebra.dim:
        raise ValueError("degrees must be complementary")
    if not algebra.d(theta).is_zero() or not algebra.d(eta).is_zero():
        raise NotClosedError("pairing needs closed forms")
    return top_coefficient(wedge(theta, eta))


# ---------------------------------------------------------------------------
# canonical representatives where the theory pins them down
# ---------------------------------------------------------------------------


def _canonical_representatives(algebra: Algebra, k: int) -> Optional[list[KForm]]:
    spec = algebra.spec
    layout = algebra.layout
    if spec.a != 0 or spec.zero_in_spec():
        return None
    dim = algebra.dim
    if k == 2 and layout.double_blocks:
        reps = [delta_form(algebra)]
        groups: dict[Fraction, list[int]] = {}
        for i, db in enumerate(layout.double_blocks):
            groups.setdefault(db.lam, []).append(i)
        for lam in sorted(groups):
            ids = groups[lam]
            for a in ids:
                A = layout.double_blocks[a]
                for l in range(1, A.size + 1):
                    reps.append(circuit_form(algebra, A, A, l))
            for ai in range(len(ids)):
                for bi in range(ai + 1, len(ids)):
                    A = layout.double_blocks[ids[ai]]
                    B = layout.double_blocks[ids[bi]]
                    m = min(A.size, B.size)
                    for l in range(1, m + 1):
                        reps.append(circuit_form(algebra, A, B, l))
                    for l in range(1, m + 1):
                        reps.append(circuit_form(algebra, B, A, l))
        return reps
    if k == dim - 2 and len(layout.double_blocks) == 1:
        db = layout.double_blocks[0]
        reps = [gamma_form(algebra)]
        for l in range(1, db.size + 1):
            circ = Circuit("(x,x)", l, 0, 0, circuit_form(algebra, db, db, l))
            reps.append(companion(algebra, circ))
        return reps
    if k == dim - 1:
        gmask = u0_top_mask(algebra)
        return [
            KForm(dim, dim - 1, {gmask | 2: Fraction(1)}),  # f^2 ^ Gamma
            KForm(dim, dim - 1, {gmask | 1: Fraction(1)}),  # f^1 ^ Gamma
        ]
    return None


# ---------------------------------------------------------------------------
# structure reports for degree two
# ---------------------------------------------------------------------------


@dataclass
class H2Decomposition:
    """Second cohomology split into its structural summands."""

    b2: int
    u_dim: int
    u_reps: list[KForm]
    u_canonical: bool
    v_dim: int
    w0_dim: int
    w0_reps: list[KForm]
    pair_parts: list[dict]  # per ordered block pair: circuits and kernel dim

    def total(self) -> int:
        return self.u_dim + self.v_dim + self.w0_dim + sum(
            p["dim"] for p in self.pair_parts
        )


def _gen_category(algebra: Algebra, g: int) -> tuple:
    """('w0',) for f^2 and the zero part, ('pair', lam) otherwise."""
    lam = algebra.layout.weight[g]
    if g == 1 or lam == 0:
        return ("w0",)
    return ("pair", abs(lam))


def verify_h2_structure(algebra: Algebra) -> H2Decomposition:
    """Build the structural decomposition of H^2 and check it adds up.

    Summands: classes of non-exact f^1-divisible forms (U), closed forms on
    the zero part W_0, circuit spans per double block pair, and a mixing
    part V (pairings of W_0 against the rest) that the weight grading forces
    to zero; every dimension is recomputed from the kernel data and compared
    against the Betti number.
    """
    if algebra.spec.a != 0:
        raise ValueError("structure report assumes the unimodular normal form")
    layout = algebra.layout
    space = cohomology(algebra, 2)
    b2 = space.betti

    prev = _ldata(algebra, 1)
    u_reps = []
    for b in prev.blocks:
        if b.w != 0:
            continue
        for r in b.quotient_rows:
            u_reps.append(KForm(algebra.dim, 2, {b.masks[r] | 1: Fraction(1)}))
    u_dim = len(u_reps)

    cur = _ldata(algebra, 2)
    w0_reps: list[KForm] = []
    v_dim = 0
    grid_kernel: dict[tuple[int, int], int] = {}
    for b in cur.blocks:
        if b.w != 0:
            continue
        for kv in b.kernel:
            terms = {b.masks[j]: c for j, c in kv.items()}
            cats = set()
            for mask in terms:
                g1 = (mask & -mask).bit_length() - 1
                g2 = (mask ^ (mask & -mask)).bit_length() - 1
                cats.add((_gen_category(algebra, g1), _gen_category(algebra, g2)))
            kinds = {frozenset(c) for c in cats}
            if all(k == frozenset([("w0",)]) for k in kinds):
                w0_reps.append(KForm(algebra.dim, 2, terms))
            elif any(("w0",) in k and len(k) > 1 for k in kinds):
                v_dim += 1
            else:
                grid = _grid_of_kernel_vector(algebra, terms)
                if grid is None:
                    raise InternalCheckError("kernel vector straddles block grids")
                grid_kernel[grid] = grid_kernel.get(grid, 0) + 1

    pair_parts = []
    blocks = layout.double_blocks
    for a, A in enumerate(blocks):
        for bidx, B in enumerate(blocks):
            if A.lam != B.lam:
                continue
            expected = min(A.size, B.size) if a != bidx else A.size
            kdim = grid_kernel.pop((a, bidx), 0)
            circuits = (
                [circuit_form(algebra, A, B, l) for l in range(1, expected + 1)]
            )
            red = SpanReducer()
            for i, c in enumerate(circuits):
                if red.insert(dict(c.terms), i) is not None:
                    raise InternalCheckError("dependent circuits")
            if kdim != expected:
                raise InternalCheckError(
                    f"closed forms on grid ({a},{bidx}): got {kdim}, circuits give {expected}"
                )
            pair_parts.append(
                {
                    "blocks": (a, bidx),
                    "dim": expected,
                    "circuits": circuits,
                    "lambda": A.lam,
                }
            )
    if grid_kernel:
        raise InternalCheckError(f"unaccounted kernel grids: {sorted(grid_kernel)}")

    dec = H2Decomposition(
        b2=b2,
        u_dim=u_dim,
        u_reps=u_reps,
        u_canonical=not algebra.spec.zero_in_spec(),
        v_dim=v_dim,
        w0_dim=len(w0_reps),
        w0_reps=w0_reps,
        pair_parts=pair_parts,
    )
    if dec.total() != b2:
        raise InternalCheckError(f"H^2 summands total {dec.total()}, Betti is {b2}")
    if not algebra.spec.has_shift() and dec.v_dim != 0:
        raise InternalCheckError("mixing part must vanish without a shift vector")
    if not algebra.spec.zero_in_spec():
        if dec.w0_dim != 0 or dec.u_dim != 1:
            raise InternalCheckError("invertible-action case must have U = span{f1^f2}")
        if dec.u_reps[0] != delta_form(algebra):
            raise InternalCheckError("U representative is not f1^f2")
    return dec


def _grid_of_kernel_vector(algebra: Algebra, terms: dict) -> Optional[tuple[int, int]]:
    """Identify the (plus block, minus block) grid carrying a kernel 2-form."""
    layout = algebra.layout
    plus_of = {}
    minus_of = {}
    for i, db in enumerate(layout.double_blocks):
        for g in db.plus.gens:
            plus_of[g] = i
        for g in db.minus.gens:
            minus_of[g] = i
    grid = None
    for mask in terms:
        g1 = (mask & -mask).bit_length() - 1
        g2 = (mask ^ (mask & -mask)).bit_length() - 1
        if g1 in plus_of and g2 in minus_of:
            pair = (plus_of[g1], minus_of[g2])
        elif g2 in plus_of and g1 in minus_of:
            pair = (plus_of[g2], minus_of[g1])
        else:
            return None
        if grid is None:
            grid = pair
        elif grid != pair:
            return None
    return grid


@dataclass
class GridPattern:
    plus_block: int
    minus_block: int
    free_params: int
    expected: int
    hankel_ok: bool


@dataclass
class ClosedTwoFormReport:
    closed_dim: int
    grids: list[GridPattern]
    orthogonality_ok: bool
    isotropy_ok: bool


def closed_two_form_structure(algebra: Algebra) -> ClosedTwoFormReport:
    """Compute a basis of closed 2-forms and check the coefficient patterns.

    (a) generators whose eigenvalues do not cancel never pair (this covers
    both cross-eigenvalue orthogonality and isotropy of a single generalized
    eigenspace); (b) on each plus/minus block grid the coefficients form an
    alternating antidiagonal pattern vanishing past the shorter size.  A
    violation is an engine bug, not a property of the input, so it raises.
    """
    if algebra.spec.a != 0:
        raise ValueError("structure report assumes the unimodular normal form")
    layout = algebra.layout
    cur = _ldata(algebra, 2)
    kernel_forms: list[KForm] = []
    for b in cur.blocks:
        if b.w != 0:
            continue
        for kv in b.kernel:
            kernel_forms.append(
                KForm(algebra.dim, 2, {b.masks[j]: c for j, c in kv.items()})
            )
    closed_dim = (algebra.dim - 1) + len(kernel_forms)  # all f^1 ^ covector forms are closed

    ortho_ok = True
    iso_ok = True
    for form in kernel_forms:
        for mask in form.terms:
            g1 = (mask & -mask).bit_length() - 1
            g2 = (mask ^ (mask & -mask)).bit_length() - 1
            l1, l2 = layout.weight[g1], layout.weight[g2]
            if l1 + l2 != 0:
                if l1 == l2:
                    iso_ok = False
                else:
                    ortho_ok = False
    if not (ortho_ok and iso_ok):
        raise InternalCheckError("closed 2-form pairs non-cancelling eigenvalues")

    def entry(form: KForm, p: int, q: int) -> Fraction:
        if p == q:
            return Fraction(0)
        mask = (1 << p) | (1 << q)
        c = form.terms.get(mask, Fraction(0))
        return c if p < q else -c

    grids = []
    blocks = layout.double_blocks
    for a, A in enumerate(blocks):
        for bidx, B in enumerate(blocks):
            same = A.lam == B.lam
            expected = (min(A.size, B.size) if same else 0)
            r, s = A.size, B.size
            grid_vectors = []
            hankel_ok = True
            for form in kernel_forms:
                coeffs = {}
                for i in range(1, r + 1):
                    for j in range(1, s + 1):
                        c = entry(form, A.plus_gen(i), B.minus_gen(j))
                        if c:
                            coeffs[(i, j)] = c
                if not coeffs:
                    continue
                grid_vectors.append(coeffs)
                mshort = min(r, s)
                for (i, j), c in coeffs.items():
                    if i + j >= mshort + 2:
                        hankel_ok = False
                for i in range(1, r):
                    for j in range(1, s):
                        up = coeffs.get((i + 1, j), Fraction(0))
                        right = coeffs.get((i, j + 1), Fraction(0))
                        if up + right != 0:
                            hankel_ok = False
            red = SpanReducer()
            free = 0
            for i, vec in enumerate(grid_vectors):
                flat = {qi * (s + 1) + qj: c for (qi, qj), c in vec.items()}
                if red.insert(flat, i) is None:
                    free += 1
            if not hankel_ok or free != expected:
                raise InternalCheckError(
                    f"grid ({a},{bidx}) pattern violated: {free} free params, "
                    f"expected {expected}, hankel_ok={hankel_ok}"
                )
            grids.append(GridPattern(a, bidx, free, expected, hankel_ok))
    return ClosedTwoFormReport(closed_dim, grids, ortho_ok, iso_ok)
