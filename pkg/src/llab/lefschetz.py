"""Symplectic forms and the hard-Lefschetz machinery.

A symplectic form here is a closed 2-form whose n-th wedge power is a
nonzero multiple of the volume form.  The default construction pairs f^1
with f^2, gives every paired Jordan block its maximal alternating
antidiagonal 2-form (non-degenerate on the block and closed because the
eigenvalues cancel), and pairs the zero-eigenvalue chains among themselves
(even chains self-paired, odd chains paired in same-size couples).  The
result is validated rather than trusted.

The Lefschetz operator at degree k wedges cohomology classes with
omega^(n-k); its matrix is taken between the chosen representative bases.
The verdict report walks k = 0, 1, ..., n, records ranks, flags the first
degree whose operator is not bijective, produces a kernel witness there,
and compares everything against the spectrum-level prediction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import Algebra, JordanSpec, SpecError, validate_spectrum
from .cohomology import (
    Circuit,
    InternalCheckError,
    circuit_form,
    cohomology,
    delta_form,
    gamma_omitting,
    is_exact,
)
from .exact import QMatrix, nullspace_basis, qf, rank
from .exterior import KForm, power, top_coefficient, wedge


class SymplecticError(ValueError):
    """A candidate 2-form failed validation; carries the reason and witness."""

    def __init__(self, reason: str, message: str, witness: Optional[KForm] = None):
        super().__init__(message)
        self.reason = reason
        self.witness = witness


@dataclass
class SymplecticForm:
    form: KForm
    provenance: str  # 'default-normal-form' | 'user-supplied' | 'normalized'


def validate_symplectic(algebra: Algebra, candidate: KForm) -> SymplecticForm:
    """Accept iff the candidate is closed with nonzero top power."""
    if candidate.degree != 2 or candidate.dimension != algebra.dim:
        raise SymplecticError("shape", "candidate must be a 2-form on the algebra")
    dw = algebra.d(candidate)
    if not dw.is_zero():
        raise SymplecticError("not-closed", "candidate is not closed", witness=dw)
    if top_coefficient(power(candidate, algebra.n)) == 0:
        raise SymplecticError("degenerate", "candidate has vanishing top power")
    return SymplecticForm(candidate, "user-supplied")


def default_symplectic(algebra: Algebra) -> SymplecticForm:
    """Closed non-degenerate 2-form in block normal shape, then validated."""
    spec = algebra.spec
    verdict = validate_spectrum(spec)
    if not verdict.admissible:
        raise SpecError(
            "spectrum is not symplectically admissible: " + "; ".join(verdict.messages())
        )
    if spec.a != 0:
        raise SpecError("default form requires the unimodular normal form (a = 0)")
    layout = algebra.layout
    dim = algebra.dim
    omega = delta_form(algebra)
    for db in layout.double_blocks:
        omega = omega + circuit_form(algebra, db, db, db.size)
    evens = [c for c in layout.zero_chains if c.size % 2 == 0]
    odds = [c for c in layout.zero_chains if c.size % 2 == 1]
    for c in evens:
        for j in range(1, c.size // 2 + 1):
            g1 = c.start + j - 1
            g2 = c.start + c.size - j
            coeff = Fraction(1) if j % 2 == 1 else Fraction(-1)
            omega = omega + KForm(dim, 2, {(1 << g1) | (1 << g2): coeff})
    by_size: dict[int, list] = {}
    for c in odds:
        by_size.setdefault(c.size, []).append(c)
    for size, chains in sorted(by_size.items()):
        if len(chains) % 2:
            raise SpecError("no default form; supply one")
        for c1, c2 in zip(chains[0::2], chains[1::2]):
            for j in range(1, size + 1):
                g1 = c1.start + j - 1
                g2 = c2.start + size - j
                coeff = Fraction(1) if j % 2 == 1 else Fraction(-1)
                if g1 > g2:
                    g1, g2, coeff = g2, g1, -coeff
                omega = omega + KForm(dim, 2, {(1 << g1) | (1 << g2): coeff})
    if not algebra.d(omega).is_zero() or top_coefficient(power(omega, algebra.n)) == 0:
        raise SpecError("no default form; supply one")
    return SymplecticForm(omega, "default-normal-form")


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------


def pullback(P: QMatrix, form: KForm) -> KForm:
    """Apply a covector substitution e^g -> column g of P to every monomial."""
    dim = form.dimension
    if P.rows != dim or P.cols != dim:
        raise ValueError("substitution matrix must act on all covectors")
    cols = P.col_dicts()
    images = [KForm(dim, 1, {1 << r: c for r, c in col.items()}) for col in cols]
    out = KForm(dim, form.degree)
    for mask, coeff in form.terms.items():
        piece = KForm.unit(dim)
        g = 0
        m = mask
        while m:
            if m & 1:
                piece = wedge(piece, images[g])
                if piece.is_zero():
                    break
            m >>= 1
            g += 1
        out = out + coeff * piece
    return out


@dataclass
class NormalizationResult:
    normal_form: SymplecticForm
    basis_change: QMatrix  # covector substitution phi*
    scale: Fraction  # delta-coefficient divided out of the input
    exact_part: KForm  # (omega / scale) - pullback(normal form), an exact 2-form


def _pair_entry(form: KForm, p: int, q: int) -> Fraction:
    """Evaluation of a 2-form on basis vectors p, q (orientation-aware)."""
    if p == q:
        return Fraction(0)
    c = form.terms.get((1 << p) | (1 << q), Fraction(0))
    return c if p < q else -c


def normalize_symplectic(algebra: Algebra, sym: SymplecticForm) -> NormalizationResult:
    """Rewrite a symplectic form as f^1^f^2 + maximal unmixed block forms.

    Works when the structure action is invertible on u_0 (no zero
    eigenvalue) in unimodular mode.  The circuit coefficients of the form
    are factored into new minus-side covectors block by block; the
    substitution commutes with d (checked exactly), so it is the dual of a
    Lie algebra automorphism, and the leftover is exact.
    """
    spec = algebra.spec
    if spec.a != 0 or spec.zero_in_spec():
        raise ValueError("normalization needs a = 0 and an invertible action on u_0")
    layout = algebra.layout
    dim = algebra.dim
    omega = sym.form
    c0 = omega.terms.get(3, Fraction(0))  # f^1 ^ f^2 coefficient
    if not c0:
        raise InternalCheckError("validated symplectic form lost its f1^f2 term")
    w = (Fraction(1) / c0) * omega

    blocks = layout.double_blocks
    groups: dict[Fraction, list[int]] = {}
    for i, db in enumerate(blocks):
        groups.setdefault(db.lam, []).append(i)

    # circuit coefficients: beta[(a, b)][l], read off the monomial pairing
    beta: dict[tuple[int, int], dict[int, Fraction]] = {}
    recon = KForm(dim, 2)
    for lam, ids in groups.items():
        for a in ids:
            for b in ids:
                A, B = blocks[a], blocks[b]
                top = min(A.size, B.size) if a != b else A.size
                for l in range(1, top + 1):
                    coeff = _pair_entry(w, A.plus_gen(1), B.minus_gen(l))
                    if coeff:
                        beta.setdefault((a, b), {})[l] = coeff
                        recon = recon + coeff * circuit_form(algebra, A, B, l)
    pure_w = KForm(dim, 2, {m: c for m, c in w.terms.items() if not (m & 1)})
    if not (pure_w - recon).is_zero():
        raise InternalCheckError("closed pure part is not a circuit combination")

    # new minus covectors: factored antidiagonal coefficients
    ent = {(g, g): Fraction(1) for g in range(dim)}
    for a, A in enumerate(blocks):
        ra = A.size
        for g in A.minus.gens:
            ent.pop((g, g))
        for k in range(1, ra + 1):
            col = A.minus_gen(k)
            for b in groups[A.lam]:
                B = blocks[b]
                coeffs = beta.get((a, b), {})
                top = (min(ra, B.size) if a != b else ra) - ra + k
                for j in range(1, top + 1):
                    c = coeffs.get(j + ra - k)
                    if c:
                        ent[(B.minus_gen(j), col)] = ent.get(
                            (B.minus_gen(j), col), Fraction(0)
                        ) + c
    P = QMatrix(dim, dim, ent)
    if rank(P) != dim:
        raise InternalCheckError("covector substitution is singular despite non-degeneracy")

    # the substitution must commute with d (dual of an automorphism)
    for g in range(dim):
        one = KForm(dim, 1, {1 << g: Fraction(1)})
        if not (algebra.d(pullback(P, one)) - pullback(P, algebra.d(one))).is_zero():
            raise InternalCheckError("substitution does not commute with d")

    normal = delta_form(algebra)
    for db in blocks:
        normal = normal + circuit_form(algebra, db, db, db.size)
    exact_part = w - pullback(P, normal)
    if is_exact(algebra, exact_part) is None:
        raise InternalCheckError("normalization residue is not exact")
    return NormalizationResult(SymplecticForm(normal, "normalized"), P, c0, exact_part)


# ---------------------------------------------------------------------------
# Lefschetz operators and the verdict report
# ---------------------------------------------------------------------------


@dataclass
class Prediction:
    verdict: str  # 'HLC' | 'fails'
    failure_degree: Optional[int]
    covered: bool  # True when a structural theorem pins this case down


def predict_verdict(spec: JordanSpec) -> Prediction:
    """Spectrum-level verdict: semisimple means every operator is bijective;
    a nonzero nilpotent action on the zero part fails at degree 1; otherwise
    a Jordan block of size >= 2 fails at degree 2."""
    if spec.a != 0:
        raise ValueError("prediction assumes the unimodular normal form")
    verdict = validate_spectrum(spec)
    if not verdict.admissible:
        raise SpecError(
            "spectrum is not symplectically admissible: " + "; ".join(verdict.messages())
        )
    if spec.semisimple():
        return Prediction("HLC", None, True)
    if spec.zero_in_spec() and spec.nilpotent_zero_part():
        return Prediction("fails", 1, True)
    # remaining: zero part acts semisimply, some nonzero block of size >= 2
    return Prediction("fails", 2, not spec.zero_in_spec())


@dataclass
class DegreeReport:
    k: int
    rank: int
    dim_source: int
    dim_target: int
    bijective: bool


@dataclass
class LefschetzReport:
    verdict: str
    first_failure_degree: Optional[int]
    degrees: list[DegreeReport]
    witness: Optional[KForm]
    predicted: Prediction
    agree: bool
    spectrum: list[dict] = field(default_factory=list)


def lefschetz_matrix(algebra: Algebra, omega: KForm, k: int) -> QMatrix:
    """Matrix of [a] -> [omega^(n-k) ^ a] from H^k to H^(2n-k) coordinates."""
    n = algebra.n
    if not (0 <= k <= n):
        raise ValueError("degree out of range")
    src = cohomology(algebra, k)
    dst = cohomology(algebra, algebra.dim - k)
    wpow = power(omega, n - k)
    ent = {}
    for j, rep in enumerate(src.representatives):
        img = wedge(wpow, rep)
        coords = dst.project(img)
        for i, c in enumerate(coords):
            if c:
                ent[(i, j)] = c
    return QMatrix(dst.betti, src.betti, ent)


def _canonical_witness(algebra: Algebra, omega: KForm, k: int) -> Optional[KForm]:
    """Prefer the shortest circuit of a big block as a readable kernel witness."""
    if k != 2 or algebra.spec.zero_in_spec():
        return None
    wpow = power(omega, algebra.n - k)
    for db in sorted(algebra.layout.double_blocks, key=lambda d: -d.size):
        if db.size < 2:
            continue
        candidate = circuit_form(algebra, db, db, 1)
        if is_exact(algebra, wedge(wpow, candidate)) is not None:
            return candidate
    return None


def hard_lefschetz_report(algebra: Algebra, omega) -> LefschetzReport:
    """Ranks of every Lefschetz operator, verdict, failure degree, witness."""
    if isinstance(omega, SymplecticForm):
        omega = omega.form
    else:
        validate_symplectic(algebra, omega)
    n = algebra.n
    degrees = []
    first_fail = None
    for k in range(n + 1):
        mat = lefschetz_matrix(algebra, omega, k)
        r = rank(mat)
        bij = r == mat.cols == mat.rows
        degrees.append(DegreeReport(k, r, mat.cols, mat.rows, bij))
        if not bij and first_fail is None:
            first_fail = k
    verdict = "HLC" if first_fail is None else "fails"
    witness = None
    if first_fail is not None:
        witness = _canonical_witness(algebra, omega, first_fail)
        if witness is None:
            mat = lefschetz_matrix(algebra, omega, first_fail)
            ns = nullspace_basis(mat)
            if not ns:
                raise InternalCheckError("non-bijective operator with trivial kernel")
            src = cohomology(algebra, first_fail)
            witness = KForm(algebra.dim, first_fail)
            for c, rep in zip(ns[0], src.representatives):
                if c:
                    witness = witness + c * rep
        # the witness must be a nonzero class killed by the operator
        if is_exact(algebra, witness) is not None:
            raise InternalCheckError("kernel witness is exact")
        if is_exact(algebra, wedge(power(omega, n - first_fail), witness)) is None:
            raise InternalCheckError("kernel witness image is not exact")
    predicted = predict_verdict(algebra.spec)
    agree = predicted.verdict == verdict and predicted.failure_degree == first_fail
    spectrum = algebra.spec.spectrum_summary()
    return LefschetzReport(verdict, first_fail, degrees, witness, predicted, agree, spectrum)


# ---------------------------------------------------------------------------
# direct identities behind the degree-2 kernel witness
# ---------------------------------------------------------------------------


@dataclass
class KernelWitnessProof:
    m: int
    power_scalar: Fraction  # rho^(m-2) ^ (x^1^x^(m+1)) = c * Gamma_{m,2m}, |c| = (m-2)!
    volume_scalar: Fraction  # omega^(n-2) ^ (x^1^x^(m+1)) = c * delta^Gamma_{m,2m}, |c| = (m-1)!
    primitive_matches: bool  # d(explicit primitive) equals the operator image
    engine_primitive_agrees: bool  # difference with the engine primitive is closed


def kernel_witness_check(algebra: Algebra) -> KernelWitnessProof:
    """Verify the explicit exactness identities for omega = f^1^f^2 + g_m.

    Needs a single double block of size m >= 2 with invertible action on
    u_0.  Checks, exactly: the (m-2)-nd power of the maximal block form
    wedged with x^1^x^(m+1) is +-(m-2)! times the u_0 top form missing
    x^m, x^2m (only one product of circuit terms survives, with its
    multinomial weight); the same wedge against omega^(n-2) is +-(m-1)!
    times the volume factor delta ^ Gamma_{m,2m}; and the correspondingly
    scaled -f^2 ^ Gamma_{m,2m-1} is an explicit primitive of the image
    (signs and scalars resolved by computation).
    """
    layout = algebra.layout
    if algebra.spec.zero_in_spec() or len(layout.double_blocks) != 1:
        raise ValueError("witness identities need a single paired block")
    db = layout.double_blocks[0]
    m = db.size
    if m < 2:
        raise ValueError("witness identities need block size >= 2")
    dim = algebra.dim
    rho = circuit_form(algebra, db, db, m)
    x1xm1 = circuit_form(algebra, db, db, 1)  # x^1 ^ x^{m+1}
    lhs = wedge(power(rho, m - 2), x1xm1)
    gmm = gamma_omitting(algebra, m, 2 * m)
    if len(lhs.terms) != 1:
        raise InternalCheckError("power identity failed (non-monomial product)")
    fact = Fraction(1)
    for i in range(2, m - 1):
        fact *= i
    power_scalar = lhs.terms.get(next(iter(gmm.terms)), Fraction(0))
    if abs(power_scalar) != fact:
        raise InternalCheckError(f"power identity failed (scalar {power_scalar})")

    delta_gmm = KForm(dim, dim - 2, {next(iter(gmm.terms)) | 3: Fraction(1)})
    omega = delta_form(algebra) + rho
    image = wedge(power(omega, algebra.n - 2), x1xm1)
    if len(image.terms) != 1:
        raise InternalCheckError("volume identity failed (non-monomial image)")
    scalar = image.terms.get(next(iter(delta_gmm.terms)), Fraction(0))
    if not scalar or abs(scalar) != (m - 1) * fact:
        raise InternalCheckError(f"volume identity failed (scalar {scalar})")

    gm2m1 = gamma_omitting(algebra, m, 2 * m - 1)
    f2_gm2m1 = KForm(dim, dim - 3, {next(iter(gm2m1.terms)) | 2: Fraction(1)})
    primitive_matches = (algebra.d(-f2_gm2m1) - delta_gmm).is_zero()
    if not primitive_matches:
        raise InternalCheckError("explicit primitive identity failed")
    explicit = (-scalar) * f2_gm2m1
    if not (algebra.d(explicit) - image).is_zero():
        raise InternalCheckError("scaled explicit primitive does not hit the image")
    engine = is_exact(algebra, image)
    if engine is None:
        raise InternalCheckError("operator image is not exact")
    engine_agrees = algebra.d(engine - explicit).is_zero()
    return KernelWitnessProof(m, power_scalar, scalar, primitive_matches, engine_agrees)


# ---------------------------------------------------------------------------
# seeded exact perturbations for invariance checks
# ---------------------------------------------------------------------------

_PALETTE = [
    Fraction(1),
    Fraction(-1),
    Fraction(2),
    Fraction(-2),
    Fraction(1, 2),
    Fraction(-1, 2),
    Fraction(1, 3),
]


def random_exact_perturbation(algebra: Algebra, rng: random.Random) -> KForm:
    """d(eta) for a random sparse rational 1-form eta; always closed and exact."""
    dim = algebra.dim
    eta = KForm(dim, 1)
    gens = list(range(1, dim))
    rng.shuffle(gens)
    count = max(1, len(gens) // 2)
    for g in gens[:count]:
        eta = eta + KForm(dim, 1, {1 << g: rng.choice(_PALETTE)})
    return algebra.d(eta)
