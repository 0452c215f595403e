"""Spec family enumeration and the invariant battery behind `llab verify`.

The sweep enumerates Jordan specs per even dimension: partitions of the
paired part into block sizes with eigenvalues drawn cyclically from the
palette {1, 2, 1/2} (plus an all-equal variant to exercise mixed circuits),
crossed with admissible zero-eigenvalue structures (odd chain sizes in even
counts) and an optional canonical shift vector.  Every spec is checked for
differential soundness, unimodularity, the Jacobi identity, Poincare
duality, the degree-two structure reports, and (up to the given caps) the
hard-Lefschetz verdict against its spectrum-level prediction, including
invariance under seeded exact perturbations of the symplectic form.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Algebra, JordanSpec, build, validate_spectrum
from .cohomology import (
    betti_numbers,
    closed_two_form_structure,
    verify_h2_structure,
)
from .exact import QMatrix
from .lefschetz import (
    default_symplectic,
    hard_lefschetz_report,
    random_exact_perturbation,
)

PALETTE = (Fraction(1), Fraction(2), Fraction(1, 2))


def _partitions(n: int, cap: int | None = None):
    """Partitions of n as descending tuples."""
    cap = n if cap is None else cap
    if n == 0:
        yield ()
        return
    for first in range(min(n, cap), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def zero_structures(zdim: int):
    """Multisets of zero-chain sizes with odd sizes in even counts."""
    out = []
    for part in _partitions(zdim):
        counts: dict[int, int] = {}
        for s in part:
            counts[s] = counts.get(s, 0) + 1
        if all(c % 2 == 0 for s, c in counts.items() if s % 2 == 1):
            out.append(part)
    return out


def sweep_specs(max_dim: int, include_shift: bool = True) -> list[JordanSpec]:
    """Deterministic list of admissible specs up to the dimension cap."""
    specs: list[JordanSpec] = []
    seen = set()

    def add(blocks, v):
        key = (tuple(sorted((str(l), s, m) for l, s, m in blocks)), tuple(map(str, v or ())))
        if key in seen:
            return
        seen.add(key)
        specs.append(JordanSpec.make(blocks, v))

    for dim in range(2, max_dim + 1, 2):
        u0 = dim - 2
        for z in range(0, u0 + 1, 2):
            half = (u0 - z) // 2
            for zs in zero_structures(z):
                zero_counts: dict[int, int] = {}
                for s in zs:
                    zero_counts[s] = zero_counts.get(s, 0) + 1
                zero_blocks = [
                    (Fraction(0), s, c) for s, c in sorted(zero_counts.items(), reverse=True)
                ]
                for part in _partitions(half):
                    assignments = [[PALETTE[i % len(PALETTE)] for i in range(len(part))]]
                    if len(part) >= 2:
                        assignments.append([PALETTE[0]] * len(part))
                    for lams in assignments:
                        paired: dict[tuple[Fraction, int], int] = {}
                        for lam, size in zip(lams, part):
                            paired[(lam, size)] = paired.get((lam, size), 0) + 1
                        blocks = list(zero_blocks)
                        for (lam, size), mult in sorted(paired.items()):
                            blocks.append((lam, size, mult))
                            blocks.append((-lam, size, mult))
                        add(blocks, None)
                        if include_shift and z > 0:
                            zmax = zs[0]
                            v = [Fraction(0)] * z
                            v[zmax - 1] = Fraction(1)
                            add(blocks, v)
    return specs


@dataclass
class SpecResult:
    spec: JordanSpec
    dim: int
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _check(result: SpecResult, name: str, passed: bool, detail: str = ""):
    result.checks[name] = bool(passed)
    if not passed:
        result.failures.append(f"{name}: {detail}" if detail else name)


def check_differential_soundness(algebra: Algebra, result: SpecResult, inject_bug: bool = False):
    ok = True
    for k in range(algebra.dim):
        prod = algebra.differential(k + 1) * algebra.differential(k)
        if inject_bug and k == 1 and prod.rows and prod.cols:
            prod = prod + QMatrix(prod.rows, prod.cols, {(0, 0): Fraction(1)})
        if not prod.is_zero():
            ok = False
            _check(result, "d_squared_zero", False, f"d_{k + 1} d_{k} != 0")
            break
    if ok:
        _check(result, "d_squared_zero", True)


def check_jacobi(algebra: Algebra, result: SpecResult):
    dim = algebra.dim
    basis = [algebra.basis_vector(g) for g in range(dim)]
    ok = True
    # brackets vanish unless f_1 is involved, so only triples containing it matter
    for i in range(1, dim):
        for j in range(i + 1, dim):
            x, y, z = basis[0], basis[i], basis[j]
            t1 = algebra.bracket(x, algebra.bracket(y, z))
            t2 = algebra.bracket(y, algebra.bracket(z, x))
            t3 = algebra.bracket(z, algebra.bracket(x, y))
            if any(a + b + c for a, b, c in zip(t1, t2, t3)):
                ok = False
                break
        if not ok:
            break
    _check(result, "jacobi", ok)


def verify_spec(
    spec: JordanSpec,
    lefschetz_cap: int = 10,
    perturb_cap: int = 8,
    perturbations: int = 20,
    seed: int = 0,
    inject_bug: bool = False,
) -> SpecResult:
    """Run the full invariant battery on one spec."""
    result = SpecResult(spec, spec.dim())
    algebra = build(spec)
    check_differential_soundness(algebra, result, inject_bug=inject_bug)
    _check(result, "unimodular_trace", algebra.structure_matrix.trace() == 0)
    check_jacobi(algebra, result)

    b = betti_numbers(algebra)
    _check(
        result,
        "poincare_duality",
        all(b[k] == b[algebra.dim - k] for k in range(algebra.dim + 1)),
        f"betti={b}",
    )
    try:
        verify_h2_structure(algebra)
        _check(result, "h2_structure", True)
    except AssertionError as exc:
        _check(result, "h2_structure", False, str(exc))
    try:
        closed_two_form_structure(algebra)
        _check(result, "closed_two_forms", True)
    except AssertionError as exc:
        _check(result, "closed_two_forms", False, str(exc))

    if validate_spectrum(spec).admissible and spec.dim() <= lefschetz_cap:
        omega = default_symplectic(algebra)
        report = hard_lefschetz_report(algebra, omega)
        _check(
            result,
            "verdict_agreement",
            report.agree,
            f"computed {report.verdict}@{report.first_failure_degree}, "
            f"predicted {report.predicted.verdict}@{report.predicted.failure_degree}",
        )
        if spec.dim() <= perturb_cap and perturbations > 0:
            rng = random.Random(f"{seed}|{spec.to_json_dict()}")
            stable = True
            for _ in range(perturbations):
                perturbed = omega.form + random_exact_perturbation(algebra, rng)
                rep2 = hard_lefschetz_report(algebra, perturbed)
                if (
                    rep2.verdict != report.verdict
                    or rep2.first_failure_degree != report.first_failure_degree
                ):
                    stable = False
                    break
            _check(result, "verdict_invariance", stable)
    return result


@dataclass
class SweepSummary:
    max_dim: int
    specs_checked: int
    checks_passed: int
    checks_failed: int
    failures: list
    by_check: dict  # name -> [passed, failed]

    @property
    def ok(self) -> bool:
        return self.checks_failed == 0

    def passed(self, name: str) -> int:
        return self.by_check.get(name, [0, 0])[0]

    def failed(self, name: str) -> int:
        return self.by_check.get(name, [0, 0])[1]

    def to_json_dict(self) -> dict:
        return {
            "max_dim": self.max_dim,
            "specs_checked": self.specs_checked,
            "checks_passed": self.checks_passed,
            "checks_failed": self.checks_failed,
            "by_check": {k: list(v) for k, v in sorted(self.by_check.items())},
            "failures": sorted(self.failures),
        }


def run_sweep(
    max_dim: int = 12,
    lefschetz_cap: int = 10,
    perturb_cap: int = 8,
    perturbations: int = 20,
    seed: int = 0,
    inject_bug: bool = False,
    threads: int | None = None,
) -> SweepSummary:
    """Sweep all enumerated specs; aggregation is order-independent."""
    specs = sweep_specs(max_dim)
    if threads is None:
        threads = max(1, int(os.environ.get("LLAB_THREADS", "1")))

    def work(spec):
        return verify_spec(
            spec,
            lefschetz_cap=lefschetz_cap,
            perturb_cap=perturb_cap,
            perturbations=perturbations,
            seed=seed,
            inject_bug=inject_bug,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, specs))
    else:
        results = [work(s) for s in specs]
    passed = sum(sum(1 for ok in r.checks.values() if ok) for r in results)
    failed = sum(sum(1 for ok in r.checks.values() if not ok) for r in results)
    failures = []
    by_check: dict[str, list[int]] = {}
    for r in results:
        for name, ok in r.checks.items():
            slot = by_check.setdefault(name, [0, 0])
            slot[0 if ok else 1] += 1
        for f in r.failures:
            failures.append(f"dim {r.dim} {r.spec.to_json_dict()}: {f}")
    return SweepSummary(max_dim, len(specs), passed, failed, failures, by_check)
