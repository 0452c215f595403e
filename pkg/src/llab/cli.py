"""Command-line front end.

    llab betti|h2|lefschetz|circuits|lattice|verify --spec FILE
         [--omega FILE] [--format json|text] [--max-dim N] [--seed N]

Specs are JSON: {"a": "0", "v": ["0","1"] | null,
"blocks": [{"lambda": "1", "size": 2, "mult": 1}, ...]} with every scalar an
exact rational string.  A user symplectic form is a JSON term list:
{"terms": [{"monomial": ["f1", "f2"], "coeff": "1"}, ...]} (generator names
or indices).  Lattice specs: {"case": "ii", "t": 0, "pairs": [[3, 2]]}.

Exit codes: 0 success, 2 input error, 3 theorem-conformance mismatch,
4 internal invariant violation.  JSON output uses sorted keys so reports
round-trip byte-identically.  LLAB_THREADS caps verify parallelism.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import Algebra, JordanSpec, SpecError, build, validate_spectrum
from .cohomology import (
    NotClosedError,
    betti_numbers,
    circuits_of,
    cohomology,
    verify_h2_structure,
)
from .exterior import KForm, generators_of
from .lattice import LatticeSpec, certify
from .lefschetz import (
    SymplecticError,
    default_symplectic,
    hard_lefschetz_report,
    validate_symplectic,
)
from .sweep import run_sweep

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFORMANCE = 3
EXIT_INTERNAL = 4

MAX_DIM_LIMIT = 32


def _emit(data, fmt: str, text_lines):
    if fmt == "json":
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON in {path}: {exc}") from exc


def _load_algebra(path: str) -> Algebra:
    return build(JordanSpec.from_json_dict(_load_json(path)))


def _load_omega(path: str, algebra: Algebra) -> KForm:
    data = _load_json(path)
    try:
        terms = data["terms"]
    except (KeyError, TypeError) as exc:
        raise SpecError("omega file needs a 'terms' list") from exc
    name_to_idx = {n: i for i, n in enumerate(algebra.layout.names)}
    form = KForm(algebra.dim, 2)
    for term in terms:
        gens = []
        for g in term["monomial"]:
            if isinstance(g, str):
                if g not in name_to_idx:
                    raise SpecError(f"unknown generator {g!r}")
                gens.append(name_to_idx[g])
            else:
                gens.append(int(g))
        if len(gens) != 2:
            raise SpecError("omega terms must be 2-form monomials")
        gens.sort()
        form = form + KForm.monomial(algebra.dim, gens, term["coeff"])
    return form


def _form_text(algebra: Algebra, form) -> str:
    return algebra.form_text(form) if form is not None else None


def cmd_betti(args) -> int:
    algebra = _load_algebra(args.spec)
    b = betti_numbers(algebra)
    data = {
        "dimension": algebra.dim,
        "betti": b,
        "spec": algebra.spec.to_json_dict(),
    }
    lines = ["k  | b_k", "---+----"]
    lines += [f"{k:<3}| {v}" for k, v in enumerate(b)]
    _emit(data, args.format, lines)
    return EXIT_OK


def cmd_h2(args) -> int:
    algebra = _load_algebra(args.spec)
    dec = verify_h2_structure(algebra)
    data = {
        "b2": dec.b2,
        "u": {
            "dim": dec.u_dim,
            "canonical": dec.u_canonical,
            "generators": [_form_text(algebra, f) for f in dec.u_reps],
        },
        "v": {"dim": dec.v_dim},
        "w0": {
            "dim": dec.w0_dim,
            "generators": [_form_text(algebra, f) for f in dec.w0_reps],
        },
        "pairs": [
            {
                "blocks": list(p["blocks"]),
                "lambda": str(p["lambda"]),
                "dim": p["dim"],
                "generators": [_form_text(algebra, f) for f in p["circuits"]],
            }
            for p in dec.pair_parts
        ],
    }
    lines = [f"b2 = {dec.b2}", f"U part: dim {dec.u_dim}"]
    lines += [f"  {_form_text(algebra, f)}" for f in dec.u_reps]
    lines.append(f"V part (zero-block mixing): dim {dec.v_dim}")
    lines.append(f"W0 part: dim {dec.w0_dim}")
    lines += [f"  {_form_text(algebra, f)}" for f in dec.w0_reps]
    for p in data["pairs"]:
        lines.append(f"blocks {p['blocks']} (lambda {p['lambda']}): dim {p['dim']}")
        lines += [f"  {g}" for g in p["generators"]]
    _emit(data, args.format, lines)
    return EXIT_OK


def cmd_circuits(args) -> int:
    algebra = _load_algebra(args.spec)
    blocks = algebra.layout.double_blocks
    data = {"pairs": []}
    lines = []
    for a in range(len(blocks)):
        for b in range(a, len(blocks)):
            if blocks[a].lam != blocks[b].lam:
                continue
            circuits = circuits_of(algebra, a, b)
            entry = {
                "blocks": [a, b],
                "count": len(circuits),
                "circuits": [
                    {
                        "kind": c.kind,
                        "length": c.length,
                        "form": _form_text(algebra, c.form),
                    }
                    for c in circuits
                ],
            }
            data["pairs"].append(entry)
            lines.append(f"blocks ({a},{b}): {len(circuits)} circuits")
            lines += [
                f"  {c['kind']} l={c['length']}: {c['form']}" for c in entry["circuits"]
            ]
    _emit(data, args.format, lines)
    return EXIT_OK


def _report_json(algebra: Algebra, report) -> dict:
    return {
        "verdict": report.verdict,
        "first_failure_degree": report.first_failure_degree,
        "degrees": [
            {
                "k": d.k,
                "rank": d.rank,
                "dim_source": d.dim_source,
                "dim_target": d.dim_target,
                "bijective": d.bijective,
            }
            for d in report.degrees
        ],
        "witness": _form_text(algebra, report.witness),
        "predicted": {
            "verdict": report.predicted.verdict,
            "failure_degree": report.predicted.failure_degree,
            "covered": report.predicted.covered,
        },
        "agree": report.agree,
        "spectrum": report.spectrum,
    }


def cmd_lefschetz(args) -> int:
    algebra = _load_algebra(args.spec)
    if args.omega:
        omega = validate_symplectic(algebra, _load_omega(args.omega, algebra))
    else:
        omega = default_symplectic(algebra)
    report = hard_lefschetz_report(algebra, omega)
    data = _report_json(algebra, report)
    lines = [
        f"verdict: {report.verdict}"
        + (f" (first failure at degree {report.first_failure_degree})"
           if report.first_failure_degree is not None else ""),
        f"predicted: {report.predicted.verdict}"
        + (f"@{report.predicted.failure_degree}"
           if report.predicted.failure_degree is not None else ""),
        f"agree: {report.agree}",
        "k  | rank | source | target | bijective",
        "---+------+--------+--------+----------",
    ]
    for d in report.degrees:
        lines.append(
            f"{d.k:<3}| {d.rank:<5}| {d.dim_source:<7}| {d.dim_target:<7}| {d.bijective}"
        )
    if report.witness is not None:
        lines.append(f"kernel witness: {_form_text(algebra, report.witness)}")
    _emit(data, args.format, lines)
    return EXIT_OK if report.agree else EXIT_CONFORMANCE


def cmd_lattice(args) -> int:
    spec = LatticeSpec.from_json_dict(_load_json(args.spec))
    cert = certify(spec)
    data = cert.to_json_dict()
    lines = [
        f"case {spec.case}: char poly coefficients (ascending) {cert.char_poly}",
        f"witness size {cert.companion.rows}, det {cert.determinant}, t0 = {cert.t0}",
        f"max interval width {cert.max_interval_width:.3e}",
    ]
    _emit(data, args.format, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    summary = run_sweep(
        max_dim=args.max_dim,
        perturbations=args.perturbations,
        seed=args.seed,
        inject_bug=args.inject_bug,
    )
    data = summary.to_json_dict()
    lines = [
        f"specs checked: {summary.specs_checked} (dim <= {summary.max_dim})",
        f"checks passed: {summary.checks_passed}",
        f"checks failed: {summary.checks_failed}",
    ]
    lines += [f"  FAIL {f}" for f in sorted(summary.failures)]
    _emit(data, args.format, lines)
    if summary.ok:
        return EXIT_OK
    conformance_only = all(
        "verdict" in f or "agreement" in f for f in summary.failures
    )
    return EXIT_CONFORMANCE if conformance_only else EXIT_INTERNAL


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="llab")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec_required=True):
        if spec_required:
            p.add_argument("--spec", required=True, help="JSON spec file")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("betti", help="Betti numbers b_0..b_2n")
    common(p)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("h2", help="structure of degree-two cohomology")
    common(p)
    p.set_defaults(func=cmd_h2)

    p = sub.add_parser("circuits", help="circuit generators per block pair")
    common(p)
    p.set_defaults(func=cmd_circuits)

    p = sub.add_parser("lefschetz", help="hard-Lefschetz verdict report")
    common(p)
    p.add_argument("--omega", help="JSON term list for a user symplectic form")
    p.set_defaults(func=cmd_lefschetz)

    p = sub.add_parser("lattice", help="lattice existence certificate")
    common(p)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("verify", help="sweep spec families and check the theorems")
    common(p, spec_required=False)
    p.add_argument("--max-dim", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturbations", type=int, default=20)
    p.add_argument("--inject-bug", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if getattr(args, "max_dim", 0) and args.max_dim > MAX_DIM_LIMIT:
        print(f"error: --max-dim exceeds the hard cap {MAX_DIM_LIMIT}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (SpecError, SymplecticError, NotClosedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
