"""Command-line surface.

Subcommands: ``fm`` (limit dimensions over a degree range), ``reduce``
(diagonal form and signature matrix of a homomorphism document),
``check`` (stability verdicts), ``quotient`` (base-point quotient
system), ``builtin`` (emit a built-in system document).

Exit codes: 0 = computed (verdicts are data, not errors), 2 = input
error, 3 = internal inconsistency between checkers.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .builtins import BUILTIN_NAMES, builtin_system
from .colim import fm_of_system
from .docio import (
    DocumentError,
    emit_signature_matrix,
    emit_system,
    parse_hom,
    parse_system,
)
from .homs import BlockError, SignatureMatrix, reduce_to_diagonal, signature_of
from .paths import PathError
from .realize import GridFunction, REALIZE_TOL, realize
from .recurrence import StabilizationError
from .stability import StabilityContradiction, k_stability_report, quotient_system
from .systems import SystemError, generate_prefix

M_RANGE_CAP = 10000


def _parse_m_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo_text, _, hi_text = text.partition("..")
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise DocumentError(f"bad degree range {text!r}")
    return lo, hi


def _load_system(args):
    if getattr(args, "system", None) and getattr(args, "builtin", None):
        raise DocumentError("give either --system or --builtin, not both")
    if getattr(args, "builtin", None):
        return builtin_system(args.builtin)
    if getattr(args, "system", None):
        try:
            with open(args.system, "r", encoding="utf-8") as fh:
                return parse_system(fh.read())
        except OSError as err:
            raise DocumentError(f"cannot read {args.system}: {err}") from err
    raise DocumentError("one of --system or --builtin is required")


def cmd_fm(args) -> int:
    system = _load_system(args)
    lo, hi = _parse_m_range(args.m)
    if hi > M_RANGE_CAP and not args.no_cap:
        raise DocumentError(
            f"degree range extends past {M_RANGE_CAP}; pass --no-cap to override"
        )
    rows = []
    for m in range(lo, hi + 1):
        report = fm_of_system(system, m, window=args.window)
        dimension = (
            report.dimension
            if report.exact
            else list(report.dimension)
        )
        rows.append(
            {
                "m": m,
                "dimension": dimension,
                "exact": report.exact,
                "stabilization_stage": report.stabilization_stage,
            }
        )
    if args.format == "machine":
        print(json.dumps({"command": "fm", "rows": rows}, indent=2))
    else:
        print(f"{'m':>6}  {'dimension':>12}  {'exact':>5}  {'stage':>5}")
        for row in rows:
            dim = row["dimension"]
            dim_text = str(dim) if isinstance(dim, int) else f"[{dim[0]}, {dim[1]}]"
            print(
                f"{row['m']:>6}  {dim_text:>12}  "
                f"{'yes' if row['exact'] else 'no':>5}  {row['stabilization_stage']:>5}"
            )
    return 0


def _verdict_doc(verdict) -> dict:
    doc = {"value": verdict.value, "exact": verdict.exact, "via": verdict.via}
    witness = verdict.witness
    if witness is not None and hasattr(witness, "describe"):
        doc["witness"] = witness.describe()
    return doc


def cmd_check(args) -> int:
    system = _load_system(args)
    m_max = None
    if args.m:
        _, m_max = _parse_m_range(args.m)
    report = k_stability_report(
        system,
        m_max=m_max,
        j_max=args.j_max,
        prefix_length=args.prefix,
        window=args.window,
    )
    doc = {
        "command": "check",
        "slow_dimension_growth": _verdict_doc(report.sdg),
        "rationally_k_stable": _verdict_doc(report.rationally_k_stable),
        "k_stable": _verdict_doc(report.k_stable),
        "checked_bounds": {
            "m_max": report.bounds.m_max,
            "j_max": report.bounds.j_max,
            "prefix_length": report.bounds.prefix_length,
        },
    }
    if args.format == "machine":
        print(json.dumps(doc, indent=2))
    else:
        def line(label, verdict):
            qualifier = "exact" if verdict.exact else "up to bounds"
            print(f"{label:<24} {verdict.value} ({qualifier}; via {verdict.via})")
            witness = verdict.witness
            if witness is not None and hasattr(witness, "describe"):
                print(f"{'':<24} witness: {witness.describe()}")

        line("slow-dimension-growth:", report.sdg)
        line("rationally-k-stable:", report.rationally_k_stable)
        line("k-stable:", report.k_stable)
        print(
            f"{'checked bounds:':<24} m <= {report.bounds.m_max}, "
            f"j <= {report.bounds.j_max}, prefix {report.bounds.prefix_length}"
        )
    return 0


def _random_trig_function(rng, size: int, grid: int, degree: int = 4) -> GridFunction:
    coeffs = [
        (rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size)))
        / (1 + abs(d))
        for d in range(-degree, degree + 1)
    ]
    ts = np.linspace(0.0, 1.0, grid)
    samples = np.zeros((grid, size, size), dtype=complex)
    for d, c in zip(range(-degree, degree + 1), coeffs):
        samples += np.exp(2j * np.pi * d * ts)[:, None, None] * c
    return GridFunction(samples)


def _verify_block(block, rng, grid: int = 512, trials: int = 3) -> float:
    worst = 0.0
    n = block.source_size
    for _ in range(trials):
        f = _random_trig_function(rng, n, grid)
        g = _random_trig_function(rng, n, grid)
        fg = f @ g
        for k in (0, grid // 3, grid - 1):
            lhs = realize(block, fg, k)
            rhs = realize(block, f, k) @ realize(block, g, k)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
            adj = realize(block, f.adjoint(), k)
            worst = max(worst, float(np.max(np.abs(adj - realize(block, f, k).conj().T))))
        closure = np.max(np.abs(realize(block, f, 0) - realize(block, f, grid - 1)))
        worst = max(worst, float(closure))
    return worst


def cmd_reduce(args) -> int:
    if not args.system:
        raise DocumentError("reduce needs --system <homomorphism document>")
    try:
        with open(args.system, "r", encoding="utf-8") as fh:
            hom = parse_hom(fh.read())
    except OSError as err:
        raise DocumentError(f"cannot read {args.system}: {err}") from err
    diagonal = [
        [reduce_to_diagonal(block) for block in row] for row in hom.blocks
    ]
    signature = SignatureMatrix(
        source=hom.source,
        target=hom.target,
        entries=tuple(
            tuple(signature_of(block) for block in row) for row in diagonal
        ),
    )
    doc = {
        "command": "reduce",
        "diagonal": [
            [
                {"multiplicity": b.multiplicity, "windings": list(b.windings)}
                for b in row
            ]
            for row in diagonal
        ],
        "signature": {
            "source": {"sizes": list(hom.source.sizes)},
            "target": {"sizes": list(hom.target.sizes)},
            "entries": [[[e.a, e.b] for e in row] for row in signature.entries],
        },
    }
    max_deviation = None
    if args.verify:
        rng = np.random.default_rng(7)
        max_deviation = 0.0
        for row in hom.blocks:
            for block in row:
                if block.multiplicity == 0:
                    continue
                max_deviation = max(max_deviation, _verify_block(block, rng))
        doc["verify"] = {"max_deviation": max_deviation, "tolerance": REALIZE_TOL}
    if args.format == "machine":
        print(json.dumps(doc, indent=2))
    else:
        print("diagonal form:")
        for i, row in enumerate(diagonal):
            for j, b in enumerate(row):
                print(
                    f"  block ({i},{j}): multiplicity {b.multiplicity}, "
                    f"windings {list(b.windings)}"
                )
        print("signature matrix:")
        print(emit_signature_matrix(signature), end="")
        if max_deviation is not None:
            print(
                f"realizer check: max deviation {max_deviation:.3e} "
                f"(tolerance {REALIZE_TOL:g})"
            )
    return 0


def cmd_quotient(args) -> int:
    system = _load_system(args)
    af = quotient_system(system)
    doc = {
        "command": "quotient",
        "stages": [{"sizes": list(s)} for s in af.sizes],
        "maps": [{"entries": [list(row) for row in m]} for m in af.maps],
    }
    if af.tail_templates is None:
        doc["tail"] = {"kind": "none"}
    else:
        doc["tail"] = {
            "kind": "periodic",
            "period": len(af.tail_templates),
            "templates": [
                {"entries": [list(row) for row in grid]} for grid in af.tail_templates
            ],
            "pads": [list(v) for v in af.tail_pads],
        }
    if args.format == "machine":
        print(json.dumps(doc, indent=2))
    else:
        print("stages:", " -> ".join(str(list(s)) for s in af.sizes))
        for k, m in enumerate(af.maps):
            print(f"map {k}: {[list(row) for row in m]}")
        if af.tail_templates is not None:
            print(
                "tail: periodic, templates "
                + "; ".join(str([list(r) for r in g]) for g in af.tail_templates)
                + f", pads {[list(v) for v in af.tail_pads]}"
            )
    return 0


def cmd_builtin(args) -> int:
    if not args.builtin:
        raise DocumentError(
            f"builtin needs --builtin <name>; available: {', '.join(BUILTIN_NAMES)}"
        )
    system = builtin_system(args.builtin)
    if args.prefix:
        system = generate_prefix(system, args.prefix)
    print(emit_system(system, meta={"name": args.builtin}), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circlek",
        description=(
            "Exact rational nonstable K-groups of limits of circle algebras, "
            "with stability checkers"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, m_default=None):
        p.add_argument("--system", help="system or homomorphism document (JSON)")
        p.add_argument("--builtin", help=f"built-in system ({', '.join(BUILTIN_NAMES)})")
        p.add_argument("--m", default=m_default, help="degree or range a..b")
        p.add_argument("--j-max", type=int, default=None, help="largest amplification level")
        p.add_argument("--prefix", type=int, default=None, help="stages to unroll")
        p.add_argument("--window", type=int, default=8, help="stabilization window")
        p.add_argument("--verify", action="store_true", help="run the numeric realizer checks")
        p.add_argument("--format", choices=("human", "machine"), default="human")
        p.add_argument("--no-cap", action="store_true", help="lift the degree-range cap")

    p_fm = sub.add_parser("fm", help="limit dimensions over a degree range")
    common(p_fm, m_default="1..8")
    p_fm.set_defaults(func=cmd_fm)

    p_reduce = sub.add_parser("reduce", help="diagonalize a homomorphism document")
    common(p_reduce)
    p_reduce.set_defaults(func=cmd_reduce)

    p_check = sub.add_parser("check", help="stability verdicts")
    common(p_check)
    p_check.set_defaults(func=cmd_check)

    p_quot = sub.add_parser("quotient", help="base-point quotient system")
    common(p_quot)
    p_quot.set_defaults(func=cmd_quotient)

    p_builtin = sub.add_parser("builtin", help="emit a built-in system document")
    common(p_builtin)
    p_builtin.set_defaults(func=cmd_builtin)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StabilityContradiction as err:
        print(f"internal inconsistency: {err}", file=sys.stderr)
        return 3
    except (DocumentError, SystemError, BlockError, PathError, StabilizationError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
