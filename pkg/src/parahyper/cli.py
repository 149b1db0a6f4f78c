"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error,
3 the search produced no certified structure. Data goes to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .classify import match_family
from .formats import (
    AlgebraDocument,
    FormatError,
    canonical_json,
    emit_dsl,
    emit_json,
    emit_structure,
    load_algebra_text,
    parse_structure,
    structure_object,
)
from .hermitian import classify_plane, default_metric, is_hermitian_for_triple, metric_from_anchor
from .lie import BracketTable, LieAlgebra, jacobi_defect
from .linalg import Subspace, UsageError, rank, scalar
from .search import SearchConfig, SearchStatus, search_structure
from .structures import StructureKind, is_integrable, make_triple, nijenhuis_failures, triple_failures

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_CERTIFIED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _rational(text: str) -> Fraction:
    try:
        return scalar(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _vector(text: str) -> tuple[Fraction, ...]:
    return tuple(_rational(t) for t in text.split(","))


def _params(text: str | None) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"bad parameter {item!r}; expected k=v")
        out[key.strip()] = _rational(value)
    return out


def _load_document(source: str) -> AlgebraDocument:
    """A file path, or a catalog id such as ``PHC7`` or ``PHC7:a=1,b=0``."""
    path = Path(source)
    if path.exists():
        return load_algebra_text(path.read_bytes())
    cid, _, params = source.partition(":")
    if cid.upper() in catalog.PHC_IDS + catalog.HC_IDS:
        e = catalog.entry(cid, _params(params))
        return AlgebraDocument.from_algebra(e.algebra, e.label)
    raise UsageError(f"no such file or catalog id: {source}")


def _load_algebra(source: str) -> LieAlgebra:
    return _load_document(source).to_algebra()


def _load_structure(path: str, L: BracketTable):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_structure(data, L.dim)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


# ------------------------------------------------------------- commands


def cmd_check(args) -> int:
    table = _load_document(args.algebra).to_table()
    defects = jacobi_defect(table)
    report: dict = {"jacobi": not defects}
    lines = [f"jacobi: {'ok' if not defects else 'FAILED'}"]
    if defects:
        report["jacobi_defects"] = [[i, j, k, [_fmt(x) for x in v]] for i, j, k, v in defects]
    ok = not defects
    if args.structure:
        doc = _load_structure(args.structure, table)
        failures = triple_failures(doc.j1, doc.j2)
        report["triple"] = failures or "ok"
        lines.append("triple: " + ("ok" if not failures else "FAILED (" + ", ".join(failures) + ")"))
        ok = ok and not failures
        if not defects:
            for name, J, kind in (
                ("j1", doc.j1, StructureKind.Complex),
                ("j2", doc.j2, StructureKind.Product),
                ("j3", doc.j1 @ doc.j2, StructureKind.Product),
            ):
                integrable = is_integrable(table, J, kind)
                report[f"{name}_integrable"] = integrable
                lines.append(f"{name} integrable: {'yes' if integrable else 'NO'}")
                if not integrable:
                    report[f"{name}_nijenhuis"] = [[i, j, [_fmt(x) for x in v]] for i, j, v in nijenhuis_failures(table, J, kind)]
                if name != "j3":
                    ok = ok and integrable
    report["passed"] = ok
    lines.append("result: " + ("PASS" if ok else "FAIL"))
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _triple_for(args, L):
    doc = _load_structure(args.structure, L)
    return make_triple(doc.j1, doc.j2)


def _metric(args, t):
    if args.anchor:
        X = _vector(args.anchor)
        if len(X) != t.dim:
            raise UsageError("anchor length does not match the algebra")
        return metric_from_anchor(t, X), X
    return default_metric(t)


def cmd_metric(args) -> int:
    L = _load_algebra(args.algebra)
    t = _triple_for(args, L)
    g, X = _metric(args, t)
    sig = g.signature()
    payload = {
        "anchor": [_fmt(x) for x in X],
        "gram": [[_fmt(x) for x in r] for r in g.gram],
        "signature": list(sig),
        "hermitian": is_hermitian_for_triple(g, t),
    }
    text = "\n".join(
        ["anchor: " + " ".join(payload["anchor"]), "gram:"]
        + ["  " + " ".join(f"{v:>6}" for v in r) for r in payload["gram"]]
        + [f"signature: {sig}"]
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_search(args) -> int:
    L = _load_algebra(args.algebra)
    cfg = SearchConfig(
        restarts=args.restarts,
        seed=args.seed,
        max_iterations=args.max_iter,
        residual_tolerance=args.tol,
        max_denominator=args.max_denom,
    )
    result = search_structure(L, cfg)
    trace = result.trace_json()
    trace["config"] = cfg.to_dict()
    structure = None
    if result.status is SearchStatus.Certified:
        structure = structure_object("search", L.basis_names, result.triple.j1, result.triple.j2)
    if args.trace:
        Path(args.trace).write_text(json.dumps(trace, sort_keys=True) + "\n")
    if args.json:
        sys.stdout.write(json.dumps({"structure": structure, "trace": trace}, sort_keys=True) + "\n")
    elif structure is not None:
        sys.stdout.buffer.write(canonical_json(structure) + b"\n")
    print(f"search: {result.label}; best residual {result.residual:.3e}", file=sys.stderr)
    return EXIT_OK if structure is not None else EXIT_NOT_CERTIFIED


def cmd_classify(args) -> int:
    L = _load_algebra(args.algebra)
    cfg = SearchConfig(restarts=args.restarts, seed=args.seed) if args.search else None
    m = match_family(L, cfg)
    payload = m.to_dict()
    fp = m.fingerprint.to_dict()
    text = "\n".join(
        [f"{k}: {v}" for k, v in fp.items()]
        + ["candidates: " + (", ".join(m.candidates) or "none"), "note: " + payload["note"]]
        + ([f"search evidence: {m.evidence.label}"] if m.evidence else [])
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if not args.id:
        ids = catalog.PHC_IDS + catalog.HC_IDS
        _emit(args, {"ids": list(ids)}, "\n".join(ids))
        return EXIT_OK
    e = catalog.entry(args.id, _params(args.params))
    doc = AlgebraDocument.from_algebra(e.algebra, e.id.lower())
    if args.emit == "json":
        sys.stdout.buffer.write(emit_json(doc) + b"\n")
    elif args.emit == "structure":
        if e.structure is None:
            raise UsageError(f"{e.id} carries no para-hypercomplex structure")
        sys.stdout.buffer.write(emit_structure(e.id.lower(), e.algebra.basis_names, e.structure.j1, e.structure.j2) + b"\n")
    else:
        sys.stdout.write(emit_dsl(doc))
    if e.note:
        print(f"{e.label}: {e.note}", file=sys.stderr)
    return EXIT_OK


def cmd_plane(args) -> int:
    L = _load_algebra(args.algebra)
    t = _triple_for(args, L)
    parts = args.span.split(";")
    if len(parts) != 2:
        raise UsageError("--span takes two vectors separated by ';'")
    vs = [_vector(p) for p in parts]
    if any(len(v) != t.dim for v in vs) or rank(vs) != 2:
        raise UsageError("--span must give two independent vectors of the algebra's dimension")
    g, _ = _metric(args, t)
    pc = classify_plane(t, g, Subspace(t.dim, vs))

    def trip(x):
        return None if x is None else [_fmt(c) for c in x]

    payload = {"kind": pc.tag, "x": trip(pc.x), "y": trip(pc.y), "normalized": pc.normalized}
    text = f"kind: {pc.tag}\nx: {payload['x']}\ny: {payload['y']}\nnormalized: {pc.normalized}"
    _emit(args, payload, text)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="parahyper", description="Para-hypercomplex structures on 4-dimensional Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    c = sub.add_parser("check", help="Jacobi identity and, with --structure, full structure verification")
    c.add_argument("algebra")
    c.add_argument("--structure")
    common(c)
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("metric", help="anchored hermitian metric: Gram matrix and signature")
    m.add_argument("algebra")
    m.add_argument("--structure", required=True)
    m.add_argument("--anchor", help="comma-separated rationals")
    common(m)
    m.set_defaults(func=cmd_metric)

    d = SearchConfig()
    s = sub.add_parser("search", help="numerical search with exact certification")
    s.add_argument("algebra")
    s.add_argument("--restarts", type=int, default=d.restarts)
    s.add_argument("--seed", type=int, default=d.seed)
    s.add_argument("--tol", type=float, default=d.residual_tolerance)
    s.add_argument("--max-denom", type=int, default=d.max_denominator)
    s.add_argument("--max-iter", type=int, default=d.max_iterations)
    s.add_argument("--trace", help="write the JSON trace to this file")
    common(s)
    s.set_defaults(func=cmd_search)

    k = sub.add_parser("classify", help="fingerprint and candidate catalog families")
    k.add_argument("algebra")
    k.add_argument("--search", action="store_true", help="attach search evidence")
    k.add_argument("--restarts", type=int, default=d.restarts)
    k.add_argument("--seed", type=int, default=d.seed)
    common(k)
    k.set_defaults(func=cmd_classify)

    g = sub.add_parser("catalog", help="emit a catalog algebra or structure")
    g.add_argument("--id")
    g.add_argument("--params", help="k=v,... with rational values")
    g.add_argument("--emit", choices=("dsl", "json", "structure"), default="dsl")
    common(g)
    g.set_defaults(func=cmd_catalog)

    pl = sub.add_parser("plane", help="classify a 2-plane against the hermitian metric")
    pl.add_argument("algebra")
    pl.add_argument("--structure", required=True)
    pl.add_argument("--span", required=True, help="'v1;v2', each comma-separated rationals")
    pl.add_argument("--anchor", help="comma-separated rationals")
    common(pl)
    pl.set_defaults(func=cmd_plane)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
