"""Command-line entry point: ``rhpp <group> <command> ...``; every command prints one JSON object."""
from __future__ import annotations

import argparse
import json
import sys

from . import census, hjcf, lattice, obstruction, padic, singularity
from .report import dumps


def _string(text: str) -> hjcf.HJString:
    return hjcf.HJString.parse(text)


def _hj_summary(s: hjcf.HJString) -> dict:
    return {
        "string": list(s.entries),
        "q": s.q,
        "q1": s.q1,
        "ql": s.ql,
        "q1l": s.q1l,
        "value": hjcf.hj_value(s),
        "t": hjcf.t_invariant(s),
    }


def _emit(obj) -> int:
    print(dumps(obj))
    return 0


def cmd_hjcf(args) -> int:
    if args.cmd == "eval":
        return _emit(_hj_summary(_string(args.string)))
    if args.cmd == "classify":
        s = _string(args.string)
        c = hjcf.classify(s)
        out = {"string": list(s.entries), "kind": c.kind, "label": str(c)}
        if c.witness:
            out.update(d=c.witness.d, n=c.witness.n, a=c.witness.a)
        if c.rdp_rank:
            out["rdp_rank"] = c.rdp_rank
        return _emit(out)
    if args.cmd == "tau":
        s = _string(args.string)
        t = hjcf.tau(s)
        return _emit({"string": list(s.entries), "tau": list(t.entries), "t": hjcf.t_invariant(s),
                      "t_tau": hjcf.t_invariant(t)})
    strings = hjcf.generate_Td(args.d, args.max_len)
    return _emit({"d": args.d, "max_len": args.max_len, "count": len(strings),
                  "strings": [list(s.entries) for s in strings]})


def cmd_sing(args) -> int:
    if args.cmd == "info":
        s = singularity.parse_singularity(args.spec)
        inv = singularity.invariants(s)
        return _emit({
            "spec": args.spec,
            "label": s.label(),
            "rdp": s.is_rdp,
            "group_order": inv.group_order,
            "rank": inv.rank,
            "det": inv.det_R,
            "discrepancies": inv.discrepancy,
            "dp2": inv.dp2,
        })
    rows = []
    for row_id in sorted(singularity.STAR_KS2):
        kind, row = row_id[0], int(row_id[1:])
        r = singularity.star_row(kind, row)
        rows.append({
            "row": row_id,
            "graph": r.graph_label(),
            "values": {str(b): singularity.ks2_star(kind, row_id, b) for b in range(2, args.b_max + 1)},
            "pipeline_agrees": all(
                singularity.ks2_star(kind, row_id, b) == singularity.ks2_pipeline(kind, row, b)
                for b in range(2, args.b_max + 1)
            ),
        })
    return _emit({"b_max": args.b_max, "rows": rows})


def _lattice_or_ext(spec: str):
    L, with_k = lattice.parse_lattice(spec)
    return L, (lattice.extend_by_K(L) if with_k else None)


def cmd_lattice(args) -> int:
    L, ext = _lattice_or_ext(args.spec)
    if args.cmd == "det":
        out = {"spec": args.spec, "rank": L.rank, "det": L.det, "signature": list(L.signature)}
        if ext is not None:
            out["ks2"] = ext.ks2
            out["numerically_trivial"] = ext.numerically_trivial
            if ext.lattice is not None:
                out["det_extended"] = ext.lattice.det
        return _emit(out)
    target = ext.lattice if ext is not None and ext.lattice is not None else L
    if args.cmd == "diag":
        f = lattice.diagonalize(target)
        return _emit({"spec": args.spec, "diagonal": list(f.coefficients), "det": f.det()})
    D = lattice.disc_group(target)
    out = {"spec": args.spec, "invariant_factors": list(D.invariant_factors), "order": D.order}
    if target.is_even:
        out["q_values"] = list(D.q_values)
    return _emit(out)


def _form(spec: str) -> padic.DiagonalForm:
    try:
        return padic.DiagonalForm.parse(spec)
    except (ValueError, ZeroDivisionError):
        L, ext = _lattice_or_ext(spec)
        return lattice.diagonalize(ext.lattice if ext is not None and ext.lattice is not None else L)


def _place(text: str):
    return padic.INF if text in ("inf", "oo", "infinity") else int(text)


def cmd_qform(args) -> int:
    if args.cmd == "eps":
        f = _form(args.diag)
        p = _place(args.p)
        inv = padic.local_invariants(f, p)
        return _emit({"rank": f.rank, "place": str(p), "d_class": inv.d_class.label(), "epsilon": inv.epsilon})
    f, g = _form(args.lhs), _form(args.rhs)
    ok, failing = padic.rationally_equivalent(f, g, detail=True)
    places = {}
    if f.rank == g.rank:
        for p in padic.relevant_places(f, g):
            a, b = padic.local_invariants(f, p), padic.local_invariants(g, p)
            places[str(p)] = {"lhs": a.as_dict(), "rhs": b.as_dict()}
    return _emit({"rank": [f.rank, g.rank], "verdict": "equivalent" if ok else "inequivalent",
                  "failing_places": [str(p) for p in failing], "places": places})


def cmd_obstruct(args) -> int:
    if args.cmd == "t6-sweep":
        r = obstruction.t6_epsilon_sweep(args.max_len)
        _emit(r)
        return 0 if r["failed"] == 0 else 1
    if args.cmd == "enriques-d5":
        r = obstruction.enriques_disc_analysis()
        _emit(r)
        return 0 if r["all_contain_e_sum"] else 1
    L, ext = _lattice_or_ext(args.spec)
    if args.cmd == "square":
        if ext is None:
            raise SystemExit("square test needs a '+K' spec")
        return _emit(obstruction.square_index_test(ext))
    if ext is None:
        return _emit(obstruction.equal_rank_embed_test(L))
    if ext.numerically_trivial:
        return _emit(obstruction.equal_rank_embed_test(L))
    return _emit(obstruction.finite_index_embed_test(ext))


def cmd_census(args) -> int:
    if args.cmd == "verify-lemmas":
        cfg = census.CensusConfig(sweep_len=args.max_len)
        sweeps = census.run_sweeps(cfg)
        _emit(sweeps)
        return 0 if all(s["passed"] for s in sweeps.values()) else 1
    cfg = census.CensusConfig(max_q=args.max_q, max_len=args.max_len, nef=args.nef,
                              sweep_len=args.sweep_len, format=args.format, out=args.out)
    report = census.run_census(cfg)
    if cfg.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)
    else:
        text = census.format_table(report)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report["summary"]["golden_ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rhpp", description=__doc__)
    groups = parser.add_subparsers(dest="group", required=True)

    g = groups.add_parser("hjcf", help="continued-fraction strings")
    sub = g.add_subparsers(dest="cmd", required=True)
    for name in ("eval", "classify", "tau"):
        sub.add_parser(name).add_argument("string", help="comma-separated entries, e.g. 3,2,2,2,2,3")
    p = sub.add_parser("gen-td")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-len", type=int, required=True)
    g.set_defaults(func=cmd_hjcf)

    g = groups.add_parser("sing", help="quotient singularities")
    sub = g.add_subparsers(dest="cmd", required=True)
    sub.add_parser("info").add_argument("--spec", required=True)
    sub.add_parser("table2").add_argument("--b-max", type=int, default=10)
    g.set_defaults(func=cmd_sing)

    g = groups.add_parser("lattice", help="Gram lattices")
    sub = g.add_subparsers(dest="cmd", required=True)
    for name in ("det", "disc", "diag"):
        sub.add_parser(name).add_argument("--spec", required=True)
    g.set_defaults(func=cmd_lattice)

    g = groups.add_parser("qform", help="rational quadratic forms")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("eps")
    p.add_argument("--p", required=True)
    p.add_argument("--diag", required=True)
    p = sub.add_parser("equiv")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    g.set_defaults(func=cmd_qform)

    g = groups.add_parser("obstruct", help="embedding obstructions")
    sub = g.add_subparsers(dest="cmd", required=True)
    sub.add_parser("embed").add_argument("--spec", required=True)
    sub.add_parser("square").add_argument("--spec", required=True)
    sub.add_parser("t6-sweep").add_argument("--max-len", type=int, default=12)
    sub.add_parser("enriques-d5")
    g.set_defaults(func=cmd_obstruct)

    g = groups.add_parser("census", help="full case analysis")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("run")
    p.add_argument("--nef", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--max-q", type=int, default=200)
    p.add_argument("--max-len", type=int, default=24)
    p.add_argument("--sweep-len", type=int, default=12)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--out")
    sub.add_parser("verify-lemmas").add_argument("--max-len", type=int, default=12)
    g.set_defaults(func=cmd_census)
    return parser


_VALUE_OPTS = ("--diag", "--lhs", "--rhs", "--spec")


def _glue_values(argv: list[str]) -> list[str]:
    # argparse reads "-3,-5/3" as a flag; rewrite "--diag -3,..." as "--diag=-3,..."
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_values(argv))
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
