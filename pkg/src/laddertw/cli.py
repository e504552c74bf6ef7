"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 malformed input / usage /
policy refusal, 3 exact search budget exceeded or no witness found.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import io
from .decomposition import Budget, exact_treewidth, validate
from .errors import LadderTWError, StructuralError, TreewidthUnknown
from .ladder import classify, find_ladders
from .phylo import build_display, parse_newick, reduce_pair, serialize
from .reducer import ReductionPolicy, reduce

log = logging.getLogger("laddertw")

EXIT_OK, EXIT_INVALID, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3

POLICY_KEYS = {
    "general_target": int,
    "aggressive_target": int,
    "allow_aggressive": lambda s: s.lower() in ("1", "true", "yes", "on"),
    "suppress_degree2": lambda s: s.lower() in ("1", "true", "yes", "on"),
    "iterate_to_fixpoint": lambda s: s.lower() in ("1", "true", "yes", "on"),
}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


def _out(line="") -> None:
    sys.stdout.write(f"{line}\n")


def _fmt(vs) -> str:
    return ",".join(str(v) for v in vs)


def cmd_tw(args) -> int:
    g = io.read_gr(args.graph)
    width, td = exact_treewidth(g, Budget.from_env())
    _out(width)
    if args.witness:
        io.write_td(td, g.n, args.witness)
    return EXIT_OK


def cmd_validate(args) -> int:
    g = io.read_gr(args.graph)
    td = io.read_td(args.decomposition)
    try:
        report = validate(g, td)
    except StructuralError as e:
        _out(f"structure\t{e.witness}\t{e}")
        return EXIT_INVALID
    if report.ok:
        _out(f"ok\twidth={td.width}")
        return EXIT_OK
    for v in report.violations:
        w = v.witness
        _out(f"{v.axiom}\t{_fmt(w) if isinstance(w, tuple) else w}")
    return EXIT_INVALID


def cmd_ladders(args) -> int:
    g = io.read_gr(args.graph)
    _out("length\ttop\tbottom\tdisconnecting\tdegree2_corners\ttw3_certified")
    for L in find_ladders(g, args.min_length):
        c = classify(g, L)
        _out(f"{L.length}\t{_fmt(L.top)}\t{_fmt(L.bottom)}\t{int(c.disconnecting)}\t"
             f"{_fmt(c.degree2_cornerpoints) or '-'}\t{int(c.tw3_certified)}")
    return EXIT_OK


def _policy(args) -> ReductionPolicy:
    kw = {"allow_aggressive": args.aggressive}
    for item in args.policy:
        key, sep, value = item.partition("=")
        if not sep or key not in POLICY_KEYS:
            raise _Usage(f"bad --policy {item!r}; keys: {', '.join(POLICY_KEYS)}")
        try:
            kw[key] = POLICY_KEYS[key](value)
        except ValueError:
            raise _Usage(f"bad value in --policy {item!r}") from None
    return ReductionPolicy(**kw)


def cmd_reduce(args) -> int:
    g = io.read_gr(args.graph)
    policy = _policy(args)
    out, report = reduce(g, policy, Budget.from_env())
    renamed, mapping = io.pace_ids(out)
    for s in report.steps:
        _out(f"step\t{s.rule}\t{s.length_before}->{s.length_after}\t{s.note}")
    for note in report.notes:
        _out(f"note\t{note}")
    _out(f"vertices\t{report.vertices_before}->{report.vertices_after}")
    if args.output:
        io.write_gr(renamed, args.output)
    if args.report:
        data = report.to_json()
        data["input"] = str(args.graph)
        data["policy"] = {k: getattr(policy, k) for k in POLICY_KEYS}
        data["output_ids"] = {str(k): v for k, v in mapping.items()}
        io.write_json(data, args.report)
    if args.figure:
        from .plotting import plot_reduction
        plot_reduction(args.figure, g, out, find_ladders(g, 2), find_ladders(out, 2))
    return EXIT_OK


def _trees(args):
    return parse_newick(Path(args.t1).read_text()), parse_newick(Path(args.t2).read_text())


def cmd_phylo_display(args) -> int:
    t1, t2 = _trees(args)
    g = build_display(t1, t2, suppress=args.suppress).graph
    renamed, _ = io.pace_ids(g)
    text = io.format_gr(renamed)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_phylo_reduce(args) -> int:
    t1, t2 = _trees(args)
    r1, r2, steps = reduce_pair(t1, t2, args.keep)
    for kind, *rest in steps:
        if kind == "cherry":
            _out(f"cherry\t{_fmt(rest)}")
        else:
            chain, dropped = rest
            _out(f"chain\t{_fmt(chain)}\tdropped={_fmt(dropped)}")
    _out(serialize(r1))
    _out(serialize(r2))
    return EXIT_OK


def cmd_tight_search(args) -> int:
    from . import search
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    budget = Budget.from_env()
    if args.phylo:
        w = search.find_chain_witness(args.max_taxa, args.seed, args.attempts, budget)
        if w is None:
            _out("no witness found")
            return EXIT_UNKNOWN
        cert = w.certificate()
        _out(f"chain\t{_fmt(w.chain)}\twidth={w.width}\ttruncated_width={w.truncated_width}")
        _out(cert["t1"])
        _out(cert["t2"])
        if out:
            io.write_json(cert, out / "chain_witness.json")
            if args.figures:
                from .plotting import plot_display_pair
                plot_display_pair(out / "chain_witness.png", build_display(w.t1, w.t2, True).graph,
                                  build_display(*w.truncated, True).graph, w.width, w.truncated_width)
        return EXIT_OK
    length = args.length if args.length else (3 if args.tw <= 3 else 2)
    w = search.find_ladder_witness(args.tw, length, args.max_n, args.seed, args.attempts, args.max_seconds, budget)
    if w is None:
        _out("no witness found")
        return EXIT_UNKNOWN
    _out(f"witness\tn={w.graph.n}\tm={w.graph.m}\tladder_length={w.ladder.length}\t"
         f"width={w.width}\tlengthened_width={w.lengthened_width}\tattempts={w.attempts}")
    if out:
        g, gmap = io.pace_ids(w.graph)
        h, hmap = io.pace_ids(w.lengthened)
        io.write_gr(g, out / "witness.gr")
        io.write_td(w.witness, g.n, out / "witness.td", gmap)
        io.write_gr(h, out / "lengthened.gr")
        io.write_td(w.lengthened_witness, h.n, out / "lengthened.td", hmap)
        cert = w.certificate()
        cert["ladder_1_indexed"] = {"top": [gmap[v] for v in w.ladder.top],
                                    "bottom": [gmap[v] for v in w.ladder.bottom]}
        io.write_json(cert, out / "certificate.json")
        if args.figures:
            from .plotting import plot_ladder_witness
            plot_ladder_witness(out / "witness.png", w)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="laddertw", description="Treewidth, ladder reductions and display graphs.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("tw", help="exact treewidth of a .gr file")
    s.add_argument("graph")
    s.add_argument("--witness", help="write the witness decomposition (.td)")
    s.set_defaults(func=cmd_tw)

    s = sub.add_parser("validate", help="check a .td against a .gr")
    s.add_argument("graph")
    s.add_argument("decomposition")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("ladders", help="list maximal ladders")
    s.add_argument("graph")
    s.add_argument("--min-length", type=int, default=1)
    s.set_defaults(func=cmd_ladders)

    s = sub.add_parser("reduce", help="shorten ladders safely")
    s.add_argument("graph")
    s.add_argument("--aggressive", action="store_true", help="allow length 3 when tw>=4 is certified")
    s.add_argument("--policy", action="append", default=[], metavar="KEY=VALUE")
    s.add_argument("--report", help="JSON audit report")
    s.add_argument("-o", "--output", help="reduced graph (.gr, renumbered 1..n)")
    s.add_argument("--figure", help="before/after drawing (.png/.pdf)")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("phylo", help="phylogenetic tree pairs")
    psub = s.add_subparsers(dest="phylo_command", required=True, parser_class=_Parser)
    d = psub.add_parser("display", help="display graph of two Newick trees")
    d.add_argument("t1")
    d.add_argument("t2")
    d.add_argument("-o", "--output")
    d.add_argument("--suppress", action="store_true", help="suppress degree-2 leaf vertices")
    d.set_defaults(func=cmd_phylo_display)
    r = psub.add_parser("reduce", help="subtree and chain reduction")
    r.add_argument("t1")
    r.add_argument("t2")
    r.add_argument("--keep", type=int, default=4)
    r.set_defaults(func=cmd_phylo_reduce)

    s = sub.add_parser("tight-search", help="search for tightness witnesses")
    s.add_argument("--tw", type=int, default=3)
    s.add_argument("--max-n", type=int, default=14, help="vertex cap for candidate graphs")
    s.add_argument("--length", type=int, help="ladder length (default 3 for tw=3, else 2)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--attempts", type=int, default=200_000)
    s.add_argument("--max-seconds", type=float)
    s.add_argument("--phylo", action="store_true", help="search tree pairs instead of graphs")
    s.add_argument("--max-taxa", type=int, default=8)
    s.add_argument("--out", help="directory for certificate, .gr/.td files and figures")
    s.add_argument("--figures", action="store_true")
    s.set_defaults(func=cmd_tight_search)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as e:
        print(e, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as e:  # --help
        return int(e.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _Usage as e:
        print(f"laddertw: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except TreewidthUnknown as e:
        print(f"laddertw: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (LadderTWError, OSError) as e:
        print(f"laddertw: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
