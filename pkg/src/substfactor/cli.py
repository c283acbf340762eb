"""Command-line front end.

Subcommands: generate, analyze, factor, zeta, cohomology, catalog.  Primary
output is deterministic text (or JSON with --json); timing goes to stderr.
Exit codes: 0 success, 2 for expected negative findings (inconsistency
witnesses, exhausted searches), 1 for operational errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import appcomplex, factors, language, toeplitz, zeta as zmod
from .core import (
    CATALOG_NAMES,
    Pattern,
    Seed,
    Substitution,
    catalog,
    enumerate_seeds,
    fixed_point_patch,
    format_substitution,
    is_primitive,
    parse_pattern,
    substitution_matrix,
    supertile,
)


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: dict
    timing_ms: float = 0.0

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "inputs": self.inputs,
                           "outputs": self.outputs}, ensure_ascii=False, indent=2)


class ExpectedNegative(Exception):
    """Carries a witness result that should exit with status 2."""


def _load_catalog(args) -> Substitution:
    return catalog(args.name, k=getattr(args, "k", None), l=getattr(args, "l", None),
                   identify=getattr(args, "identify", None))


def _parse_shape(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.lower().split("x"))


def _find_seed(sub: Substitution, args) -> Seed:
    period = args.period
    if args.seed_index is not None:
        seeds = enumerate_seeds(sub, period)
        return seeds[args.seed_index]
    spec = args.seed
    if sub.dim == 1 and "|" in spec:
        left, right = spec.split("|")
        pat = Pattern.word((left.strip(), right.strip()), origin=-1)
    else:
        pat = parse_pattern(spec, sub.alphabet, dim_hint=sub.dim).translated((-1,) * sub.dim)
    seed = Seed(pat, period)
    legal = language.legal_patterns(sub, (2,) * sub.dim)
    if pat.normalized() not in legal:
        raise ValueError(f"seed {spec!r} is not a legal pattern")
    return seed


# -- subcommands --------------------------------------------------------------


def cmd_generate(args) -> RunReport:
    sub = _load_catalog(args)
    if args.seed or args.seed_index is not None:
        seed = _find_seed(sub, args)
        patch = seed.pattern if args.level == 0 else fixed_point_patch(sub, seed, args.level)
        what = {"seed": seed.label(), "period": seed.period}
    else:
        letter = args.letter or sub.alphabet.letters[0]
        patch = supertile(sub, letter, args.level)
        what = {"letter": letter}
    text = patch.to_text(juxtapose=sub.dim == 1)
    outputs = {"extent": list(patch.extent), "origin": list(patch.origin),
               "pattern": text}
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.render:
        from .render import render_pattern

        render_pattern(patch, sub.alphabet, args.render)
        outputs["render"] = args.render
    return RunReport("generate", {"name": args.name, "level": args.level, **what},
                     outputs)


def cmd_analyze(args) -> RunReport:
    sub = _load_catalog(args)
    inputs = {"name": args.name, "analysis": args.analysis}
    if args.analysis == "legal":
        shape = _parse_shape(args.shape) if args.shape else (2,) * sub.dim
        ps = language.legal_patterns(sub, shape)
        outputs = {"shape": list(shape), "count": len(ps),
                   "patterns": [p.to_text() for p in ps.sorted()]}
    elif args.analysis == "seeds":
        seeds = enumerate_seeds(sub, args.period)
        outputs = {"period": args.period, "count": len(seeds),
                   "seeds": [s.label() for s in seeds]}
    elif args.analysis == "columns":
        cs = language.column_structure(sub, max_level=args.max_level)
        outputs = {"classification": cs.classification}
        if cs.coincidence_level is not None:
            outputs["coincidence_level"] = cs.coincidence_level
            outputs["coincidence_position"] = list(cs.coincidence_position)
    elif args.analysis == "frames":
        letter = args.letter or sub.alphabet.letters[0]
        fr = language.supertile_frame(sub, letter, args.level or 2)
        outputs = {"letter": letter, "level": fr.level,
                   "top_row": list(fr.top_row), "bottom_row": list(fr.bottom_row),
                   "left_col": list(fr.left_col), "right_col": list(fr.right_col),
                   "corner_block_fingerprint": fr.corner_block_fingerprint}
    elif args.analysis == "corners":
        rep = language.corner_configurations(sub, args.period)
        outputs = {
            "quartets": [{"seed": q.seed_pattern.to_text(), "center": q.center,
                          "up": q.up, "down": q.down, "left": q.left, "right": q.right}
                         for q in rep.quartets],
            "horizontal_separations": list(rep.horizontal_separations),
            "vertical_separations": list(rep.vertical_separations),
            "unresolved_separations": rep.unresolved_separations,
        }
    elif args.analysis == "toeplitz":
        seeds = enumerate_seeds(sub, args.period)
        seed = _find_seed(sub, args) if (args.seed or args.seed_index is not None) else seeds[0]
        systems = toeplitz.coordinatize(sub, seed, depth=args.depth, window=args.window)
        outputs = {"seed": seed.label(), "depth": args.depth, "window": args.window,
                   "density": str(toeplitz.resolved_density(systems)),
                   "systems": {l: {"progressions": [list(p) for p in cs.progressions],
                                   "exceptional": list(cs.exceptional),
                                   "unresolved": list(cs.unresolved)}
                               for l, cs in systems.items()}}
    elif args.analysis == "matrix":
        outputs = {"letters": list(sub.alphabet.letters),
                   "matrix": substitution_matrix(sub),
                   "primitive": is_primitive(sub)}
    else:
        raise ValueError(f"unknown analysis {args.analysis!r}")
    return RunReport("analyze", inputs, outputs)


def _print_analysis(report: RunReport) -> None:
    out = report.outputs
    a = report.inputs.get("analysis")
    if a == "legal":
        print(f"legal {'x'.join(str(s) for s in out['shape'])} patterns: {out['count']}")
        for p in out["patterns"]:
            print(f"  {p}")
    elif a == "seeds":
        print(f"seeds (period {out['period']}): {out['count']}")
        for s in out["seeds"]:
            print(f"  {s}")
    elif a == "columns":
        line = out["classification"]
        if "coincidence_level" in out:
            pos = ",".join(str(x) for x in out["coincidence_position"])
            line += f" (level {out['coincidence_level']}, position {pos})"
        print(line)
    elif a == "frames":
        print(f"letter {out['letter']} level {out['level']}")
        print("  top row:    " + " ".join(out["top_row"]))
        print("  bottom row: " + " ".join(out["bottom_row"]))
        print("  left col:   " + " ".join(out["left_col"]))
        print("  right col:  " + " ".join(out["right_col"]))
        print("  corner block fingerprint: " + out["corner_block_fingerprint"])
    elif a == "corners":
        for q in out["quartets"]:
            arms = ", ".join(f"{k}={q[k] or 'unresolved'}" for k in ("up", "left", "right", "down"))
            print(f"center {q['center']} [{q['seed']}]: {arms}")
        print("horizontal separations: " + (" ".join(out["horizontal_separations"]) or "-"))
        print("vertical separations:   " + (" ".join(out["vertical_separations"]) or "-"))
        if out["unresolved_separations"]:
            print("(some separations unresolved at probe depth)")
    elif a == "toeplitz":
        print(f"seed {out['seed']}, depth {out['depth']}, window {out['window']}")
        print(f"resolved density: {out['density']}")
        for l, cs in out["systems"].items():
            print(f"letter: {l}")
            for m, r in cs["progressions"]:
                print(f"  {m}*Z + {r}")
            if cs["exceptional"]:
                print("  exceptional: " + " ".join(str(i) for i in cs["exceptional"]))
            if cs["unresolved"]:
                print("  unresolved: " + " ".join(str(i) for i in cs["unresolved"]))
    elif a == "matrix":
        print("letters: " + " ".join(out["letters"]))
        for row in out["matrix"]:
            print("  " + " ".join(str(x) for x in row))
        print(f"primitive: {out['primitive']}")


def cmd_factor(args) -> RunReport:
    sub = catalog(args.name, k=args.k, l=args.l)
    inputs = {"name": args.name}
    if args.map:
        try:
            bm = factors.named_block_map(args.map)
        except KeyError:
            with open(args.map) as fh:
                bm = factors.parse_block_map(fh.read(), sub.alphabet)
        inputs["map"] = args.map
        result = factors.induced_substitution(sub, bm)
    elif args.identify:
        inputs["identify"] = args.identify
        ident = factors.SymbolIdentification.parse(args.identify, sub.alphabet)
        result = factors.identify_symbols(sub, ident)
    elif args.search:
        tgt = catalog(args.search, k=args.k, l=args.l)
        inputs["search"] = args.search
        window = _parse_shape(args.window) if args.window else (2,) * sub.dim
        bm = factors.search_block_map(sub, tgt, window)
        if bm is None:
            raise ExpectedNegative("search found no factor map")
        return RunReport("factor", inputs, {"map": bm.to_text()})
    else:
        raise ValueError("one of --map/--identify/--search is required")
    if isinstance(result, factors.Inconsistency):
        raise ExpectedNegative(str(result))
    return RunReport("factor", inputs, {"substitution": format_substitution(result)})


def cmd_zeta(args) -> RunReport:
    inputs = {"name": args.name, "method": args.method}
    if args.name == "solenoid":
        zf = zmod.solenoid_zeta(args.dim, args.q)
    elif args.method == "ap":
        sub = catalog(args.name)
        zf = appcomplex.hull_zeta(sub, collar=args.collar)
    else:
        zf = zmod.closed_form(args.name)
    counts = zmod.counts_from_zeta(zf, args.terms)
    outputs = {"zeta": str(zf), "counts": list(counts.a),
               "cycle_counts": [str(c) for c in counts.c],
               "integral_cycles": counts.integral}
    if args.check:
        checks = {}
        if args.name not in ("solenoid",):
            checks["closed_form_agrees"] = zmod.closed_form(args.name) == zf
            checks["count_formula_agrees"] = (
                list(counts.a) == zmod.closed_form_counts(args.name, args.terms))
        checks["euler_product"] = zmod.euler_product_check(counts)
        if args.name == "table":
            sub = catalog("table")
            seeds = enumerate_seeds(sub, 2)
            checks["hull_a2"] = counts.a[1]
            checks["subshift_period2_seeds"] = len(seeds)
            checks["note"] = ("hull-level a_2 and the seed count differ by design; "
                              "no bijection between them is claimed")
        outputs["checks"] = checks
    return RunReport("zeta", inputs, outputs)


def cmd_cohomology(args) -> RunReport:
    sub = _load_catalog(args)
    groups = appcomplex.cohomology_of_hull(sub, collar=args.collar)
    outputs = {f"H{k}": str(g) for k, g in enumerate(groups)}
    return RunReport("cohomology", {"name": args.name, "identify": args.identify,
                                    "collar": args.collar}, outputs)


def cmd_catalog(args) -> RunReport:
    if args.action == "list":
        return RunReport("catalog", {"action": "list"}, {"names": list(CATALOG_NAMES)})
    sub = _load_catalog(args)
    return RunReport("catalog", {"action": "show", "name": args.name},
                     {"substitution": format_substitution(sub)})


# -- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="substfactor",
                                     description="substitution subshift workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_params=True):
        p.add_argument("--json", action="store_true", help="structured output")
        if with_params:
            p.add_argument("--k", type=int, default=None)
            p.add_argument("--l", type=int, default=None)
            p.add_argument("--identify", default=None)

    g = sub.add_parser("generate", help="supertiles and fixed-point patches")
    g.add_argument("name")
    g.add_argument("--level", type=int, default=1)
    g.add_argument("--letter", default=None)
    g.add_argument("--seed", default=None)
    g.add_argument("--seed-index", type=int, default=None)
    g.add_argument("--period", type=int, default=1)
    g.add_argument("--out", default=None)
    g.add_argument("--render", default=None, help="image path (.png/.svg/.pdf/.ppm)")
    common(g)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="language, seeds, columns, frames, corners, toeplitz, matrix")
    a.add_argument("name")
    a.add_argument("analysis", choices=["legal", "seeds", "columns", "frames",
                                        "corners", "toeplitz", "matrix"])
    a.add_argument("--shape", default=None)
    a.add_argument("--period", type=int, default=1)
    a.add_argument("--depth", type=int, default=8)
    a.add_argument("--window", type=int, default=10 ** 5)
    a.add_argument("--max-level", type=int, default=4)
    a.add_argument("--level", type=int, default=None)
    a.add_argument("--letter", default=None)
    a.add_argument("--seed", default=None)
    a.add_argument("--seed-index", type=int, default=None)
    common(a)
    a.set_defaults(func=cmd_analyze)

    f = sub.add_parser("factor", help="induced substitutions, identifications, searches")
    f.add_argument("name")
    f.add_argument("--map", default=None, help="named map or block-map file")
    f.add_argument("--identify", default=None)
    f.add_argument("--search", default=None, help="target catalog name")
    f.add_argument("--window", default=None)
    f.add_argument("--json", action="store_true")
    f.add_argument("--k", type=int, default=None)
    f.add_argument("--l", type=int, default=None)
    f.set_defaults(func=cmd_factor)

    z = sub.add_parser("zeta", help="dynamical zeta functions")
    z.add_argument("name")
    z.add_argument("--method", choices=["ap", "closed", "counts"], default="closed")
    z.add_argument("--terms", type=int, default=12)
    z.add_argument("--check", action="store_true")
    z.add_argument("--dim", type=int, default=2)
    z.add_argument("--q", type=int, default=2)
    z.add_argument("--collar", type=int, default=1)
    z.add_argument("--json", action="store_true")
    z.set_defaults(func=cmd_zeta)

    c = sub.add_parser("cohomology", help="Cech cohomology of the hull")
    c.add_argument("name")
    c.add_argument("--collar", type=int, default=1)
    common(c)
    c.set_defaults(func=cmd_cohomology)

    cat = sub.add_parser("catalog", help="list or show catalog substitutions")
    cat.add_argument("action", choices=["list", "show"])
    cat.add_argument("name", nargs="?")
    common(cat)
    cat.set_defaults(func=cmd_catalog)
    return parser


def _print_text(report: RunReport) -> None:
    cmd = report.command
    out = report.outputs
    if cmd == "generate":
        print(out["pattern"])
        if "render" in out:
            print(f"rendered to {out['render']}", file=sys.stderr)
    elif cmd == "analyze":
        _print_analysis(report)
    elif cmd == "factor":
        print(out.get("substitution") or out.get("map"), end="")
    elif cmd == "zeta":
        print(f"zeta = {out['zeta']}")
        print("a_m  = " + " ".join(str(a) for a in out["counts"]))
        print("c_m  = " + " ".join(out["cycle_counts"]))
        if "checks" in out:
            for k, v in out["checks"].items():
                print(f"check {k}: {v}")
    elif cmd == "cohomology":
        for k in sorted(out):
            print(f"{k} = {out[k]}")
    elif cmd == "catalog":
        if "names" in out:
            print("\n".join(out["names"]))
        else:
            print(out["substitution"], end="")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.time()
    try:
        report = args.func(args)
    except ExpectedNegative as exc:
        print(str(exc), file=sys.stdout)
        return 2
    except (ValueError, KeyError, IndexError, FileNotFoundError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report.timing_ms = (time.time() - t0) * 1000
    if getattr(args, "json", False):
        print(report.to_json())
    else:
        _print_text(report)
    print(f"[{report.timing_ms:.0f} ms]", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
