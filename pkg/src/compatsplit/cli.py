"""Command line: validated manifests in, reproducible reports out.

Commands dispatch against one manifest (the shipped example when none is
given).  Completed computations exit 0 — a "no compatible splitting" verdict
is a result, not an error.  Exit 2 means the input was rejected (manifest
validation, unknown names, out-of-bounds degrees, oracle refusals); exit 3
means a structural claim the library checks was falsified, and the report
carries what is needed to reproduce the run.  Machine output (--format json)
contains no timing and is byte-identical for identical (manifest, command,
seed); the human rendering shows the same payload plus elapsed time.
"""

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path

from .arrows import ArrowObject
from .contexts import (
    FalsifiedTheorem,
    hurewicz_check,
    relative_ext,
    sha_n,
)
from .homology import ext_group
from .manifest import (
    Manifest,
    ManifestError,
    diagram_manifest,
    matrix_json,
    pair_manifest,
)
from .modules import ModuleMorphism, ModuleRep, gen_corpus
from .spectral import e1_page, e2_page, verify_collapse
from .splitting import (
    NotSplitRow,
    OracleRefusal,
    SplittingCertificate,
    brute_force_oracle,
    decide_compatible_split,
    duality_sequence,
    gen_split_diagrams,
    sha1_cokernel,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FALSIFIED = 3

_SUITE_SIZES = {
    "split_vs_oracle": 24,
    "sha_three_ways": 24,
    "duality": 12,
    "ss_collapse": 8,
}


def _pos_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if val < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return val


def _ss_pair(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected s,t (two comma-separated integers)")
    try:
        s, t = (int(x) for x in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("expected s,t (two comma-separated integers)")
    if min(s, t) < 2:
        raise argparse.ArgumentTypeError("window bounds must be at least 2")
    return (s, t)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", "-m", default=None,
                        help="manifest JSON path (default: shipped intro_example)")
    common.add_argument("--seed", type=int, default=None,
                        help="override the manifest seed")
    common.add_argument("--max-dim", type=_pos_int, default=None,
                        help="override bounds.max_dim for generated corpora")
    common.add_argument("--oracle-budget", type=_pos_int, default=None,
                        help="override bounds.oracle_budget")
    common.add_argument("--resolution-length", type=_pos_int, default=None,
                        help="override bounds.resolution_length (degree cap)")
    common.add_argument("--ss-bounds", type=_ss_pair, default=None, metavar="S,T",
                        help="override bounds.ss window, e.g. 3,2")
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="report rendering (default: text)")
    common.add_argument("--dump-dir", default=".",
                        help="directory for failing-case manifests (corpus)")

    parser = argparse.ArgumentParser(
        prog="compatsplit",
        description="Exact computation of compatible-splitting obstructions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ext", parents=[common],
                       help="Ext^n(M, N) for two module-table entries")
    p.add_argument("M")
    p.add_argument("N")
    p.add_argument("n", type=int)

    p = sub.add_parser("sha", parents=[common],
                       help="obstruction group of degree n for a context pair")
    p.add_argument("Y")
    p.add_argument("X")
    p.add_argument("n", type=int)

    p = sub.add_parser("relext", parents=[common],
                       help="relative Ext of degree n for a context pair")
    p.add_argument("Y")
    p.add_argument("X")
    p.add_argument("n", type=int)

    p = sub.add_parser("split", parents=[common],
                       help="decide compatible splitting of a ladder diagram")
    p.add_argument("D", nargs="?", default=None)

    p = sub.add_parser("duality", parents=[common],
                       help="six-term sequence of two arrows at degree t")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("t", type=int)

    p = sub.add_parser("ss", parents=[common],
                       help="spectral-sequence pages, d2 ranks, and collapse verdicts")
    p.add_argument("Y")
    p.add_argument("X")

    p = sub.add_parser("oracle", parents=[common],
                       help="brute-force splitting search for a ladder diagram")
    p.add_argument("D", nargs="?", default=None)

    sub.add_parser("corpus", parents=[common],
                   help="cross-method agreement suites over generated instances")
    return parser


# -- manifest plumbing ----------------------------------------------------------


def _load_manifest(args) -> Manifest:
    if args.manifest is not None:
        return Manifest.load(args.manifest)
    ref = resources.files("compatsplit.fixtures").joinpath("intro_example.json")
    with resources.as_file(ref) as path:
        return Manifest.load(path)


def _apply_overrides(man: Manifest, args) -> None:
    if args.seed is not None:
        man.seed = args.seed
    for flag, key in (("max_dim", "max_dim"),
                      ("oracle_budget", "oracle_budget"),
                      ("resolution_length", "resolution_length")):
        val = getattr(args, flag)
        if val is not None:
            man.bounds[key] = val
    if args.ss_bounds is not None:
        man.bounds["ss"] = args.ss_bounds


def _lookup(table: dict, name: str, kind: str):
    if name not in table:
        known = ", ".join(sorted(table)) or "none defined"
        raise ManifestError(f"unknown {kind} '{name}' ({kind} table: {known})")
    return table[name]


def _context_pair(man: Manifest, name_y: str, name_x: str):
    """Resolve the (Y, X) objects a context command acts on.

    Arrow contexts take their objects from the morphism table (an object IS
    an arrow); restriction contexts take plain module-table entries.
    """
    if man.context.kind == "arrow":
        y = ArrowObject(_lookup(man.morphisms, name_y, "morphism")).t_module()
        x = ArrowObject(_lookup(man.morphisms, name_x, "morphism")).t_module()
        return y, x
    return (_lookup(man.modules, name_y, "module"),
            _lookup(man.modules, name_x, "module"))


def _check_degree(n: int, cap: int, what: str = "degree") -> int:
    if n < 0:
        raise ManifestError(f"{what} must be >= 0, got {n}")
    if n > cap:
        raise ManifestError(
            f"{what} {n} exceeds the resolution-length bound {cap}; "
            f"raise --resolution-length to compute deeper")
    return n


def _sole_diagram(man: Manifest, name):
    if name is not None:
        return name, _lookup(man.diagrams, name, "diagram")
    if len(man.diagrams) == 1:
        sole = next(iter(man.diagrams))
        return sole, man.diagrams[sole]
    raise ManifestError(
        f"manifest defines {len(man.diagrams)} diagrams; name one "
        f"({', '.join(sorted(man.diagrams)) or 'none defined'})")


# -- command handlers ------------------------------------------------------------


def _cmd_ext(man: Manifest, args) -> dict:
    n = _check_degree(args.n, man.bounds["resolution_length"])
    m = _lookup(man.modules, args.M, "module")
    x = _lookup(man.modules, args.N, "module")
    g = ext_group(m, x, n)
    return {"source": args.M, "target": args.N, "degree": n, "dim": g.dim,
            "cochain_dim": g.cochain_dim}


def _cmd_sha(man: Manifest, args) -> dict:
    n = _check_degree(args.n, man.bounds["resolution_length"])
    if n < 1:
        raise ManifestError("obstruction groups live in degrees n >= 1")
    y, x = _context_pair(man, args.Y, args.X)
    group = sha_n(man.context, y, x, n)
    return {"source": args.Y, "target": args.X, "degree": n,
            "dim": group.dim, "ambient_dim": group.ambient.dim,
            "basis": matrix_json(group.subspace.basis)}


def _cmd_relext(man: Manifest, args) -> dict:
    n = _check_degree(args.n, man.bounds["resolution_length"])
    y, x = _context_pair(man, args.Y, args.X)
    rel = relative_ext(man.context, y, x, n)
    return {"source": args.Y, "target": args.X, "degree": n, "dim": rel.dim}


def _cmd_split(man: Manifest, args) -> dict:
    name, diagram = _sole_diagram(man, args.D)
    verdict = decide_compatible_split(diagram)
    if isinstance(verdict, SplittingCertificate):
        bad = verdict.failures(diagram)
        return {"diagram": name, "verdict": "split",
                "certificate": {"r_top": matrix_json(verdict.r_p.mat),
                                "r_bottom": matrix_json(verdict.r.mat),
                                "s_top": matrix_json(verdict.s_p.mat),
                                "s_bottom": matrix_json(verdict.s.mat)},
                "reverified": not bad}
    return {"diagram": name, "verdict": "no compatible splitting",
            "obstruction": {"group_dim": verdict.space.dim,
                            "coords": list(verdict.coords.data)}}


def _cmd_duality(man: Manifest, args) -> dict:
    if man.context.kind != "arrow":
        raise ManifestError("the duality command needs an arrow-context manifest")
    t = _check_degree(args.t, man.bounds["resolution_length"] - 1, what="t")
    if t < 1:
        raise ManifestError("the six-term sequence starts at t >= 1")
    fa = ArrowObject(_lookup(man.morphisms, args.f, "morphism"))
    ga = ArrowObject(_lookup(man.morphisms, args.g, "morphism"))
    report = duality_sequence(fa, ga, t)
    s0, s1, s2a, s2b, s3, s4 = report.dims
    return {"f": args.f, "g": args.g, "degree": t,
            "dims": {"sha_t": s0, "ext_arrow": s1, "ext_dom": s2a,
                     "ext_cod": s2b, "ext_mixed": s3, "sha_next": s4},
            "alternating_sum": report.alternating_sum,
            "verdict": "exact"}


def _pos_key(pos) -> str:
    return f"{pos[0]},{pos[1]}"


def _cmd_ss(man: Manifest, args) -> dict:
    y, x = _context_pair(man, args.Y, args.X)
    s_max, t_max = man.bounds["ss"]
    e1 = e1_page(man.context, y, x, s_max, t_max)
    e2 = e2_page(e1)
    report = verify_collapse(e2)
    return {"source": args.Y, "target": args.X, "window": [s_max, t_max],
            "e1_dims": {_pos_key(k): v for k, v in e1.dims().items()},
            "e2_dims": {_pos_key(k): v for k, v in e2.dims().items()},
            "d2_ranks": {_pos_key(k): v for k, v in sorted(report.d2_ranks.items())},
            "verdicts": {_pos_key(k): v for k, v in sorted(report.verdicts.items())},
            "interior_verified": report.interior_verified}


def _cmd_oracle(man: Manifest, args) -> dict:
    name, diagram = _sole_diagram(man, args.D)
    result = brute_force_oracle(diagram, budget=man.bounds["oracle_budget"])
    payload = {"diagram": name, "exists": result.exists, "checked": result.checked}
    if result.witness is not None:
        rp, rb = result.witness
        payload["witness"] = {"r_top": matrix_json(rp.mat),
                              "r_bottom": matrix_json(rb.mat)}
    else:
        payload["witness"] = None
    return payload


# -- corpus sweep ----------------------------------------------------------------


def _corpus_stream(man: Manifest, want_morphisms: bool, count: int, salt: int):
    """First `count` corpus objects of one kind, deterministically."""
    pick = ModuleMorphism if want_morphisms else ModuleRep
    out = []
    for item in gen_corpus(man.algebra, man.bounds["max_dim"], man.seed + salt):
        if isinstance(item, pick):
            out.append(item)
            if len(out) == count:
                return out
    return out


def _dump_failcase(raw: dict, dump_dir: Path, case_id: str) -> str:
    fname = "failcase_" + case_id.replace(":", "_") + ".json"
    dump_dir.mkdir(parents=True, exist_ok=True)
    with open(dump_dir / fname, "w", encoding="utf-8") as fh:
        json.dump(raw, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return fname


def _pair_dump(man: Manifest, mors_or_mods, names, command: str) -> dict:
    """Standalone manifest for one failing context pair."""
    ctx_node = man.raw.get("context", {"kind": "arrow"})
    comment = f"reproduce: compatsplit --manifest <this file> {command}"
    if man.context.kind == "arrow":
        modules, morphisms = {}, {}
        for name, mor in zip(names, mors_or_mods):
            modules[f"{name}_dom"] = mor.source
            modules[f"{name}_cod"] = mor.target
            morphisms[name] = (f"{name}_dom", f"{name}_cod", mor)
        return pair_manifest(ctx_node, man.algebra, modules, morphisms,
                             seed=man.seed, comment=comment)
    modules = dict(zip(names, mors_or_mods))
    return pair_manifest(ctx_node, man.algebra, modules, {},
                         seed=man.seed, comment=comment)


def _suite_split_vs_oracle(man: Manifest, dump_dir: Path) -> dict:
    name = "split_vs_oracle"
    p = man.algebra.field.p
    if p not in (2, 3):
        return {"name": name, "skipped": f"the oracle enumerates over F_2/F_3 "
                                         f"only, manifest algebra is over F_{p}",
                "cases": []}
    cases = []
    gen = gen_split_diagrams(man.algebra, man.bounds["max_dim"], man.seed)
    for idx in range(_SUITE_SIZES[name]):
        cid = f"{name}:{idx:03d}"
        diagram = next(gen)
        case = {"id": cid, "status": "pass", "detail": "", "dump": None}
        try:
            verdict = decide_compatible_split(diagram)
            split = isinstance(verdict, SplittingCertificate)
            if split and verdict.failures(diagram):
                raise FalsifiedTheorem(
                    f"certificate fails: {verdict.failures(diagram)}")
            oracle = brute_force_oracle(diagram, budget=man.bounds["oracle_budget"])
            if oracle.exists != split:
                raise FalsifiedTheorem(
                    f"decider says {'split' if split else 'no splitting'}, "
                    f"oracle says {'split' if oracle.exists else 'no splitting'} "
                    f"after {oracle.checked} candidates")
            case["detail"] = ("agrees (split)" if split
                              else "agrees (no compatible splitting)")
        except OracleRefusal as exc:
            case["status"] = "skip"
            case["detail"] = str(exc)
        except FalsifiedTheorem as exc:
            case["status"] = "fail"
            case["detail"] = str(exc)
            raw = diagram_manifest(
                diagram, seed=man.seed,
                comment="reproduce: compatsplit --manifest <this file> split case")
            case["dump"] = _dump_failcase(raw, dump_dir, cid)
        cases.append(case)
    return {"name": name, "cases": cases}


def _suite_sha_three_ways(man: Manifest, dump_dir: Path) -> dict:
    name = "sha_three_ways"
    cases = []
    arrow = man.context.kind == "arrow"
    count = _SUITE_SIZES[name]
    items = _corpus_stream(man, want_morphisms=arrow, count=2 * count, salt=1)
    for idx in range(len(items) // 2):
        cid = f"{name}:{idx:03d}"
        obj_y, obj_x = items[2 * idx], items[2 * idx + 1]
        case = {"id": cid, "status": "pass", "detail": "", "dump": None}
        try:
            if arrow:
                y = ArrowObject(obj_y).t_module()
                x = ArrowObject(obj_x).t_module()
                first = sha1_cokernel(obj_y, obj_x).dim
                first_label = "cokernel"
            else:
                y, x = obj_y, obj_x
                first = hurewicz_check(man.context, y, x).coker_dim
                first_label = "hurewicz cokernel"
            d_sha = sha_n(man.context, y, x, 1).dim
            d_rel = relative_ext(man.context, y, x, 1).dim
            if not (first == d_sha == d_rel):
                raise FalsifiedTheorem(
                    f"{first_label} {first}, kernel {d_sha}, relative {d_rel}")
            case["detail"] = f"dim {d_sha} three ways"
        except FalsifiedTheorem as exc:
            case["status"] = "fail"
            case["detail"] = str(exc)
            raw = _pair_dump(man, (obj_y, obj_x), ("Y", "X"), "sha Y X 1")
            case["dump"] = _dump_failcase(raw, dump_dir, cid)
        cases.append(case)
    return {"name": name, "cases": cases}


def _suite_duality(man: Manifest, dump_dir: Path) -> dict:
    name = "duality"
    if man.context.kind != "arrow":
        return {"name": name, "skipped": "the six-term sequence is an "
                                         "arrow-context statement", "cases": []}
    cases = []
    count = _SUITE_SIZES[name]
    mors = _corpus_stream(man, want_morphisms=True, count=2 * count, salt=2)
    for idx in range(len(mors) // 2):
        cid = f"{name}:{idx:03d}"
        fm, gm = mors[2 * idx], mors[2 * idx + 1]
        case = {"id": cid, "status": "pass", "detail": "", "dump": None}
        try:
            report = duality_sequence(ArrowObject(fm), ArrowObject(gm), 1)
            if report.alternating_sum != 0:
                raise FalsifiedTheorem(
                    f"alternating sum {report.alternating_sum}, dims {report.dims}")
            case["detail"] = f"exact, dims {list(report.dims)}"
        except FalsifiedTheorem as exc:
            case["status"] = "fail"
            case["detail"] = str(exc)
            raw = _pair_dump(man, (fm, gm), ("f", "g"), "duality f g 1")
            case["dump"] = _dump_failcase(raw, dump_dir, cid)
        cases.append(case)
    return {"name": name, "cases": cases}


def _suite_ss_collapse(man: Manifest, dump_dir: Path) -> dict:
    name = "ss_collapse"
    cases = []
    arrow = man.context.kind == "arrow"
    count = _SUITE_SIZES[name]
    items = _corpus_stream(man, want_morphisms=arrow, count=2 * count, salt=3)
    s_max, t_max = man.bounds["ss"]
    for idx in range(len(items) // 2):
        cid = f"{name}:{idx:03d}"
        obj_y, obj_x = items[2 * idx], items[2 * idx + 1]
        case = {"id": cid, "status": "pass", "detail": "", "dump": None}
        try:
            if arrow:
                y = ArrowObject(obj_y).t_module()
                x = ArrowObject(obj_x).t_module()
            else:
                y, x = obj_y, obj_x
            report = verify_collapse(e2_page(e1_page(man.context, y, x,
                                                     s_max, t_max)))
            verified = sum(1 for v in report.verdicts.values() if v == "verified")
            case["detail"] = f"{verified} of {len(report.verdicts)} verified"
        except FalsifiedTheorem as exc:
            case["status"] = "fail"
            case["detail"] = str(exc)
            raw = _pair_dump(man, (obj_y, obj_x), ("Y", "X"), "ss Y X")
            case["dump"] = _dump_failcase(raw, dump_dir, cid)
        cases.append(case)
    return {"name": name, "cases": cases}


def _cmd_corpus(man: Manifest, args) -> dict:
    dump_dir = Path(args.dump_dir)
    suites = [
        _suite_split_vs_oracle(man, dump_dir),
        _suite_sha_three_ways(man, dump_dir),
        _suite_duality(man, dump_dir),
        _suite_ss_collapse(man, dump_dir),
    ]
    totals = {"pass": 0, "fail": 0, "skip": 0}
    for suite in suites:
        suite["cases"].sort(key=lambda c: c["id"])
        for case in suite["cases"]:
            totals[case["status"]] += 1
    return {"suites": suites, "totals": totals}


_DISPATCH = {
    "ext": _cmd_ext,
    "sha": _cmd_sha,
    "relext": _cmd_relext,
    "split": _cmd_split,
    "duality": _cmd_duality,
    "ss": _cmd_ss,
    "oracle": _cmd_oracle,
    "corpus": _cmd_corpus,
}


# -- rendering -------------------------------------------------------------------


def _is_matrix_node(val) -> bool:
    return isinstance(val, dict) and set(val) == {"rows", "cols", "entries"}


def _render_value(val, indent: int, out) -> None:
    pad = "  " * indent
    if _is_matrix_node(val):
        r, c, e = val["rows"], val["cols"], val["entries"]
        rows = [e[i * c:(i + 1) * c] for i in range(r)]
        out.write(f"{pad}{r}x{c} {rows}\n")
    elif isinstance(val, dict):
        if not val:
            out.write(f"{pad}(empty)\n")
        for key, inner in val.items():
            if _is_matrix_node(inner):
                out.write(f"{pad}{key}: ")
                _render_value(inner, 0, out)
            elif isinstance(inner, dict) and inner:
                out.write(f"{pad}{key}:\n")
                _render_value(inner, indent + 1, out)
            elif isinstance(inner, list) and inner and not all(
                    isinstance(x, (int, str, bool, type(None))) for x in inner):
                out.write(f"{pad}{key}:\n")
                _render_value(inner, indent + 1, out)
            else:
                out.write(f"{pad}{key}: {inner}\n")
    elif isinstance(val, list):
        if all(isinstance(x, (int, str, bool, type(None))) for x in val):
            out.write(f"{pad}{val}\n")
        else:
            for item in val:
                _render_value(item, indent, out)
                if isinstance(item, dict):
                    out.write("\n")
    else:
        out.write(f"{pad}{val}\n")


def _render(report: dict, fmt: str, elapsed: float, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2))
        out.write("\n")
        return
    out.write(f"command: {report['command']}\n")
    out.write(f"manifest digest: {report['digest']}\n")
    out.write(f"seed: {report['seed']}\n")
    b = report["bounds"]
    out.write(f"bounds: resolution_length={b['resolution_length']} "
              f"ss={b['ss'][0]},{b['ss'][1]} oracle_budget={b['oracle_budget']} "
              f"max_dim={b['max_dim']}\n")
    if report["status"] == "falsified":
        out.write("STATUS: FALSIFIED THEOREM\n")
    out.write("\n")
    _render_value(report["payload"], 0, out)
    out.write(f"\nelapsed: {elapsed * 1000:.1f} ms\n")


def _envelope(man: Manifest, command: str) -> dict:
    return {
        "command": command,
        "digest": man.digest(),
        "seed": man.seed,
        "bounds": {"resolution_length": man.bounds["resolution_length"],
                   "ss": list(man.bounds["ss"]),
                   "oracle_budget": man.bounds["oracle_budget"],
                   "max_dim": man.bounds["max_dim"]},
        "status": "ok",
        "payload": {},
    }


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        man = _load_manifest(args)
        _apply_overrides(man, args)
    except ManifestError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = _envelope(man, args.command)
    try:
        report["payload"] = _DISPATCH[args.command](man, args)
    except (ManifestError, NotSplitRow, OracleRefusal) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        # library-level precondition rejections are input errors too
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FalsifiedTheorem as exc:
        report["status"] = "falsified"
        report["payload"] = {"error": str(exc),
                             "reproduce": {"command": args.command,
                                           "digest": report["digest"],
                                           "seed": report["seed"]}}
        _render(report, args.format, time.perf_counter() - start, sys.stdout)
        return EXIT_FALSIFIED
    _render(report, args.format, time.perf_counter() - start, sys.stdout)
    if args.command == "corpus" and report["payload"]["totals"]["fail"]:
        return EXIT_FALSIFIED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
