"""Command-line entry points and JSON reports.

Exit codes: 0 when every expectation holds, 2 on a mismatch, 3 when a
computation stopped before finishing (census depth exhausted).
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .birgroup import bir_criterion, find_relations, nef_stabilizer, orbit_count
from .chambers import (
    Chamber,
    ChamberClass,
    ChamberGraph,
    ClosureNotReached,
    SLICE_COLUMNS,
    carve_chamber,
    census,
    chamber_isometries,
    slice_export,
    slice_json,
    slice_rows,
)
from .cubicsurface import component_classes, intersection_table, twisted_cubic_pair
from .fqgeom import check_example, load_example
from .isometry import Isometry
from .lattice import discriminant_group
from .scenarios import load_scenario
from .walls import Obstructed, WallDivisor, WallKind, enumerate_walls_in_region, negdef_obstruction_sweep, represents

EXIT_OK, EXIT_MISMATCH, EXIT_INCOMPLETE = 0, 2, 3
CACHE_ENV = "SCROLLFANO_CACHE_DIR"


# --- reports -----------------------------------------------------------------

class Report:
    def __init__(self, command: str, scenario: str):
        self.data = {"tool": "scrollfano", "version": __version__, "command": command, "scenario": scenario}
        self.checks = []
        self.timing = {}

    def __setitem__(self, key, value):
        self.data[key] = value

    def check(self, name: str, passed, detail=""):
        self.checks.append({"name": name, "passed": passed, "detail": detail})

    @property
    def ok(self) -> bool:
        return all(c["passed"] is not False for c in self.checks)

    def to_json(self, with_timing: bool = False) -> str:
        out = dict(self.data)
        out["checks"] = self.checks
        out["status"] = "pass" if self.ok else "mismatch"
        if with_timing:
            out["timing_seconds"] = self.timing
        return json.dumps(out, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def _vec(v) -> list:
    return [int(x) for x in v]


def _walls(C: Chamber) -> list:
    return [{"vector": _vec(w.vector), "kind": w.kind.value} for w, _ in C.walls]


# --- chamber-graph cache -----------------------------------------------------

def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "scrollfano")


def _graph_payload(graph: ChamberGraph) -> dict:
    nodes = []
    for C in graph.nodes:
        nodes.append({
            "walls": [[_vec(w.vector), w.kind.value, s] for w, s in C.walls],
            "rays": [_vec(r) for r in C.rays],
            "interior": _vec(C.interior_point),
            "vertices": [_vec(r) for r in C.vertices],
        })
    classes = [{"label": c.label, "representative": c.representative, "names": list(c.names),
                "members": [[i, [_vec(row) for row in phi.matrix]] for i, phi in c.members]}
               for c in graph.classes]
    edges = [[i, j, _vec(w.vector), w.kind.value] for i, j, w in graph.edges]
    return {"nodes": nodes, "classes": classes, "edges": edges}


def _graph_from_payload(data: dict) -> ChamberGraph:
    nodes = []
    for n in data["nodes"]:
        walls = tuple((WallDivisor(tuple(v), WallKind(k)), s) for v, k, s in n["walls"])
        nodes.append(Chamber(walls, tuple(map(tuple, n["rays"])), tuple(n["interior"]),
                             tuple(map(tuple, n["vertices"]))))
    classes = [ChamberClass(c["label"], c["representative"],
                            [(i, Isometry(tuple(map(tuple, M)))) for i, M in c["members"]], list(c["names"]))
               for c in data["classes"]]
    edges = [(i, j, WallDivisor(tuple(v), WallKind(k))) for i, j, v, k in data["edges"]]
    return ChamberGraph(nodes, edges, classes)


def _digest(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def cached_census(scenario, max_depth: int, use_cache: bool = True) -> ChamberGraph:
    """Census with an on-disk JSON cache keyed by the scenario content hash.

    A file whose stored digest does not match its payload is ignored and
    recomputed.
    """
    path = cache_dir() / f"census-{scenario.name}-{scenario.content_hash()[:16]}-v{__version__}.json"
    if use_cache and path.exists():
        try:
            blob = json.loads(path.read_text(encoding="utf-8"))
            if blob.get("digest") == _digest(blob["graph"]):
                return _graph_from_payload(blob["graph"])
        except (ValueError, KeyError, TypeError):
            pass
    graph = census(scenario, max_depth=max_depth)
    if use_cache:
        payload = _graph_payload(graph)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps({"digest": _digest(payload), "graph": payload}), encoding="utf-8")
        except OSError:
            pass
    return graph


# --- commands ----------------------------------------------------------------

def _expect(report: Report, name: str, expected, actual):
    if expected is not None:
        report.check(name, expected == actual, f"expected {expected}, got {actual}")


def run_census(args) -> tuple[Report, int]:
    sc = load_scenario(args.scenario)
    L = sc.lattice
    report = Report("census", sc.name)
    t0 = time.perf_counter()
    try:
        graph = cached_census(sc, args.depth, use_cache=not args.no_cache)
    except ClosureNotReached as exc:
        report["error"] = str(exc)
        report.check("census closed", False, str(exc))
        return report, EXIT_INCOMPLETE
    report.timing["census"] = round(time.perf_counter() - t0, 3)

    def accept(M):
        return bir_criterion(L, sc.bir_config, M)

    nef = graph.nodes[0]
    classes = []
    for cls in graph.classes:
        rep = graph.nodes[cls.representative]
        entry = {"label": cls.label, "names": list(cls.names), "members": len(cls.members),
                 "nef_walls": _walls(rep), "rays": [_vec(r) for r in rep.rays]}
        if L.rank == 3:
            stab = nef_stabilizer(L, sc.bir_config, rep)
            entry["stabilizer_order"] = len(stab)
        if cls.representative != 0 and chamber_isometries(L, nef, rep, first=True):
            sweep = negdef_obstruction_sweep(L, L.ample, (-2, -6), 2)
            entry["second_cubic"] = ("Fano of a second cubic: obstruction sweep empty" if not sweep
                                     else f"obstruction sweep found {len(sweep)} classes")
        classes.append(entry)
    report["class_count"] = graph.class_count
    report["classes"] = classes
    report["chambers_visited"] = len(graph.nodes)
    disc = discriminant_group(L)
    report["discriminant"] = list(disc.invariant_factors)

    exp = sc.expected
    _expect(report, "class count", exp.get("class_count"), graph.class_count)
    if "discriminant" in exp:
        report.check("discriminant group", disc.is_isomorphic_to(exp["discriminant"]),
                      f"{list(disc.invariant_factors)} vs {exp['discriminant']}")
    for label, walls in exp.get("nef_walls", {}).items():
        cls = next((c for c in graph.classes if label in c.names or (label == "F" and c.representative == 0)), None)
        got = None
        if cls is not None:
            C = nef if label == "F" else graph.nodes[cls.representative]
            if label != "F" and label in sc.named_paths:
                from .chambers import chamber_along
                C = chamber_along(L, sc.named_paths[label])
            got = sorted(_vec(v) for v in C.wall_vectors())
        _expect(report, f"nef walls of {label}", sorted(walls), got)
    for n, kind in exp.get("represents", {}).items():
        res = represents(L, int(n))
        _expect(report, f"represents {n}", kind, "Obstructed" if isinstance(res, Obstructed) else "Represented")
    return report, EXIT_OK if report.ok else EXIT_MISMATCH


def _parse_rays(text: str) -> list[tuple]:
    return [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip()]


def run_walls(args) -> tuple[Report, int]:
    sc = load_scenario(args.scenario)
    L = sc.lattice
    report = Report("walls", sc.name)
    rays = _parse_rays(args.region) if args.region else list(carve_chamber(L, L.ample).rays)
    walls = enumerate_walls_in_region(L, rays, None if args.kind == "all" else args.kind)
    report["region"] = [_vec(r) for r in rays]
    report["walls"] = [{"vector": _vec(w.vector), "kind": w.kind.value} for w in walls]
    return report, EXIT_OK


def run_orbits(args) -> tuple[Report, int]:
    sc = load_scenario(args.scenario)
    report = Report("orbits", sc.name)
    kind = "6" if args.kind == "square6" else args.kind
    movable = args.kind in ("flop", "pex") and not args.all_walls
    res = orbit_count(sc.involutions, kind, args.bound, movable_only=movable)
    report["kind"] = args.kind
    report["bound"] = args.bound
    report["movable_only"] = movable
    report["orbits"] = [{"representative": _vec(r), "vectors": n} for r, n in res.orbits.items()]
    report["total"] = res.total
    expected = sc.orbit_reps.get(args.kind)
    if expected is not None:
        _expect(report, f"{args.kind} orbit representatives",
                sorted(_vec(v) for v in expected), sorted(_vec(r) for r in res.orbits))
    return report, EXIT_OK if report.ok else EXIT_MISMATCH


def run_relations(args) -> tuple[Report, int]:
    sc = load_scenario(args.scenario)
    report = Report("relations", sc.name)
    rels = find_relations(sc.involutions, args.max_length)
    report["max_length"] = args.max_length
    report["relators"] = [list(r) for r in rels]
    exp = sc.expected.get("relations")
    if exp and exp["max_length"] == args.max_length:
        _expect(report, "relators", [list(r) for r in exp["relators"]], [list(r) for r in rels])
    return report, EXIT_OK if report.ok else EXIT_MISMATCH


def run_surface_lines(args) -> tuple[Report, int]:
    sc = load_scenario(args.scenario)
    report = Report("surface-lines", sc.name)
    g1, g1d, g2, g2d = twisted_cubic_pair(sc.name)
    report["twisted_cubics"] = {k: str(v) for k, v in
                                (("gamma1", g1), ("gamma1_dual", g1d), ("gamma2", g2), ("gamma2_dual", g2d))}
    report["component_sizes"] = [list(component_classes(g1, g1d).sizes()), list(component_classes(g2, g2d).sizes())]
    table = intersection_table(sc.name)
    report["intersection_table"] = table
    _expect(report, "plane intersection table", sc.expected.get("intersection_table"), table)
    return report, EXIT_OK if report.ok else EXIT_MISMATCH


def run_examples(args) -> tuple[Report, int]:
    ex = load_example(args.example, args.prime)
    report = Report("verify-appendix", args.example)
    report["prime"] = ex.prime
    t0 = time.perf_counter()
    for c in check_example(ex, workers=args.threads):
        report.check(c.name, c.passed, c.detail)
    report.timing["checks"] = round(time.perf_counter() - t0, 3)
    report["caveat"] = "rational points only; containment is scan-certified"
    return report, EXIT_OK if report.ok else EXIT_MISMATCH


def export_slice(sc, level, fmt: str, which: str = "all", use_cache: bool = True) -> str:
    L = sc.lattice
    if L.rank != 3:
        raise ValueError("slice export needs a rank-three scenario")
    if which == "none":
        chambers = []
    elif which == "nef":
        chambers = [carve_chamber(L, L.ample).with_label("F")]
    else:
        graph = cached_census(sc, 12, use_cache)
        labels = {}
        for cls in graph.classes:
            for k, (i, _) in enumerate(cls.members):
                labels[i] = f"{cls.label}.{k}"
        chambers = [C.with_label(labels.get(i, f"node{i}")) for i, C in enumerate(graph.nodes)]
    objects = slice_export(L, chambers, level)
    if fmt == "json":
        return json.dumps(slice_json(objects), indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SLICE_COLUMNS)
    w.writerows(slice_rows(objects))
    return buf.getvalue()


def run_slice(args) -> tuple[str, int]:
    sc = load_scenario(args.scenario)
    from fractions import Fraction
    text = export_slice(sc, Fraction(args.level), args.format, args.chambers, not args.no_cache)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        return "", EXIT_OK
    return text, EXIT_OK


def run_cache(args) -> tuple[str, int]:
    d = cache_dir()
    files = sorted(d.glob("census-*.json")) if d.exists() else []
    if args.action == "clear":
        for f in files:
            f.unlink()
        return f"removed {len(files)} cached graphs from {d}\n", EXIT_OK
    lines = [f"cache directory: {d}", f"cached graphs: {len(files)}"]
    lines += [f"  {f.name} ({f.stat().st_size} bytes)" for f in files]
    return "\n".join(lines) + "\n", EXIT_OK


# --- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="scrollfano", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"scrollfano {__version__}")
    ap.add_argument("--threads", type=int, default=1, help="worker threads (output does not depend on it)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
        p.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
        return p

    p = common(sub.add_parser("census", help="birational models up to isomorphism"))
    p.add_argument("scenario")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=run_census)

    p = common(sub.add_parser("walls", help="wall divisors meeting a cone"))
    p.add_argument("scenario")
    p.add_argument("--region", help="rays as 'a,b,c;d,e,f;...' (default: Nef(F))")
    p.add_argument("--kind", choices=("all", "Pex", "Flop"), default="all")
    p.set_defaults(func=run_walls)

    p = common(sub.add_parser("orbits", help="orbits of walls or square-6 classes"))
    p.add_argument("scenario")
    p.add_argument("--kind", choices=("flop", "pex", "square6"), required=True)
    p.add_argument("--bound", type=int, default=50)
    p.add_argument("--all-walls", action="store_true", help="do not restrict to walls meeting Mov")
    p.set_defaults(func=run_orbits)

    p = common(sub.add_parser("relations", help="short relations among the involutions"))
    p.add_argument("scenario")
    p.add_argument("--max-length", type=int, default=6)
    p.set_defaults(func=run_relations)

    p = common(sub.add_parser("surface-lines", help="plane intersection table from the 27 lines"))
    p.add_argument("scenario")
    p.set_defaults(func=run_surface_lines)

    p = common(sub.add_parser("verify-appendix", help="finite-field checks of a worked example"))
    p.add_argument("example", choices=("syz", "nonsyz"))
    p.add_argument("--prime", type=int)
    p.set_defaults(func=run_examples)

    p = sub.add_parser("slice", help="export a planar cross-section of the chambers")
    p.add_argument("scenario")
    p.add_argument("--level", default="6", help="value of q(g, .) on the plane (rational)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--chambers", choices=("all", "nef", "none"), default="all")
    p.add_argument("--output")
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=run_slice)

    p = sub.add_parser("cache", help="inspect or clear cached chamber graphs")
    p.add_argument("action", choices=("clear", "status"))
    p.set_defaults(func=run_cache)
    return ap


def _summary(report: Report) -> str:
    d = report.data
    lines = [f"{d['command']} {d['scenario']}"]
    for key in ("class_count", "total", "prime"):
        if key in d:
            lines.append(f"  {key}: {d[key]}")
    if "classes" in d:
        for c in d["classes"]:
            extra = f"  [{c['second_cubic']}]" if "second_cubic" in c else ""
            lines.append(f"  {c['label']}: {c['members']} chambers, "
                         f"walls {[w['vector'] for w in c['nef_walls']]}{extra}")
    if "orbits" in d:
        for o in d["orbits"]:
            lines.append(f"  {o['representative']}: {o['vectors']}")
    if "walls" in d:
        for w in d["walls"]:
            lines.append(f"  {w['kind']} {w['vector']}")
    if "relators" in d:
        lines.append(f"  relators up to length {d['max_length']}: {len(d['relators'])}")
        lines += [f"    {' '.join(r)}" for r in d["relators"]]
    if "intersection_table" in d:
        lines += [f"  {row}" for row in d["intersection_table"]]
    for c in report.checks:
        mark = {True: "PASS", False: "FAIL", None: "INFO"}[c["passed"]]
        lines.append(f"  {mark}  {c['name']}: {c['detail']}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, code = args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    if isinstance(out, str):
        sys.stdout.write(out)
        return code
    text = out.to_json(getattr(args, "timing", False))
    if args.json == "-":
        sys.stdout.write(text)
    else:
        sys.stdout.write(_summary(out))
        if args.json:
            Path(args.json).write_text(text, encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
