"""Command-line entry point.

Exit codes: 0 success, 1 negative answer (refutation, false flag, stage
failure), 2 malformed input, 3 I/O error, 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .connectivity import vertex_connectivity
from .extremal import high_girth_regular, incidence_graph, projective_plane
from .graph import FORMATS, Graph, GraphError, GraphFormatError, from_json_obj, load_graph, save_graph
from .invariants import INFINITY, degeneracy, girth, min_degree, moore_lower_bound
from .subdivision import (
    MalformedCertificate,
    SearchStatus,
    certificate_from_json_obj,
    chordless_cycle_exists,
    complete_pattern,
    find_induced_subdivision,
    verify,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_MALFORMED, EXIT_IO, EXIT_BUDGET = 0, 1, 2, 3, 4


class Malformed(Exception):
    pass


def _dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _echo_config(args: argparse.Namespace, extra: Optional[dict] = None) -> None:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    if extra:
        cfg.update(extra)
    print(_dumps({"config": cfg}), file=sys.stderr)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _write(path: Optional[str], data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.write(data.decode("ascii") + "\n")
    else:
        Path(path).write_bytes(data)


def _guess_format(path: str, fmt: Optional[str]) -> str:
    if fmt:
        return fmt
    suffix = Path(path).suffix.lower()
    return {".json": "json", ".g6": "graph6", ".txt": "edge-list", ".edges": "edge-list"}.get(suffix, "graph6")


def _load_graph(path: str, fmt: Optional[str]) -> Graph:
    data = _read(path)
    try:
        return load_graph(data, _guess_format(path, fmt))
    except (GraphError, GraphFormatError, UnicodeDecodeError) as exc:
        raise Malformed(f"{path}: {exc}") from None


def _load_json(path: str) -> Any:
    try:
        return json.loads(_read(path))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise Malformed(f"{path}: invalid JSON ({exc})") from None


# --- verify / find ------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    _echo_config(args)
    host = _load_graph(args.graph, args.format)
    obj = _load_json(args.certificate)
    try:
        cert = certificate_from_json_obj(host, obj)
        report = verify(cert)
    except (MalformedCertificate, GraphError, KeyError, TypeError, ValueError) as exc:
        raise Malformed(f"certificate: {exc}") from None
    print(_dumps(report.to_json_obj()))
    ok = report.is_subdivision and report.is_induced and (report.is_proper or not args.proper)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_find(args: argparse.Namespace) -> int:
    _echo_config(args)
    if args.s < 3:
        raise Malformed("s must be at least 3")
    host = _load_graph(args.graph, args.format)
    res = find_induced_subdivision(host, complete_pattern(args.s), args.budget, proper_only=args.proper)
    if res.status is SearchStatus.FOUND:
        report = verify(res.certificate)
        if not (report.is_induced and (report.is_proper or not args.proper)):
            print(_dumps({"status": "unverified", "report": report.to_json_obj()}))
            return EXIT_NEGATIVE
        _write(args.out, res.certificate.to_json())
        if args.out not in (None, "-"):
            print(_dumps({"status": "found", "expansions": res.expansions, "certificate": args.out}))
        return EXIT_OK
    print(_dumps({"status": "none", "search": res.status.value, "expansions": res.expansions}))
    return EXIT_BUDGET if res.status is SearchStatus.BUDGET_EXHAUSTED else EXIT_NEGATIVE


# --- construct / invariants ---------------------------------------------------

def cmd_construct(args: argparse.Namespace) -> int:
    _echo_config(args)
    fmt = args.format or "graph6"
    if args.kind == "plane":
        pl = _plane(args.params)
        _write(args.out, _dumps(pl.to_json_obj()).encode("ascii"))
        return EXIT_OK
    if args.kind == "incidence":
        g = incidence_graph(_plane(args.params))
        _write(args.out, save_graph(g, fmt))
        return EXIT_OK
    if len(args.params) != 3:
        raise Malformed("regular needs D N GIRTH")
    d, n, target = args.params
    try:
        g = high_girth_regular(d, n, target, seed=args.seed, swap_budget=args.budget)
    except ValueError as exc:
        raise Malformed(str(exc)) from None
    if g is None:
        print(_dumps({"status": "absent"}))
        return EXIT_NEGATIVE
    _write(args.out, save_graph(g, fmt))
    return EXIT_OK


def _plane(params: list[int]):
    if len(params) != 1:
        raise Malformed("expected a single prime power q")
    try:
        return projective_plane(params[0])
    except ValueError as exc:
        raise Malformed(str(exc)) from None


def _num(x):
    return None if x is INFINITY else x


def cmd_invariants(args: argparse.Namespace) -> int:
    _echo_config(args)
    g = _load_graph(args.graph, args.format)
    out: dict[str, Any] = {"n": g.n, "m": g.m}
    wanted = args.what.split(",")
    for w in wanted:
        if w == "girth":
            out["girth"] = _num(girth(g))
        elif w == "degeneracy":
            out["degeneracy"] = degeneracy(g)
        elif w == "connectivity":
            out["connectivity"] = vertex_connectivity(g)
        elif w == "moore":
            gi = girth(g)
            if g.n and gi is not INFINITY:
                out["moore_lower_bound"] = moore_lower_bound(min_degree(g), (gi - 2) // 2) if min_degree(g) >= 2 else None
            else:
                out["moore_lower_bound"] = None
        else:
            raise Malformed(f"unknown invariant {w!r}")
    print(_dumps(out))
    return EXIT_OK


# --- pipeline -----------------------------------------------------------------

PIPELINE_OPS = ("unbalanced_step", "cleaning_step", "induced_mader", "main_theorem")


def _descriptor_graph(obj: Any, base: Path) -> Graph:
    if isinstance(obj, str):
        p = obj if Path(obj).is_absolute() else str(base / obj)
        return _load_graph(p, None)
    if isinstance(obj, dict) and "graph6" in obj:
        return load_graph(obj["graph6"], "graph6")
    return from_json_obj(obj)


def _int_list(desc: dict, key: str) -> list[int]:
    xs = desc.get(key)
    if not isinstance(xs, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in xs):
        raise Malformed(f"descriptor field {key!r} must be a list of integers")
    return xs


def _int(desc: dict, key: str, default: Optional[int] = None) -> int:
    x = desc.get(key, default)
    if not isinstance(x, int) or isinstance(x, bool):
        raise Malformed(f"descriptor field {key!r} must be an integer")
    return x


def run_descriptor(desc: dict, base: Path = Path("."), overrides: Optional[dict] = None):
    """Resolve a run descriptor and execute it. Returns ``(resolved config, PipelineResult)``.

    Precondition failures come back as a failed result with a one-stage trace.
    """
    from .pipeline import (
        PipelineResult, PipelineTrace, PreconditionError, cleaning_step, induced_mader,
        main_theorem, mader_parameters, resolve_profile, unbalanced_step,
    )

    if not isinstance(desc, dict):
        raise Malformed("descriptor must be a JSON object")
    desc = {**desc, **(overrides or {})}
    op = desc.get("op")
    if op not in PIPELINE_OPS:
        raise Malformed(f"unknown op {op!r}")
    try:
        g = _descriptor_graph(desc.get("graph"), base)
        prof_spec = desc.get("profile", "desk")
        if desc.get("relax_girth"):
            prof_spec = {"base": prof_spec, "relax_girth": True} if isinstance(prof_spec, str) else {**prof_spec, "relax_girth": True}
        prof = resolve_profile(prof_spec)
    except (GraphError, GraphFormatError, ValueError, TypeError) as exc:
        raise Malformed(str(exc)) from None
    seed = _int(desc, "seed", 0)
    retries = _int(desc, "retries", 50)
    budget = _int(desc, "budget", 500_000)
    config = {"op": op, "n": g.n, "m": g.m, "profile": prof.to_json_obj(), "seed": seed, "retries": retries, "budget": budget}
    floor = 0 if prof.relax_girth else prof.lemma_girth
    try:
        if op == "unbalanced_step":
            res = unbalanced_step(
                g, _int_list(desc, "A"), _int_list(desc, "B"), _int(desc, "d"), seed=seed, retries=retries,
                girth_floor=floor, rate=prof.unbalanced_rate, size_factor=prof.unbalanced_factor, budget=budget,
            )
        elif op == "cleaning_step":
            res = cleaning_step(
                g, _int_list(desc, "X"), _int_list(desc, "B0"), _int(desc, "d"), seed=seed, retries=retries,
                girth_floor=floor, fraction=prof.case1_fraction, delta0_factor=prof.delta0_factor,
                kappa_factor=prof.kappa_factor, beta=prof.beta,
            )
        elif op == "induced_mader":
            if "s" in desc:
                params = mader_parameters(
                    _int(desc, "s"), Fraction(desc.get("eta", prof.eta)), _int(desc, "D"),
                    _int(desc, "ell", prof.mader_ell or 1), _int(desc, "m", prof.mader_m or 0),
                    desc.get("overrides", prof.mader_overrides or None),
                )
            else:
                params = prof.mader_for(_int(desc, "d"), desc.get("D"))
            config["mader"] = params.to_json_obj()
            res = induced_mader(g, params, seed=seed, retries=retries, relax_girth=prof.relax_girth, linkage_budget=budget)
        else:
            res = main_theorem(g, _int(desc, "k"), seed=seed, profile=prof, retries=retries, budget=budget)
    except PreconditionError as exc:
        trace = PipelineTrace()
        st = trace.stage(exc.stage, g.n)
        st.flags["precondition"] = False
        st.values["reason"] = str(exc)
        trace.close()
        res = PipelineResult(trace, failed_stage=exc.stage, reason=str(exc))
    except (ValueError, TypeError) as exc:
        raise Malformed(str(exc)) from None
    return config, res


def cmd_pipeline(args: argparse.Namespace) -> int:
    desc = _load_json(args.descriptor)
    over: dict[str, Any] = {}
    for key in ("seed", "retries", "budget", "profile"):
        if getattr(args, key) is not None:
            over[key] = getattr(args, key)
    if args.relax_girth:
        over["relax_girth"] = True
    config, res = run_descriptor(desc, Path(args.descriptor).parent, over)
    _echo_config(args, {"resolved": config})
    _write(args.trace, res.trace.to_json(include_sets=args.sets, timings=args.timings))
    summary: dict[str, Any] = {"ok": res.ok, "failed_stage": res.failed_stage, "reason": res.reason, "attempts": res.attempts}
    if res.ok and res.certificate is not None:
        report = verify(res.certificate)
        if not (report.is_induced and report.is_proper):
            summary.update(ok=False, failed_stage="cli/verify", reason=str(report.violations))
            print(_dumps(summary))
            return EXIT_NEGATIVE
        if args.cert:
            Path(args.cert).write_bytes(res.certificate.to_json())
            summary["certificate"] = args.cert
        else:
            summary["certificate"] = res.certificate.to_json_obj()
    print(_dumps(summary))
    return EXIT_OK if res.ok else EXIT_NEGATIVE


# --- oracle diff --------------------------------------------------------------

def random_connected_graph(n: int, rng: random.Random, extra: float) -> Graph:
    """Random spanning tree plus each remaining pair with probability ``extra``."""
    edges = set()
    for v in range(1, n):
        edges.add((rng.randrange(v), v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra:
                edges.add((u, v))
    return Graph(n, sorted(edges))


def oracle_diff(count: int, max_n: int, seed: int, budget: int) -> list[Graph]:
    """Graphs where the K_3 finder and the chordless-cycle enumeration disagree."""
    rng = random.Random(seed)
    bad = []
    for _ in range(count):
        g = random_connected_graph(rng.randint(1, max_n), rng, rng.choice((0.0, 0.05, 0.1, 0.2, 0.4)))
        res = find_induced_subdivision(g, complete_pattern(3), budget)
        if res.status is SearchStatus.BUDGET_EXHAUSTED or (res.status is SearchStatus.FOUND) != chordless_cycle_exists(g):
            bad.append(g)
    return bad


def cmd_oracle_diff(args: argparse.Namespace) -> int:
    _echo_config(args)
    bad = oracle_diff(args.count, args.max_n, args.seed, args.budget)
    print(_dumps({"graphs": args.count, "disagreements": len(bad), "examples": [save_graph(g, "graph6").decode() for g in bad[:5]]}))
    return EXIT_OK if not bad else EXIT_NEGATIVE


# --- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inducedsub", description="Induced subdivisions: search, verification, pipelines and constructions.")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp):
        sp.add_argument("--format", choices=FORMATS, default=None, help="graph format (default: from file suffix, else graph6)")

    sp = sub.add_parser("verify", help="check a certificate against a host graph")
    sp.add_argument("certificate")
    sp.add_argument("graph")
    sp.add_argument("--proper", action="store_true", help="also require non-adjacent branch vertices")
    graph_args(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("find", help="search for an induced K_s-subdivision")
    sp.add_argument("graph")
    sp.add_argument("s", type=int)
    sp.add_argument("--budget", type=int, default=1_000_000)
    sp.add_argument("--proper", action="store_true")
    sp.add_argument("--out", default=None, help="certificate path (default: stdout)")
    graph_args(sp)
    sp.set_defaults(func=cmd_find)

    sp = sub.add_parser("construct", help="plane Q | incidence Q | regular D N GIRTH")
    sp.add_argument("kind", choices=("plane", "incidence", "regular"))
    sp.add_argument("params", type=int, nargs="+")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=20_000, help="swap budget for regular")
    sp.add_argument("--out", default=None)
    graph_args(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("invariants", help="girth, degeneracy, connectivity, Moore bound")
    sp.add_argument("graph")
    sp.add_argument("--what", default="girth,degeneracy,connectivity,moore")
    graph_args(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("pipeline", help="run a pipeline operation from a JSON descriptor")
    sp.add_argument("descriptor")
    sp.add_argument("--trace", default=None, help="trace path (default: stdout)")
    sp.add_argument("--cert", default=None, help="certificate path (written only if verified)")
    sp.add_argument("--profile", default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--retries", type=int, default=None)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--relax-girth", action="store_true")
    sp.add_argument("--sets", action="store_true", help="include full vertex sets in the trace")
    sp.add_argument("--timings", action="store_true", help="include stage timings (breaks byte-identity)")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("oracle-diff", help="compare the K_3 finder with chordless-cycle enumeration")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--max-n", type=int, default=9)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=1_000_000)
    sp.set_defaults(func=cmd_oracle_diff)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Malformed as exc:
        print(_dumps({"error": "malformed", "detail": str(exc)}), file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(_dumps({"error": "io", "detail": str(exc)}), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
