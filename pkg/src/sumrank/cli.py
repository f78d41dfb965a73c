"""Command-line front end.

Exit codes: 0 success, 2 property failed or invariant violated, 3 malformed
input or arguments, 4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
import time
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import __version__
from . import analysis, constructions, geometry, io
from .code import (SumRankCode, check_constant_rank_list_structure, classify_flags)
from .errors import (CapExceeded, DegenerateCodeError, FieldError, FormatError, InvariantViolation,
                     PreconditionError, SumRankError, resolve_cap)
from .gf import tower_for

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# helpers -------------------------------------------------------------------------------
def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n for n in missing))


def _load(path: str):
    return io.load_object(io.loads(io.read_file(path)))


def _as_code(obj) -> SumRankCode:
    return geometry.code_from_system(obj) if isinstance(obj, geometry.System) else obj


def _as_system(obj) -> geometry.System:
    return geometry.system_from_code(obj) if isinstance(obj, SumRankCode) else obj


class Run:
    """Collects the manifest of one invocation and writes outputs."""

    def __init__(self, args, argv: List[str]):
        self.args = args
        self.argv = argv
        self.start = time.perf_counter()
        self.inputs = {}
        self.field = None

    def read(self, path: str):
        text = io.read_file(path)
        self.inputs[path] = io.digest(text)
        obj = io.load_object(io.loads(text))
        self.field = obj.tower.describe()
        return obj

    def manifest(self) -> dict:
        return {"command": " ".join(["sumrank"] + self.argv), "tool_version": __version__,
                "field": self.field, "cap": resolve_cap(self.args.cap),
                "seed": getattr(self.args, "seed", None), "input_digests": dict(sorted(self.inputs.items()))}

    def emit(self, payload: dict, text_lines: Optional[List[str]] = None) -> None:
        payload = dict(payload)
        payload["manifest"] = self.manifest()
        if self.args.format == "text" and text_lines is not None:
            out = "".join(line + "\n" for line in text_lines)
        else:
            out = io.dumps(payload)
        if self.args.out:
            with open(self.args.out, "w", encoding="utf-8") as fh:
                fh.write(out)
            side = {"output": self.args.out, "output_digest": io.digest(out),
                    "wall_time_s": round(time.perf_counter() - self.start, 6),
                    "manifest": payload["manifest"]}
            with open(self.args.out + ".manifest.json", "w", encoding="utf-8") as fh:
                fh.write(io.dumps(side))
        else:
            sys.stdout.write(out)


def _kv_lines(d: dict, prefix: str = "") -> List[str]:
    """Flatten a JSON-able dict into tab-delimited ``key<TAB>value`` lines."""
    lines = []
    for k in sorted(d):
        v = d[k]
        key = f"{prefix}{k}"
        if isinstance(v, dict) and v and not {"num", "den"} >= set(v):
            lines.extend(_kv_lines(v, key + "."))
        else:
            lines.append(f"{key}\t{_scalar(v)}")
    return lines


def _scalar(v) -> str:
    j = io.to_jsonable(v)
    if isinstance(j, dict) and set(j) == {"num", "den"}:
        return f"{j['num']}/{j['den']}"
    if isinstance(j, bool):
        return "true" if j else "false"
    if isinstance(j, list):
        return ";".join(_scalar(x) for x in j) if all(not isinstance(x, list) for x in j) \
            else ";".join(",".join(map(str, x)) if isinstance(x, list) else str(x) for x in j)
    return str(j)


# subcommands ------------------------------------------------------------------------------
def cmd_construct(args, run: Run) -> int:
    name = args.name
    _need(args, "q", "m")
    q, m = args.q, args.m
    if name == "simplex":
        _need(args, "k")
        obj = constructions.simplex_rank(q, m, args.k)
    elif name == "block-simplex":
        _need(args, "k", "s")
        obj = constructions.block_simplex(q, m, args.k, args.s, literal=args.literal)
    elif name == "dim2-profile":
        _need(args, "e")
        obj = constructions.dim2_profile(q, m, args.e, args.seed)
    elif name == "dual-profile":
        _need(args, "k", "r")
        obj = constructions.dual_profile(q, m, args.k, args.r, args.seed)
    elif name == "point-partition":
        obj = constructions.dim2_point_partition(q, m)
    elif name == "repeat":
        _need(args, "tprime")
        base = run.read(args.input) if args.input else None
        if base is None:
            _need(args, "e")
            base = constructions.dim2_profile(q, m, args.e, args.seed)
        obj = constructions.repeat_code(_as_code(base), args.tprime)
    else:
        raise UsageError(f"unknown construction {name!r}")
    if args.as_code:
        obj = _as_code(obj)
    run.field = obj.tower.describe()
    payload = obj.to_dict()
    payload["construction"] = {"name": name, "q": q, "m": m, "k": args.k, "e": args.e, "r": args.r,
                               "s": args.s, "tprime": args.tprime, "seed": args.seed,
                               "literal": bool(args.literal)}
    if name == "block-simplex":
        # the block-diagonal form has s*k rows; the repeated form has k
        payload["construction"]["notes"] = [
            f"generator rank {obj.k}; block-diagonal form would have {args.s * args.k} rows, "
            f"repeated form {args.k}"]
    run.emit(payload)
    return EXIT_OK


def _analyze_payload(obj, cap) -> dict:
    C = _as_code(obj)
    rep = classify_flags(C, cap)
    payload = {"kind": "code-report", "report": rep.to_dict(), "code_rank": C.k}
    if isinstance(obj, geometry.System):
        payload["system_dims"] = list(obj.dims)
    return payload


def cmd_analyze(args, run: Run) -> int:
    obj = run.read(args.file)
    payload = _analyze_payload(obj, args.cap)
    if args.figures:
        from . import plotting
        payload["figures"] = plotting.report_figures(args.figures, payload["report"])
    run.emit(payload, _kv_lines(payload["report"]))
    return EXIT_OK


VERIFY_PROPERTIES = ("one-weight", "msrd", "constant-rank-list", "constant-rank-profile",
                     "nondegenerate", "one-weight-msrd", "rank-list-structure")


def cmd_verify(args, run: Run) -> int:
    obj = run.read(args.file)
    prop = args.property
    detail = None
    if prop == "rank-list-structure":
        detail = check_constant_rank_list_structure(_as_code(obj), args.cap)
        holds = detail["preconditions_hold"] and detail["all_pass"]
    elif prop == "one-weight-msrd":
        holds = geometry.one_weight_msrd_check(_as_system(obj), args.cap)
    else:
        rep = classify_flags(_as_code(obj), args.cap)
        holds = {"one-weight": rep.is_one_weight, "msrd": rep.is_msrd,
                 "constant-rank-list": rep.is_constant_rank_list,
                 "constant-rank-profile": rep.is_constant_rank_profile,
                 "nondegenerate": rep.is_nondegenerate}[prop]
    payload = {"kind": "verify", "property": prop, "holds": bool(holds)}
    if detail is not None:
        payload["detail"] = detail
    run.emit(payload, [f"property\t{prop}", f"holds\t{'true' if holds else 'false'}"])
    return EXIT_OK if holds else EXIT_FAIL


def _blocking_points(args, run: Run):
    if args.file:
        text = io.read_file(args.file)
        run.inputs[args.file] = io.digest(text)
        d = io.loads(text)
        if "points" in d:
            T, P = io.points_from_json(d)
        else:
            S = _as_system(io.load_object(d))
            T, P = S.tower, geometry.union_points(S, args.cap)
        run.field = T.describe()
        return T, P
    _need(args, "q", "m")
    T = tower_for(args.q, args.m)
    run.field = T.describe()
    if args.full_plane:
        return T, geometry.enumerate_points(T, 3, args.cap)
    if args.line:
        return T, geometry.line_points(T, [0, 0, 1])
    raise UsageError("blocking needs a FILE, --full-plane or --line")


def cmd_geometry(args, run: Run) -> int:
    sub = args.sub
    figs = []
    if sub == "blocking":
        T, P = _blocking_points(args, run)
        res = geometry.blocking_set_check(T, P, args.cap)
        if args.figures:
            from . import plotting
            figs = plotting.histogram_figure(args.figures, "secant_histogram.png", res["secant_histogram"],
                                             "Line intersection sizes", "points on line")
        payload = {"kind": "blocking", **res}
        if figs:
            payload["figures"] = figs
        run.emit(payload, _kv_lines(res))
        status = EXIT_OK
        if args.expect_minimal and not res["is_minimal"]:
            status = EXIT_FAIL
        return status
    if not args.file:
        raise UsageError(f"geometry {sub} needs an input FILE")
    S = _as_system(run.read(args.file))
    if sub == "linear-set":
        entries = []
        for i, U in enumerate(S.subspaces):
            L = geometry.linear_set(U, args.cap)
            entries.append({"index": i, "rank": L.rank, "size": L.size, "scattered": L.is_scattered(),
                            "counts": {str(a): b for a, b in sorted(L.counts.items())},
                            "identities": geometry.linear_set_identities(L),
                            "points": L.to_dict()["points"] if args.points else None})
        if args.figures:
            from . import plotting
            figs = plotting.linear_set_figures(args.figures, entries)
        for e in entries:
            if e["points"] is None:
                del e["points"]
        payload = {"kind": "linear-sets", "linear_sets": entries}
        lines = [f"{e['index']}\trank={e['rank']}\tsize={e['size']}\tscattered={str(e['scattered']).lower()}"
                 for e in entries]
    elif sub == "msrd":
        sums = geometry.hyperplane_sums(S, args.cap)
        vals, cnts = np.unique(sums, return_counts=True)
        payload = {"kind": "msrd", "k": S.k, "msrd": bool(sums.max() <= S.k - 1),
                   "one_weight_msrd": bool((sums == S.k - 1).all()),
                   "hyperplane_sum_histogram": {str(a): int(b) for a, b in zip(vals.tolist(), cnts.tolist())},
                   "subspace_design": {str(j): geometry.subspace_design_check(S, j, args.cap)
                                       for j in range(1, S.k)}}
        if S.k == 2:
            payload["partition_check"] = geometry.dim2_msrd_partition_check(S, args.cap)
        lines = _kv_lines({k: v for k, v in payload.items() if k != "kind"})
    elif sub == "dual":
        D = geometry.geometric_dual(S)
        payload = {"kind": "system", **D.to_dict()}
        lines = None
    elif sub == "lines":
        tally = geometry.classify_lines(S, args.cap)
        if args.figures:
            from . import plotting
            figs = plotting.histogram_figure(args.figures, "line_tally.png",
                                             {k: v for k, v in tally.items() if k != "total_lines"},
                                             "Line classification", "class")
        payload = {"kind": "lines", **tally}
        lines = _kv_lines(tally)
    else:
        raise UsageError(f"unknown geometry subcommand {sub!r}")
    if figs:
        payload["figures"] = figs
    run.emit(payload, lines)
    return EXIT_OK


def cmd_predict(args, run: Run) -> int:
    if args.what == "dim3":
        _need(args, "q", "m")
        P = analysis.dim3_predict(args.q, args.m)
        payload = {"kind": "dim3", "prediction": P.to_dict()}
        integral_ge2 = P.t_exact is not None and P.t_exact >= 2
        below2 = P.root_lt(2)
        if integral_ge2:
            verdict = f"integral t = {P.t_exact}"
        elif below2:
            verdict = "no integral t >= 2"
        else:
            verdict = "no integral t"
        payload["verdict"] = verdict
        status = EXIT_OK
        if args.bounds:
            B = analysis.dim3_bounds_check(args.q, args.m)
            payload["bounds"] = B["checks"]
            payload["bounds_hold"] = B["all_hold"]
            status = EXIT_OK if B["all_hold"] else EXIT_FAIL
        lines = [f"verdict\t{verdict}", f"t_decimal\t{P.decimal()}"]
        run.emit(payload, lines)
        return status
    if args.what == "profile":
        _need(args, "q", "n", "m", "k", "t", "profile")
        res = analysis.profile_identity_check(args.q, args.n, args.m, args.k, args.t, _ints(args.profile))
        payload = {"kind": "profile", **res}
        run.emit(payload, _kv_lines(res))
        return EXIT_OK if res["ell_integral"] and res["identity_holds"] else EXIT_FAIL
    raise UsageError(f"unknown prediction {args.what!r}")


def cmd_nonexist(args, run: Run) -> int:
    if args.q2:
        _need(args, "m")
        res = analysis.q2_nonexistence(args.m)
        ok = res["root_below_2"]
    elif args.m2:
        _need(args, "q")
        res = analysis.m2_nonexistence(args.q)
        ok = res["contradiction"]
    else:
        raise UsageError("nonexist needs --q2 or --m2")
    res = dict(res)
    res["prediction"] = res["prediction"].to_dict()
    payload = {"kind": "nonexistence", **res}
    run.emit(payload, _kv_lines({k: v for k, v in res.items() if k != "prediction"}))
    return EXIT_OK if ok else EXIT_FAIL


def _isometry_key(C: SumRankCode) -> bytes:
    """Smallest canonical generator over length-preserving block permutations."""
    best = None
    t = C.t
    perms = itertools.permutations(range(t)) if t <= 6 else [tuple(range(t))]
    for p in perms:
        if any(C.shape.n[p[i]] != C.shape.n[i] for i in range(t)):
            continue
        G = np.concatenate([C.block(i) for i in p], axis=1)
        key = SumRankCode(C.tower, C.shape, G).canonical_G().tobytes()
        best = key if best is None or key < best else best
    return best


def cmd_search(args, run: Run) -> int:
    _need(args, "q", "m", "k", "shape")
    T = tower_for(args.q, args.m)
    run.field = T.describe()
    shape = _ints(args.shape)
    found = analysis.exhaustive_search(T, args.k, shape, args.predicate, args.cap)
    classes = {}
    results = []
    for C, rep in found:
        cls = classes.setdefault(_isometry_key(C), len(classes))
        results.append({"G": C.to_dict()["G"], "weight_distribution": rep.to_dict()["weight_distribution"],
                        "rank_profiles": rep.to_dict()["rank_profiles"], "block_permutation_class": cls})
    payload = {"kind": "search", "k": args.k, "shape": shape, "predicate": args.predicate or "",
               "search_space": analysis.search_space_size(T, args.k, shape), "found": len(found),
               "results": results}
    run.emit(payload, [f"search_space\t{payload['search_space']}", f"found\t{len(found)}"])
    return EXIT_OK


# parser -------------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="enumeration cap (env SUMRANK_CAP)")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--figures", default=None, metavar="DIR", help="also write PNG figures to DIR")
    params = _Parser(add_help=False)
    for name in ("q", "m", "k", "e", "r", "s", "n", "t", "tprime", "seed"):
        params.add_argument(f"--{name}", type=int, default=None)

    p = _Parser(prog="sumrank", description="Sum-rank metric codes, systems and linear sets.")
    p.add_argument("--version", action="version", version=f"sumrank {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common, params], help="build a code or system")
    c.add_argument("name", choices=constructions.CONSTRUCTIONS)
    c.add_argument("--literal", action="store_true", help="block-simplex: block-diagonal generator")
    c.add_argument("--as-code", action="store_true", help="write the associated code of a system")
    c.add_argument("--input", default=None, help="repeat: base code or system file")
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", parents=[common], help="full report for a code or system")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", parents=[common], help="check one property, exit 2 if it fails")
    v.add_argument("property", choices=VERIFY_PROPERTIES)
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("geometry", parents=[common, params], help="linear sets, hyperplanes, duals")
    g.add_argument("sub", choices=("linear-set", "msrd", "dual", "lines", "blocking"))
    g.add_argument("file", nargs="?")
    g.add_argument("--points", action="store_true", help="linear-set: list the points")
    g.add_argument("--full-plane", action="store_true", help="blocking: all points of PG(2, q^m)")
    g.add_argument("--line", action="store_true", help="blocking: the points of one line")
    g.add_argument("--expect-minimal", action="store_true", help="blocking: exit 2 unless minimal")
    g.set_defaults(func=cmd_geometry)

    pr = sub.add_parser("predict", parents=[common, params], help="exact parameter predictors")
    pr.add_argument("what", choices=("dim3", "profile"))
    pr.add_argument("--bounds", action="store_true")
    pr.add_argument("--profile", default=None, help="comma-separated rank-profile")
    pr.set_defaults(func=cmd_predict)

    ne = sub.add_parser("nonexist", parents=[common, params], help="nonexistence verdicts")
    mode = ne.add_mutually_exclusive_group(required=True)
    mode.add_argument("--q2", action="store_true")
    mode.add_argument("--m2", action="store_true")
    ne.set_defaults(func=cmd_nonexist)

    s = sub.add_parser("search", parents=[common, params], help="exhaustive search over codes")
    s.add_argument("--shape", default=None, help="comma-separated block lengths")
    s.add_argument("--predicate", default=None, help="e.g. nondegenerate+one-weight")
    s.set_defaults(func=cmd_search)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, Run(args, argv))
    except UsageError as exc:
        print(f"sumrank: usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"sumrank: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (FormatError, FieldError, DegenerateCodeError, PreconditionError) as exc:
        print(f"sumrank: invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvariantViolation, AssertionError) as exc:
        print(f"sumrank: invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
