"""Command-line entry point.

Every command writes one artifact: a ``.lag`` or ``.gm`` instance file, a JSON
report, or a CSV point table. Reports carry an envelope with the tool
version and an echo of the configuration (seed included); wall-clock timing
is added only with ``--timing`` so that reports are byte-identical across
runs and ``--jobs`` settings. Errors exit nonzero with a JSON payload on
stderr that includes a command line replaying the failure.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import shlex
import sys
import tempfile
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from . import io as files
from . import projective
from .correspondences import cycle_decomposition_check, line_transform_data
from .epw import dual_stratify, sextic_on_line, sextic_roots, stratify, stratum_of
from .fields import FieldSpec
from .gm import build_gm, hilbert_polynomial
from .lagrangian import decomposable_search, make_rng, random_instance
from .linalg import rank
from .verify import verify_suite
from .quadric_fibers import (
    admissibility,
    double_cover_fiber,
    rho1_fiber_classify,
    sigma_planes,
    splitting_section,
    to_W_coords,
)
from .scenarios import (
    SearchFailed,
    dual_points_with_stratum,
    fivefold_data,
    line_transform_fixture,
    nice_line,
    points_with_stratum,
    slice_points,
    split_points,
    threefold_data,
)

GROUPS = {
    "lag": {"gen": "gen-lagrangian"},
    "epw": {"stratify": "stratify", "dual-stratify": "dual-stratify", "sextic-line": "sextic-line"},
    "gm": {"build": "build-gm", "hilbert": "hilbert"},
    "fibers": {
        "classify": "classify-fibers",
        "double-cover": "double-cover-fiber",
        "splitting-section": "splitting-section",
    },
    "corr": {"cycle-check": "cycle-check", "line-transform": "line-transform", "hilbert": "hilbert"},
}


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


class CommandError(RuntimeError):
    pass


# -- helpers --------------------------------------------------------------------------------------


def _field(args):
    if getattr(args, "field", None):
        return FieldSpec.parse(args.field).field
    if getattr(args, "prime", None):
        return FieldSpec("prime", args.prime).field
    return None


def _vector(F, text: str, n: int = 6) -> list:
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) != n:
        raise CommandError(f"expected {n} comma-separated coordinates, got {text!r}")
    return [F.parse(p) for p in parts]


def _load_instance(args):
    inst = files.read_lag(args.instance)
    _check_prime(args, inst.field)
    return inst


def _load_gm(args):
    gm = files.read_gm(args.gm)
    _check_prime(args, gm.field)
    return gm


def _check_prime(args, F) -> None:
    want = _field(args)
    if want is not None and want.spec() != F.spec():
        raise CommandError(f"instance is over {F.spec()}, not {want.spec()}")


def _fmt(F, v) -> list:
    return [F.format(x) for x in v]


def _rows_csv(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _base_space(gm):
    """Base line (threefold: the first nice line) or plane (fivefold: the first rational sigma-plane)."""
    if gm.n == 3:
        v0p, L0 = nice_line(gm)
        return {"kind": "line", "sigma": tuple(v0p), "L0": L0, "rows": to_W_coords(gm, L0.rows())}
    if gm.n == 5:
        for v in slice_points(gm, 2):
            ts = sigma_planes(gm, v)
            if ts.rational and not ts.degenerate:
                return {"kind": "plane", "sigma": tuple(v), "rows": ts.spaces[0].space.rows()}
        raise SearchFailed("no rational sigma-plane over the stratum-2 curve")
    raise CommandError(f"base spaces are defined for threefolds and fivefolds, not n = {gm.n}")


# -- commands -------------------------------------------------------------------------------------


def cmd_gen_lagrangian(args):
    F = _field(args)
    if F is None:
        raise CommandError("gen-lagrangian needs --prime or --field")
    inst = random_instance(args.seed, F)
    if args.ndv_effort > 0:
        inst, _ = decomposable_search(inst, args.ndv_effort, sample=args.ndv_sample, seed=args.seed, jobs=args.jobs)
    return "lag", files.dumps_lag(inst)


def _report(rep, F, args):
    if args.format == "csv":
        return "csv", _rows_csv(["stratum", "count"], [[k, rep.counts[k]] for k in sorted(rep.counts)])
    return "json", rep.to_json(F)


def cmd_stratify(args):
    inst = _load_instance(args)
    return _report(stratify(inst, jobs=args.jobs, cap=args.witness_cap, label=str(args.instance)), inst.field, args)


def cmd_dual_stratify(args):
    inst = _load_instance(args)
    return _report(dual_stratify(inst, jobs=args.jobs, cap=args.witness_cap, label=str(args.instance)), inst.field, args)


def cmd_sextic_line(args):
    inst = _load_instance(args)
    F = inst.field
    rng = make_rng(args.seed)
    if args.v0 and args.v1:
        v0, v1 = _vector(F, args.v0), _vector(F, args.v1)
    else:
        # a random line whose second endpoint is off the sextic, so the restriction has degree 6
        v0 = [F.random(rng) for _ in range(6)]
        while True:
            v1 = [F.random(rng) for _ in range(6)]
            if rank(F, [v0, v1]) == 2 and stratum_of(inst, v1) == 0:
                break
    s = sextic_on_line(inst, v0, v1, allow_extension=args.allow_extension)
    out = s.to_json()
    roots = sextic_roots(s)
    out["roots"] = [{"t": F.format(t), "stratum": stratum_of(inst, s.point(t))} for t in roots]
    out["remainder_zero"] = True
    return "json", out


def cmd_build_gm(args):
    if args.scenario:
        F = _field(args)
        if F is None or F.kind != "prime":
            raise CommandError("--scenario needs --prime")
        data = threefold_data(F.p, args.seed) if args.scenario == "threefold" else fivefold_data(F.p, args.seed)
        return "gm", files.dumps_gm(data.gm)
    inst = _load_instance(args)
    F = inst.field
    if args.v5:
        phi = _vector(F, args.v5)
    else:
        pts = dual_points_with_stratum(inst, args.dual_stratum, limit=1)
        if not pts:
            raise CommandError(f"no hyperplane of dual stratum {args.dual_stratum}")
        phi = list(pts[0])
    return "gm", files.dumps_gm(build_gm(inst, phi))


def cmd_classify(args):
    gm = _load_gm(args)
    F = gm.field
    if args.table != "auto" and {"threefold": 3, "fivefold": 5}[args.table] != gm.n:
        raise CommandError(f"the GM data has n = {gm.n}, not a {args.table}")
    rows = []
    for v in projective.points_range(F.p, 5, 0, projective.count(F.p, 5)).tolist():
        c = rho1_fiber_classify(gm, v)
        rows.append([" ".join(map(str, v)), c.stratum, "" if c.sigma1 is None else int(c.sigma1),
                     c.label, c.corank, c.rationality, int(c.consistent)])
    header = ["point", "stratum", "sigma1", "label", "corank", "rationality", "matches_prediction"]
    if args.format == "csv":
        return "csv", _rows_csv(header, rows)
    return "json", {"n": gm.n, "columns": header, "rows": rows}


def cmd_double_cover(args):
    gm = _load_gm(args)
    F = gm.field
    base = _base_space(gm)
    pts = [_vector(F, args.v)] if args.v else [p for p in points_with_stratum(gm.lag, 2, limit=4 * args.points)
                                              if not F.is_zero(gm.split(p)[0])][: args.points]
    out = []
    for v in pts:
        ts = double_cover_fiber(gm, base["rows"], v)
        G = ts.field
        out.append({
            "v": _fmt(F, v),
            "kind": ts.kind,
            "field": G.spec(),
            "spaces": [[[G.format(x) for x in r] for r in sp.space.rows()] for sp in ts.spaces],
        })
    return "json", {"n": gm.n, "base": base["kind"], "base_sigma": _fmt(F, base["sigma"]), "fibers": out}


def cmd_splitting_section(args):
    gm = _load_gm(args)
    if gm.n != 3:
        raise CommandError("splitting sections are defined for threefolds")
    F = gm.field
    base = _base_space(gm)
    out = []
    for v in slice_points(gm, 2):
        why = admissibility(gm, base["sigma"], v)
        row = {"v": _fmt(F, v), "excluded": why}
        if why is None:
            s = splitting_section(gm, base["L0"], base["sigma"], v)
            row.update(dim=s.space.dim, contains_L0=s.contains_L0, isotropic=s.isotropic)
        out.append(row)
    return "json", {"sigma_L0": _fmt(F, base["sigma"]), "points": out}


def cmd_cycle_check(args):
    gm = _load_gm(args)
    F = gm.field
    base = _base_space(gm)
    if gm.n == 3:
        cands = [v for v in slice_points(gm, 2) if admissibility(gm, base["sigma"], v) is None]
    else:
        cands = split_points(gm, base["rows"], slice_points(gm, 2))
    order = make_rng(args.seed).permutation(len(cands)).tolist()
    chosen = [cands[i] for i in order[: args.points]]
    reports = []
    for v in chosen:
        if gm.n == 3:
            r = cycle_decomposition_check(gm, base["L0"], v, base["sigma"])
        else:
            r = cycle_decomposition_check(gm, base["rows"], v, sheet=0)
        reports.append(r.to_json())
    return "json", {"n": gm.n, "candidates": len(cands), "checked": len(reports),
                    "all_ok": all(r["ok"] for r in reports), "base_sigma": _fmt(F, base["sigma"]),
                    "reports": reports}


def cmd_line_transform(args):
    inst = _load_instance(args)
    F = inst.field
    if args.v1 and args.v5:
        lt = line_transform_data(inst, _vector(F, args.v1), _vector(F, args.v5))
    else:
        lt = line_transform_fixture(F.p, inst.provenance.get("seed", 0)) if F.kind == "prime" else None
        if lt is None or lt.A.A != inst.A:
            raise CommandError("pass --v1 and --v5, or use an instance generated by gen-lagrangian")
    out = lt.to_json()
    d = lt.dual().dual()
    out["involution"] = d.A.A == lt.A.A and d.L0 == lt.L0
    return "json", out


def cmd_hilbert(args):
    H = hilbert_polynomial(args.hyperplanes, args.quadrics, args.t_max)
    return "json", H.to_json()


def cmd_verify(args):
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = verify_suite(args.level, only)
    payload = {"level": args.level, "all_pass": all(r.ok for r in results),
               "criteria": [r.to_json(args.timing) for r in results],
               "lines": [r.line(args.level) for r in results]}
    return "json", payload


COMMANDS = {
    "gen-lagrangian": cmd_gen_lagrangian,
    "stratify": cmd_stratify,
    "dual-stratify": cmd_dual_stratify,
    "sextic-line": cmd_sextic_line,
    "build-gm": cmd_build_gm,
    "classify-fibers": cmd_classify,
    "double-cover-fiber": cmd_double_cover,
    "splitting-section": cmd_splitting_section,
    "cycle-check": cmd_cycle_check,
    "line-transform": cmd_line_transform,
    "hilbert": cmd_hilbert,
    "verify": cmd_verify,
}


# -- parser ---------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    common.add_argument("--prime", type=int, default=None)
    common.add_argument("--field", default=None, help='field spec such as "F7", "F49" or "rationals"')

    p = argparse.ArgumentParser(prog="epwkit", description="EPW strata, GM data and their fibers over exact fields.")
    p.add_argument("--version", action="version", version=f"epwkit {tool_version()}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen-lagrangian", parents=[common], help="random Lagrangian instance (.lag)")
    s.add_argument("--ndv-effort", type=int, default=1, choices=(0, 1, 2))
    s.add_argument("--ndv-sample", type=int, default=20000)

    for name in ("stratify", "dual-stratify"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--instance", required=True)
        s.add_argument("--witness-cap", type=int, default=32)

    s = sub.add_parser("sextic-line", parents=[common])
    s.add_argument("--instance", required=True)
    s.add_argument("--v0")
    s.add_argument("--v1")
    s.add_argument("--allow-extension", action="store_true")

    s = sub.add_parser("build-gm", parents=[common], help="GM data for a hyperplane (.gm)")
    s.add_argument("--instance")
    s.add_argument("--v5", help="covector whose kernel is V5")
    s.add_argument("--dual-stratum", type=int, default=2)
    s.add_argument("--scenario", choices=("threefold", "fivefold"))

    s = sub.add_parser("classify-fibers", parents=[common])
    s.add_argument("--gm", required=True)
    s.add_argument("--table", choices=("auto", "threefold", "fivefold"), default="auto")

    s = sub.add_parser("double-cover-fiber", parents=[common])
    s.add_argument("--gm", required=True)
    s.add_argument("--v")
    s.add_argument("--points", type=int, default=5)

    s = sub.add_parser("splitting-section", parents=[common])
    s.add_argument("--gm", required=True)

    s = sub.add_parser("cycle-check", parents=[common])
    s.add_argument("--gm", required=True)
    s.add_argument("--points", type=int, default=10)

    s = sub.add_parser("line-transform", parents=[common])
    s.add_argument("--instance", required=True)
    s.add_argument("--v1")
    s.add_argument("--v5")

    s = sub.add_parser("hilbert", parents=[common], help="Hilbert data of linear and quadric sections of the Grassmannian cone")
    s.add_argument("--hyperplanes", type=int, default=5)
    s.add_argument("--quadrics", type=int, default=0)
    s.add_argument("--t-max", type=int, default=6)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance battery")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    s.add_argument("--only", help="comma-separated criterion ids")
    return p


def _expand_groups(argv: list) -> list:
    if len(argv) >= 2 and argv[0] in GROUPS and argv[1] in GROUPS[argv[0]]:
        return [GROUPS[argv[0]][argv[1]]] + argv[2:]
    return argv


_ECHO_SKIP = {"jobs", "out", "timing", "command", "format"}


def execute(argv: list) -> tuple[int, bytes, bytes]:
    """Run a command; returns (exit status, artifact bytes, error bytes)."""
    argv = _expand_groups(list(argv))
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        kind, payload = COMMANDS[args.command](args)
    except Exception as e:
        err = {
            "error": type(e).__name__,
            "message": str(e),
            "command": args.command,
            "replay": shlex.join(["epwkit"] + argv),
        }
        return 1, b"", (json.dumps(err, sort_keys=True) + "\n").encode()
    if kind in ("lag", "gm", "csv"):
        return 0, payload.encode(), b""
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _ECHO_SKIP}
    report = {"tool": "epwkit", "version": tool_version(), "command": args.command, "config": config, "result": payload}
    if args.timing:
        report["elapsed_seconds"] = round(time.perf_counter() - t0, 3)
    return 0, (json.dumps(report, indent=1, sort_keys=True) + "\n").encode(), b""


def run_to_bytes(argv: list) -> bytes:
    return execute(argv)[1]


def determinism_commands(workdir: Path) -> list:
    """Every command on small fixtures, for the --jobs determinism check."""
    lag, g3, g5 = str(workdir / "a.lag"), str(workdir / "x3.gm"), str(workdir / "x5.gm")
    setup = [
        (lag, ["gen-lagrangian", "--prime", "7", "--seed", "0", "--ndv-sample", "2000"]),
        (g3, ["build-gm", "--scenario", "threefold", "--prime", "7"]),
        (g5, ["build-gm", "--scenario", "fivefold", "--prime", "7"]),
    ]
    for path, argv in setup:
        status, data, err = execute(argv)
        if status:
            raise CommandError(err.decode())
        Path(path).write_bytes(data)
    return [
        ("gen-lagrangian", setup[0][1]),
        ("build-gm", setup[1][1]),
        ("stratify", ["stratify", "--instance", lag]),
        ("dual-stratify", ["dual-stratify", "--instance", lag]),
        ("sextic-line", ["sextic-line", "--instance", lag, "--seed", "3", "--allow-extension"]),
        ("classify-fibers", ["classify-fibers", "--gm", g3, "--format", "csv"]),
        ("double-cover-fiber", ["double-cover-fiber", "--gm", g3, "--points", "3"]),
        ("splitting-section", ["splitting-section", "--gm", g3]),
        ("cycle-check", ["cycle-check", "--gm", g3, "--points", "2", "--seed", "3"]),
        ("cycle-check-fivefold", ["cycle-check", "--gm", g5, "--points", "1"]),
        ("line-transform", ["line-transform", "--instance", lag]),
        ("hilbert", ["hilbert", "--hyperplanes", "8", "--quadrics", "1"]),
    ]


def determinism_check() -> dict:
    out = {}
    with tempfile.TemporaryDirectory() as d:
        for name, argv in determinism_commands(Path(d)):
            a = execute(argv + ["--jobs", "1"])
            b = execute(argv + ["--jobs", "2"])
            out[name] = a == b and a[0] == 0
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    status, data, err = execute(argv)
    if err:
        sys.stderr.write(err.decode())
    if status == 0:
        out = build_parser().parse_args(_expand_groups(argv)).out
        if out:
            Path(out).write_bytes(data)
        else:
            sys.stdout.write(data.decode())
    return status


if __name__ == "__main__":
    sys.exit(main())
