"""Command-line front end.

    zmcrot verify    --example ex3.4
    zmcrot verify    --kind M1 --b 2 --family quadratic --l0 1 --mu0 2
    zmcrot gallery   --out gallery/
    zmcrot integrate --example ex3.5 --length 1 --out curve.csv
    zmcrot export    --example ex3.4 --format obj --out ex34.obj

Exit codes: 0 success / pass, 1 verification failure or integration error,
2 configuration, domain or IO error.  ``ZMCROT_SEED`` seeds the randomized
Codazzi sampling.  ``--config file.json`` supplies defaults for any flag;
flags given on the command line win.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import catalog
from .errors import (
    BadParameter,
    DomainViolation,
    NoSolution,
    OutOfDomain,
    PartialIntegration,
    ZmcError,
)
from .ode_integrate import DEFAULT_TOL, branch_first_order, integrate_profile, unit_start
from .profiles import (
    TAU_REG,
    Arcsine,
    Explicit,
    Hyperbolic,
    Power,
    Quadratic,
    make_profile,
    metric_factors,
    regularity_scan,
)
from .surface_geom import SurfaceFamily, eval_point
from .zmc_analysis import DEFAULT_THRESHOLDS, closed_form_membership, verify_surface

FAMILIES = ("quadratic", "arcsine", "hyperbolic", "power", "explicit")
COORDS = ("x1", "x2", "x3", "x4")


class UsageError(Exception):
    """Bad configuration; reported with exit code 2."""


# ---------------------------------------------------------------------------
# argument handling


def _pair(text):
    if isinstance(text, (list, tuple)):
        vals = list(text)
    else:
        vals = str(text).split(",")
    if len(vals) != 2:
        raise UsageError(f"expected 'a,b', got {text!r}")
    try:
        return float(vals[0]), float(vals[1])
    except ValueError:
        raise UsageError(f"expected two numbers, got {text!r}") from None


def _floats(text, n):
    vals = list(text) if isinstance(text, (list, tuple)) else str(text).split(",")
    if len(vals) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(v) for v in vals)
    except ValueError:
        raise UsageError(f"expected numbers, got {text!r}") from None


def _add_surface_args(p):
    g = p.add_argument_group("surface")
    g.add_argument("--example", help=f"catalog entry: {', '.join(catalog.CATALOG_NAMES)}")
    g.add_argument("--kind", choices=("M1", "M2"))
    g.add_argument("--b", type=float)
    g.add_argument("--family", choices=FAMILIES)
    g.add_argument("--name", help="explicit curve name (family explicit)")
    g.add_argument("--l0", type=float, help="quadratic lambda0")
    g.add_argument("--mu0", type=float, help="quadratic mu0")
    g.add_argument("--a0", type=float)
    g.add_argument("--c0", type=float)
    g.add_argument("--d0", type=float)
    g.add_argument("--b0", type=float)
    g.add_argument("--branch", type=int, choices=(1, -1))
    g.add_argument("--radicand-sign", type=int, choices=(1, -1))
    g.add_argument("--eps-star", type=int, choices=(1, -1))
    g.add_argument("--a", type=float, help="vranceanu / explicit shape constant a")
    g.add_argument("--c", type=float, help="vranceanu / explicit shape constant c")
    g.add_argument("--domain", help="u-interval 'a,b'")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zmcrot", description="Rotational ZMC surfaces in E^4_2")
    ap.add_argument("--config", help="JSON file with default values for any flag")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify a surface and write a JSON report")
    _add_surface_args(v)
    v.add_argument("--samples", type=int)
    v.add_argument("--margin", type=float)
    v.add_argument("--tol", type=float, help="mean-curvature threshold (scaled)")
    v.add_argument("--out", help="report path (default: stdout)")
    v.add_argument("--format", choices=("json",))

    g = sub.add_parser("gallery", help="reports, meshes and a summary for every catalog entry")
    g.add_argument("--out", help="output directory")
    g.add_argument("--samples", type=int)
    g.add_argument("--grid", type=int, help="mesh nodes per direction")
    g.add_argument("--drop-coord", choices=COORDS)

    i = sub.add_parser("integrate", help="integrate the ZMC ODE from a start jet")
    _add_surface_args(i)
    i.add_argument("--method", choices=("second-order", "first-order"))
    i.add_argument("--u0", type=float, help="start parameter on the example curve")
    i.add_argument("--start", help="second-order: 'p,s,dp,ds'; first-order: 'p,s'")
    i.add_argument("--direction", type=int, choices=(1, -1))
    i.add_argument("--length", type=float)
    i.add_argument("--tol", type=float)
    i.add_argument("--max-step", type=float)
    i.add_argument("--a0-tilde", type=float)
    i.add_argument("--eps", type=int, choices=(1, -1))
    i.add_argument("--signs", help="signs of (dp, ds), e.g. '1,-1'")
    i.add_argument("--out", help="CSV of the integrated nodes")
    i.add_argument("--report", help="JSON report path (default: <out>.report.json or stdout)")

    e = sub.add_parser("export", help="export a (u, v) grid of the surface")
    _add_surface_args(e)
    e.add_argument("--nu", type=int)
    e.add_argument("--nv", type=int)
    e.add_argument("--v-range", help="v-interval 'a,b'")
    e.add_argument("--format", choices=("csv", "obj", "json"))
    e.add_argument("--drop-coord", choices=COORDS)
    e.add_argument("--out", help="output path (default: stdout)")
    return ap


DEFAULTS = {
    "samples": 200,
    "margin": 1e-3,
    "method": "second-order",
    "direction": 1,
    "length": 1.0,
    "tol": None,
    "max_step": 1e-2,
    "nu": 32,
    "nv": 32,
    "grid": 24,
    "format": None,
    "drop_coord": "x3",
    "signs": "1,1",
}


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge ``--config`` file values under the explicit flags."""
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        unknown = set(cfg) - set(vars(args))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    out = dict(DEFAULTS)
    out.update({k: v for k, v in cfg.items() if v is not None})
    out.update({k: v for k, v in vars(args).items() if v is not None})
    for key in ("samples", "nu", "nv", "grid"):
        if key in out and out[key] is not None and int(out[key]) < 2:
            raise UsageError(f"--{key} must be >= 2")
    for key in ("tol", "length", "max_step", "margin"):
        if out.get(key) is not None and not float(out[key]) > 0:
            raise UsageError(f"--{key.replace('_', '-')} must be positive")
    return out


def _seed() -> int:
    raw = os.environ.get("ZMCROT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"ZMCROT_SEED must be an integer, got {raw!r}") from None


def _family_from(cfg, kind, b):
    name = cfg.get("family")
    get = cfg.get
    if name == "quadratic":
        if get("l0") is None or get("mu0") is None:
            raise UsageError("quadratic needs --l0 and --mu0")
        return Quadratic(get("l0"), get("mu0"), get("branch", 1))
    if name == "arcsine":
        if get("a0") is None:
            raise UsageError("arcsine needs --a0")
        return Arcsine(get("a0"), b, get("c0", 0.0), get("branch", 1), get("eps_star", 1), kind)
    if name == "hyperbolic":
        if get("a0") is None or get("d0") is None:
            raise UsageError("hyperbolic needs --a0 and --d0")
        return Hyperbolic(get("a0"), b, get("d0"), get("branch", 1), get("radicand_sign", 1), kind)
    if name == "power":
        if get("b0") is None:
            raise UsageError("power needs --b0")
        return Power(get("b0"), b, get("branch", 1), kind)
    if name == "explicit":
        if get("name") is None:
            raise UsageError("explicit needs --name")
        return Explicit(get("name"), get("a", 1.0), get("c", 0.0))
    raise UsageError("give --example or --kind, --b and --family")


def resolve_surface(cfg):
    """Return ``(surface, family_descriptor, catalog_entry_or_None, surface_id)``."""
    domain = _pair(cfg["domain"]) if cfg.get("domain") is not None else None
    if cfg.get("example"):
        entry = catalog.get_example(cfg["example"], cfg.get("a", 1.0), cfg.get("c", 0.0))
        surface = entry.surface
        if domain is not None:
            surface = SurfaceFamily(surface.kind, surface.b, surface.profile.with_domain(domain))
        return surface, entry.family, entry, entry.name
    kind, b = cfg.get("kind"), cfg.get("b")
    if kind is None or b is None:
        raise UsageError("give --example or both --kind and --b")
    fam = _family_from(cfg, kind, b)
    surface = SurfaceFamily(kind, b, make_profile(fam, domain))
    sid = f"{kind}(b={b:g})/{cfg['family']}"
    return surface, (fam if not isinstance(fam, Explicit) else None), None, sid


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        with open(p, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_verify(cfg) -> int:
    surface, fam, entry, sid = resolve_surface(cfg)
    thresholds = dict(DEFAULT_THRESHOLDS)
    if cfg.get("tol") is not None:
        thresholds["mean_curvature_scaled"] = float(cfg["tol"])
    report = verify_surface(
        surface,
        samples=int(cfg["samples"]),
        margin=float(cfg["margin"]),
        thresholds=thresholds,
        surface_id=sid,
        primary_signs=entry.primary_signs if entry else None,
        rng=np.random.default_rng(_seed()),
    )
    if fam is not None and report.primary_piece is not None:
        lo, hi = report.pieces[report.primary_piece].interval
        try:
            m = closed_form_membership(surface.profile.with_domain((lo, hi)), fam)
            report.notes.append(f"closed-form membership residual vs {type(fam).__name__}: {m:.3e}")
        except DomainViolation as exc:
            report.notes.append(f"closed-form membership not evaluated: {exc}")
    _write_text(cfg.get("out"), _dumps(report.to_dict()))
    fmean = report.first_integral_mean
    print(
        f"{sid}: {report.verdict}  max|H|={report.max_mean_curvature:.3e}"
        + (f"  a0={fmean:.12g}" if fmean is not None else ""),
        file=sys.stderr,
    )
    return 0 if report.passed else 1


def _grid_nodes(surface, domain, nu, nv, v_range):
    us = np.linspace(domain[0], domain[1], nu)
    vs = np.linspace(v_range[0], v_range[1], nv)
    return us, vs


def _singular_nodes(surface, us):
    with np.errstate(all="ignore"):
        sp2, q2 = metric_factors(surface.kind, surface.b, surface.profile.jet_unchecked(us))
    bad = ~(np.isfinite(sp2) & np.isfinite(q2)) | (np.abs(sp2) <= TAU_REG) | (np.abs(q2) <= TAU_REG)
    return us[bad]


def _default_window(surface, entry, margin=1e-3):
    """Primary regular piece, pulled in by ``margin`` of its length."""
    pieces = regularity_scan(surface, surface.profile.domain)
    if not pieces:
        raise UsageError("no regular subinterval in the profile domain")
    idx = 0
    if entry is not None:
        for k, pc in enumerate(pieces):
            if (pc.eps, pc.eps_star) == tuple(entry.primary_signs):
                idx = k
                break
    else:
        idx = max(range(len(pieces)), key=lambda k: pieces[k].interval[1] - pieces[k].interval[0])
    lo, hi = pieces[idx].interval
    d = (hi - lo) * margin
    return lo + d, hi - d


def render_csv(us, vs, pts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["u", "v", "x1", "x2", "x3", "x4"])
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            w.writerow([repr(float(u)), repr(float(v))] + [repr(float(x)) for x in pts[i, j]])
    return buf.getvalue()


def render_obj(us, vs, pts, drop="x3") -> str:
    keep = [k for k in range(4) if COORDS[k] != drop]
    nu, nv = len(us), len(vs)
    lines = [f"# zmcrot mesh {nu}x{nv}, coordinate {drop} dropped"]
    for i in range(nu):
        for j in range(nv):
            lines.append("v " + " ".join(repr(float(pts[i, j, k])) for k in keep))
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b, c, d = a + 1, a + nv, a + nv + 1
            lines.append(f"f {a} {c} {d}")
            lines.append(f"f {a} {d} {b}")
    return "\n".join(lines) + "\n"


def render_grid_json(us, vs, pts) -> str:
    return _dumps({"u": us.tolist(), "v": vs.tolist(), "points": pts.reshape(-1, 4).tolist()})


def _v_range(cfg, kind):
    if cfg.get("v_range") is not None:
        return _pair(cfg["v_range"])
    return (-1.0, 1.0) if kind == "M1" else (0.0, 2 * math.pi)


def export_mesh(surface, domain, nu, nv, v_range, fmt, drop="x3") -> str:
    us, vs = _grid_nodes(surface, domain, nu, nv, v_range)
    bad = _singular_nodes(surface, us)
    if bad.size:
        listing = ", ".join(f"u={float(u)!r}" for u in bad[:20])
        raise UsageError(f"grid touches the singular locus at {bad.size} u-value(s): {listing}")
    U, V = np.meshgrid(us, vs, indexing="ij")
    pts = eval_point(surface, U, V)
    if fmt == "csv":
        return render_csv(us, vs, pts)
    if fmt == "obj":
        return render_obj(us, vs, pts, drop)
    return render_grid_json(us, vs, pts)


def cmd_export(cfg) -> int:
    surface, _, entry, _ = resolve_surface(cfg)
    if cfg.get("domain") is not None:
        domain = _pair(cfg["domain"])
    else:
        domain = _default_window(surface, entry)
    fmt = cfg.get("format") or "csv"
    text = export_mesh(
        surface, domain, int(cfg["nu"]), int(cfg["nv"]), _v_range(cfg, surface.kind), fmt,
        cfg["drop_coord"],
    )
    _write_text(cfg.get("out"), text)
    return 0


def cmd_gallery(cfg) -> int:
    out = Path(cfg.get("out") or "gallery")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create {out}: {exc}") from None
    rows, ok = [], True
    for name, entry in catalog.CATALOG.items():
        rep = verify_surface(
            entry.surface,
            samples=int(cfg["samples"]),
            surface_id=name,
            primary_signs=entry.primary_signs,
            rng=np.random.default_rng(_seed()),
        )
        _write_text(out / f"{name}.json", _dumps(rep.to_dict()))
        window = _default_window(entry.surface, entry, margin=0.02)
        grid = int(cfg["grid"])
        mesh = export_mesh(entry.surface, window, grid, grid, _v_range({}, entry.kind), "obj",
                           cfg["drop_coord"])
        _write_text(out / f"{name}.obj", mesh)
        prim = rep.pieces[rep.primary_piece]
        labels_ok = labels_match(rep, entry)
        ok &= rep.passed and labels_ok
        rows.append({
            "surface": name,
            "kind": entry.kind,
            "b": entry.b,
            "a0": rep.first_integral_mean,
            "eps": prim.eps,
            "eps_star": prim.eps_star,
            "causal": prim.label,
            "interval": list(prim.interval),
            "max_abs_H": rep.max_mean_curvature,
            "verdict": rep.verdict,
            "labels_match": labels_ok,
        })
    _write_text(out / "summary.json", _dumps(rows))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({**r, "interval": f"{r['interval'][0]!r};{r['interval'][1]!r}"})
    _write_text(out / "summary.csv", buf.getvalue())
    print(format_table(rows))
    return 0 if ok else 1


def labels_match(report, entry) -> bool:
    """Every regular piece inside an expected sub-window carries the expected label."""
    for (lo, hi), label in entry.labels:
        inside = [
            c for c in report.causal
            if c["interval"][0] >= lo - 1e-9 and c["interval"][1] <= hi + 1e-9
        ]
        if not inside or any(c["label"] != label for c in inside):
            return False
    return True


def format_table(rows) -> str:
    head = f"{'surface':16s} {'kind':4s} {'b':>5s} {'a0':>10s} {'eps':>4s} {'eps*':>4s} {'causal':28s} {'max|H|':>9s} verdict"
    lines = [head, "-" * len(head)]
    for r in rows:
        a0 = "-" if r["a0"] is None else f"{r['a0']:.6g}"
        lines.append(
            f"{r['surface']:16s} {r['kind']:4s} {r['b']:5g} {a0:>10s} {r['eps']:4d} {r['eps_star']:4d} "
            f"{r['causal']:28s} {r['max_abs_H']:9.2e} {r['verdict']}"
        )
    return "\n".join(lines)


def cmd_integrate(cfg) -> int:
    method = cfg["method"]
    tol = float(cfg["tol"]) if cfg.get("tol") is not None else DEFAULT_TOL
    fam, entry = None, None
    if cfg.get("example"):
        surface, fam, entry, sid = resolve_surface(cfg)
        kind, b = surface.kind, surface.b
    else:
        kind, b = cfg.get("kind"), cfg.get("b")
        if kind is None or b is None:
            raise UsageError("give --example or both --kind and --b")
        if cfg.get("family"):
            fam = _family_from(cfg, kind, b)
            if isinstance(fam, Explicit):
                fam = None
        sid = f"{kind}(b={b:g})"

    if method == "second-order":
        if cfg.get("start") is not None:
            start = _floats(cfg["start"], 4)
        elif entry is not None:
            u0 = cfg.get("u0", entry.ode_start)
            start = unit_start(entry.surface.profile, u0)
        else:
            raise UsageError("second-order integration needs --start p,s,dp,ds or --example")
        run = lambda: integrate_profile(
            kind, b, start, int(cfg["direction"]), float(cfg["length"]), tol, float(cfg["max_step"])
        )
    else:
        for key in ("a0_tilde", "eps", "eps_star"):
            if cfg.get(key) is None:
                raise UsageError(f"first-order integration needs --{key.replace('_', '-')}")
        if cfg.get("start") is not None:
            start = _floats(cfg["start"], 2)
        elif entry is not None:
            j = entry.surface.profile.jet(cfg.get("u0", entry.ode_start))
            start = (j.p, j.s)
        else:
            raise UsageError("first-order integration needs --start p,s or --example")
        signs = tuple(int(s) for s in _floats(cfg["signs"], 2))
        run = lambda: branch_first_order(
            kind, b, float(cfg["a0_tilde"]), int(cfg["eps"]), int(cfg["eps_star"]), start, signs,
            float(cfg["length"]), tol, float(cfg["max_step"]),
        )

    status, code, message = "complete", 0, None
    try:
        result = run()
    except PartialIntegration as exc:
        result, status, code, message = exc.partial, type(exc).__name__, 1, str(exc)
        if result is None:
            raise
    except (NoSolution, ZmcError) as exc:
        if isinstance(exc, BadParameter):
            raise
        report = {"surface_id": sid, "method": method, "status": type(exc).__name__, "message": str(exc)}
        _write_text(_report_path(cfg), _dumps(report))
        print(f"{sid}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    membership = None
    if fam is not None:
        try:
            membership = closed_form_membership(result.curve, fam)
        except DomainViolation as exc:
            message = (message + "; " if message else "") + f"membership not evaluated: {exc}"
    report = {
        "surface_id": sid,
        "method": method,
        "status": status,
        "message": message,
        "family": repr(fam) if fam is not None else None,
        "membership_residual": membership,
        "arclength": result.final.u,
        "boundary": result.boundary,
        "nodes": len(result.curve.family.u),
        "accepted_steps": result.accepted_steps,
        "rejected_steps": result.rejected_steps,
        "max_speed_drift": result.max_speed_drift,
        "max_step_defect": result.max_step_defect,
        "first_integral_spread": result.first_integral_spread,
        "tol": tol,
    }
    if cfg.get("out"):
        f = result.curve.family
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u", "p", "s", "dp", "ds", "ddp", "dds"])
        for row in zip(f.u, f.p, f.s, f.dp, f.ds, f.ddp, f.dds):
            w.writerow([repr(float(x)) for x in row])
        _write_text(cfg["out"], buf.getvalue())
    _write_text(_report_path(cfg), _dumps(report))
    if membership is not None:
        print(f"{sid}: {status}, membership residual {membership:.3e}", file=sys.stderr)
    return code


def _report_path(cfg):
    if cfg.get("report"):
        return cfg["report"]
    if cfg.get("out"):
        return str(Path(cfg["out"]).with_suffix(".report.json"))
    return None


COMMANDS = {
    "verify": cmd_verify,
    "gallery": cmd_gallery,
    "integrate": cmd_integrate,
    "export": cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, BadParameter, OutOfDomain, DomainViolation) as exc:
        print(f"zmcrot: error: {exc}", file=sys.stderr)
        return 2
    except NoSolution as exc:
        # a family that cannot exist for these parameters is a configuration error
        print(f"zmcrot: error: no solution: {exc}", file=sys.stderr)
        return 2
    except ZmcError as exc:
        print(f"zmcrot: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
