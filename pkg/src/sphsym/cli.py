"""Command-line front end.

Every command prints a JSON summary, writes it to ``--out`` together with
any per-shell CSV, and records a ``manifest.json`` (command, configuration,
input hashes, library versions). Exit codes: 0 success, 2 invalid input,
3 a computed result falls outside its tolerance budget.
"""

from __future__ import annotations

import argparse
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import io as sio
from .profile import Profile
from .sets import CapFieldSet, ConstantDirection, MultiArcSet, VoxelSet, symmetral_from_profile

EXIT_OK, EXIT_INVALID, EXIT_BREACH = 0, 2, 3


class ToleranceBreach(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _versions() -> dict:
    import scipy
    import skimage

    return {
        "sphsym": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "scikit-image": skimage.__version__,
        "python": platform.python_version(),
    }


def _load_any(args):
    """Resolve --profile / --set / --input / --voxel into a profile or a set."""
    if getattr(args, "voxel", None):
        V = sio.read_voxel(args.voxel)
        if args.n is not None and V.n != args.n:
            raise ValueError(f"--n {args.n} but the raster is {V.n}-dimensional")
        return V
    for name in ("profile", "set", "input"):
        path = getattr(args, name, None)
        if path:
            d = sio.read_json(path)
            if "alpha" in d:
                return sio.profile_from_dict(d, args.grid)
            return sio.set_from_dict(d, Path(path).parent, args.grid)
    raise ValueError("no input given (use --profile, --set, --input or --voxel)")


def _as_profile(obj) -> Profile:
    if isinstance(obj, Profile):
        return obj
    if isinstance(obj, CapFieldSet):
        return obj.profile
    raise ValueError("this command needs a profile or a cap-field set")


def _as_set(obj):
    return symmetral_from_profile(obj) if isinstance(obj, Profile) else obj


def _inputs(args) -> dict:
    out = {}
    for name in ("profile", "set", "input", "voxel"):
        path = getattr(args, name, None)
        if path:
            out[name] = {"path": str(path), "sha256": sio.file_sha256(path)}
    return out


def _config(args) -> dict:
    skip = {"func"}
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def _finish(args, name: str, summary: dict, csvs: dict | None = None) -> dict:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sio.write_json(out / f"{name}.json", summary)
    for fname, (header, rows) in (csvs or {}).items():
        sio.write_csv(out / fname, header, rows)
    manifest = {
        "command": args.command,
        "config": _config(args),
        "inputs": _inputs(args),
        "outputs": sorted([f"{name}.json", *(csvs or {})]),
        "versions": _versions(),
    }
    sio.write_json(out / "manifest.json", manifest)
    sys.stdout.write(sio.dumps(summary))
    return summary


def _axes(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("--axes takes two 1-based axis numbers, e.g. 1,2") from None
    if a != 1 or b < 2:
        raise argparse.ArgumentTypeError("--axes must be 1,j with j >= 2 (the first axis is the symmetry axis)")
    return (a - 1, b - 1)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_symmetrize(args):
    from .symmetrize import circular_symmetrize, spherical_symmetrize

    obj = _load_any(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if isinstance(obj, VoxelSet):
        if args.circular:
            cp, Vl = circular_symmetrize(obj, args.axes, seed=args.seed)
            sio.write_voxel(out / ("symmetral.pgm" if obj.n == 2 else "symmetral.csv"), Vl)
            if obj.n == 2:
                sio.write_json(out / "profile.json", sio.profile_to_dict(cp.profile))
                summary = {"kind": "circular", "n": 2, "volume": Vl.volume(), "outputs": ["profile.json", "symmetral.pgm"]}
                return _finish(args, "symmetrize", summary)
            rows = [(float(z), float(r), float(l)) for z, row in zip(cp.xprime, cp.ell) for r, l in zip(cp.r, row)]
            summary = {
                "kind": "circular",
                "n": 3,
                "axes": [a + 1 for a in args.axes],
                "volume": Vl.volume(),
                "outputs": ["circular_profile.csv", "symmetral.csv"],
            }
            return _finish(args, "symmetrize", summary, {"circular_profile.csv": (["xprime", "r", "ell"], rows)})
        p, Fv = spherical_symmetrize(obj, seed=args.seed, shells=args.grid)
        from .sets import rasterize

        Vf = rasterize(Fv, obj.h, size=obj.shape[0])
        sio.write_voxel(out / ("symmetral.pgm" if obj.n == 2 else "symmetral.csv"), Vf)
        extra = ["symmetral.pgm" if obj.n == 2 else "symmetral.csv"]
    else:
        if args.circular:
            raise ValueError("--circular needs a voxel input")
        if isinstance(obj, MultiArcSet):
            p = obj.total_profile()
        else:
            p = _as_profile(obj)
        Fv = symmetral_from_profile(p)
        extra = []
    sio.write_json(out / "profile.json", sio.profile_to_dict(p))
    sio.write_json(out / "symmetral.json", sio.set_to_dict(Fv))
    r = p.grid.nodes
    rows = list(zip(r, p.alpha_at(r), p.v_at(r)))
    summary = {
        "kind": "spherical",
        "n": p.n,
        "window": [p.grid.r_min, p.grid.r_max],
        "alpha_min": float(np.min(p.alpha_nodes)),
        "alpha_max": float(np.max(p.alpha_nodes)),
        "volume": Fv.volume(),
        "outputs": ["profile.json", "symmetral.json", *extra, "profile.csv"],
    }
    return _finish(args, "symmetrize", summary, {"profile.csv": (["r", "alpha", "v"], rows)})


def cmd_perimeter(args):
    from .perimeter import perimeter_capfield, perimeter_circular_symmetral, perimeter_symmetral, perimeter_voxel

    obj = _load_any(args)
    csvs = {}
    if isinstance(obj, VoxelSet):
        if args.circular:
            from .symmetrize import circular_symmetrize

            cp, _ = circular_symmetrize(obj, args.axes, seed=args.seed)
            rep = perimeter_circular_symmetral(cp)
            summary = {"target": "circular_symmetral", **rep.to_dict()}
        else:
            total = perimeter_voxel(obj)
            from .perimeter import engine_budget

            summary = {"target": "voxel", "total": total, "engine": "voxel", "budget": engine_budget("voxel", total, obj.h)}
    elif isinstance(obj, Profile):
        rep = perimeter_symmetral(obj, args.interval)
        summary = {"target": "symmetral", **rep.to_dict()}
        header, rows = rep.per_shell_rows()
        if rows:
            csvs["perimeter_shells.csv"] = (header, rows)
    else:
        rep = perimeter_capfield(obj, args.interval, args.mesh, args.method)
        summary = {"target": "capfield", **rep.to_dict()}
        header, rows = rep.per_shell_rows()
        if rows:
            csvs["perimeter_shells.csv"] = (header, rows)
    return _finish(args, "perimeter", summary, csvs)


def cmd_check_inequality(args):
    from .perimeter import check_inequality

    obj = _as_set(_load_any(args))
    kw = {"seed": args.seed} if isinstance(obj, VoxelSet) else {}
    res = check_inequality(obj, None if isinstance(obj, VoxelSet) else args.interval, args.mesh, args.method, **kw)
    summary = res.to_dict()
    if args.budget is not None:
        summary["budget"] = args.budget
        summary["verdict"] = "holds" if res.slack >= -args.budget else "violated"
    _finish(args, "check_inequality", summary)
    if summary["verdict"] != "holds":
        raise ToleranceBreach(f"P(E) - P(F_v) = {res.slack:.3e} is below -budget = {-summary['budget']:.3e}")
    return summary


def cmd_rigidity(args):
    from .rigidity import classify

    p = _as_profile(_load_any(args))
    v = classify(p, lam=args.lam)
    summary = v.to_dict()
    if v.witness is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        sio.write_json(out / "witness.json", sio.set_to_dict(v.witness))
        summary["witness"] = "witness.json"
    return _finish(args, "rigidity", summary)


def cmd_counterexample(args):
    from .perimeter import check_inequality
    from .rigidity import classify, counterexample_cantor, counterexample_disconnect, counterexample_jump, orbit_distance

    p = _as_profile(_load_any(args))
    kind = args.kind
    r_bar = args.r
    if kind in ("jump", "disconnect") and r_bar is None:
        want = "jump" if kind == "jump" else "interval_violation"
        hits = [x for x in classify(p, witness=False).reasons if x.kind == want]
        if not hits:
            raise ValueError(f"profile has no {'jump' if kind == 'jump' else 'separating radius'}; pass --r")
        r_bar = hits[0].r
    if kind == "jump":
        E = counterexample_jump(p, r_bar, args.lam, args.gamma)
    elif kind == "disconnect":
        E = counterexample_disconnect(p, r_bar)
    else:
        E = counterexample_cantor(p, args.lam)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sio.write_json(out / "counterexample_set.json", sio.set_to_dict(E))
    res = check_inequality(E, None, args.mesh, args.method)
    budget = res.budget if args.budget is None else args.budget
    od = orbit_distance(E)
    summary = {
        "kind": kind,
        "r_bar": r_bar,
        "set": "counterexample_set.json",
        "P_E": res.P_E,
        "P_Fv": res.P_Fv,
        "difference": res.slack,
        "budget": budget,
        "engine": res.engine,
        "extremal": abs(res.slack) <= budget,
        "orbit_distance_bound": od.bound,
        "orbit_distance_estimate": od.estimate,
    }
    _finish(args, "counterexample", summary)
    if not summary["extremal"]:
        raise ToleranceBreach(f"|P(E) - P(F_v)| = {abs(res.slack):.3e} exceeds the budget {budget:.3e}")
    return summary


def cmd_equality_analyze(args):
    from .equality import direction_trace, verify_equality_conditions, verify_ode

    obj = _as_set(_load_any(args))
    scores = verify_equality_conditions(obj, args.interval)
    summary = {"equality_conditions": scores.to_dict()}
    tr = direction_trace(obj, args.interval)
    n = tr.n
    header = ["r", *(f"d{i + 1}" for i in range(n)), *(f"b{i + 1}" for i in range(n)), "ode_residual", "valid"]
    resid = np.full(len(tr.r), np.nan)
    if isinstance(obj, CapFieldSet):
        ode = verify_ode(obj, args.interval)
        summary["ode"] = ode.to_dict()
        idx = np.searchsorted(tr.r, ode.r)
        ok = (idx < len(tr.r)) & np.isclose(tr.r[np.minimum(idx, len(tr.r) - 1)], ode.r)
        resid[idx[ok]] = ode.residual[ok]
    summary["trace"] = {"oscillation": tr.oscillation(), "excluded_shells": tr.excluded, "shells": int(len(tr.r))}
    rows = [(float(r), *map(float, d), *map(float, b), float(e), int(v)) for r, d, b, e, v in zip(tr.r, tr.d, tr.b, resid, tr.valid)]
    return _finish(args, "equality_analysis", summary, {"direction_trace.csv": (header, rows)})


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _interval(text: str):
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("--interval takes two radii, e.g. 1,2") from None
    return (a, b)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=4096, help="shell count for expression profiles and voxel symmetrisation (default 4096)")
    common.add_argument("--mesh", type=int, default=512, help="boundary mesh resolution for n = 3 cap-field sets (default 512)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled shells (default 0)")
    common.add_argument("--out", default="sphsym-out", help="output directory (default sphsym-out)")
    common.add_argument("--n", type=int, default=None, help="expected dimension of a voxel input")
    common.add_argument("--method", default="auto", choices=["auto", "mesh", "semi-analytic", "steps"], help="n = 3 cap-field perimeter engine")
    common.add_argument("--interval", type=_interval, default=None, help="radial interval r0,r1 (default: whole window)")
    src = common.add_argument_group("inputs")
    src.add_argument("--profile", help="profile JSON")
    src.add_argument("--set", help="set-spec JSON")
    src.add_argument("--input", help="profile or set-spec JSON")
    src.add_argument("--voxel", help="raster (.pgm for n = 2, slice-stacked .csv for n = 3)")

    ap = argparse.ArgumentParser(prog="sphsym", description="Spherical symmetrisation, perimeter and rigidity toolkit.")
    ap.add_argument("--version", action="version", version=f"sphsym {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("symmetrize", parents=[common], help="profile and symmetral of a set")
    s.add_argument("--circular", action="store_true", help="circular instead of spherical symmetrisation")
    s.add_argument("--axes", type=_axes, default=(0, 1), help="1-based axes 1,j for circular symmetrisation (default 1,2)")
    s.set_defaults(func=cmd_symmetrize)

    s = sub.add_parser("perimeter", parents=[common], help="perimeter of a symmetral, cap-field set or raster")
    s.add_argument("--circular", action="store_true", help="perimeter of the circular symmetral of a raster")
    s.add_argument("--axes", type=_axes, default=(0, 1))
    s.set_defaults(func=cmd_perimeter)

    s = sub.add_parser("check-inequality", parents=[common], help="compare P(E) with P(F_v)")
    s.add_argument("--budget", type=float, default=None, help="override the absolute tolerance")
    s.set_defaults(func=cmd_check_inequality)

    s = sub.add_parser("rigidity", parents=[common], help="classify a profile and emit a witness when rigidity fails")
    s.add_argument("--lam", type=float, default=0.5, help="lambda for jump and Cantor witnesses (default 0.5)")
    s.set_defaults(func=cmd_rigidity)

    s = sub.add_parser("counterexample", parents=[common], help="build a non-rigid extremal")
    s.add_argument("--kind", required=True, choices=["jump", "disconnect", "cantor"])
    s.add_argument("--r", type=float, default=None, help="radius of the jump or separating point (default: first one found)")
    s.add_argument("--lam", type=float, default=0.5)
    s.add_argument("--gamma", type=float, default=None, help="rotation angle for --kind jump (default: half the bound)")
    s.add_argument("--budget", type=float, default=None, help="override the absolute tolerance")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("equality-analyze", parents=[common], help="direction trace, ODE residual and equality-case scores")
    s.set_defaults(func=cmd_equality_analyze)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except ToleranceBreach as exc:
        print(f"sphsym: tolerance breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except (ValueError, KeyError, FileNotFoundError, NotImplementedError) as exc:
        print(f"sphsym: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
