"""File formats: profile JSON, set-spec JSON, voxel rasters, CSV tables.

Profile JSON::

    {"n": 3, "grid": {"r_min": .., "r_max": .., "count": ..},
     "alpha": {"ac_samples": [..], "jumps": [{"r": .., "left": .., "right": ..}],
               "cantor": {"kind": "ternary_staircase", "depth": .., "support": [a, b], "scale": ..},
               "interp": "cubic"}}

``alpha.ac_samples`` may be replaced by ``alpha.ac_expr``, an expression in
``r`` evaluated with numpy (``np``, ``pi`` and the usual functions).

Set-spec JSON::

    {"profile": <profile dict or path>, "direction": {"kind": "constant" | "cantor_flow" | ...}}

or ``{"components": [set-spec, ...]}`` for a planar multi-arc set, or
``{"voxel": path, "h": ..}`` for a raster.

Voxel rasters: n = 2 as plain PGM (``P2``, maxval 1, rows run along the
second axis from its largest coordinate down, columns along the first axis)
with the spacing in a ``# h=`` comment; n = 3 as slice-stacked CSV, one
block per index of the third axis, rows along the first axis, columns along
the second, blocks separated by blank lines and headed by ``# h=<h> shape=a,b,c``.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .profile import Profile, RadialGrid, make_profile
from .sets import CapFieldSet, ConstantDirection, MultiArcSet, VoxelSet, direction_from_dict

FLOAT_FMT = "%.17g"

_EXPR_NAMES = {
    "np": np,
    "pi": math.pi,
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "clip": np.clip,
    "where": np.where,
    "minimum": np.minimum,
    "maximum": np.maximum,
    "arccos": np.arccos,
    "tanh": np.tanh,
}


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


def profile_to_dict(p: Profile) -> dict:
    a = p.alpha
    alpha = {
        "ac_samples": a.ac_values.tolist(),
        "jumps": [{"r": j.r, "left": j.left, "right": j.right} for j in a.jumps],
        "interp": a.interp,
    }
    if a.cantor is not None:
        alpha["cantor"] = a.cantor.to_dict()
    g = p.grid
    return {"n": p.n, "grid": {"r_min": g.r_min, "r_max": g.r_max, "count": int(g.count)}, "alpha": alpha}


def _ac_from_expr(expr: str, r: np.ndarray) -> np.ndarray:
    val = eval(expr, {"__builtins__": {}}, {**_EXPR_NAMES, "r": r})  # noqa: S307 - trusted local input
    return np.broadcast_to(np.asarray(val, dtype=float), r.shape).copy()


def profile_from_dict(d: dict, count: int | None = None) -> Profile:
    """Build a profile; ``count`` overrides the grid size when the samples come from an expression."""
    try:
        n = int(d["n"])
        gd = d["grid"]
        al = d["alpha"]
    except KeyError as exc:
        raise ValueError(f"profile JSON is missing the key {exc.args[0]!r}") from None
    if "ac_samples" in al:
        samples = np.asarray(al["ac_samples"], dtype=float)
        grid = RadialGrid(float(gd["r_min"]), float(gd["r_max"]), int(gd.get("count", len(samples))))
    elif "ac_expr" in al:
        grid = RadialGrid(float(gd["r_min"]), float(gd["r_max"]), int(count or gd.get("count", 4096)))
        samples = _ac_from_expr(al["ac_expr"], grid.nodes)
    else:
        raise ValueError("profile alpha needs 'ac_samples' or 'ac_expr'")
    return make_profile(n, grid, samples, al.get("jumps", ()), al.get("cantor"), al.get("interp", "cubic"))


def _resolve(ref, base: Path | None):
    if isinstance(ref, (str, Path)):
        path = Path(ref)
        if base is not None and not path.is_absolute():
            path = base / path
        return json.loads(path.read_text())
    return ref


def load_profile(path, count: int | None = None) -> Profile:
    return profile_from_dict(read_json(path), count)


# ---------------------------------------------------------------------------
# sets
# ---------------------------------------------------------------------------


def set_to_dict(s) -> dict:
    if isinstance(s, CapFieldSet):
        return s.to_dict()
    if isinstance(s, MultiArcSet):
        return {"components": [set_to_dict(c) for c in s.components]}
    raise TypeError(f"cannot serialise {type(s).__name__} as a set-spec")


def set_from_dict(d: dict, base: Path | None = None, count: int | None = None):
    if "components" in d:
        return MultiArcSet(tuple(set_from_dict(c, base, count) for c in d["components"]))
    if "voxel" in d:
        path = Path(d["voxel"])
        if base is not None and not path.is_absolute():
            path = base / path
        return read_voxel(path, h=d.get("h"))
    if "profile" not in d:
        raise ValueError("set-spec needs 'profile', 'components' or 'voxel'")
    p = profile_from_dict(_resolve(d["profile"], base), count)
    dd = d.get("direction")
    direction = ConstantDirection(p.n) if dd is None else direction_from_dict(dd, p)
    return CapFieldSet(p, direction)


def load_set(path, count: int | None = None):
    path = Path(path)
    if path.suffix.lower() in (".pgm", ".csv"):
        return read_voxel(path)
    return set_from_dict(read_json(path), path.parent, count)


# ---------------------------------------------------------------------------
# voxels
# ---------------------------------------------------------------------------


def write_pgm(path, V: VoxelSet) -> None:
    if V.n != 2:
        raise ValueError("PGM output is for n = 2 rasters")
    img = V.occupancy.astype(np.uint8).T[::-1]
    lines = ["P2", f"# h={V.h!r}", f"{img.shape[1]} {img.shape[0]}", "1"]
    lines += [" ".join(map(str, row)) for row in img]
    Path(path).write_text("\n".join(lines) + "\n")


def _header_h(comments: list[str]) -> float | None:
    for c in comments:
        for tok in c.replace("#", " ").split():
            if tok.startswith("h="):
                return float(tok[2:])
    return None


def read_pgm(path, h: float | None = None) -> VoxelSet:
    text = Path(path).read_text().splitlines()
    comments = [ln for ln in text if ln.lstrip().startswith("#")]
    toks = " ".join(ln.split("#")[0] for ln in text).split()
    if not toks or toks[0] != "P2":
        raise ValueError(f"{path}: expected a plain PGM ('P2') file")
    w, hgt, maxval = int(toks[1]), int(toks[2]), int(toks[3])
    data = np.array(toks[4 : 4 + w * hgt], dtype=float)
    if data.size != w * hgt:
        raise ValueError(f"{path}: expected {w * hgt} pixels, found {data.size}")
    img = data.reshape(hgt, w) > 0.5 * maxval
    h = h if h is not None else _header_h(comments)
    if h is None:
        raise ValueError(f"{path}: voxel spacing missing; add '# h=<value>' or pass h")
    return VoxelSet(img[::-1].T.copy(), float(h))


def write_voxel_csv(path, V: VoxelSet) -> None:
    if V.n != 3:
        raise ValueError("slice-stacked CSV is for n = 3 rasters")
    a, b, c = V.shape
    out = [f"# h={V.h!r} shape={a},{b},{c}"]
    occ = V.occupancy.astype(np.uint8)
    for k in range(c):
        out += [",".join(map(str, row)) for row in occ[:, :, k]]
        out.append("")
    Path(path).write_text("\n".join(out))


def read_voxel_csv(path, h: float | None = None) -> VoxelSet:
    lines = Path(path).read_text().splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    blocks, cur = [], []
    for ln in lines:
        if ln.startswith("#"):
            continue
        if not ln.strip():
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append([int(float(t)) for t in ln.split(",")])
    if cur:
        blocks.append(cur)
    if not blocks:
        raise ValueError(f"{path}: no voxel data")
    try:
        occ = np.stack([np.array(b, dtype=np.uint8) for b in blocks], axis=-1) > 0
    except ValueError:
        raise ValueError(f"{path}: slices have inconsistent shapes") from None
    h = h if h is not None else _header_h(comments)
    if h is None:
        raise ValueError(f"{path}: voxel spacing missing; add '# h=<value>' or pass h")
    return VoxelSet(occ, float(h))


def read_voxel(path, h: float | None = None) -> VoxelSet:
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return read_pgm(path, h)
    if path.suffix.lower() == ".csv":
        return read_voxel_csv(path, h)
    raise ValueError(f"{path}: voxel files must be .pgm (n = 2) or .csv (n = 3)")


def write_voxel(path, V: VoxelSet) -> None:
    (write_pgm if V.n == 2 else write_voxel_csv)(path, V)


# ---------------------------------------------------------------------------
# JSON and CSV
# ---------------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, non-finite as strings."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def write_csv(path, header, rows) -> None:
    """Numeric CSV with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([FLOAT_FMT % v if isinstance(v, (float, np.floating)) else v for v in row])


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
