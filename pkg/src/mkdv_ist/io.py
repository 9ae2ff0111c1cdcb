"""File formats: scattering data as JSON, profiles and logs as CSV.

Numbers are written with 17 significant digits so every double survives a
round trip exactly.  All writes go through a temporary file and a rename.
"""

import csv
import io
import json
import math
import os
import tempfile

import numpy as np

from .errors import InputError
from .scattering import DiscreteEigenpair, Kind, ScatteringData


def _num(v):
    v = float(v)
    if not math.isfinite(v):
        raise InputError(f"cannot serialize non-finite value {v}")
    return format(v, ".17g")


def _dump(obj):
    """Minimal JSON writer that keeps full float precision."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise InputError(f"cannot serialize {type(obj).__name__}")


def atomic_write(path, text):
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _plain(v):
    """Report values reduced to JSON-friendly types."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    return v


def scattering_to_dict(data: ScatteringData, report=True):
    out = {
        "grid": {"zmin": -float(data.zmax), "zmax": float(data.zmax), "n": int(data.r.size)},
        "r": [[float(v.real), float(v.imag)] for v in data.r],
        "solitons": [
            {"zeta": float(e.z.imag), "c_re": float(complex(e.c).real), "c_im": float(complex(e.c).imag)}
            for e in data.solitons
        ],
        "breathers": [
            {"xi": float(e.z.real), "eta": float(e.z.imag),
             "c_re": float(complex(e.c).real), "c_im": float(complex(e.c).imag)}
            for e in data.breathers
        ],
        "t": float(data.t),
    }
    if report and data.report:
        out["report"] = _plain(data.report)
    return out


def dumps_scattering(data: ScatteringData, report=True):
    return _dump(scattering_to_dict(data, report)) + "\n"


_TOP = {"grid", "r", "solitons", "breathers", "t", "report"}


def _get(d, key, where):
    if not isinstance(d, dict) or key not in d:
        raise InputError(f"missing key {key!r} in {where}")
    return d[key]


def _float(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"expected a number in {where}")
    return float(v)


def scattering_from_dict(d):
    if not isinstance(d, dict):
        raise InputError("scattering JSON must be an object")
    extra = set(d) - _TOP
    if extra:
        raise InputError(f"unknown keys {sorted(extra)}")
    grid = _get(d, "grid", "top level")
    zmin = _float(_get(grid, "zmin", "grid"), "grid.zmin")
    zmax = _float(_get(grid, "zmax", "grid"), "grid.zmax")
    n = _get(grid, "n", "grid")
    if isinstance(n, bool) or not isinstance(n, int):
        raise InputError("grid.n must be an integer")
    if zmin != -zmax or zmax <= 0:
        raise InputError("grid must be symmetric, zmin = -zmax < 0")
    rows = _get(d, "r", "top level")
    if not isinstance(rows, list) or len(rows) != n:
        raise InputError("r must hold grid.n [re, im] pairs")
    r = np.empty(n, complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 2:
            raise InputError(f"r[{i}] must be [re, im]")
        r[i] = complex(_float(row[0], "r"), _float(row[1], "r"))
    sol = []
    for e in _get(d, "solitons", "top level"):
        zeta = _float(_get(e, "zeta", "soliton"), "zeta")
        if zeta <= 0:
            raise InputError("soliton zeta must be positive")
        c = complex(_float(_get(e, "c_re", "soliton"), "c_re"), _float(_get(e, "c_im", "soliton"), "c_im"))
        sol.append(DiscreteEigenpair(complex(0.0, zeta), c, Kind.SOLITON))
    br = []
    for e in _get(d, "breathers", "top level"):
        xi = _float(_get(e, "xi", "breather"), "xi")
        eta = _float(_get(e, "eta", "breather"), "eta")
        if xi <= 0 or eta <= 0:
            raise InputError("breather representatives need xi > 0 and eta > 0")
        c = complex(_float(_get(e, "c_re", "breather"), "c_re"), _float(_get(e, "c_im", "breather"), "c_im"))
        br.append(DiscreteEigenpair(complex(xi, eta), c, Kind.BREATHER))
    t = _float(_get(d, "t", "top level"), "t")
    return ScatteringData(zmax, r, tuple(sol), tuple(br), t, dict(d.get("report", {})))


def loads_scattering(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    return scattering_from_dict(d)


def save_scattering(path, data: ScatteringData):
    atomic_write(path, dumps_scattering(data))


def load_scattering(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads_scattering(text)


# ---------------------------------------------------------------------------
# CSV


def dumps_csv(header, columns):
    cols = [np.asarray(c, dtype=float) for c in columns]
    if len({c.size for c in cols}) > 1:
        raise InputError("columns differ in length")
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(_num(v) for v in row))
    return "\n".join(lines) + "\n"


def save_profile(path, x, u):
    atomic_write(path, dumps_csv(("x", "u"), (x, u)))


def save_conserved_log(path, rows):
    rows = np.asarray(rows, dtype=float).reshape(-1, 3)
    atomic_write(path, dumps_csv(("t", "mass", "momentum"), rows.T))


def loads_csv(text, header):
    reader = csv.reader(io.StringIO(text))
    try:
        head = next(reader)
    except StopIteration:
        raise InputError("empty CSV") from None
    if [h.strip() for h in head] != list(header):
        raise InputError(f"CSV header must be {','.join(header)}")
    data = []
    for n, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise InputError(f"line {n}: expected {len(header)} fields")
        try:
            data.append([float(v) for v in row])
        except ValueError:
            raise InputError(f"line {n}: not a number") from None
    if not data:
        raise InputError("CSV has no data rows")
    arr = np.array(data)
    if not np.all(np.isfinite(arr)):
        raise InputError("CSV holds non-finite values")
    return tuple(arr.T)


def load_profile(path):
    try:
        with open(path, newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads_csv(text, ("x", "u"))
