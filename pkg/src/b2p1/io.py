"""Run configuration, snapshots, CSV tables and run manifests.

Config files are line based::

    [grid]
    nx = 64        # comments run to end of line
    ...

Every error names the offending line.  Snapshots are an ASCII header followed
by little-endian float64 payload (eta then f, x index fastest) guarded by a
CRC-32 checksum.
"""
from __future__ import annotations

import hashlib
import io as _io
import json
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bathymetry import Bathymetry
from .errors import (BadMagic, ChecksumMismatch, ConfigError, ConfigTypeError, MissingKey,
                     SnapshotError, TruncatedPayload, UnknownKey)
from .grid import Grid2D
from .params import Regime, SmallParams, validate_regime

FORMAT_VERSION = 1
SNAP_MAGIC = "B2P1SNAP"

REQUIRED = object()


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def _floats(text):
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


def _tuples(n, conv):
    """``a:b:c, d:e:f`` -> ((a, b, c), (d, e, f)) with ``n`` fields each."""

    def parse(text):
        out = []
        for item in text.replace(";", ",").split(","):
            if not item.strip():
                continue
            parts = [v.strip() for v in item.split(":")]
            if len(parts) not in n:
                raise ValueError(item)
            out.append(tuple(c(v) for c, v in zip(conv, parts)))
        return tuple(out)

    return parse


def _choice(*options):
    def parse(text):
        t = text.strip()
        if t not in options:
            raise ValueError(t)
        return t

    parse.__name__ = "one of " + "|".join(options)
    return parse


_MODE = _tuples((2, 3, 4, 5), (int, int, float, float, int))

# section -> key -> (converter, default)
SCHEMA = {
    "grid": {"nx": (int, REQUIRED), "ny": (int, REQUIRED), "Lx": (float, REQUIRED),
             "Ly": (float, REQUIRED)},
    "params": {"alpha": (float, REQUIRED), "beta": (float, REQUIRED),
               "gamma": (float, REQUIRED), "delta": (float, REQUIRED), "tau": (float, 0.0)},
    "regime": {"case": (str, REQUIRED), "formulation": (_choice("pair", "scalar"), "pair"),
               "st_mode": (_choice("approx", "exact"), "approx"),
               "form": (_choice("consistent", "printed"), "consistent")},
    "bathymetry": {"kind": (_choice("flat", "tent", "piecewise", "trig"), "flat"),
                   "h0": (float, 1.0), "amp": (float, 1.0), "center": (float, 0.5),
                   "base": (float, 0.0), "points": (_tuples((2,), (float, float)), ()),
                   "terms": (_tuples((4,), (int, int, float, float)), ())},
    "initial": {"kind": (_choice("rest", "gaussian", "plane-wave", "soliton-line", "file"),
                         "gaussian"),
                "amp": (float, 0.1), "x0": (float, 0.5), "y0": (float, 0.5),
                "width": (float, 1.0), "modes": (_MODE, ((1, 0, 1.0, 0.0, 1),)),
                "path": (str, ""), "noise": (float, 0.0)},
    "time": {"dt": (float, None), "t_end": (float, REQUIRED), "snapshot_every": (int, 0),
             "courant": (float, 0.5), "filter": (float, 0.0), "picard_tol": (float, 1e-12)},
    "output": {"dir": (str, "out"), "csv": (_bool, True), "snapshots": (_bool, True)},
    "sweep": {"quantity": (_choice("cross-check", "surface-tension", "potential-laplace",
                                   "potential-bottom", "cascade"), "cross-check"),
              "eps": (_floats, (0.2, 0.1, 0.05))},
    "perturb": {"t": (float, 0.0), "on_resonance": (_choice("error", "secular"), "error")},
    "potential": {"M": (int, 1), "z_samples": (int, 5)},
}

REQUIRED_SECTIONS = ("grid", "params", "regime", "time")


@dataclass
class RunConfig:
    sections: dict
    warnings: list = field(default_factory=list)
    text: str = ""
    lines: dict = field(default_factory=dict)  # (section, key) -> line number

    def __getitem__(self, section):
        return self.sections[section]

    def get(self, section, key):
        return self.sections[section][key]

    @property
    def params(self) -> SmallParams:
        return SmallParams(**self.sections["params"])

    @property
    def regime(self) -> Regime:
        return Regime.parse(self.sections["regime"]["case"])

    @property
    def grid(self) -> Grid2D:
        g = self.sections["grid"]
        return Grid2D(g["nx"], g["ny"], g["Lx"], g["Ly"])

    @property
    def bathymetry(self) -> Bathymetry:
        b = self.sections["bathymetry"]
        kind = b["kind"]
        if kind == "flat":
            return Bathymetry.flat(b["h0"])
        if kind == "tent":
            return Bathymetry.tent(b["amp"], b["center"], b["base"])
        if kind == "piecewise":
            return Bathymetry.piecewise(b["points"])
        return Bathymetry.trig(b["terms"], h0=b["h0"])

    def with_overrides(self, **kv) -> "RunConfig":
        """Copy with ``section__key=value`` overrides (used by sweeps and CLI flags)."""
        secs = {s: dict(v) for s, v in self.sections.items()}
        for k, v in kv.items():
            s, key = k.split("__", 1)
            secs[s][key] = v
        return RunConfig(secs, list(self.warnings), self.text, dict(self.lines))

    def canonical(self) -> str:
        """Deterministic echo of the resolved configuration."""
        out = []
        for s in SCHEMA:
            if s not in self.sections:
                continue
            out.append(f"[{s}]")
            for k in SCHEMA[s]:
                out.append(f"{k} = {_fmt(self.sections[s][k])}")
            out.append("")
        return "\n".join(out)


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        if v and isinstance(v[0], tuple):
            return ", ".join(":".join(_fmt(x) for x in t) for t in v)
        return ", ".join(_fmt(x) for x in v)
    return "" if v is None else str(v)


def parse_config(text: str, *, require=REQUIRED_SECTIONS) -> RunConfig:
    """Parse and validate; regime diagnostics are attached as warnings."""
    raw: dict = {}
    lines: dict = {}
    section = None
    header_line = {}
    for no, line in enumerate(text.splitlines(), start=1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        if s.startswith("["):
            if not s.endswith("]"):
                raise ConfigError(f"malformed section header {s!r}", no)
            section = s[1:-1].strip()
            if section not in SCHEMA:
                raise UnknownKey(f"unknown section [{section}]", no, section)
            if section in raw:
                raise ConfigError(f"duplicate section [{section}]", no, section)
            raw[section] = {}
            header_line[section] = no
            continue
        if "=" not in s:
            raise ConfigError(f"expected 'key = value', got {s!r}", no)
        if section is None:
            raise ConfigError("key outside any [section]", no)
        key, value = (t.strip() for t in s.split("=", 1))
        if key not in SCHEMA[section]:
            raise UnknownKey(f"unknown key {key!r} in [{section}]", no, key)
        if key in raw[section]:
            raise ConfigError(f"duplicate key {key!r} in [{section}]", no, key)
        conv = SCHEMA[section][key][0]
        try:
            raw[section][key] = conv(value)
        except (TypeError, ValueError):
            name = getattr(conv, "__name__", "value")
            raise ConfigTypeError(f"key {key!r} expects {name}, got {value!r}", no, key) from None
        lines[(section, key)] = no
    end = len(text.splitlines()) + 1
    for s in require:
        if s not in raw:
            first = next(k for k, (_, d) in SCHEMA[s].items() if d is REQUIRED)
            raise MissingKey(f"missing section [{s}] (needs {first!r})", end, first)
    sections = {}
    for s, keys in SCHEMA.items():
        given = raw.get(s, {})
        out = {}
        for k, (_, default) in keys.items():
            if k in given:
                out[k] = given[k]
            elif default is REQUIRED:
                if s in raw or s in require:
                    raise MissingKey(f"missing key {k!r} in [{s}]", header_line.get(s, end), k)
                out[k] = None
            else:
                out[k] = default
        sections[s] = out
    cfg = RunConfig(sections, [], text, lines)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    from .errors import B2P1Error

    def at(section, key):
        return cfg.lines.get((section, key))

    try:
        p = cfg.params
    except B2P1Error as e:
        raise ConfigTypeError(str(e), at("params", "beta"), "params") from None
    try:
        r = cfg.regime
    except B2P1Error as e:
        raise ConfigTypeError(str(e), at("regime", "case"), "case") from None
    try:
        cfg.grid
    except (B2P1Error, ValueError) as e:
        raise ConfigTypeError(str(e), at("grid", "nx"), "grid") from None
    try:
        cfg.bathymetry
    except B2P1Error as e:
        raise ConfigTypeError(str(e), at("bathymetry", "kind"), "bathymetry") from None
    from .dynamics import short_wave_warnings

    cfg.warnings.extend(short_wave_warnings(cfg.grid, p))
    try:
        cfg.warnings.extend(validate_regime(p, r).warnings)
    except B2P1Error as e:
        raise ConfigTypeError(str(e), at("params", "alpha"), "params") from None


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


# -- snapshots -----------------------------------------------------------------

def write_snapshot(eta: np.ndarray, f: np.ndarray, meta: dict) -> bytes:
    """``meta`` needs nx, ny, Lx, Ly, t; fields are stored as given (ny, nx)."""
    eta = np.asarray(eta, dtype="<f8")
    f = np.asarray(f, dtype="<f8")
    ny, nx = int(meta["ny"]), int(meta["nx"])
    if eta.shape != (ny, nx) or f.shape != (ny, nx):
        raise SnapshotError(f"field shapes {eta.shape}, {f.shape} do not match ({ny}, {nx})")
    payload = np.ascontiguousarray(eta).tobytes() + np.ascontiguousarray(f).tobytes()
    head = [f"{SNAP_MAGIC} {FORMAT_VERSION}", f"nx={nx}", f"ny={ny}",
            f"Lx={float(meta['Lx'])!r}", f"Ly={float(meta['Ly'])!r}", f"t={float(meta['t'])!r}",
            "fields=eta,f", f"checksum={zlib.crc32(payload):08x}", ""]
    return ("\n".join(head) + "\n").encode("ascii") + payload


def read_snapshot(data: bytes):
    """Inverse of :func:`write_snapshot`: returns ``(eta, f, meta)``."""
    first = data.split(b"\n", 1)[0]
    if first != f"{SNAP_MAGIC} {FORMAT_VERSION}".encode():
        raise BadMagic(f"not a snapshot (first line {first[:32]!r})")
    sep = data.find(b"\n\n")
    if sep < 0:
        raise TruncatedPayload("snapshot header is not terminated")
    meta = {}
    for line in data[:sep].decode("ascii").split("\n")[1:]:
        k, _, v = line.partition("=")
        meta[k] = v
    try:
        nx, ny = int(meta["nx"]), int(meta["ny"])
        out = {"nx": nx, "ny": ny, "Lx": float(meta["Lx"]), "Ly": float(meta["Ly"]),
               "t": float(meta["t"]), "fields": meta["fields"].split(",")}
        checksum = int(meta["checksum"], 16)
    except (KeyError, ValueError) as e:
        raise SnapshotError(f"bad snapshot header: {e}") from None
    payload = data[sep + 2:]
    need = 2 * nx * ny * 8
    if len(payload) != need:
        raise TruncatedPayload(f"payload has {len(payload)} bytes, expected {need}")
    if zlib.crc32(payload) != checksum:
        raise ChecksumMismatch(f"crc32 {zlib.crc32(payload):08x} != header {checksum:08x}")
    arr = np.frombuffer(payload, dtype="<f8").reshape(2, ny, nx)
    return arr[0].astype(np.float64), arr[1].astype(np.float64), out


def save_snapshot(path, state) -> Path:
    g = state.grid
    second = state.f if hasattr(state, "f") else state.w
    path = Path(path)
    path.write_bytes(write_snapshot(state.eta, second,
                                    {"nx": g.nx, "ny": g.ny, "Lx": g.Lx, "Ly": g.Ly,
                                     "t": state.t}))
    return path


# -- CSV and manifest ----------------------------------------------------------

def _cell(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def csv_text(header, rows) -> str:
    buf = _io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_cell(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.write_bytes(csv_text(header, rows).encode("utf-8"))
    return path


def content_hash(*blobs: bytes) -> str:
    """Git-style blob hash over the concatenated inputs."""
    data = b"".join(blobs)
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def write_manifest(path, cfg: RunConfig | None, subcommand: str, wall_time: float,
                   extra: dict | None = None, arguments: str = "") -> Path:
    echo = cfg.canonical() if cfg is not None else ""
    doc = {
        "format_version": FORMAT_VERSION,
        "subcommand": subcommand,
        "arguments": arguments,
        "input_hash": content_hash(echo.encode("utf-8"), subcommand.encode(),
                                   arguments.encode("utf-8")),
        "wall_time_s": round(wall_time, 6),
        "warnings": list(cfg.warnings) if cfg is not None else [],
        "config": echo,
    }
    if extra:
        doc.update(extra)
    path = Path(path)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return path
