"""Parameter sweeps, crossover searches and CSV output.

All schemes draw their inputs from one flat parameter namespace::

    n_sig, T, r, xi, r1, r2, t1, t2     apparatus
    H, L, omega, g | r_s, R2, c         geometry

``r1`` and ``r2`` follow ``r`` unless they are set explicitly, so ``r = 1``
puts the squeezed MZ and both SU(1,1) amplifiers at the same squeezing.
"""

from __future__ import annotations

import configparser
import csv
import io
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np
from scipy import optimize

from . import sensitivity as sens
from .geometry import EARTH_RADIUS, FIGURE_C, FIGURE_G, FIGURE_H, FIGURE_L, FIGURE_OMEGA, GeometryConfig
from .interferometer import InterferometerConfig, simulate_sensitivity
from .sensitivity import Detection, Method, SensitivityResult

DEFAULTS: dict[str, float] = {
    "n_sig": 1e18,
    "T": 1.0,
    "r": 0.0,
    "xi": 0.0,
    "t1": 1.0,
    "t2": 1.0,
    "H": FIGURE_H,
    "L": FIGURE_L,
    "omega": FIGURE_OMEGA,
    "g": FIGURE_G,
    "R2": EARTH_RADIUS,
    "c": FIGURE_C,
}
OPTIONAL = ("r1", "r2", "r_s")
PARAMETERS = frozenset(DEFAULTS) | frozenset(OPTIONAL)

SIMULATED_PREFIX = "simulated:"


class SpecError(ValueError):
    """Invalid sweep description; carries the offending field and source line."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None, source: str | None = None):
        self.field = field
        self.line = line
        self.source = source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class NoSignChangeError(ValueError):
    """The two schemes do not swap order anywhere in the bracket."""


def geometry_from(params: Mapping[str, float]) -> GeometryConfig:
    if "r_s" in params:
        return GeometryConfig(
            r_s=params["r_s"], R2=params["R2"], H=params["H"], L=params["L"],
            omega=params["omega"], c=params["c"],
        )
    return GeometryConfig.from_g(
        g=params["g"], R2=params["R2"], H=params["H"], L=params["L"],
        omega=params["omega"], c=params["c"],
    )


def _gains(p: Mapping[str, float]) -> tuple[float, float]:
    return p.get("r1", p["r"]), p.get("r2", p["r"])


def _simulated_mz(detection: Detection) -> Callable[[Mapping[str, float]], SensitivityResult]:
    def evaluate(p):
        config = InterferometerConfig.mz(
            p["n_sig"], T=p["T"], r=p["r"], xi=p["xi"], t1=p["t1"], t2=p["t2"], detection=detection
        )
        return simulate_sensitivity(config, geometry_from(p))

    return evaluate


def _simulated_su11(detection: Detection) -> Callable[[Mapping[str, float]], SensitivityResult]:
    def evaluate(p):
        r1, r2 = _gains(p)
        config = InterferometerConfig.su11(p["n_sig"], r1, r2, t1=p["t1"], t2=p["t2"], detection=detection)
        return simulate_sensitivity(config, geometry_from(p))

    return evaluate


def _simulated_sql(p):
    config = InterferometerConfig.mz(p["n_sig"], T=1.0)
    return simulate_sensitivity(config, geometry_from(p))


def _simulated_effective_sql(p):
    config = InterferometerConfig.mz(p["n_sig"], T=1.0, t1=p["t1"], t2=p["t2"])
    return simulate_sensitivity(config, geometry_from(p))


SCHEMES: dict[str, Callable[[Mapping[str, float]], SensitivityResult]] = {
    "sql": lambda p: sens.sql(p["n_sig"], geometry_from(p)),
    "effective_sql": lambda p: sens.effective_sql(p["n_sig"], p["t1"], p["t2"], geometry_from(p)),
    "mz_single": lambda p: sens.mz_single(p["T"], p["n_sig"], geometry_from(p)),
    "mz_joint": lambda p: sens.mz_joint(p["T"], p["n_sig"], geometry_from(p)),
    "mz_squeezed": lambda p: sens.mz_squeezed_lossy(
        p["T"], p["n_sig"], p["r"], p["t1"], p["t2"], geometry_from(p)
    ),
    "su11_single": lambda p: sens.su11_single(p["n_sig"], *_gains(p), p["t1"], p["t2"], geometry_from(p)),
    "su11_joint": lambda p: sens.su11_joint(p["n_sig"], *_gains(p), p["t1"], p["t2"], geometry_from(p)),
    SIMULATED_PREFIX + "sql": _simulated_sql,
    SIMULATED_PREFIX + "effective_sql": _simulated_effective_sql,
    SIMULATED_PREFIX + "mz_single": _simulated_mz(Detection.SINGLE_B),
    SIMULATED_PREFIX + "mz_squeezed": _simulated_mz(Detection.SINGLE_B),
    SIMULATED_PREFIX + "mz_joint": _simulated_mz(Detection.JOINT),
    SIMULATED_PREFIX + "su11_single": _simulated_su11(Detection.SINGLE_B),
    SIMULATED_PREFIX + "su11_joint": _simulated_su11(Detection.JOINT),
}


def evaluate(scheme: str, params: Mapping[str, float] | None = None) -> SensitivityResult:
    """Evaluate one scheme with ``params`` layered over :data:`DEFAULTS`."""
    if scheme not in SCHEMES:
        raise SpecError(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}", field="scheme")
    merged = merge_params(params or {})
    return SCHEMES[scheme](merged)


_DOMAINS = {
    **{k: (lambda v: 0.0 < v <= 1.0, "0 < value <= 1") for k in ("t1", "t2", "T")},
    **{k: (lambda v: v >= 0.0, "value >= 0") for k in ("r", "r1", "r2")},
    "n_sig": (lambda v: v > 0.0, "value > 0"),
}


def merge_params(*layers: Mapping[str, float]) -> dict[str, float]:
    merged = dict(DEFAULTS)
    for layer in layers:
        for key, value in layer.items():
            if key not in PARAMETERS:
                raise SpecError(f"unknown parameter {key!r}", field=key)
            merged[key] = float(value)
    for key, (ok, what) in _DOMAINS.items():
        if key in merged and not ok(merged[key]):
            raise SpecError(f"{key} = {merged[key]!r} is out of range; expected {what}", field=key)
    if "r_s" in merged and any("g" in layer for layer in layers):
        raise SpecError("give either g or r_s, not both", field="r_s")
    return merged


# -- sweeps -----------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Swept parameter and its grid; ``spacing`` is ``linear`` or ``log``."""

    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class Series:
    """One output column: a scheme evaluated with optional parameter overrides."""

    label: str
    scheme: str
    overrides: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class SweepSpec:
    grid: Grid
    series: tuple[Series, ...]
    fixed: Mapping[str, float] = field(default_factory=dict)

    def validate(self, source: str | None = None, lines: Mapping[tuple[str, str], int] | None = None) -> None:
        lines = lines or {}

        def fail(message, section, key):
            raise SpecError(message, field=key, line=lines.get((section, key)), source=source)

        g = self.grid
        if g.name not in PARAMETERS:
            fail(f"unknown swept parameter {g.name!r}", "sweep", "param")
        if g.count < 2:
            fail(f"grid needs at least 2 points, got {g.count}", "sweep", "count")
        if not (math.isfinite(g.start) and math.isfinite(g.stop)) or not g.start < g.stop:
            fail(f"grid needs min < max, got min={g.start}, max={g.stop}", "sweep", "max")
        if g.spacing not in ("linear", "log"):
            fail(f"spacing must be 'linear' or 'log', got {g.spacing!r}", "sweep", "spacing")
        if g.spacing == "log" and g.start <= 0:
            fail("log spacing needs a positive lower bound", "sweep", "min")
        if g.name in self.fixed:
            fail(f"swept parameter {g.name!r} is also fixed", "fixed", g.name)
        for key in self.fixed:
            if key not in PARAMETERS:
                fail(f"unknown parameter {key!r}", "fixed", key)
        if "r_s" in self.fixed and "g" in self.fixed:
            fail("give either g or r_s, not both", "fixed", "r_s")
        if not self.series:
            raise SpecError("at least one series is required", field="series", source=source)
        labels = set()
        for s in self.series:
            section = f"series {s.label}"
            if s.label in labels or s.label in (g.name, "n_sig"):
                fail(f"duplicate column label {s.label!r}", section, "scheme")
            labels.add(s.label)
            if s.scheme not in SCHEMES:
                fail(f"unknown scheme {s.scheme!r}", section, "scheme")
            for key in s.overrides:
                if key not in PARAMETERS:
                    fail(f"unknown parameter {key!r}", section, key)
                if key == g.name:
                    fail(f"series overrides the swept parameter {key!r}", section, key)


@dataclass(frozen=True)
class SweepRow:
    """One grid point: the swept value, ``n_sig`` and one value per series label."""

    param: str
    value: float
    n_sig: float
    values: Mapping[str, float]
    methods: Mapping[str, Method]


def _evaluate_point(spec: SweepSpec, value: float) -> SweepRow:
    base = merge_params(spec.fixed, {spec.grid.name: value})
    values, methods = {}, {}
    for s in spec.series:
        params = merge_params(spec.fixed, s.overrides, {spec.grid.name: value})
        result = SCHEMES[s.scheme](params)
        values[s.label] = result.value
        methods[s.label] = result.method
    return SweepRow(spec.grid.name, float(value), base["n_sig"], values, methods)


def _evaluate_indexed(args):
    spec, value = args
    return _evaluate_point(spec, value)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate every grid point; rows come back sorted by the swept value.

    With ``workers > 1`` points run in a process pool; ``map`` gathers
    results by index so the output does not depend on scheduling.
    """
    spec.validate()
    grid = [float(v) for v in spec.grid.values()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_indexed, [(spec, v) for v in grid], chunksize=8))
    else:
        rows = [_evaluate_point(spec, v) for v in grid]
    return sorted(rows, key=lambda row: row.value)


# -- crossovers -------------------------------------------------------------

@dataclass(frozen=True)
class Crossover:
    """Where two schemes swap order, and which one wins on each side."""

    param: str
    value: float
    scheme_a: str
    scheme_b: str
    better_below: str
    better_above: str


def find_crossover(
    scheme_a: str,
    scheme_b: str,
    swept: str,
    fixed: Mapping[str, float],
    bracket: tuple[float, float],
    scan_points: int = 1000,
    xtol: float = 1e-9,
) -> Crossover:
    """Locate the first sign change of ``scheme_a - scheme_b`` inside ``bracket``.

    A uniform pre-scan of ``scan_points`` values finds the first bracketing
    pair, which bisection then narrows to ``xtol``.
    """
    if swept not in PARAMETERS:
        raise SpecError(f"unknown swept parameter {swept!r}", field="param")
    if swept in fixed:
        raise SpecError(f"swept parameter {swept!r} is also fixed", field=swept)
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise SpecError(f"bracket needs lo < hi, got {bracket}", field="bracket")

    def diff(x):
        params = dict(fixed)
        params[swept] = x
        return evaluate(scheme_a, params).value - evaluate(scheme_b, params).value

    xs = np.linspace(lo, hi, scan_points)
    ds = np.array([diff(x) for x in xs])
    hits = np.flatnonzero(np.sign(ds[:-1]) * np.sign(ds[1:]) <= 0)
    if hits.size == 0:
        raise NoSignChangeError(
            f"{scheme_a} - {scheme_b} keeps one sign on {swept} in [{lo}, {hi}]: "
            f"{ds[0]:.6e} at {lo}, {ds[-1]:.6e} at {hi}"
        )
    i = hits[0]
    if ds[i] == 0:
        root = float(xs[i])
    elif ds[i + 1] == 0:
        root = float(xs[i + 1])
    else:
        root = optimize.bisect(diff, xs[i], xs[i + 1], xtol=xtol)
    below = diff(max(lo, root - 1e-6))
    above = diff(min(hi, root + 1e-6))
    return Crossover(
        param=swept,
        value=root,
        scheme_a=scheme_a,
        scheme_b=scheme_b,
        better_below=scheme_a if below < 0 else scheme_b,
        better_above=scheme_a if above < 0 else scheme_b,
    )


# -- CSV --------------------------------------------------------------------

def _format(value: float) -> str:
    return f"{value:.16e}"


def format_csv(rows: list[SweepRow]) -> str:
    if not rows:
        raise ValueError("no rows to write")
    labels = list(rows[0].values)
    for row in rows:
        if list(row.values) != labels or row.param != rows[0].param:
            raise ValueError("all rows of a sweep must share the same columns")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([rows[0].param, "n_sig", *labels])
    for row in rows:
        writer.writerow([_format(row.value), _format(row.n_sig), *(_format(row.values[k]) for k in labels)])
    return buffer.getvalue()


def emit_csv(rows: list[SweepRow], destination) -> None:
    """Write rows as UTF-8 CSV with LF endings to a path or a text stream."""
    text = format_csv(rows)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


# -- sweep files ------------------------------------------------------------

_SECTION = re.compile(r"^\s*\[([^\]]+)\]")
_KEY = re.compile(r"^\s*([^=:#;\s][^=:]*?)\s*[=:]")


def _line_index(text: str) -> dict[tuple[str, str], int]:
    index, section = {}, None
    for number, line in enumerate(text.splitlines(), start=1):
        if m := _SECTION.match(line):
            section = m.group(1).strip()
            index[(section, "")] = number
        elif section is not None and (m := _KEY.match(line)):
            index[(section, m.group(1).strip())] = number
    return index


def _number(raw: str, source, section, key, lines) -> float:
    try:
        return float(raw)
    except ValueError:
        raise SpecError(f"expected a number, got {raw!r}", field=key, line=lines.get((section, key)), source=source) from None


def parse_sweep_spec(text: str, source: str | None = None) -> SweepSpec:
    """Parse a sweep file.

    Example::

        [sweep]
        param = t2
        min = 0.5
        max = 1.0
        count = 51
        spacing = linear

        [fixed]
        t1 = 1
        r = 1

        [series su11_joint]
        scheme = su11_joint

        [series mz]
        scheme = mz_squeezed
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source or "<string>")
    except configparser.Error as exc:
        raise SpecError(str(exc).replace("\n", " "), line=getattr(exc, "lineno", None), source=source) from None
    lines = _line_index(text)

    if not parser.has_section("sweep"):
        raise SpecError("missing [sweep] section", field="sweep", source=source)
    sweep = parser["sweep"]
    for key in ("param", "min", "max", "count"):
        if key not in sweep:
            raise SpecError("missing required key", field=key, line=lines.get(("sweep", "")), source=source)
    for key in sweep:
        if key not in ("param", "min", "max", "count", "spacing"):
            raise SpecError(f"unknown key {key!r}", field=key, line=lines.get(("sweep", key)), source=source)
    count = _number(sweep["count"], source, "sweep", "count", lines)
    if count != int(count):
        raise SpecError("count must be an integer", field="count", line=lines.get(("sweep", "count")), source=source)
    grid = Grid(
        name=sweep["param"].strip(),
        start=_number(sweep["min"], source, "sweep", "min", lines),
        stop=_number(sweep["max"], source, "sweep", "max", lines),
        count=int(count),
        spacing=sweep.get("spacing", "linear").strip(),
    )

    fixed = {}
    if parser.has_section("fixed"):
        fixed = {k: _number(v, source, "fixed", k, lines) for k, v in parser["fixed"].items()}

    series = []
    for section in parser.sections():
        if section in ("sweep", "fixed"):
            continue
        head, _, label = section.partition(" ")
        if head != "series" or not label.strip():
            raise SpecError(f"unknown section [{section}]", line=lines.get((section, "")), source=source)
        body = dict(parser[section])
        scheme = body.pop("scheme", None)
        if scheme is None:
            raise SpecError("series needs a scheme", field="scheme", line=lines.get((section, "")), source=source)
        overrides = {k: _number(v, source, section, k, lines) for k, v in body.items()}
        series.append(Series(label.strip(), scheme.strip(), overrides))

    spec = SweepSpec(grid=grid, series=tuple(series), fixed=fixed)
    spec.validate(source=source, lines=lines)
    return spec


def load_sweep_spec(path: str | os.PathLike) -> SweepSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read sweep file: {exc.strerror or exc}", source=str(path)) from None
    return parse_sweep_spec(text, source=str(path))


# -- presets ----------------------------------------------------------------

PRESETS: dict[str, SweepSpec] = {
    # SQL against signal photon number for three horizontal arm lengths
    "fig3": SweepSpec(
        grid=Grid("n_sig", 1e12, 1e20, 81, "log"),
        series=tuple(Series(f"sql_L{int(L)}", "sql", {"L": L}) for L in (100.0, 500.0, 1000.0)),
        fixed={"H": 50.0},
    ),
    # squeezed MZ against the squeezing parameter at three loss settings
    "fig4": SweepSpec(
        grid=Grid("r", 0.0, 2.0, 81),
        series=(
            Series("mz_t1_1_t2_1", "mz_squeezed", {"t1": 1.0, "t2": 1.0}),
            Series("mz_t1_0.9_t2_1", "mz_squeezed", {"t1": 0.9, "t2": 1.0}),
            Series("mz_t1_0.9_t2_0.9", "mz_squeezed", {"t1": 0.9, "t2": 0.9}),
        ),
    ),
    # internal transmittance sweep, no detection loss
    "fig5a": SweepSpec(
        grid=Grid("t1", 0.5, 1.0, 101),
        series=(
            Series("effective_sql", "effective_sql"),
            Series("su11_single", "su11_single", {"r": 1.0}),
            Series("su11_joint", "su11_joint", {"r": 1.0}),
            Series("mz_squeezed", "mz_squeezed", {"r": 1.0}),
        ),
        fixed={"t2": 1.0},
    ),
    # external transmittance sweep, no internal loss
    "fig5b": SweepSpec(
        grid=Grid("t2", 0.5, 1.0, 101),
        series=(
            Series("effective_sql", "effective_sql"),
            Series("su11_single", "su11_single", {"r": 1.0}),
            Series("su11_joint", "su11_joint", {"r": 1.0}),
            Series("mz_squeezed", "mz_squeezed", {"r": 1.0}),
        ),
        fixed={"t1": 1.0},
    ),
}
