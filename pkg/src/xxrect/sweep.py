"""JSON run configuration, parameter sweeps and CSV output.

Config schema (``schema_version: 1``); unknown keys are rejected::

    {
      "schema_version": 1,
      "description": "free text, optional",
      "chain": {"template": "field-junction",
                "params": {"N": 50, "alpha": 1.0, "h1": 0.0, "h2": 0.0, "gamma": 1.0}},
      "baths": {"T_L": 6.0, "T_R": 1.0},
      "sweep": [{"param": "h1", "min": -10, "max": 10, "steps": 101},
                {"param": "h2", "min": -10, "max": 10, "steps": 101}],
      "output": "fig1.csv",
      "threads": 4
    }

``baths`` takes exactly one of the forms ``{T_L, T_R}``, ``{T, dT}``
(``T_L,R = T +- dT/2``) or ``{T_R, dT}`` (``T_L = T_R + dT``).
Temperatures may be the strings ``"inf"`` or ``"zero"``. A sweep
``param`` is a template parameter or bath key; a list of names ties
several parameters to the same value. Swept template parameters may be
omitted from ``params``.
"""

from __future__ import annotations

import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Iterable

import numpy as np

from .bath import BathPair, parse_temperature
from .chain import TEMPLATES, build_from_template, template_parameters
from .errors import ConfigError, NumericalError, OutputError, ValidationError
from .transport import rectify

SCHEMA_VERSION = 1
CSV_HEADER = "param1,param2,J_fwd,J_rev,R,flags"
INVALID_POINT = "INVALID_POINT"
NUMERIC_FAILURE = "NUMERIC_FAILURE"

_BATH_FORMS = ({"T_L", "T_R"}, {"T", "dT"}, {"T_R", "dT"})


@dataclass(frozen=True)
class SweepAxis:
    names: tuple[str, ...]
    min: float
    max: float
    steps: int

    @property
    def label(self) -> str:
        return "+".join(self.names)

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.min])
        return np.linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class SweepConfig:
    template: str
    params: dict
    baths: dict
    axes: tuple[SweepAxis, ...] = ()
    output: str | None = None
    threads: int = 1
    description: str = ""

    def chain(self, overrides: dict | None = None):
        params = dict(self.params)
        params.update({k: v for k, v in (overrides or {}).items() if k not in self.baths})
        return build_from_template(self.template, params)

    def bath_pair(self, overrides: dict | None = None) -> BathPair:
        b = dict(self.baths)
        b.update({k: v for k, v in (overrides or {}).items() if k in self.baths})
        if "T_L" in b:
            return BathPair(b["T_L"], b["T_R"])
        if "T" in b:
            return BathPair.from_mean(b["T"], b["dT"])
        return BathPair(b["T_R"] + b["dT"], b["T_R"])


@dataclass(frozen=True)
class SweepRow:
    values: tuple[float, float]
    J_fwd: float
    J_rev: float
    R: float
    flags: tuple[str, ...] = field(default=())


def _check_keys(obj, allowed: set[str], where: str, required: Iterable[str] = ()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object", field=where)
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}", field=f"{where}.{key}")
    for key in required:
        if key not in obj:
            raise ConfigError(f"missing required key {key!r} in {where}", field=f"{where}.{key}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}", field=where)
    if not math.isfinite(value):
        raise ConfigError(f"{where} must be finite", field=where)
    return float(value)


def _parse_params(template: str, params: dict, swept: set[str]) -> dict:
    allowed = set(template_parameters(template))
    _check_keys(params, allowed, "chain.params")
    out = {}
    for key, value in params.items():
        where = f"chain.params.{key}"
        if template == "custom" and key in ("h", "alpha"):
            if not isinstance(value, list):
                raise ConfigError(f"{where} must be a list of numbers", field=where)
            out[key] = [_number(v, f"{where}[{i}]") for i, v in enumerate(value)]
        elif key == "N":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{where} must be an integer", field=where)
            out[key] = value
        else:
            out[key] = _number(value, where)
    missing = [k for k in TEMPLATES[template][1] if k not in out and k not in swept]
    if missing:
        raise ConfigError(f"missing chain parameter(s) {missing}", field=f"chain.params.{missing[0]}")
    return out


def _parse_baths(baths) -> dict:
    _check_keys(baths, {"T_L", "T_R", "T", "dT"}, "baths")
    if set(baths) not in _BATH_FORMS:
        raise ConfigError("baths must be one of {T_L, T_R}, {T, dT} or {T_R, dT}", field="baths")
    out = {}
    for key, value in baths.items():
        try:
            out[key] = parse_temperature(value) if key != "dT" else _number(value, "baths.dT")
        except ValidationError as exc:
            raise ConfigError(str(exc), field=f"baths.{key}") from None
    return out


def _parse_axis(i: int, obj, valid: set[str]) -> SweepAxis:
    where = f"sweep[{i}]"
    _check_keys(obj, {"param", "min", "max", "steps"}, where, required=("param", "min", "max", "steps"))
    names = obj["param"]
    names = [names] if isinstance(names, str) else names
    if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
        raise ConfigError(f"{where}.param must be a name or a list of names", field=f"{where}.param")
    for name in names:
        if name not in valid:
            raise ConfigError(f"unknown sweep parameter {name!r}; valid: {sorted(valid)}", field=f"{where}.param")
    steps = obj["steps"]
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise ConfigError(f"{where}.steps must be an integer >= 1", field=f"{where}.steps")
    lo, hi = _number(obj["min"], f"{where}.min"), _number(obj["max"], f"{where}.max")
    if lo > hi:
        raise ConfigError(f"{where}.min must not exceed max", field=f"{where}.min")
    return SweepAxis(tuple(names), lo, hi, steps)


def parse_config(text: bytes | str, require_sweep: bool = True) -> SweepConfig:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError(f"config is not UTF-8: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    _check_keys(raw, {"schema_version", "description", "chain", "baths", "sweep", "output", "threads"},
                "config", required=("schema_version", "chain"))
    if raw["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {raw['schema_version']!r}", field="schema_version")

    chain = raw["chain"]
    _check_keys(chain, {"template", "params"}, "chain", required=("template", "params"))
    template = chain["template"]
    if template not in TEMPLATES:
        raise ConfigError(f"unknown chain template {template!r}; valid: {sorted(TEMPLATES)}", field="chain.template")

    baths = _parse_baths(raw["baths"]) if "baths" in raw else {}
    valid = set(template_parameters(template)) | set(baths)
    if template == "custom":
        valid -= {"h", "alpha"}
    valid.discard("N")
    axes = tuple(_parse_axis(i, a, valid) for i, a in enumerate(raw.get("sweep", [])))
    if require_sweep and len(axes) != 2:
        raise ConfigError(f"a sweep needs exactly two axes, got {len(axes)}", field="sweep")
    swept = {n for a in axes for n in a.names}
    params = _parse_params(template, chain["params"], swept)

    threads = raw.get("threads", 1)
    if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
        raise ConfigError("threads must be an integer >= 1", field="threads")
    output = raw.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output must be a path string", field="output")
    description = raw.get("description", "")
    if not isinstance(description, str):
        raise ConfigError("description must be a string", field="description")
    return SweepConfig(template, params, baths, axes, output, threads, description)


def load_config(path: str, require_sweep: bool = True) -> SweepConfig:
    try:
        with open(path, "rb") as fh:
            return parse_config(fh.read(), require_sweep)
    except OSError as exc:
        raise OutputError(f"cannot read config {path}: {exc}") from exc


def grid_points(cfg: SweepConfig) -> list[tuple[float, float]]:
    """Row-major grid: the second axis varies fastest."""
    a, b = cfg.axes
    return [(float(x), float(y)) for x in a.values() for y in b.values()]


def evaluate_point(cfg: SweepConfig, point: tuple[float, float]) -> SweepRow:
    overrides = {}
    for axis, value in zip(cfg.axes, point):
        for name in axis.names:
            overrides[name] = value
    try:
        chain = cfg.chain(overrides)
        baths = cfg.bath_pair(overrides)
    except ValidationError:
        return SweepRow(point, math.nan, math.nan, math.nan, (INVALID_POINT,))
    try:
        res = rectify(chain, baths)
    except NumericalError:
        return SweepRow(point, math.nan, math.nan, math.nan, (NUMERIC_FAILURE,))
    return SweepRow(point, res.J_fwd, res.J_rev, res.R, res.flags)


def _evaluate_chunk(cfg: SweepConfig, points: list[tuple[float, float]]) -> list[SweepRow]:
    return [evaluate_point(cfg, p) for p in points]


def run_sweep(cfg: SweepConfig, threads: int | None = None, output: str | None = None) -> list[SweepRow]:
    """Evaluate the grid, in order, and write the CSV if an output path is set.

    Results do not depend on ``threads``: each point is a pure function of
    the config and rows are gathered in grid order.
    """
    if len(cfg.axes) != 2:
        raise ConfigError("run_sweep needs a config with two sweep axes", field="sweep")
    threads = threads or cfg.threads
    points = grid_points(cfg)
    if threads <= 1 or len(points) < 2:
        rows = _evaluate_chunk(cfg, points)
    else:
        size = max(1, math.ceil(len(points) / (threads * 4)))
        chunks = [points[i:i + size] for i in range(0, len(points), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = [row for part in pool.map(partial(_evaluate_chunk, cfg), chunks) for row in part]
    output = output or cfg.output
    if output:
        emit_csv(rows, output)
    return rows


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def format_csv(rows: list[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        nums = (*r.values, r.J_fwd, r.J_rev, r.R)
        lines.append(",".join([format_float(x) for x in nums] + [";".join(r.flags)]))
    return "\n".join(lines) + "\n"


def emit_csv(rows: list[SweepRow], path) -> None:
    """Write rows as CSV (LF endings). ``path`` of ``"-"`` writes to stdout."""
    if not rows:
        raise ValueError("refusing to write an empty sweep")
    text = format_csv(rows)
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
