"""JSON documents for scenarios, planned paths and validation reports."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, List

import numpy as np

from .param import SpecError
from .planner import (
    MODES,
    CellDescriptor,
    PlannedPath,
    PlanOptions,
    Scenario,
    ScenarioError,
    sample_times,
)


class DocumentError(ValueError):
    """Malformed document; the message names the offending field."""


def _vector(value: Any, d: int | None, where: str) -> List[float]:
    if not isinstance(value, list) or not value:
        raise DocumentError(f"{where}: expected a non-empty array of numbers")
    out = []
    for k, x in enumerate(value):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise DocumentError(f"{where}[{k}]: expected a number, got {type(x).__name__}")
        if not np.isfinite(x):
            raise DocumentError(f"{where}[{k}]: must be finite")
        out.append(float(x))
    if d is not None and len(out) != d:
        raise DocumentError(f"{where}: expected {d} coordinates, got {len(out)}")
    return out


def _points(value: Any, d: int, where: str) -> List[List[float]]:
    if not isinstance(value, list) or not value:
        raise DocumentError(f"{where}: expected a non-empty array of {d}-vectors")
    return [_vector(p, d, f"{where}[{k}]") for k, p in enumerate(value)]


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise DocumentError(f"{where}: missing field '{key}'")
    return doc[key]


def scenario_from_dict(doc: Any) -> Scenario:
    if not isinstance(doc, dict):
        raise DocumentError("scenario: expected an object")
    d = _require(doc, "d", "scenario")
    if isinstance(d, bool) or not isinstance(d, int):
        raise DocumentError("d: expected an integer")
    mode = doc.get("mode", "general")
    if mode not in MODES:
        raise DocumentError(f"mode: expected one of {list(MODES)}, got {mode!r}")
    obstacles = _points(_require(doc, "obstacles", "scenario"), d, "obstacles")
    robots = _require(doc, "robots", "scenario")
    if not isinstance(robots, list):
        raise DocumentError("robots: expected an array")
    targets = []
    for k, rb in enumerate(robots):
        if not isinstance(rb, dict):
            raise DocumentError(f"robots[{k}]: expected an object")
        targets.append(_points(_require(rb, "targets", f"robots[{k}]"), d, f"robots[{k}].targets"))
    raw = doc.get("options", {})
    if not isinstance(raw, dict):
        raise DocumentError("options: expected an object")
    known = {"tau_proj", "epsilon_connector", "tolerance"}
    for key in raw:
        if key not in known:
            raise DocumentError(f"options.{key}: unknown option")
        if isinstance(raw[key], bool) or not isinstance(raw[key], (int, float)):
            raise DocumentError(f"options.{key}: expected a number")
    try:
        options = PlanOptions(**{k: float(v) for k, v in raw.items()})
        return Scenario.create(obstacles, targets, mode, options)
    except (ScenarioError, SpecError) as exc:
        raise DocumentError(str(exc)) from None


def scenario_to_dict(sc: Scenario) -> dict:
    o = sc.options
    return {
        "d": sc.d,
        "mode": sc.mode,
        "obstacles": sc.obstacles.tolist(),
        "robots": [{"targets": t.tolist()} for t in sc.targets],
        "options": {"tau_proj": o.tau_proj, "epsilon_connector": o.epsilon_connector, "tolerance": o.tolerance},
    }


def path_to_dict(path: PlannedPath) -> dict:
    robots = []
    for i, (ts, ps) in enumerate(zip(path.times, path.points)):
        robots.append({"index": i + 1, "breakpoints": [{"t": float(t), "x": p.tolist()} for t, p in zip(ts, ps)]})
    return {
        "schedule": [float(t) for t in path.schedule],
        "robots": robots,
        "cell": path.cell.to_dict() if path.cell is not None else None,
        "delta_C": float(path.delta_C),
        "mode": path.mode,
    }


def path_from_dict(doc: Any) -> PlannedPath:
    if not isinstance(doc, dict):
        raise DocumentError("path: expected an object")
    schedule = _vector(_require(doc, "schedule", "path"), None, "schedule")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise DocumentError("schedule: times must be strictly increasing")
    robots = _require(doc, "robots", "path")
    if not isinstance(robots, list) or not robots:
        raise DocumentError("robots: expected a non-empty array")
    times, points = [], []
    dim = None
    for k, rb in enumerate(robots):
        where = f"robots[{k}]"
        if not isinstance(rb, dict):
            raise DocumentError(f"{where}: expected an object")
        bps = _require(rb, "breakpoints", where)
        if not isinstance(bps, list) or not bps:
            raise DocumentError(f"{where}.breakpoints: expected a non-empty array")
        ts, ps = [], []
        for b, bp in enumerate(bps):
            w = f"{where}.breakpoints[{b}]"
            if not isinstance(bp, dict):
                raise DocumentError(f"{w}: expected an object")
            t = _require(bp, "t", w)
            if isinstance(t, bool) or not isinstance(t, (int, float)):
                raise DocumentError(f"{w}.t: expected a number")
            x = _vector(_require(bp, "x", w), dim, f"{w}.x")
            dim = len(x)
            ts.append(float(t))
            ps.append(x)
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise DocumentError(f"{where}.breakpoints: times must be non-decreasing")
        times.append(np.array(ts))
        points.append(np.array(ps))
    cell = None
    raw = doc.get("cell")
    if isinstance(raw, dict):
        try:
            sigma = tuple(tuple(str(x) for x in cls) for cls in raw["sigma"])
            cell = CellDescriptor(int(raw["c"]), int(raw["mu"]), int(raw["nu"]), sigma, (), ())
        except (KeyError, TypeError, ValueError):
            raise DocumentError("cell: expected fields c, mu, nu, sigma") from None
    delta = doc.get("delta_C", 1.0)
    mode = doc.get("mode", "general")
    return PlannedPath(tuple(schedule), times, points, cell, float(delta), mode)


def path_csv(path: PlannedPath, samples_per_interval: int) -> str:
    """Sampled trajectories as CSV rows: t, robot, x_1..x_d."""
    ts = sample_times(path, samples_per_interval)
    pos = path.positions(ts)
    d = pos.shape[-1]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "robot"] + [f"x_{c + 1}" for c in range(d)])
    for i in range(pos.shape[1]):
        for t, x in zip(ts, pos[:, i]):
            w.writerow([repr(float(t)), i + 1] + [repr(float(v)) for v in x])
    return buf.getvalue()


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)
