"""Collision-free paths for n robots visiting their targets among m obstacles.

Pipeline for one configuration C (obstacles plus every robot's targets):

1. pick a projection line (fixed, or through o_1 and o_2 in even d);
2. classify C by the clustered projections of its R+m points;
3. push every target along the line by a distinct multiple of delta_C/R so
   that all robot projections become distinct (the perturbation H);
4. on the perturbed configuration, move one robot at a time with an
   overpass detour, holding the others still;
5. splice connectors that run H forwards and backwards around each node so
   the exact targets are hit at every node time.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .param import ProblemSpec, SpecError

GENERAL = "general"
EVEN = "even"
MODES = (GENERAL, EVEN)


class ScenarioError(ValueError):
    pass


class PreconditionError(RuntimeError):
    """A planning stage was called outside its valid input set."""


@dataclass(frozen=True)
class PlanOptions:
    tau_proj: float = 1e-9  # relative to scene scale
    epsilon_connector: float = 0.25
    tolerance: float = 1e-7  # validator separation threshold, relative

    def __post_init__(self):
        if not 0.0 < self.epsilon_connector < 0.5:
            raise ScenarioError("epsilon_connector must lie in (0, 1/2)")
        if self.tau_proj < 0:
            raise ScenarioError("tau_proj must be >= 0")


@dataclass(frozen=True, eq=False)
class Scenario:
    """Obstacles and per-robot target lists; robots keep their input order.

    ``spec.order`` maps sorted robot positions back to input labels.
    """

    spec: ProblemSpec
    obstacles: np.ndarray  # (m, d)
    targets: Tuple[np.ndarray, ...]  # per input robot, (r_i, d)
    mode: str = GENERAL
    options: PlanOptions = field(default_factory=PlanOptions)

    @classmethod
    def create(cls, obstacles, targets, mode: str = GENERAL, options: PlanOptions | None = None, check: bool = True):
        obstacles = np.asarray(obstacles, dtype=float)
        if obstacles.ndim != 2:
            raise ScenarioError("obstacles must be a list of d-vectors")
        d = obstacles.shape[1]
        tg = []
        for k, t in enumerate(targets):
            t = np.asarray(t, dtype=float)
            if t.ndim != 2 or t.shape[0] < 1 or t.shape[1] != d:
                raise ScenarioError(f"robot {k + 1}: targets must be a non-empty list of {d}-vectors")
            tg.append(t)
        if mode not in MODES:
            raise ScenarioError(f"mode must be one of {MODES}, got {mode!r}")
        spec = ProblemSpec.create(d, obstacles.shape[0], [t.shape[0] for t in tg])
        if mode == EVEN and d % 2:
            raise ScenarioError(f"mode 'even' needs even d (got d={d})")
        sc = cls(spec, obstacles, tuple(tg), mode, options or PlanOptions())
        if check:
            sc.check()
        return sc

    @property
    def d(self) -> int:
        return self.spec.d

    def check(self) -> None:
        """Every node slice must be a configuration of distinct points."""
        for k in range(1, self.spec.r_max + 1):
            pts = self.slice(k)
            diff = pts[:, None, :] - pts[None, :, :]
            dist = np.sqrt((diff**2).sum(-1))
            np.fill_diagonal(dist, np.inf)
            if dist.min() <= 0.0:
                a, b = np.unravel_index(np.argmin(dist), dist.shape)
                names = self.slice_names(k)
                raise ScenarioError(f"node {k}: points {names[a]} and {names[b]} coincide")

    def sorted_robots(self) -> List[int]:
        return list(self.spec.order)

    def target(self, robot: int, k: int) -> np.ndarray:
        """Position of input robot ``robot`` (0-based) at node k (1-based)."""
        t = self.targets[robot]
        return t[min(k, len(t)) - 1]

    def slice(self, k: int) -> np.ndarray:
        rows = [self.obstacles] + [self.target(i, k)[None, :] for i in range(self.spec.n)]
        return np.vstack(rows)

    def slice_names(self, k: int) -> List[str]:
        names = [f"o{j + 1}" for j in range(self.spec.m)]
        return names + [f"z{i + 1}^{min(k, len(self.targets[i]))}" for i in range(self.spec.n)]

    def symbols(self) -> Tuple[List[str], np.ndarray]:
        """All R+m symbol points: obstacles, then each robot's targets (input order)."""
        names = [f"o{j + 1}" for j in range(self.spec.m)]
        pts = [self.obstacles]
        for i, t in enumerate(self.targets):
            names += [f"z{i + 1}^{k + 1}" for k in range(len(t))]
            pts.append(t)
        return names, np.vstack(pts)

    def scene_scale(self) -> float:
        _, pts = self.symbols()
        span = float(np.linalg.norm(pts.max(0) - pts.min(0)))
        return span if span > 0 else 1.0

    def with_targets(self, targets) -> "Scenario":
        return replace(self, targets=tuple(np.asarray(t, dtype=float) for t in targets))


@dataclass(frozen=True)
class ProjectionFrame:
    e: np.ndarray
    e_perp: np.ndarray

    def q(self, x) -> np.ndarray:
        return np.asarray(x) @ self.e

    def h(self, x) -> np.ndarray:
        return np.asarray(x) @ self.e_perp


def tangent_field(x: np.ndarray) -> np.ndarray:
    """Nowhere-vanishing tangent field on S^{d-1} for even d: (x1,x2,..) -> (-x2,x1,-x4,x3,..)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 2:
        raise ScenarioError("tangent field needs even dimension")
    out = np.empty_like(x)
    out[..., 0::2] = -x[..., 1::2]
    out[..., 1::2] = x[..., 0::2]
    return out


def projection_frame(scenario: Scenario) -> ProjectionFrame:
    d = scenario.d
    if scenario.mode == EVEN:
        if d % 2:
            raise ScenarioError(f"mode 'even' needs even d (got d={d})")
        v = scenario.obstacles[1] - scenario.obstacles[0]
        e = v / np.linalg.norm(v)
        return ProjectionFrame(e, tangent_field(e))
    e = np.zeros(d)
    e[0] = 1.0
    ep = np.zeros(d)
    ep[1] = 1.0
    return ProjectionFrame(e, ep)


@dataclass(frozen=True)
class CellDescriptor:
    c: int
    mu: int
    nu: int
    sigma: Tuple[Tuple[str, ...], ...]
    values: Tuple[float, ...] = field(compare=False, repr=False)  # cluster representatives
    labels: Tuple[int, ...] = field(compare=False, repr=False)  # cluster index of each symbol

    def to_dict(self) -> dict:
        return {"c": self.c, "mu": self.mu, "nu": self.nu, "sigma": [list(s) for s in self.sigma]}


def classify_cell(scenario: Scenario, frame: ProjectionFrame, tau_proj: float | None = None) -> CellDescriptor:
    """Cluster the R+m projections; ``tau_proj`` is relative to the scene scale."""
    if tau_proj is None:
        tau_proj = scenario.options.tau_proj
    tau = tau_proj * scenario.scene_scale()
    names, pts = scenario.symbols()
    proj = frame.q(pts)
    order = np.argsort(proj, kind="stable")
    labels = np.empty(len(proj), dtype=int)
    groups: List[List[int]] = [[order[0]]]
    for a, b in zip(order[:-1], order[1:]):
        if proj[b] - proj[a] > tau:
            groups.append([])
        groups[-1].append(b)
    for g_idx, g in enumerate(groups):
        labels[g] = g_idx
    values = tuple(float(np.mean(proj[g])) for g in groups)
    m = scenario.spec.m
    mu = len(set(labels[:m].tolist()))
    sigma = tuple(tuple(names[k] for k in sorted(g)) for g in groups)
    return CellDescriptor(len(groups), mu, len(groups) - mu, sigma, values, tuple(labels.tolist()))


def clearance(scenario: Scenario, cell: CellDescriptor) -> float:
    """delta_C: half the least gap between distinct clusters over robot-robot and robot-obstacle pairs."""
    m = scenario.spec.m
    labels = np.asarray(cell.labels)
    vals = np.asarray(cell.values)
    robot_clusters = set(labels[m:].tolist())
    best = np.inf
    for a in robot_clusters:
        for b in range(len(vals)):
            if b != a:
                best = min(best, abs(vals[a] - vals[b]))
    if cell.c == 1 or not np.isfinite(best):
        return 1.0
    return 0.5 * float(best)


def _offset_rank(scenario: Scenario) -> Dict[Tuple[int, int], int]:
    """(input robot, node) -> sum_{l<i} r_l + k over the sorted robot order."""
    out = {}
    acc = 0
    for i in scenario.sorted_robots():
        r_i = len(scenario.targets[i])
        for k in range(1, r_i + 1):
            out[(i, k)] = acc + k
        acc += r_i
    return out


def homotopy_offsets(scenario: Scenario, frame: ProjectionFrame, delta: float) -> Tuple[np.ndarray, ...]:
    """Per robot, the (r_i, d) displacement of its targets at s = 1."""
    R = scenario.spec.R
    rank = _offset_rank(scenario)
    out = []
    for i, t in enumerate(scenario.targets):
        coeff = np.array([rank[(i, k + 1)] for k in range(len(t))], dtype=float)
        out.append((coeff * delta / R)[:, None] * frame.e[None, :])
    return tuple(out)


def perturb(scenario: Scenario, frame: ProjectionFrame, cell: CellDescriptor) -> Tuple[Scenario, float]:
    """H(C, 1): shift targets along the line so robot projections become distinct."""
    delta = clearance(scenario, cell)
    offsets = homotopy_offsets(scenario, frame, delta)
    moved = [t + off for t, off in zip(scenario.targets, offsets)]
    return scenario.with_targets(moved), delta


def rule_count(spec: ProblemSpec, mode: str) -> int:
    """Number of cells (local rules) used by the planner in ``mode``."""
    if mode == GENERAL:
        return spec.R + spec.m
    if mode == EVEN:
        if spec.d % 2:
            raise SpecError(f"mode 'even' needs even d (got d={spec.d})")
        return spec.R + spec.m - 1
    raise SpecError(f"unknown mode {mode!r}")


def single_robot_detour(A, B, blockers, frame: ProjectionFrame, tau: float = 0.0) -> List[np.ndarray]:
    """Overpass from A to B above every blocker: lift, traverse, descend.

    Needs the projections of A and B to differ from every blocker's
    projection.  Returns the breakpoints (1 point if A == B, else 4).
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    blockers = np.asarray(blockers, dtype=float).reshape(-1, A.shape[0])
    if np.array_equal(A, B):
        return [A.copy()]
    if len(blockers):
        qb = frame.q(blockers)
        for name, P in (("start", A), ("goal", B)):
            if np.any(np.abs(qb - frame.q(P)) <= tau):
                raise PreconditionError(f"detour {name} shares its projection with a blocker")
        top = float(frame.h(blockers).max())
    else:
        top = -np.inf
    D = max(1.0, 1.0 + top - min(float(frame.h(A)), float(frame.h(B))))
    lift = D * frame.e_perp
    return [A.copy(), A + lift, B + lift, B.copy()]


@dataclass
class PlannedPath:
    """Piecewise-linear trajectories, one per input robot."""

    schedule: Tuple[float, ...]
    times: List[np.ndarray]  # per robot, increasing breakpoint times
    points: List[np.ndarray]  # per robot, (len(times), d)
    cell: CellDescriptor | None = None
    delta_C: float = 1.0
    mode: str = GENERAL

    def position(self, robot: int, t) -> np.ndarray:
        ts, ps = self.times[robot], self.points[robot]
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.stack([np.interp(t, ts, ps[:, c]) for c in range(ps.shape[1])], axis=-1)

    def positions(self, t) -> np.ndarray:
        """(len(t), n, d) array of robot positions."""
        return np.stack([self.position(i, t) for i in range(len(self.times))], axis=1)

    def breakpoint_times(self) -> np.ndarray:
        return np.unique(np.concatenate(self.times))


def node_times(r_max: int) -> Tuple[float, ...]:
    if r_max == 1:
        return (0.0,)
    return tuple(k / (r_max - 1) for k in range(r_max))


class _Recorder:
    """Appends synchronous breakpoints for all robots."""

    def __init__(self, start: Sequence[np.ndarray]):
        self.pos = [np.array(p, dtype=float) for p in start]
        self.times: List[List[float]] = [[0.0] for _ in start]
        self.points: List[List[np.ndarray]] = [[p.copy()] for p in self.pos]

    def mark(self, t: float, robot: int | None = None):
        robots = range(len(self.pos)) if robot is None else [robot]
        for i in robots:
            if t > self.times[i][-1]:
                self.times[i].append(t)
                self.points[i].append(self.pos[i].copy())
            elif np.array_equal(self.points[i][-1], self.pos[i]):
                continue
            else:
                # same instant, new point: only legal when the move has zero duration
                raise AssertionError("discontinuous breakpoint")

    def move_all(self, t0: float, t1: float, targets: Sequence[np.ndarray]):
        self.mark(t0)
        self.pos = [np.array(p, dtype=float) for p in targets]
        self.mark(t1)

    def move_one(self, i: int, t0: float, t1: float, pts: Sequence[np.ndarray]):
        self.mark(t0)
        if len(pts) > 1:
            ts = np.linspace(t0, t1, len(pts))
            for tk, p in zip(ts[1:], pts[1:]):
                self.pos[i] = np.array(p, dtype=float)
                self.mark(float(tk), i)
        self.mark(t1)

    def build(self):
        return [np.array(t) for t in self.times], [np.vstack(p) for p in self.points]


def _check_generic(scenario: Scenario, frame: ProjectionFrame, tau: float) -> None:
    names, pts = scenario.symbols()
    proj = frame.q(pts)
    m = scenario.spec.m
    for a in range(m, len(proj)):
        close = np.abs(proj - proj[a]) <= tau
        close[a] = False
        if close.any():
            b = int(np.flatnonzero(close)[0])
            raise PreconditionError(f"projections of {names[a]} and {names[b]} coincide")


def _interval_moves(scenario: Scenario, frame: ProjectionFrame, k: int, tau: float):
    """Detours for interval [t_{k-1}, t_k] as (robot, breakpoints) in moving order."""
    moving = [i for i in scenario.sorted_robots() if len(scenario.targets[i]) >= k]
    current = {i: scenario.target(i, k - 1) for i in range(scenario.spec.n)}
    moves = []
    for i in moving:
        others = [current[o] for o in range(scenario.spec.n) if o != i]
        blockers = np.vstack([scenario.obstacles] + [p[None, :] for p in others])
        A, B = scenario.target(i, k - 1), scenario.target(i, k)
        moves.append((i, single_robot_detour(A, B, blockers, frame, tau)))
        current[i] = B
    return moves


def _run_generic(rec: _Recorder, scenario: Scenario, frame: ProjectionFrame, k: int, t0: float, t1: float, tau: float):
    moves = _interval_moves(scenario, frame, k, tau)
    edges = np.linspace(t0, t1, len(moves) + 1)
    for (i, pts), a, b in zip(moves, edges[:-1], edges[1:]):
        rec.move_one(i, float(a), float(b), pts)


def plan_generic(scenario: Scenario, frame: ProjectionFrame) -> PlannedPath:
    """Sequential overpass plan for a configuration whose robot projections are all distinct."""
    tau = scenario.options.tau_proj * scenario.scene_scale()
    _check_generic(scenario, frame, tau)
    n, r_max = scenario.spec.n, scenario.spec.r_max
    sched = node_times(r_max)
    rec = _Recorder([scenario.target(i, 1) for i in range(n)])
    for k in range(2, r_max + 1):
        _run_generic(rec, scenario, frame, k, sched[k - 2], sched[k - 1], tau)
    times, points = rec.build()
    return PlannedPath(sched, times, points, None, 1.0, scenario.mode)


def plan(scenario: Scenario, options: PlanOptions | None = None) -> PlannedPath:
    """Full planner: frame, cell, perturbation, generic plan, homotopy connectors."""
    opts = options or scenario.options
    frame = projection_frame(scenario)
    cell = classify_cell(scenario, frame, opts.tau_proj)
    moved, delta = perturb(scenario, frame, cell)
    tau = opts.tau_proj * scenario.scene_scale()
    _check_generic(moved, frame, tau)
    n, r_max = scenario.spec.n, scenario.spec.r_max
    sched = node_times(r_max)
    eps = opts.epsilon_connector
    rec = _Recorder([scenario.target(i, 1) for i in range(n)])
    for k in range(2, r_max + 1):
        t0, t1 = sched[k - 2], sched[k - 1]
        h = t1 - t0
        a, b = t0 + eps * h, t1 - eps * h
        rec.move_all(t0, a, [moved.target(i, k - 1) for i in range(n)])
        _run_generic(rec, moved, frame, k, a, b, tau)
        rec.move_all(b, t1, [scenario.target(i, k) for i in range(n)])
    if r_max == 1:
        rec.mark(0.0)
    times, points = rec.build()
    return PlannedPath(sched, times, points, cell, delta, scenario.mode)


def path_distance(a: PlannedPath, b: PlannedPath, samples_per_interval: int = 2048) -> float:
    """Sampled sup over time and robots of the distance between two plans."""
    if a.schedule != b.schedule or len(a.times) != len(b.times):
        raise ValueError("plans have different schedules or robot counts")
    ts = np.unique(np.concatenate([sample_times(a, samples_per_interval), b.breakpoint_times()]))
    return float(np.linalg.norm(a.positions(ts) - b.positions(ts), axis=-1).max())


@dataclass
class ValidationReport:
    min_robot_robot: float
    min_robot_obstacle: float
    max_node_error: float
    max_stopped_violation: float
    scene_scale: float
    samples: int
    passed: bool

    def to_dict(self) -> dict:
        def num(x):
            return None if not np.isfinite(x) else float(x)

        return {
            "min_robot_robot": num(self.min_robot_robot),
            "min_robot_obstacle": num(self.min_robot_obstacle),
            "max_node_error": num(self.max_node_error),
            "max_stopped_violation": num(self.max_stopped_violation),
            "scene_scale": self.scene_scale,
            "samples": self.samples,
            "pass": self.passed,
        }


def sample_times(path: PlannedPath, samples_per_interval: int) -> np.ndarray:
    sched = path.schedule
    if len(sched) == 1:
        grid = [np.array(sched)]
    else:
        grid = [np.linspace(a, b, samples_per_interval) for a, b in zip(sched[:-1], sched[1:])]
    return np.unique(np.concatenate(grid + [path.breakpoint_times()]))


def validate(
    path: PlannedPath,
    scenario: Scenario,
    samples_per_interval: int = 2048,
    tol: float | None = None,
    node_tol: float = 1e-9,
) -> ValidationReport:
    """Sampled certification of the three path conditions and node equality."""
    if samples_per_interval < 2:
        raise ValueError("samples_per_interval must be >= 2")
    tol = scenario.options.tolerance if tol is None else tol
    scale = scenario.scene_scale()
    n, r_max = scenario.spec.n, scenario.spec.r_max
    if len(path.times) != n:
        raise ScenarioError(f"path has {len(path.times)} robots, scenario has {n}")
    if len(path.schedule) != r_max:
        raise ScenarioError(f"path schedule has {len(path.schedule)} nodes, scenario needs {r_max}")
    ts = sample_times(path, samples_per_interval)
    pos = path.positions(ts)  # (T, n, d)
    rr = np.inf
    for a in range(n):
        for b in range(a + 1, n):
            rr = min(rr, float(np.linalg.norm(pos[:, a] - pos[:, b], axis=-1).min()))
    ro = float(np.linalg.norm(pos[:, :, None, :] - scenario.obstacles[None, None], axis=-1).min())
    node_err, stop_err = 0.0, 0.0
    for k, tk in enumerate(path.schedule, start=1):
        at = path.positions([tk])[0]
        for i in range(n):
            err = float(np.linalg.norm(at[i] - scenario.target(i, k)))
            if k <= len(scenario.targets[i]):
                node_err = max(node_err, err)
            else:
                stop_err = max(stop_err, err)
    ok = rr > tol * scale and ro > tol * scale and node_err <= node_tol * scale and stop_err <= node_tol * scale
    return ValidationReport(rr, ro, node_err, stop_err, scale, len(ts), bool(ok))
