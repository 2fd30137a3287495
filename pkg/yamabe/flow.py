"""
The combinatorial Yamabe flow dr_i/dt = -K_i r_i.

`run_flow` integrates with fixed-step RK4, halving the step when a trial
stage leaves the space of nondegenerate metrics, and stops on one of four
outcomes: the curvature converged, a radius collapsed, a tetrahedron pinched,
or the time horizon was reached. Singular behaviour is reported as a
termination value, never raised.
"""

import dataclasses
import json
import logging
import math
from collections import deque
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Callable
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import numpy as np

from .complex import Complex
from .constants import FLOAT_FORMAT
from .constants import Q_MIN
from .curvature import CurvatureField
from .curvature import _field
from .curvature import tet_batch
from .errors import ConfigError
from .errors import DegenerateTetrahedron
from .errors import InputError
from .errors import InvariantFailure
from .errors import StepRejected
from .metric import MetricStructure

__all__ = [
    "FlowConfig",
    "FlowState",
    "FlowReport",
    "Converged",
    "Collapsed",
    "DegeneratePinch",
    "HorizonReached",
    "make_state",
    "yamabe_rhs",
    "step_rk4",
    "classify_termination",
    "check_monotone",
    "run_flow",
    "trajectory_csv",
    "summary_json",
]

logger = logging.getLogger(__name__)

#: Allowed relative increase of k between accepted states
MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class FlowConfig:
    """
    Settings of a flow run. All keys double as config-file keys and, in
    kebab-case, as command-line flags.

    Parameters:
    ---
        dt (float):
            Initial step.

        t_max (float):
            Time horizon.

        tol_converge (float):
            The run has converged once max K - min K drops below this.

        delta_collapse (float):
            A radius has collapsed when r_i / sum r stays below this for two
            consecutive accepted states. Must lie in (0, 1/|S0|).

        q_min (float):
            Degeneracy floor on the normalized Q of every tetrahedron.

        normalize (bool):
            Rescale after each accepted step so that sum r stays constant.

        sample_every (int):
            Accepted steps between recorded samples.

        max_halvings (int):
            Step halvings allowed before a rejected step counts as a pinch.

        seed (int):
            Seed for randomized initial radii.
    """

    dt: float = 1e-2
    t_max: float = 50.0
    tol_converge: float = 1e-8
    delta_collapse: float = 1e-6
    q_min: float = Q_MIN
    normalize: bool = True
    sample_every: int = 10
    max_halvings: int = 40
    seed: int = 0

    @classmethod
    def keys(cls) -> Tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls))

    @classmethod
    def _coerce(cls, key: str, value: Any):
        kind = {f.name: f.type for f in dataclasses.fields(cls)}[key]
        if kind in (bool, "bool"):
            if not isinstance(value, bool):
                raise ConfigError("%s must be true or false, got %r" % (key, value), key=key)
            return value

        if isinstance(value, bool):
            raise ConfigError("%s must be a number, got %r" % (key, value), key=key)

        if kind in (int, "int"):
            if isinstance(value, float) and value.is_integer():
                value = int(value)
            if not isinstance(value, int):
                raise ConfigError("%s must be an integer, got %r" % (key, value), key=key)
            return value

        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError("%s must be a number, got %r" % (key, value), key=key)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], base: Optional["FlowConfig"] = None) -> "FlowConfig":
        """
        Build a config from the keys of `data` on top of `base` (the
        defaults when omitted). `None` values are skipped.
        """

        base = base or cls()
        unknown = sorted(set(data) - set(cls.keys()))
        if unknown:
            raise ConfigError("Unknown config key %r" % (unknown[0]), key=unknown[0])

        changes = {key: cls._coerce(key, value) for key, value in data.items() if value is not None}
        return dataclasses.replace(base, **changes)

    @classmethod
    def load(cls, path) -> "FlowConfig":
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except ValueError as e:
            raise ConfigError("Malformed config file %s: %s" % (path, e))

        if not isinstance(data, dict):
            raise ConfigError("Config file %s must hold a JSON object" % (path))

        return cls.from_mapping(data)

    @classmethod
    def merged(cls, config_path=None, overrides: Optional[Mapping[str, Any]] = None) -> "FlowConfig":
        """Defaults, then the config file, then the explicitly given flags."""

        config = cls.load(config_path) if config_path else cls()
        return cls.from_mapping(overrides or {}, base=config)

    def validate(self, n_vertices: Optional[int] = None) -> "FlowConfig":
        for key in ("dt", "t_max", "q_min", "delta_collapse"):
            value = getattr(self, key)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError("%s must be positive, got %r" % (key, value), key=key)

        if not (math.isfinite(self.tol_converge) and self.tol_converge >= 0):
            raise ConfigError("tol_converge must not be negative", key="tol_converge")

        if self.sample_every < 1:
            raise ConfigError("sample_every must be at least 1", key="sample_every")

        if self.max_halvings < 0:
            raise ConfigError("max_halvings must not be negative", key="max_halvings")

        if n_vertices is not None and not self.delta_collapse < 1.0 / n_vertices:
            raise ConfigError(
                "delta_collapse must be below 1/%d, got %r" % (n_vertices, self.delta_collapse),
                key="delta_collapse",
            )

        return self

    def as_dict(self):
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class FlowState:
    """
    A point of a trajectory with its curvature and monitors.

    `min_q` is the smallest Q over the tetrahedra after each is rescaled to
    geometric-mean radius 1, so it does not depend on the overall scale.
    `pinch` is set only on the last state of a run that ended in a pinch.
    """

    t: float
    metric: MetricStructure
    field: CurvatureField
    min_q: float
    min_q_tet: Tuple[int, ...]
    min_ratio: float
    min_ratio_vertex: int
    complex: Complex = field(repr=False, compare=False)
    pinch: Optional[Tuple[int, ...]] = None

    @property
    def radii(self) -> np.ndarray:
        return self.metric.radii

    @property
    def log_radii(self) -> np.ndarray:
        return np.log(self.metric.radii)

    @property
    def K(self) -> np.ndarray:
        return self.field.K

    @property
    def k(self) -> float:
        return self.field.k

    @property
    def T(self) -> float:
        return self.field.T

    @property
    def spread(self) -> float:
        return self.field.spread


@dataclass(frozen=True)
class Converged:
    k_final: float
    name = "Converged"

    def describe(self) -> str:
        return "converged, k = %.12g" % (self.k_final)


@dataclass(frozen=True)
class Collapsed:
    vertex: int
    name = "Collapsed"

    def describe(self) -> str:
        return "collapsed at vertex %d" % (self.vertex)


@dataclass(frozen=True)
class DegeneratePinch:
    tet: Tuple[int, ...]
    name = "DegeneratePinch"

    def describe(self) -> str:
        return "degenerate pinch at tetrahedron %s" % (list(self.tet),)


@dataclass(frozen=True)
class HorizonReached:
    t_max: float
    name = "HorizonReached"

    def describe(self) -> str:
        return "no collapse observed up to t_max = %g" % (self.t_max)


Termination = Union[Converged, Collapsed, DegeneratePinch, HorizonReached]


@dataclass(frozen=True)
class FlowReport:
    samples: Tuple[FlowState, ...]
    termination: Termination
    steps_accepted: int
    steps_rejected: int
    config: FlowConfig

    @property
    def final(self) -> FlowState:
        return self.samples[-1]

    def describe(self) -> str:
        final = self.final
        return "%s (t = %.6g, %d steps accepted, %d rejected)" % (
            self.termination.describe(),
            final.t,
            self.steps_accepted,
            self.steps_rejected,
        )


def make_state(c: Complex, m: MetricStructure, t: float = 0.0, q_min: float = Q_MIN) -> FlowState:
    """Evaluate curvature and monitors of `m` at time `t`."""

    batch = tet_batch(c, m, q_min)
    batch.require_nondegenerate()
    curvature = _field(c, m, batch)

    q_row = int(np.argmin(batch.qn))
    ratios = m.radii / m.radii.sum()
    r_row = int(np.argmin(ratios))

    return FlowState(
        t=t,
        metric=m,
        field=curvature,
        min_q=float(batch.qn[q_row]),
        min_q_tet=c.tets[q_row],
        min_ratio=float(ratios[r_row]),
        min_ratio_vertex=c.vertices[r_row],
        complex=c,
    )


def yamabe_rhs(c: Complex, m: MetricStructure, q_min: float = Q_MIN) -> np.ndarray:
    """-K_i r_i for every vertex."""

    batch = tet_batch(c, m, q_min)
    batch.require_nondegenerate()
    return -_field(c, m, batch).K * m.radii


def _stage(c: Complex, m: MetricStructure, radii: np.ndarray, q_min: float) -> MetricStructure:
    bad = ~np.isfinite(radii) | (radii <= 0)
    if bad.any():
        raise StepRejected(vertex=c.vertices[int(np.flatnonzero(bad)[0])])

    return m.with_radii(radii)


def _rhs(c: Complex, m: MetricStructure, q_min: float) -> np.ndarray:
    try:
        return yamabe_rhs(c, m, q_min)
    except DegenerateTetrahedron as e:
        raise StepRejected(tet=e.tet, q=e.q)


def step_rk4(state: FlowState, dt: float, q_min: float = Q_MIN) -> FlowState:
    """
    One classical Runge-Kutta step of size `dt`. Raises `StepRejected` when
    a stage or the result has a non-positive radius or a degenerate
    tetrahedron.
    """

    if dt < 0:
        raise InputError("Step must not be negative, got %r" % (dt))

    if dt == 0:
        return state

    c, m = state.complex, state.metric
    r = m.radii

    k1 = -state.field.K * r
    k2 = _rhs(c, _stage(c, m, r + 0.5 * dt * k1, q_min), q_min)
    k3 = _rhs(c, _stage(c, m, r + 0.5 * dt * k2, q_min), q_min)
    k4 = _rhs(c, _stage(c, m, r + dt * k3, q_min), q_min)

    result = _stage(c, m, r + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), q_min)
    try:
        return make_state(c, result, state.t + dt, q_min)
    except DegenerateTetrahedron as e:
        raise StepRejected(tet=e.tet, q=e.q)


def _at_horizon(t: float, t_max: float) -> bool:
    return t_max - t <= 1e-12 * max(1.0, t_max)


def classify_termination(history: Sequence[FlowState], cfg: FlowConfig) -> Optional[Termination]:
    """
    Map the latest states of a run to its outcome, or `None` while the run
    should go on. When several conditions hold at once the order is
    DegeneratePinch, Collapsed, Converged, HorizonReached.
    """

    if not history:
        raise InputError("Cannot classify an empty history")

    last = history[-1]

    if last.pinch is not None:
        return DegeneratePinch(last.pinch)

    if len(history) >= 2 and all(s.min_ratio < cfg.delta_collapse for s in history[-2:]):
        return Collapsed(last.min_ratio_vertex)

    if last.spread < cfg.tol_converge:
        return Converged(last.k)

    if _at_horizon(last.t, cfg.t_max):
        return HorizonReached(cfg.t_max)

    return None


def check_monotone(before: FlowState, after: FlowState, slack: float = MONOTONE_SLACK):
    """
    The average curvature never increases along the flow. Raises
    `InvariantFailure` when k grows by more than slack * (1 + |k|).
    """

    if after.k > before.k + slack * (1.0 + abs(before.k)):
        raise InvariantFailure(
            "average curvature increased from %.17g to %.17g at t = %.17g" % (before.k, after.k, after.t)
        )


def _rescale(state: FlowState, total: float, q_min: float) -> FlowState:
    radii = state.radii * (total / float(state.radii.sum()))
    return make_state(state.complex, state.metric.with_radii(radii), state.t, q_min)


def _pinch_tet(c: Complex, rejection: StepRejected) -> Tuple[int, ...]:
    if rejection.tet is not None:
        return tuple(rejection.tet)

    return c.incident_tets(rejection.vertex)[0]


def run_flow(
    c: Complex,
    r0: MetricStructure,
    cfg: Optional[FlowConfig] = None,
    on_step: Optional[Callable[[FlowState], None]] = None,
) -> FlowReport:
    """
    Integrate the flow from `r0` until it terminates.

    Parameters:
    ---
        c (Complex):
            The triangulation.

        r0 (MetricStructure):
            Initial radii. A degenerate start raises `InputError`.

        cfg (FlowConfig):
            Run settings, defaults when omitted.

        on_step (Callable):
            Called with every accepted state.
    """

    cfg = (cfg or FlowConfig()).validate(c.n_vertices)

    try:
        state = make_state(c, r0, 0.0, cfg.q_min)
    except DegenerateTetrahedron as e:
        raise InputError("Initial metric is degenerate: %s" % (e))

    total = float(r0.radii.sum())
    history = deque([state], maxlen=2)
    samples: List[FlowState] = [state]
    accepted = rejected = 0

    logger.info(
        "flow started: %d vertices, %d tets, dt = %g, t_max = %g, normalize = %s",
        c.n_vertices,
        len(c.tets),
        cfg.dt,
        cfg.t_max,
        cfg.normalize,
    )

    while True:
        termination = classify_termination(list(history), cfg)
        if termination is not None:
            break

        h = min(cfg.dt, cfg.t_max - state.t)
        halvings = 0

        while True:
            try:
                trial = step_rk4(state, h, cfg.q_min)
                break
            except StepRejected as e:
                rejected += 1
                halvings += 1
                logger.debug("t = %.17g: %s, halving step to %g", state.t, e, h / 2)

                if halvings > cfg.max_halvings:
                    trial = dataclasses.replace(state, pinch=_pinch_tet(c, e))
                    break

                h /= 2.0

        if trial.pinch is None:
            accepted += 1
            if cfg.normalize:
                trial = _rescale(trial, total, cfg.q_min)
            check_monotone(state, trial)
            if on_step is not None:
                on_step(trial)

        state = trial
        history.append(state)

        if trial.pinch is not None or accepted % cfg.sample_every == 0:
            samples.append(state)

    if samples[-1] is not state:
        samples.append(state)

    report = FlowReport(tuple(samples), termination, accepted, rejected, cfg)
    logger.info("flow finished: %s", report.describe())
    return report


def _fmt(value: float) -> str:
    return format(float(value), FLOAT_FORMAT)


def trajectory_csv(report: FlowReport) -> str:
    """
    The recorded samples, columns `t, r_<v>..., K_<v>..., k, T, spread, minQ,
    minRatio` with one column per vertex id.
    """

    vertex_ids = report.samples[0].metric.vertex_ids
    header = (
        ["t"]
        + ["r_%d" % (v) for v in vertex_ids]
        + ["K_%d" % (v) for v in vertex_ids]
        + ["k", "T", "spread", "minQ", "minRatio"]
    )

    rows = [",".join(header)]
    for s in report.samples:
        values = [s.t, *s.radii, *s.K, s.k, s.T, s.spread, s.min_q, s.min_ratio]
        rows.append(",".join(_fmt(v) for v in values))

    return "\n".join(rows) + "\n"


def summary_json(report: FlowReport) -> str:
    final = report.final
    data = {
        "termination": report.termination.name,
        "t_final": final.t,
        "k_final": final.k,
        "steps_accepted": report.steps_accepted,
        "steps_rejected": report.steps_rejected,
    }

    return json.dumps(data, indent=2) + "\n"
