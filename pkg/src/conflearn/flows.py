"""Vector-field calculus on belief spaces.

Graded updates that are additive in their confidence are flows; this module
exposes their generating vector fields, combines fields to observe several
statements in parallel, integrates fields with a fixed-step RK4/Euler scheme
(with per-step projection back onto the simplex), and interleaves two flows
to approximate their parallel combination from sequential updates.

The Fisher/euclidean gradient utilities let callers verify that a learner's
update direction is metric gradient ascent on its belief functional.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence, Tuple

import numpy as np

from .beliefs import FiniteSimplex, GaussianBelief, GradedBeliefTable
from .confidence import ConfidenceValue, get_domain
from .errors import (
    DomainError,
    NoLimitError,
    NumericalError,
    ParameterError,
    UnsupportedError,
)
from .learners import Learner

__all__ = [
    "TangentVector",
    "VectorFieldHandle",
    "IntegratorConfig",
    "TrajectoryRecord",
    "ParallelObservation",
    "belief_coords",
    "belief_rebuild",
    "coord_labels",
    "derivative_field",
    "parallel_field",
    "natural_gradient",
    "metric_gradient",
    "combine_fields",
    "integrate",
    "integrate_sampled",
    "trotter_interleave",
    "additive_form",
]

_SUM_TOL = 1e-10


# ---------------------------------------------------------------------------
# Coordinates for each belief representation.


def belief_coords(theta) -> np.ndarray:
    """Flatten a belief state into the coordinate vector fields act on."""
    if isinstance(theta, FiniteSimplex):
        return np.asarray(theta.probs, dtype=float).copy()
    if isinstance(theta, GaussianBelief):
        return np.array([theta.mean, theta.var])
    if isinstance(theta, GradedBeliefTable):
        return np.array([theta.entries[k] for k in theta.keys()])
    if isinstance(theta, np.ndarray):
        return np.asarray(theta, dtype=float).copy()
    raise UnsupportedError(f"no coordinates for {type(theta).__name__}")


def belief_rebuild(template, vec: np.ndarray):
    """Rebuild a belief like ``template`` from coordinates, projecting back
    into the representation's constraint set (simplex: clip and renormalize;
    grades: clamp to [0, 1]; variance: clamp to >= 0)."""
    vec = np.asarray(vec, dtype=float)
    if not np.all(np.isfinite(vec)):
        raise NumericalError("non-finite coordinates during integration")
    if isinstance(template, FiniteSimplex):
        clipped = np.clip(vec, 0.0, None)
        if clipped.sum() <= 0.0:
            raise NumericalError("probability mass vanished during integration")
        return template.with_probs(clipped)
    if isinstance(template, GaussianBelief):
        return GaussianBelief(vec[0], max(vec[1], 0.0))
    if isinstance(template, GradedBeliefTable):
        keys = template.keys()
        return GradedBeliefTable(
            {k: float(min(max(v, 0.0), 1.0)) for k, v in zip(keys, vec)}
        )
    if isinstance(template, np.ndarray):
        return vec.copy()
    raise UnsupportedError(f"no coordinates for {type(template).__name__}")


def coord_labels(theta) -> Tuple[str, ...]:
    if isinstance(theta, FiniteSimplex):
        return theta.labels
    if isinstance(theta, GaussianBelief):
        return ("mean", "var")
    if isinstance(theta, GradedBeliefTable):
        return theta.keys()
    if isinstance(theta, np.ndarray):
        return tuple(f"p{i}" for i in range(theta.size))
    raise UnsupportedError(f"no coordinates for {type(theta).__name__}")


def _space_key(theta) -> tuple:
    if isinstance(theta, FiniteSimplex):
        return ("simplex", theta.labels)
    if isinstance(theta, GaussianBelief):
        return ("gaussian",)
    if isinstance(theta, GradedBeliefTable):
        return ("graded", theta.keys())
    if isinstance(theta, np.ndarray):
        return ("params", theta.shape)
    raise UnsupportedError(f"no coordinates for {type(theta).__name__}")


# ---------------------------------------------------------------------------
# Tangent vectors and field handles.


@dataclass(frozen=True)
class TangentVector:
    """A velocity attached to a belief state, in that state's coordinates."""

    base: Any
    components: np.ndarray

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float).copy()
        if not np.all(np.isfinite(comp)):
            raise NumericalError("non-finite tangent components")
        if isinstance(self.base, FiniteSimplex):
            drift = abs(float(comp.sum()))
            if drift > _SUM_TOL:
                raise NumericalError(
                    f"simplex tangent leaves the sum-one plane (drift {drift:.3g})"
                )
        comp.setflags(write=False)
        object.__setattr__(self, "components", comp)


@dataclass(frozen=True)
class VectorFieldHandle:
    """A named, space-tagged vector field; evaluate with ``field(theta)``."""

    label: str
    space: tuple
    eval_at: Callable[[Any], TangentVector]

    def __call__(self, theta) -> TangentVector:
        if _space_key(theta) != self.space:
            raise ParameterError(
                f"field {self.label!r} evaluated on a different belief space"
            )
        return self.eval_at(theta)


@dataclass(frozen=True)
class ParallelObservation:
    """Weighted statements observed simultaneously (a field superposition)."""

    terms: Tuple[Tuple[Any, float], ...]

    def __post_init__(self):
        if not self.terms:
            raise ParameterError("parallel observation needs at least one term")
        for _, w in self.terms:
            if not (math.isfinite(w) and w > 0.0):
                raise ParameterError(f"weights must be positive and finite, got {w!r}")


def _obs_label(learner: Learner, phi) -> str:
    if learner.observation_to_json is not None:
        return json.dumps(learner.observation_to_json(phi), sort_keys=True)
    return repr(phi)


def derivative_field(learner: Learner, phi, h: float = 1e-6) -> VectorFieldHandle:
    """The field generated by vanishing confidence in ``phi``.

    Uses the learner's closed form when registered, otherwise a second-order
    one-sided stencil on the additive flow (the additive axis has nothing to
    the left of zero, so the stencil is forward).
    """
    label = f"{learner.id}:{_obs_label(learner, phi)}"

    if learner.closed_field is not None:
        inner = learner.closed_field(phi)

        def eval_closed(theta) -> TangentVector:
            if not learner.in_domain(phi, theta):
                raise DomainError(f"state outside the update domain of {label}")
            return TangentVector(theta, inner(theta))

        return _LazyHandle(label, eval_closed)

    if learner.make_flow is not None:
        flow = learner.make_flow(phi)

        def eval_fd(theta) -> TangentVector:
            if not learner.in_domain(phi, theta):
                raise DomainError(f"state outside the update domain of {label}")
            c0 = belief_coords(theta)
            c1 = belief_coords(flow(h, theta))
            c2 = belief_coords(flow(2.0 * h, theta))
            v = (-3.0 * c0 + 4.0 * c1 - c2) / (2.0 * h)
            if isinstance(theta, FiniteSimplex):
                v = v - v.mean()  # discard off-plane stencil round-off
            return TangentVector(theta, v)

        return _LazyHandle(label, eval_fd)

    raise UnsupportedError(f"learner {learner.id!r} registers no flow representation")


class _LazyHandle(VectorFieldHandle):
    """Field handle that fixes its space tag on first evaluation."""

    def __init__(self, label: str, eval_at: Callable[[Any], TangentVector]):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "space", None)
        object.__setattr__(self, "eval_at", eval_at)

    def __call__(self, theta) -> TangentVector:
        key = _space_key(theta)
        if self.space is None:
            object.__setattr__(self, "space", key)
        elif key != self.space:
            raise ParameterError(
                f"field {self.label!r} evaluated on a different belief space"
            )
        return self.eval_at(theta)


def parallel_field(learner: Learner, parallel: ParallelObservation, h: float = 1e-6) -> VectorFieldHandle:
    fields = [derivative_field(learner, phi, h=h) for phi, _ in parallel.terms]
    return combine_fields(fields, [w for _, w in parallel.terms])


def combine_fields(
    fields: Sequence[VectorFieldHandle], weights: Optional[Sequence[float]] = None
) -> VectorFieldHandle:
    """Weighted superposition of fields on one belief space.

    Terms are summed in label order so the operation is exactly commutative
    and associative at the float level.
    """
    if not fields:
        raise ParameterError("no fields to combine")
    if weights is None:
        weights = [1.0] * len(fields)
    if len(weights) != len(fields):
        raise ParameterError("one weight per field is required")
    for w in weights:
        if not (math.isfinite(w) and w > 0.0):
            raise ParameterError(f"weights must be positive and finite, got {w!r}")
    pairs = sorted(zip(fields, weights), key=lambda fw: fw[0].label)

    def eval_sum(theta) -> TangentVector:
        total = None
        for f, w in pairs:
            tv = f(theta)
            total = w * tv.components if total is None else total + w * tv.components
        return TangentVector(theta, total)

    label = "(" + " + ".join(
        (f"{w:g}*{f.label}" if w != 1.0 else f.label) for f, w in pairs
    ) + ")"
    return _LazyHandle(label, eval_sum)


# ---------------------------------------------------------------------------
# Metric gradients.


def natural_gradient(
    p: FiniteSimplex,
    f: Callable[[FiniteSimplex], float],
    h: float = 1e-6,
    boundary_eps: float = 1e-9,
) -> TangentVector:
    """Fisher natural gradient of f at p, as a simplex tangent vector.

    Components are p_i (df/dp_i - sum_j p_j df/dp_j); coordinates with mass
    below ``boundary_eps`` are frozen (the boundary pseudoinverse convention).
    Partials are central finite differences through the simplex projection,
    which leaves the projected result unchanged.
    """
    pr = np.asarray(p.probs)
    partials = np.zeros_like(pr)

    def value(vec) -> float:
        out = float(f(p.with_probs(vec)))
        if math.isnan(out):
            raise NumericalError("objective returned NaN")
        return out

    for i, pi in enumerate(pr):
        if pi <= boundary_eps:
            continue
        e = np.zeros_like(pr)
        e[i] = 1.0
        if pi > 2.0 * h:
            partials[i] = (value(pr + h * e) - value(pr - h * e)) / (2.0 * h)
        else:
            partials[i] = (
                -3.0 * value(pr) + 4.0 * value(pr + h * e) - value(pr + 2.0 * h * e)
            ) / (2.0 * h)
    if not np.all(np.isfinite(partials)):
        raise NumericalError("non-finite partial derivatives")
    free = pr > boundary_eps
    w = pr[free]
    lam = float((w * partials[free]).sum() / w.sum())
    comp = np.zeros_like(pr)
    comp[free] = w * (partials[free] - lam)
    return TangentVector(p, comp)


def metric_gradient(
    theta, f: Callable[[Any], float], metric: str, h: float = 1e-4
) -> np.ndarray:
    """Gradient of f at theta under the named metric, in coordinates."""
    if metric == "fisher":
        if not isinstance(theta, FiniteSimplex):
            raise UnsupportedError("fisher metric requires a simplex state")
        return np.asarray(natural_gradient(theta, f, h=h).components)
    if metric != "euclidean":
        raise UnsupportedError(f"unknown metric {metric!r}")
    c0 = belief_coords(theta)
    grad = np.zeros_like(c0)
    for i in range(c0.size):
        e = np.zeros_like(c0)
        e[i] = 1.0
        lo = belief_rebuild(theta, c0 - h * e)
        hi = belief_rebuild(theta, c0 + h * e)
        grad[i] = (float(f(hi)) - float(f(lo))) / (2.0 * h)
    if not np.all(np.isfinite(grad)):
        raise NumericalError("non-finite gradient components")
    return grad


# ---------------------------------------------------------------------------
# Fixed-step integration.


@dataclass(frozen=True)
class IntegratorConfig:
    """Deterministic fixed-step integrator settings.

    ``limit_tol``/``t_max``/``max_steps`` control detection of the infinite-
    confidence limit: the integration stops once the field's sup norm stays
    below ``limit_tol`` for ten consecutive steps, and reports no limit after
    ``max_steps`` steps or time ``t_max``.
    """

    scheme: str = "rk4"
    step: float = 1e-3
    t_max: float = 1e4
    limit_tol: float = 1e-9
    max_steps: int = 10_000_000

    def __post_init__(self):
        if self.scheme not in ("rk4", "euler"):
            raise ParameterError(f"unknown scheme {self.scheme!r}")
        if not (self.step > 0 and self.t_max > 0 and self.limit_tol > 0):
            raise ParameterError("step, t_max and limit_tol must be positive")
        if self.max_steps < 1:
            raise ParameterError("max_steps must be at least 1")


_QUIET_STEPS = 10  # consecutive quiet steps that count as a detected limit


def _coerce_time(t) -> float:
    if isinstance(t, ConfidenceValue):
        return get_domain("add").to_float(get_domain("add").check_member(t))
    t = float(t)
    if math.isnan(t) or t < 0.0:
        raise ParameterError(f"time must be a nonnegative real or top, got {t!r}")
    return t


def _one_step(field: VectorFieldHandle, theta, h: float, scheme: str):
    c0 = belief_coords(theta)
    k1 = field(theta).components
    if scheme == "euler":
        return belief_rebuild(theta, c0 + h * k1)
    k2 = field(belief_rebuild(theta, c0 + 0.5 * h * k1)).components
    k3 = field(belief_rebuild(theta, c0 + 0.5 * h * k2)).components
    k4 = field(belief_rebuild(theta, c0 + h * k3)).components
    return belief_rebuild(theta, c0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def integrate(
    field: VectorFieldHandle,
    theta0,
    t,
    cfg: Optional[IntegratorConfig] = None,
):
    """Follow the field from theta0 for additive time t (top = to the limit)."""
    cfg = cfg or IntegratorConfig()
    t = _coerce_time(t)
    theta = theta0
    if math.isinf(t):
        quiet = 0
        cap = min(cfg.max_steps, int(math.ceil(cfg.t_max / cfg.step)))
        for _ in range(cap):
            theta = _one_step(field, theta, cfg.step, cfg.scheme)
            norm = float(np.abs(field(theta).components).max())
            quiet = quiet + 1 if norm < cfg.limit_tol else 0
            if quiet >= _QUIET_STEPS:
                return theta
        raise NoLimitError(
            f"no limit detected within {cap} steps (field norm still moving)"
        )
    n_full, rem = divmod(t, cfg.step)
    for _ in range(int(n_full)):
        theta = _one_step(field, theta, cfg.step, cfg.scheme)
    if rem > 1e-15:
        theta = _one_step(field, theta, rem, cfg.scheme)
    return theta


@dataclass
class TrajectoryRecord:
    """Sampled states along an integrated path, ready for CSV export."""

    columns: Tuple[str, ...]
    rows: list
    meta: dict = field(default_factory=dict)

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_fmt(x) for x in row))
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def integrate_sampled(
    field: VectorFieldHandle,
    theta0,
    t,
    cfg: Optional[IntegratorConfig] = None,
    step_out: float = 0.1,
) -> Tuple[Any, TrajectoryRecord]:
    """Integrate to finite time t, sampling every ``step_out`` time units.

    The record holds ceil(t / step_out) + 1 rows: the initial state, each
    whole sample time, and the final time.
    """
    cfg = cfg or IntegratorConfig()
    t = _coerce_time(t)
    if math.isinf(t):
        raise ParameterError("sampled integration needs a finite time")
    if step_out <= 0:
        raise ParameterError("step_out must be positive")
    columns = ("t",) + coord_labels(theta0)
    rows = [(0.0,) + tuple(belief_coords(theta0))]
    theta = theta0
    n_samples = int(math.ceil(t / step_out))
    now = 0.0
    for i in range(1, n_samples + 1):
        target = min(i * step_out, t)
        theta = integrate(field, theta, target - now, cfg)
        now = target
        rows.append((now,) + tuple(belief_coords(theta)))
    return theta, TrajectoryRecord(columns, rows, {"t": t, "step_out": step_out})


# ---------------------------------------------------------------------------
# Additive forms and interleaving.


def additive_form(learner: Learner, phi):
    """The learner's commitment flow and confidence translation for phi.

    Returns ``(flow, g)`` with ``flow(t, theta)`` the additive-time update and
    ``g(chi, theta)`` the additive time equivalent to trust ``chi`` at theta,
    so that ``flow(g(chi, theta), theta) == observe(phi, chi, theta)``.
    """
    if learner.make_flow is None or learner.translate is None:
        raise UnsupportedError(
            f"learner {learner.id!r} registers no additive form"
        )
    flow = learner.make_flow(phi)

    def g(chi, theta) -> float:
        return learner.translate(phi, chi, theta)

    return flow, g


def trotter_interleave(
    learner: Learner,
    phi1,
    phi2,
    chi,
    n: int,
    theta0,
):
    """n rounds of (phi1 at chi/n, then phi2 at chi/n) in additive time.

    At n = 1 this is plain sequential observation; as n grows it converges to
    the integral of the combined field at first order in 1/n.
    """
    if n < 1 or int(n) != n:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    t = _coerce_time(chi)
    if math.isinf(t):
        raise ParameterError("interleaving needs a finite total commitment")
    flow1, _ = additive_form(learner, phi1)
    flow2, _ = additive_form(learner, phi2)
    dt = t / n
    theta = theta0
    for _ in range(int(n)):
        theta = flow2(dt, flow1(dt, theta))
    return theta
