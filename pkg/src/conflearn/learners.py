"""Confidence-graded learners.

A :class:`Learner` bundles one update rule with everything the rest of the
package needs to reason about it: its confidence domain, its belief
representation, an optional belief functional ``bel`` (what the update is
gaining confidence *in*), closed-form flow/field representations when they
exist, and deterministic instance samplers used by the axiom lab.

Built-in registry ids:

- ``"interp"``      linear interpolation toward the conditioned simplex
- ``"ds"``          Dempster-Shafer plausibility update via simple support
- ``"kalman"``      scalar Kalman estimator driven by (gain, variance) pairs
- ``"boltzmann"``   exponential reweighting by a penalty variable
- ``"bayes"``       Bayesian posterior as a Boltzmann learner at weight 1
- ``"max-graded"``  per-statement plateau update (keep the stronger grade)
- ``"classifier"``  iterated gradient steps on a softmax regression loss

All ``observe`` implementations share the signature
``observe(observation, confidence, belief) -> belief`` and satisfy the
no-confidence identity and the sequential-combination law of their domain.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .confidence import (
    ConfidenceDomain,
    ConfidenceValue,
    get_domain,
    list_extend,
)
from .beliefs import (
    EventSet,
    FiniteSimplex,
    GaussianBelief,
    GradedBeliefTable,
    MassFunction,
    RandomVariable,
    condition,
    ds_plaus_update,
    MASS_EPS,
)
from .errors import (
    DomainError,
    ParameterError,
    UnsupportedError,
    ZeroMassEventError,
)

__all__ = [
    "Learner",
    "get_learner",
    "available_learners",
    "in_domain",
    "lift_to_list",
    "interp_observe",
    "optimal_gain",
    "kalman_observe",
    "kalman_observe_opt",
    "boltzmann_observe",
    "BayesModel",
    "bayes_observe",
    "potential_to_likelihood",
    "DEFAULT_BAYES_MODEL",
    "max_graded_observe",
    "SoftmaxModel",
    "LabeledExample",
    "classifier_step_observe",
    "train_limit",
    "NonConvergenceWarning",
]


class NonConvergenceWarning(UserWarning):
    """The capped full-confidence iteration stopped before its fixed point."""


@dataclass(frozen=True)
class Learner:
    """An update rule plus the structure other modules probe it with.

    Optional fields are ``None`` when the learner does not register that
    representation; consumers treat a missing hook as "unsupported" rather
    than an error in the learner itself.
    """

    id: str
    domain: ConfidenceDomain
    belief_kind: str
    observe: Callable[[Any, ConfidenceValue, Any], Any]
    in_domain: Callable[[Any, Any], bool]
    bel: Optional[Callable[[Any, Any], float]] = None
    bel_top: Optional[Callable[[Any, Any], float]] = None
    translate: Optional[Callable[[Any, ConfidenceValue, Any], float]] = None
    make_flow: Optional[Callable[[Any], Callable[[float, Any], Any]]] = None
    closed_field: Optional[Callable[[Any], Callable[[Any], np.ndarray]]] = None
    path_velocity: Optional[Callable[[Any, Any, float], np.ndarray]] = None
    lb_metric: Optional[str] = None
    sample_instance: Optional[Callable[[np.random.Generator], Tuple[Any, Any]]] = None
    sample_saturated: Optional[Callable[[np.random.Generator], Tuple[Any, Any]]] = None
    sample_top_instance: Optional[Callable[[np.random.Generator], Tuple[Any, Any]]] = None
    sample_confidence: Optional[Callable[[np.random.Generator], ConfidenceValue]] = None
    default_grid: Tuple[ConfidenceValue, ...] = ()
    bel_chain: Optional[Callable[[Any, Any], Sequence[ConfidenceValue]]] = None
    observation_to_json: Optional[Callable[[Any], dict]] = None
    observation_from_json: Optional[Callable[[Mapping, Any], Any]] = None
    # True when the full-confidence update absorbs any further update on the
    # same observation; the list lift is only well defined in that case.
    top_absorbing: bool = True
    notes: str = ""

    def __repr__(self) -> str:
        return f"Learner({self.id!r}, domain={self.domain.id!r}, beliefs={self.belief_kind!r})"


def _world_labels(n: int) -> Tuple[str, ...]:
    return tuple(f"w{i}" for i in range(n))


def _sample_simplex_instance(rng: np.random.Generator) -> Tuple[EventSet, FiniteSimplex]:
    """A random interior simplex and a nonempty proper event with real mass."""
    n = int(rng.integers(2, 7))
    labels = _world_labels(n)
    p = FiniteSimplex(labels, rng.dirichlet(np.ones(n)))
    full = (1 << n) - 1
    for _ in range(64):
        mask = int(rng.integers(1, full))
        a = EventSet(labels, mask)
        if p.prob(a) > 1e-6:
            return a, p
    return EventSet(labels, 1), p


# ---------------------------------------------------------------------------
# Interpolation learner (fractional support on event observations).


def interp_observe(
    a: EventSet, alpha: Union[float, ConfidenceValue], p: FiniteSimplex
) -> FiniteSimplex:
    """Mix the prior with its conditioning on ``a`` at weight alpha."""
    frac = get_domain("frac")
    v = frac.coerce(alpha)
    if v.is_bot:
        return p
    cond = condition(p, a)
    if v.is_top:
        return cond
    w = v.payload
    return p.with_probs((1.0 - w) * np.asarray(p.probs) + w * np.asarray(cond.probs))


def _interp_flow(a: EventSet):
    def flow(t: float, p: FiniteSimplex) -> FiniteSimplex:
        if math.isinf(t):
            return condition(p, a)
        return interp_observe(a, -math.expm1(-t), p)

    return flow


def _interp_field(a: EventSet):
    def field(p: FiniteSimplex) -> np.ndarray:
        return np.asarray(condition(p, a).probs) - np.asarray(p.probs)

    return field


def _frac_translate(phi, chi: ConfidenceValue, theta) -> float:
    frac = get_domain("frac")
    v = frac.coerce(chi)
    if v.is_top:
        return math.inf
    return -math.log1p(-frac.to_float(v))


def _event_to_json(a: EventSet) -> dict:
    return {"event": list(a.members())}


def _event_from_json(obj: Mapping, belief) -> EventSet:
    return EventSet.from_names(belief.labels, obj["event"])


def make_interp_learner() -> Learner:
    frac = get_domain("frac")

    def sample_saturated(rng):
        n = int(rng.integers(2, 6))
        labels = _world_labels(n)
        size = int(rng.integers(1, n))
        idx = rng.choice(n, size=size, replace=False)
        probs = np.zeros(n)
        probs[idx] = rng.dirichlet(np.ones(size))
        mask = int(sum(1 << int(i) for i in idx))
        return EventSet(labels, mask), FiniteSimplex(labels, probs)

    return Learner(
        id="interp",
        domain=frac,
        belief_kind="simplex",
        observe=interp_observe,
        in_domain=lambda a, p: p.prob(a) > MASS_EPS,
        bel=lambda a, p: math.log(p.prob(a)) if p.prob(a) > 0 else -math.inf,
        bel_top=lambda a, p: 0.0,
        translate=_frac_translate,
        make_flow=_interp_flow,
        closed_field=_interp_field,
        lb_metric="fisher",
        sample_instance=_sample_simplex_instance,
        sample_saturated=sample_saturated,
        sample_confidence=lambda rng: frac.sample(rng),
        default_grid=(
            frac.bot,
            frac.value(0.25),
            frac.value(0.5),
            frac.value(0.75),
            frac.top,
        ),
        observation_to_json=_event_to_json,
        observation_from_json=_event_from_json,
        notes="posterior = (1-alpha) P + alpha P(.|a); Bel = log P(a)",
    )


# ---------------------------------------------------------------------------
# Dempster-Shafer learner.


def make_ds_learner() -> Learner:
    frac = get_domain("frac")

    def sample_instance(rng):
        n = int(rng.integers(2, 5))
        labels = _world_labels(n)
        full = (1 << n) - 1
        k = int(rng.integers(2, 6))
        masks = [int(rng.integers(1, full + 1)) for _ in range(k)]
        weights = rng.dirichlet(np.ones(k))
        table: Dict[int, float] = {}
        for s, w in zip(masks, weights):
            table[s] = table.get(s, 0.0) + float(w)
        m = MassFunction(labels, table)
        for _ in range(64):
            mask = int(rng.integers(1, full))
            a = EventSet(labels, mask)
            if m.plaus(a) > 1e-6:
                return a, m
        return EventSet(labels, full), m

    def sample_saturated(rng):
        n = int(rng.integers(2, 5))
        labels = _world_labels(n)
        full = (1 << n) - 1
        mask = int(rng.integers(1, full))
        a = EventSet(labels, mask)
        k = int(rng.integers(1, 4))
        subs = []
        for _ in range(k):
            sub = mask & int(rng.integers(1, full + 1))
            subs.append(sub if sub else mask)
        weights = rng.dirichlet(np.ones(len(subs)))
        table: Dict[int, float] = {}
        for s, w in zip(subs, weights):
            table[s] = table.get(s, 0.0) + float(w)
        return a, MassFunction(labels, table)

    def flow_factory(a: EventSet):
        def flow(t: float, m: MassFunction) -> MassFunction:
            alpha = 1.0 if math.isinf(t) else -math.expm1(-t)
            return ds_plaus_update(m, a, alpha)

        return flow

    return Learner(
        id="ds",
        domain=frac,
        belief_kind="mass",
        observe=lambda a, chi, m: ds_plaus_update(m, a, chi),
        in_domain=lambda a, m: m.plaus(a) > MASS_EPS,
        bel=lambda a, m: m.bel(a),
        bel_top=lambda a, m: 1.0,
        translate=_frac_translate,
        make_flow=flow_factory,
        sample_instance=sample_instance,
        sample_saturated=sample_saturated,
        sample_confidence=lambda rng: frac.sample(rng),
        default_grid=(
            frac.bot,
            frac.value(0.25),
            frac.value(0.5),
            frac.value(0.75),
            frac.top,
        ),
        observation_to_json=_event_to_json,
        observation_from_json=_event_from_json,
        notes="Dempster combination with a simple support; Bel = belief function",
    )


# ---------------------------------------------------------------------------
# Kalman learner.


def optimal_gain(var: float, r2: float) -> float:
    """The variance-minimizing gain var/(var + r2), with inf conventions.

    An infinitely noisy sensor contributes nothing (gain 0); when the state
    is infinitely uncertain and the sensor is not, the sensor takes over
    (gain 1); a certain state never moves (gain 0).
    """
    if r2 < 0 or var < 0:
        raise ParameterError("variances must be nonnegative")
    if math.isinf(r2):
        return 0.0
    if math.isinf(var):
        return 1.0
    if var == 0.0:
        return 0.0
    return var / (var + r2)


def kalman_observe(
    z: float, c: Union[ConfidenceValue, Tuple[float, float]], b: GaussianBelief
) -> GaussianBelief:
    """One gain-weighted measurement update of a scalar Gaussian state."""
    dom = get_domain("kalman")
    v = dom.coerce(c if isinstance(c, ConfidenceValue) else tuple(c))
    if v.is_bot:
        return b
    if v.is_top:
        return GaussianBelief(float(z), 0.0)
    k, r2 = v.payload
    mean = b.mean + k * (float(z) - b.mean)
    if k == 1.0:
        var = r2
    elif math.isinf(b.var):
        var = math.inf
    else:
        var = (1.0 - k) ** 2 * b.var + k * k * r2
    return GaussianBelief(mean, var)


def kalman_observe_opt(z: float, r2: float, b: GaussianBelief) -> GaussianBelief:
    """Measurement update with the optimal gain for sensor variance r2."""
    k = optimal_gain(b.var, r2)
    if math.isinf(r2):
        return b
    return kalman_observe(z, (k, r2), b)


def make_kalman_learner() -> Learner:
    dom = get_domain("kalman")

    def path_velocity(z, b: GaussianBelief, h: float) -> np.ndarray:
        # derivative of the update path in the gain at K = 0 (any fixed r2);
        # second-order one-sided stencil, exact here since the path is
        # quadratic in the gain
        def coords(k):
            out = kalman_observe(z, (k, 1.0), b)
            return np.array([out.mean, out.var])

        f0 = np.array([b.mean, b.var])
        return (-3.0 * f0 + 4.0 * coords(h) - coords(2.0 * h)) / (2.0 * h)

    def bel_chain(z, b: GaussianBelief):
        if b.var <= 0.0:
            return (
                dom.bot,
                dom.value((0.3, 0.0)),
                dom.value((0.7, 0.0)),
                dom.top,
            )
        chain = [dom.bot]
        for r2 in (4.0 * b.var, b.var, b.var / 4.0, b.var / 16.0):
            chain.append(dom.value((optimal_gain(b.var, r2), r2)))
        chain.append(dom.top)
        return tuple(chain)

    def sample_instance(rng):
        z = float(rng.normal(0.0, 2.0))
        mean = float(rng.normal(0.0, 2.0))
        var = float(math.exp(rng.uniform(math.log(0.05), math.log(5.0))))
        return z, GaussianBelief(mean, var)

    def sample_saturated(rng):
        z = float(rng.normal(0.0, 2.0))
        return z, GaussianBelief(z, 0.0)

    return Learner(
        id="kalman",
        domain=dom,
        belief_kind="gaussian",
        observe=kalman_observe,
        in_domain=lambda z, b: True,
        bel=lambda z, b: -(0.5 * (b.mean - float(z)) ** 2 + b.var * b.var),
        bel_top=lambda z, b: 0.0,
        path_velocity=path_velocity,
        lb_metric="euclidean",
        sample_instance=sample_instance,
        sample_saturated=sample_saturated,
        sample_confidence=lambda rng: dom.sample(rng),
        default_grid=(
            dom.bot,
            dom.value((0.3, 2.0)),
            dom.value((0.5, 1.0)),
            dom.value((0.8, 0.5)),
            dom.top,
        ),
        bel_chain=bel_chain,
        observation_to_json=lambda z: {"z": float(z)},
        observation_from_json=lambda obj, b: float(obj["z"]),
        # A later update with gain K and noise r2 reinflates the variance to
        # K^2 r2 even after a certain measurement, so top does not absorb.
        top_absorbing=False,
        notes="x' = x + K(z - x), var' = (1-K)^2 var + K^2 r2; Bel = -(err^2/2 + var^2)",
    )


# ---------------------------------------------------------------------------
# Boltzmann learner.


def boltzmann_observe(
    v: RandomVariable, beta: Union[float, ConfidenceValue], p: FiniteSimplex
) -> FiniteSimplex:
    """Reweight by exp(-beta * v), computed in log space on the support.

    At full confidence the posterior conditions on the v-minimizing worlds of
    the support, ties sharing mass in proportion to the prior.
    """
    if v.labels != p.labels:
        raise ParameterError("penalty variable over a different world set")
    add = get_domain("add")
    chi = add.coerce(beta)
    if chi.is_bot:
        return p
    pr = np.asarray(p.probs)
    supp = pr > 0.0
    vals = np.asarray(v.values)
    if chi.is_top:
        vmin = vals[supp].min()
        w = np.where(supp & (vals == vmin), pr, 0.0)
        return p.with_probs(w)
    b = chi.payload
    logw = np.log(pr[supp]) - b * vals[supp]
    w = np.zeros_like(pr)
    w[supp] = np.exp(logw - logw.max())
    return p.with_probs(w)


def _boltzmann_field(v: RandomVariable):
    def field(p: FiniteSimplex) -> np.ndarray:
        pr = np.asarray(p.probs)
        mean = float(pr @ v.values)
        return pr * (mean - np.asarray(v.values))

    return field


def make_boltzmann_learner() -> Learner:
    add = get_domain("add")

    def sample_instance(rng):
        n = int(rng.integers(2, 7))
        labels = _world_labels(n)
        p = FiniteSimplex(labels, rng.dirichlet(np.ones(n)))
        v = RandomVariable(labels, rng.normal(0.0, 1.0, size=n))
        return v, p

    def sample_saturated(rng):
        n = int(rng.integers(2, 6))
        labels = _world_labels(n)
        size = int(rng.integers(1, n))
        idx = rng.choice(n, size=size, replace=False)
        probs = np.zeros(n)
        probs[idx] = rng.dirichlet(np.ones(size))
        vals = rng.uniform(0.5, 2.0, size=n)
        vals[idx] = 0.0  # constant on the support, so Bel is already maximal
        return RandomVariable(labels, vals), FiniteSimplex(labels, probs)

    def bel_top(v, p):
        pr = np.asarray(p.probs)
        return -float(np.asarray(v.values)[pr > 0.0].min())

    return Learner(
        id="boltzmann",
        domain=add,
        belief_kind="simplex",
        observe=boltzmann_observe,
        in_domain=lambda v, p: True,
        bel=lambda v, p: -float(np.asarray(p.probs) @ v.values),
        bel_top=bel_top,
        translate=lambda v, chi, p: get_domain("add").to_float(chi),
        make_flow=lambda v: (lambda t, p: boltzmann_observe(v, t, p)),
        closed_field=_boltzmann_field,
        lb_metric="fisher",
        sample_instance=sample_instance,
        sample_saturated=sample_saturated,
        sample_confidence=lambda rng: add.sample(rng),
        default_grid=(
            add.bot,
            add.value(0.1),
            add.value(0.5),
            add.value(1.5),
            add.value(3.0),
            add.top,
        ),
        observation_to_json=lambda v: {"values": {l: float(x) for l, x in zip(v.labels, v.values)}},
        observation_from_json=lambda obj, p: RandomVariable.from_dict(p.labels, obj["values"]),
        notes="posterior ~ P * exp(-beta v); Bel = -E_P[v]",
    )


# ---------------------------------------------------------------------------
# Bayesian learner (a Boltzmann learner whose penalty is -log likelihood).


@dataclass(frozen=True)
class BayesModel:
    """Hypothesis labels plus a likelihood table P(observation | hypothesis).

    Rows are keyed by observation id; each row holds one value per hypothesis
    in [0, 1].  Rows need not normalize across observations.
    """

    hypotheses: Tuple[str, ...]
    likelihood: Mapping[str, np.ndarray]

    def __post_init__(self):
        hyps = tuple(self.hypotheses)
        if not hyps or len(set(hyps)) != len(hyps):
            raise ParameterError("hypothesis labels must be nonempty and unique")
        object.__setattr__(self, "hypotheses", hyps)
        table = {}
        for key, row in self.likelihood.items():
            row = np.asarray(row, dtype=float).copy()
            if row.shape != (len(hyps),):
                raise ParameterError(f"likelihood row {key!r} does not match hypotheses")
            if not np.all(np.isfinite(row)) or row.min() < 0.0 or row.max() > 1.0:
                raise ParameterError(f"likelihood row {key!r} outside [0, 1]")
            row.setflags(write=False)
            table[str(key)] = row
        if not table:
            raise ParameterError("at least one observation row is required")
        object.__setattr__(self, "likelihood", table)

    @property
    def observations(self) -> Tuple[str, ...]:
        return tuple(self.likelihood)

    @property
    def is_strict(self) -> bool:
        return all(row.min() > 0.0 for row in self.likelihood.values())

    def row(self, key: str) -> np.ndarray:
        if key not in self.likelihood:
            raise ParameterError(f"unknown observation {key!r}")
        return self.likelihood[key]


def bayes_observe(model: BayesModel, key: str, prior: FiniteSimplex) -> FiniteSimplex:
    """Exact Bayesian conditioning: posterior ~ prior * likelihood."""
    if prior.labels != model.hypotheses:
        raise ParameterError("prior is not over the model's hypotheses")
    w = np.asarray(prior.probs) * model.row(key)
    if w.sum() <= MASS_EPS:
        raise ZeroMassEventError(f"observation {key!r} has zero evidence")
    return prior.with_probs(w)


def potential_to_likelihood(
    u: Mapping[str, Union[Mapping[str, float], Sequence[float]]],
    hypotheses: Optional[Sequence[str]] = None,
) -> BayesModel:
    """Turn nonnegative penalties u(obs, h) into the likelihood exp(-u).

    This realizes a penalty-driven learner as an exact Bayesian one: each
    observation becomes an event whose likelihood given h is exp(-u(obs, h)),
    so weight-1 exponential reweighting and Bayes' rule coincide.
    """
    rows = {}
    hyps: Optional[Tuple[str, ...]] = tuple(hypotheses) if hypotheses else None
    for key, row in u.items():
        if isinstance(row, Mapping):
            if hyps is None:
                hyps = tuple(row)
            vals = np.array([float(row[h]) for h in hyps])
        else:
            vals = np.asarray(row, dtype=float)
            if hyps is None:
                hyps = tuple(f"h{i}" for i in range(len(vals)))
        if vals.min() < 0.0 or not np.all(np.isfinite(vals)):
            raise ParameterError(f"penalties for {key!r} must be finite and >= 0")
        rows[key] = np.exp(-vals)
    if hyps is None:
        raise ParameterError("empty potential table")
    return BayesModel(hyps, rows)


DEFAULT_BAYES_MODEL = BayesModel(
    ("h1", "h2", "h3"),
    {
        "e1": np.array([0.80, 0.30, 0.10]),
        "e2": np.array([0.15, 0.50, 0.60]),
        "e3": np.array([0.05, 0.20, 0.30]),
    },
)


def make_bayes_learner(model: Optional[BayesModel] = None) -> Learner:
    model = model or DEFAULT_BAYES_MODEL
    add = get_domain("add")

    def observe(key: str, chi, p: FiniteSimplex) -> FiniteSimplex:
        v = add.coerce(chi)
        if v.is_bot:
            return p
        lik = model.row(key)
        pr = np.asarray(p.probs)
        supp = (pr > 0.0) & (lik > 0.0)
        if not supp.any():
            raise ZeroMassEventError(f"observation {key!r} contradicts the prior")
        if v.is_top:
            lmax = lik[supp].max()
            w = np.where(supp & (lik == lmax), pr, 0.0)
            return p.with_probs(w)
        b = v.payload
        logw = np.log(pr[supp]) + b * np.log(lik[supp])
        w = np.zeros_like(pr)
        w[supp] = np.exp(logw - logw.max())
        return p.with_probs(w)

    def bel(key: str, p: FiniteSimplex) -> float:
        lik = model.row(key)
        pr = np.asarray(p.probs)
        supp = pr > 0.0
        if np.any(supp & (lik <= 0.0)):
            return -math.inf
        return float(pr[supp] @ np.log(lik[supp]))

    def bel_top(key: str, p: FiniteSimplex) -> float:
        lik = model.row(key)
        supp = np.asarray(p.probs) > 0.0
        if not np.any(supp & (lik > 0.0)):
            return -math.inf
        return float(np.log(lik[supp & (lik > 0.0)].max()))

    def closed_field(key: str):
        lik = model.row(key)

        def fieldfn(p: FiniteSimplex) -> np.ndarray:
            pr = np.asarray(p.probs)
            supp = pr > 0.0
            v = np.zeros_like(pr)
            v[supp] = -np.log(lik[supp])
            mean = float(pr @ v)
            out = pr * (mean - v)
            out[~supp] = 0.0
            return out

        return fieldfn

    def in_domain_fn(key: str, p: FiniteSimplex) -> bool:
        lik = model.row(key)
        return not np.any((np.asarray(p.probs) > 0.0) & (lik <= 0.0))

    def sample_instance(rng):
        n = len(model.hypotheses)
        p = FiniteSimplex(model.hypotheses, rng.dirichlet(np.ones(n)))
        key = model.observations[int(rng.integers(len(model.observations)))]
        return key, p

    def sample_saturated(rng):
        n = len(model.hypotheses)
        probs = np.zeros(n)
        probs[int(rng.integers(n))] = 1.0
        key = model.observations[int(rng.integers(len(model.observations)))]
        return key, FiniteSimplex(model.hypotheses, probs)

    return Learner(
        id="bayes",
        domain=add,
        belief_kind="simplex",
        observe=observe,
        in_domain=in_domain_fn,
        bel=bel,
        bel_top=bel_top,
        translate=lambda key, chi, p: add.to_float(chi),
        make_flow=lambda key: (lambda t, p: observe(key, t, p)),
        closed_field=closed_field,
        lb_metric="fisher",
        sample_instance=sample_instance,
        sample_saturated=sample_saturated,
        sample_confidence=lambda rng: add.sample(rng),
        default_grid=(
            add.bot,
            add.value(0.1),
            add.value(0.5),
            add.value(1.5),
            add.value(3.0),
            add.top,
        ),
        observation_to_json=lambda key: {"id": key},
        observation_from_json=lambda obj, p: str(obj["id"]),
        notes="posterior ~ P(h) P(obs|h)^beta; exact Bayes at beta = 1",
    )


# ---------------------------------------------------------------------------
# Max-graded learner.


def max_graded_observe(
    key: str, chi: Union[float, ConfidenceValue], table: GradedBeliefTable
) -> GradedBeliefTable:
    """Keep the stronger of the stored grade and the offered confidence."""
    dom = get_domain("max")
    x = dom.to_float(dom.coerce(chi))
    g = table.grade(key)
    if x <= g:
        return table
    return table.with_grade(key, x)


def _max_translate(key: str, chi, table: GradedBeliefTable) -> float:
    dom = get_domain("max")
    x = dom.to_float(dom.coerce(chi))
    g = table.grade(key)
    if x <= g:
        return 0.0
    if x >= 1.0:
        return math.inf
    return math.log((1.0 - g) / (1.0 - x))


def make_max_graded_learner() -> Learner:
    dom = get_domain("max")

    def flow_factory(key: str):
        def flow(t: float, table: GradedBeliefTable) -> GradedBeliefTable:
            g = table.grade(key)
            new = 1.0 if math.isinf(t) else 1.0 - (1.0 - g) * math.exp(-t)
            return table.with_grade(key, new)

        return flow

    def closed_field(key: str):
        def fieldfn(table: GradedBeliefTable) -> np.ndarray:
            keys = table.keys()
            out = np.zeros(len(keys))
            out[keys.index(key)] = 1.0 - table.grade(key)
            return out

        return fieldfn

    def sample_instance(rng):
        keys = ("phi1", "phi2", "phi3")
        table = GradedBeliefTable({k: float(rng.uniform(0.0, 0.95)) for k in keys})
        return keys[int(rng.integers(3))], table

    def sample_saturated(rng):
        key, table = sample_instance(rng)
        return key, table.with_grade(key, 1.0)

    return Learner(
        id="max-graded",
        domain=dom,
        belief_kind="graded",
        observe=max_graded_observe,
        in_domain=lambda key, table: key in table.entries,
        bel=lambda key, table: table.grade(key),
        bel_top=lambda key, table: 1.0,
        translate=_max_translate,
        make_flow=flow_factory,
        closed_field=closed_field,
        sample_instance=sample_instance,
        sample_saturated=sample_saturated,
        sample_confidence=lambda rng: dom.sample(rng),
        default_grid=(
            dom.bot,
            dom.value(0.25),
            dom.value(0.5),
            dom.value(0.75),
            dom.top,
        ),
        observation_to_json=lambda key: {"id": key},
        observation_from_json=lambda obj, table: str(obj["id"]),
        notes="grade' = max(grade, chi); saturating exponential in additive time",
    )


# ---------------------------------------------------------------------------
# Classifier learner: iterated gradient steps on softmax regression.


@dataclass(frozen=True)
class SoftmaxModel:
    """Shape and step-size hyperparameters for the gradient-step learner."""

    n_features: int = 1
    n_classes: int = 2
    eta: float = 0.1
    conv_tol: float = 1e-9
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.n_features < 1 or self.n_classes < 2:
            raise ParameterError("need at least 1 feature and 2 classes")
        if not self.eta > 0.0:
            raise ParameterError("learning rate must be positive")

    @property
    def dim(self) -> int:
        return self.n_classes * (self.n_features + 1)

    def init_params(self) -> np.ndarray:
        return np.zeros(self.dim)


@dataclass(frozen=True)
class LabeledExample:
    x: np.ndarray
    y: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).copy()
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", int(self.y))


def _unpack(model: SoftmaxModel, theta: np.ndarray):
    k, d = model.n_classes, model.n_features
    return theta[: k * d].reshape(k, d), theta[k * d:]


def _check_example(model: SoftmaxModel, ex: LabeledExample) -> None:
    if ex.x.shape != (model.n_features,):
        raise ParameterError("example features do not match the model")
    if not 0 <= ex.y < model.n_classes:
        raise ParameterError(f"label {ex.y} outside {model.n_classes} classes")


def class_log_probs(model: SoftmaxModel, theta: np.ndarray, x: np.ndarray) -> np.ndarray:
    w, b = _unpack(model, theta)
    logits = w @ x + b
    logits = logits - logits.max()
    return logits - math.log(np.exp(logits).sum())


def _nll_grad(model: SoftmaxModel, theta: np.ndarray, ex: LabeledExample) -> np.ndarray:
    err = np.exp(class_log_probs(model, theta, ex.x))
    err[ex.y] -= 1.0
    return np.concatenate([np.outer(err, ex.x).ravel(), err])


def gradient_step(model: SoftmaxModel, theta: np.ndarray, ex: LabeledExample) -> np.ndarray:
    return theta - model.eta * _nll_grad(model, theta, ex)


def train_limit(
    model: SoftmaxModel, theta: np.ndarray, ex: LabeledExample
) -> Tuple[np.ndarray, bool]:
    """Iterate gradient steps until the step displacement stalls.

    Returns the final parameters and whether the convergence threshold was
    reached before the iteration cap.
    """
    theta = np.asarray(theta, dtype=float).copy()
    for _ in range(model.max_steps):
        delta = model.eta * _nll_grad(model, theta, ex)
        if np.abs(delta).max() < model.conv_tol:
            return theta, True
        theta = theta - delta
    return theta, False


def classifier_step_observe(
    ex: LabeledExample,
    n: Union[int, ConfidenceValue],
    theta: np.ndarray,
    model: Optional[SoftmaxModel] = None,
) -> np.ndarray:
    """Apply n gradient steps on the example's loss; n = top runs to the cap.

    Non-convergence at the cap is reported as a :class:`NonConvergenceWarning`
    rather than an exception: the state reached is still a belief, just not a
    fixed point.
    """
    model = model or SoftmaxModel()
    _check_example(model, ex)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (model.dim,):
        raise ParameterError("parameter vector does not match the model shape")
    count = get_domain("count")
    v = count.coerce(n)
    if v.is_bot:
        return theta.copy()
    if v.is_top:
        out, converged = train_limit(model, theta, ex)
        if not converged:
            warnings.warn(
                f"no fixed point within {model.max_steps} steps",
                NonConvergenceWarning,
                stacklevel=2,
            )
        return out
    out = theta.copy()
    for _ in range(v.payload):
        out = gradient_step(model, out, ex)
    return out


def make_classifier_learner(
    n_features: int = 1,
    n_classes: int = 2,
    eta: float = 0.1,
    conv_tol: float = 1e-9,
    max_steps: int = 1_000_000,
) -> Learner:
    model = SoftmaxModel(n_features, n_classes, eta, conv_tol, max_steps)
    count = get_domain("count")

    def observe(ex, chi, theta):
        return classifier_step_observe(ex, chi, theta, model)

    def bel(ex, theta):
        _check_example(model, ex)
        return float(class_log_probs(model, theta, ex.x)[ex.y])

    def path_velocity(ex, theta, h):
        # the one-step quotient is exactly the negated loss gradient
        return (observe(ex, count.value(1), theta) - theta) / model.eta

    def sample_instance(rng):
        theta = rng.normal(0.0, 1.0, size=model.dim)
        x = rng.normal(0.0, 1.0, size=model.n_features)
        y = int(rng.integers(model.n_classes))
        return LabeledExample(x, y), theta

    def sample_top_instance(rng):
        # strongly separated inputs so the capped iteration saturates the
        # softmax in float and genuinely reaches its fixed point
        theta = rng.normal(0.0, 1.0, size=model.dim)
        x = rng.normal(0.0, 1.0, size=model.n_features)
        x = x / max(np.linalg.norm(x), 1e-9) * rng.uniform(1200.0, 2000.0)
        y = int(rng.integers(model.n_classes))
        return LabeledExample(x, y), theta

    return Learner(
        id="classifier",
        domain=count,
        belief_kind="params",
        observe=observe,
        in_domain=lambda ex, theta: bool(np.all(np.isfinite(theta))),
        bel=bel,
        bel_top=lambda ex, theta: 0.0,
        translate=lambda ex, chi, theta: count.to_float(chi),
        path_velocity=path_velocity,
        lb_metric="euclidean",
        sample_instance=sample_instance,
        sample_top_instance=sample_top_instance,
        sample_confidence=lambda rng: count.sample(rng),
        default_grid=(
            count.bot,
            count.value(1),
            count.value(2),
            count.value(4),
            count.value(8),
        ),
        observation_to_json=lambda ex: {"x": [float(v) for v in ex.x], "y": ex.y},
        observation_from_json=lambda obj, theta: LabeledExample(
            np.asarray(obj["x"], dtype=float), int(obj["y"])
        ),
        notes="n gradient steps on -log softmax(Wx+b)[y]; Bel = log p(y|x)",
    )


# ---------------------------------------------------------------------------
# Free list lifting.


def lift_to_list(base: Learner) -> Learner:
    """Lift a learner to the list extension of its domain.

    A list of confidences is applied left to right; combining lists by
    concatenation then satisfies the sequential-combination law by
    construction.  Because the list domain collapses any list containing
    top to [top], the lift exists only for learners whose full-confidence
    update absorbs further updates; otherwise the collapsed value would
    disagree with the sequential one.
    """
    if not base.top_absorbing:
        raise UnsupportedError(
            f"cannot lift {base.id!r}: its full-confidence update does not "
            "absorb later updates, so the collapsed list [top] would not "
            "commute with sequential application"
        )
    dom = list_extend(base.domain)

    def observe(phi, chi, theta):
        v = dom.coerce(chi)
        if v.is_bot:
            return theta
        items = (base.domain.top,) if v.is_top else v.payload
        for c in items:
            theta = base.observe(phi, c, theta)
        return theta

    def sample_confidence(rng):
        n = int(rng.integers(0, 4))
        return dom.value([base.sample_confidence(rng) for _ in range(n)])

    inner = [c for c in base.default_grid if not (c.is_bot or c.is_top)]
    grid = [dom.bot]
    for i in range(min(2, len(inner))):
        grid.append(dom.value(inner[: i + 1]))
    # Keep top out of the walkable grid when the base learner keeps it out
    # (its limit may only be reachable on dedicated instances).
    if any(c.is_top for c in base.default_grid):
        grid.append(dom.top)

    return Learner(
        id=f"{base.id}@list",
        domain=dom,
        belief_kind=base.belief_kind,
        observe=observe,
        in_domain=base.in_domain,
        bel=base.bel,
        bel_top=base.bel_top,
        sample_instance=base.sample_instance,
        sample_saturated=base.sample_saturated,
        sample_top_instance=base.sample_top_instance,
        sample_confidence=sample_confidence if base.sample_confidence else None,
        default_grid=tuple(grid),
        observation_to_json=base.observation_to_json,
        observation_from_json=base.observation_from_json,
        notes=f"list lift of {base.id}",
    )


# ---------------------------------------------------------------------------
# Registry.


_FACTORIES: Dict[str, Callable[..., Learner]] = {
    "interp": make_interp_learner,
    "ds": make_ds_learner,
    "kalman": make_kalman_learner,
    "boltzmann": make_boltzmann_learner,
    "bayes": make_bayes_learner,
    "max-graded": make_max_graded_learner,
    "classifier": make_classifier_learner,
}

_DEFAULT_CACHE: Dict[str, Learner] = {}


def available_learners() -> Tuple[str, ...]:
    return tuple(_FACTORIES)


def get_learner(learner_id: str, **params) -> Learner:
    """Build a registered learner; keyword params configure bayes/classifier."""
    if learner_id not in _FACTORIES:
        raise ParameterError(f"unknown learner {learner_id!r}")
    if not params:
        if learner_id not in _DEFAULT_CACHE:
            _DEFAULT_CACHE[learner_id] = _FACTORIES[learner_id]()
        return _DEFAULT_CACHE[learner_id]
    return _FACTORIES[learner_id](**params)


def in_domain(learner_id: str, phi, theta) -> bool:
    """Whether the learner's update is defined at theta for all finite trust."""
    return get_learner(learner_id).in_domain(phi, theta)
