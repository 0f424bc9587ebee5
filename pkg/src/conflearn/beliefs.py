"""Belief states and the full-confidence revision rules that act on them.

Four belief representations are provided:

- :class:`FiniteSimplex`: probability vectors over at most 64 named worlds,
  with events as label subsets (:class:`EventSet`).
- :class:`GaussianBelief`: a (mean, variance) state for scalar estimation.
- :class:`MassFunction`: Dempster-Shafer basic mass assignments over at most
  20 worlds, with derived belief/plausibility set functions.
- :class:`GradedBeliefTable`: per-statement support grades in [0, 1].

The module-level operations are the *certain* (full-confidence) revisions:
conditioning, imaging, Jeffrey mixing, and the plausibility update obtained
by Dempster-combining with a simple support function.  Confidence-graded
versions of these live in :mod:`conflearn.learners`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .confidence import ConfidenceValue, get_domain
from .errors import (
    InvalidImagingMapError,
    ParameterError,
    TotalConflictError,
    ZeroMassEventError,
)

__all__ = [
    "EventSet",
    "FiniteSimplex",
    "GaussianBelief",
    "MassFunction",
    "GradedBeliefTable",
    "RandomVariable",
    "condition",
    "image",
    "jeffrey",
    "simple_support",
    "dempster_combine",
    "ds_plaus_update",
    "belief_distance",
    "belief_to_json",
    "belief_from_json",
]

MASS_EPS = 1e-12
MAX_WORLDS = 64
MAX_MASS_WORLDS = 20


def _check_labels(labels: Sequence[str], cap: int) -> Tuple[str, ...]:
    labels = tuple(labels)
    if not labels:
        raise ParameterError("at least one world label is required")
    if len(labels) > cap:
        raise ParameterError(f"at most {cap} worlds supported, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise ParameterError("world labels must be unique")
    return labels


@dataclass(frozen=True)
class EventSet:
    """A subset of a named world set, stored as a bitmask over the labels."""

    labels: Tuple[str, ...]
    mask: int

    def __post_init__(self):
        labels = _check_labels(self.labels, MAX_WORLDS)
        object.__setattr__(self, "labels", labels)
        full = (1 << len(labels)) - 1
        if not 0 <= self.mask <= full:
            raise ParameterError(f"event mask {self.mask:#x} outside world set")

    @classmethod
    def from_names(cls, labels: Sequence[str], names: Iterable[str]) -> "EventSet":
        labels = tuple(labels)
        mask = 0
        for name in names:
            try:
                mask |= 1 << labels.index(name)
            except ValueError:
                raise ParameterError(f"unknown world {name!r}") from None
        return cls(labels, mask)

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def members(self) -> Tuple[str, ...]:
        return tuple(
            lab for i, lab in enumerate(self.labels) if self.mask >> i & 1
        )

    def contains(self, name: str) -> bool:
        return bool(self.mask >> self.labels.index(name) & 1)

    def complement(self) -> "EventSet":
        return EventSet(self.labels, self.full_mask & ~self.mask)

    def intersect(self, other: "EventSet") -> "EventSet":
        self._check_same(other)
        return EventSet(self.labels, self.mask & other.mask)

    def union(self, other: "EventSet") -> "EventSet":
        self._check_same(other)
        return EventSet(self.labels, self.mask | other.mask)

    def indicator(self) -> np.ndarray:
        return np.array(
            [(self.mask >> i) & 1 for i in range(len(self.labels))], dtype=float
        )

    def _check_same(self, other: "EventSet") -> None:
        if self.labels != other.labels:
            raise ParameterError("events over different world sets")

    def __repr__(self) -> str:
        return "{" + ",".join(self.members()) + "}"


@dataclass(frozen=True)
class FiniteSimplex:
    """A probability distribution over named worlds.

    The constructor clamps round-off negatives (>= -1e-12) to zero and
    renormalizes, so downstream operations can assume sum-to-one without
    tracking drift.  The probability array is read-only.
    """

    labels: Tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self):
        labels = _check_labels(self.labels, MAX_WORLDS)
        object.__setattr__(self, "labels", labels)
        p = np.asarray(self.probs, dtype=float).copy()
        if p.shape != (len(labels),):
            raise ParameterError(
                f"probability vector shape {p.shape} does not match {len(labels)} labels"
            )
        if not np.all(np.isfinite(p)):
            raise ParameterError("probabilities must be finite")
        if p.min() < -MASS_EPS:
            raise ParameterError(f"negative probability {p.min()!r}")
        p = np.clip(p, 0.0, None)
        total = p.sum()
        if total <= MASS_EPS:
            raise ParameterError("probability vector sums to zero")
        p = p / total
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_dict(cls, table: Mapping[str, float]) -> "FiniteSimplex":
        labels = tuple(table)
        return cls(labels, np.array([table[k] for k in labels], dtype=float))

    def event(self, names: Iterable[str]) -> EventSet:
        return EventSet.from_names(self.labels, names)

    def prob(self, a: EventSet) -> float:
        if a.labels != self.labels:
            raise ParameterError("event over a different world set")
        return float(self.probs @ a.indicator())

    def support(self) -> EventSet:
        mask = 0
        for i, p in enumerate(self.probs):
            if p > 0.0:
                mask |= 1 << i
        return EventSet(self.labels, mask)

    def with_probs(self, p: np.ndarray) -> "FiniteSimplex":
        return FiniteSimplex(self.labels, p)

    def __repr__(self) -> str:
        inner = ", ".join(f"{l}: {p:.4g}" for l, p in zip(self.labels, self.probs))
        return f"FiniteSimplex({inner})"


@dataclass(frozen=True)
class GaussianBelief:
    """Scalar estimate with mean and variance; variance may be inf."""

    mean: float
    var: float

    def __post_init__(self):
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "var", float(self.var))
        if math.isnan(self.mean) or math.isnan(self.var):
            raise ParameterError("NaN in Gaussian belief")
        if math.isinf(self.mean):
            raise ParameterError("Gaussian mean must be finite")
        if self.var < 0.0:
            raise ParameterError(f"negative variance {self.var!r}")


@dataclass(frozen=True)
class RandomVariable:
    """A real-valued map on a named world set (a potential/penalty vector)."""

    labels: Tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        labels = _check_labels(self.labels, MAX_WORLDS)
        object.__setattr__(self, "labels", labels)
        v = np.asarray(self.values, dtype=float).copy()
        if v.shape != (len(labels),):
            raise ParameterError("value vector does not match labels")
        if not np.all(np.isfinite(v)):
            raise ParameterError("random variable values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_dict(cls, labels: Sequence[str], table: Mapping[str, float]) -> "RandomVariable":
        return cls(tuple(labels), np.array([table[k] for k in labels], dtype=float))


# ---------------------------------------------------------------------------
# Certain revision rules on the simplex.


def condition(p: FiniteSimplex, a: EventSet, eps: float = MASS_EPS) -> FiniteSimplex:
    """Bayesian conditioning P(. | a); rejects events of mass <= eps."""
    mass = p.prob(a)
    if mass <= eps:
        raise ZeroMassEventError(f"cannot condition on {a!r} with mass {mass:.3g}")
    return p.with_probs(np.asarray(p.probs) * a.indicator() / mass)


def image(
    p: FiniteSimplex,
    f: Callable[[EventSet, str], str],
    a: EventSet,
) -> FiniteSimplex:
    """Imaging: move each world's mass to its designated representative in a.

    ``f(a, w)`` names the world that w's mass moves to; it must land inside
    ``a`` and fix its own image (idempotence), otherwise the map is rejected.
    """
    if a.is_empty:
        raise InvalidImagingMapError("cannot image onto the empty event")
    targets = []
    for w in p.labels:
        t = f(a, w)
        if t not in p.labels:
            raise InvalidImagingMapError(f"image {t!r} of {w!r} is not a world")
        if not a.contains(t):
            raise InvalidImagingMapError(f"image {t!r} of {w!r} lies outside {a!r}")
        targets.append(t)
    # idempotence: representatives must be their own representative
    for t in set(targets):
        if f(a, t) != t:
            raise InvalidImagingMapError(f"map does not fix its image point {t!r}")
    out = np.zeros(len(p.labels))
    for w, t, mass in zip(p.labels, targets, p.probs):
        out[p.labels.index(t)] += mass
    return p.with_probs(out)


def jeffrey(
    p: FiniteSimplex,
    partition: Sequence[EventSet],
    pi: Union[FiniteSimplex, Sequence[float]],
    eps: float = MASS_EPS,
) -> FiniteSimplex:
    """Jeffrey's rule: reweight the partition cells to the target marginals.

    ``pi`` gives one target probability per cell (a plain sequence or a
    FiniteSimplex over cell names, in partition order).  Cells with positive
    target must have positive prior mass.
    """
    if not partition:
        raise ParameterError("empty partition")
    labels = partition[0].labels
    union = 0
    for cell in partition:
        if cell.labels != labels:
            raise ParameterError("partition cells over different world sets")
        if union & cell.mask:
            raise ParameterError("partition cells overlap")
        union |= cell.mask
    if union != partition[0].full_mask:
        raise ParameterError("partition does not cover the world set")
    weights = np.asarray(
        pi.probs if isinstance(pi, FiniteSimplex) else pi, dtype=float
    )
    if weights.shape != (len(partition),):
        raise ParameterError("one target weight per cell is required")
    if weights.min() < -MASS_EPS or abs(weights.sum() - 1.0) > 1e-9:
        raise ParameterError("target weights must form a distribution")
    out = np.zeros(len(labels))
    for cell, w in zip(partition, weights):
        if w <= eps:
            continue
        mass = p.prob(cell)
        if mass <= eps:
            raise ZeroMassEventError(f"cell {cell!r} has prior mass {mass:.3g}")
        out += w * (np.asarray(p.probs) * cell.indicator() / mass)
    return p.with_probs(out)


# ---------------------------------------------------------------------------
# Dempster-Shafer states.


@dataclass(frozen=True)
class MassFunction:
    """A basic mass assignment: focal subsets (bitmasks) with positive mass.

    The empty set carries no mass; masses are renormalized to sum to one.
    ``bel``/``plaus`` are the induced belief and plausibility set functions.
    """

    labels: Tuple[str, ...]
    masses: Mapping[int, float]

    def __post_init__(self):
        labels = _check_labels(self.labels, MAX_MASS_WORLDS)
        object.__setattr__(self, "labels", labels)
        full = (1 << len(labels)) - 1
        clean: Dict[int, float] = {}
        for subset, m in self.masses.items():
            subset = int(subset)
            m = float(m)
            if not 0 <= subset <= full:
                raise ParameterError(f"focal mask {subset:#x} outside world set")
            if math.isnan(m) or m < -MASS_EPS:
                raise ParameterError(f"bad mass {m!r}")
            if subset == 0 or m <= 0.0:
                continue
            clean[subset] = clean.get(subset, 0.0) + m
        total = sum(clean.values())
        if total <= MASS_EPS:
            raise ParameterError("mass function has no positive focal mass")
        clean = {s: m / total for s, m in sorted(clean.items())}
        object.__setattr__(self, "masses", clean)

    @classmethod
    def from_simplex(cls, p: FiniteSimplex) -> "MassFunction":
        return cls(p.labels, {1 << i: float(m) for i, m in enumerate(p.probs) if m > 0})

    def event(self, names: Iterable[str]) -> EventSet:
        return EventSet.from_names(self.labels, names)

    def _mask_of(self, u: EventSet) -> int:
        if u.labels != self.labels:
            raise ParameterError("event over a different world set")
        return u.mask

    def bel(self, u: EventSet) -> float:
        """Total mass committed to subsets of u."""
        mask = self._mask_of(u)
        return float(sum(m for s, m in self.masses.items() if s & ~mask == 0))

    def plaus(self, u: EventSet) -> float:
        """Total mass not contradicting u."""
        mask = self._mask_of(u)
        return float(sum(m for s, m in self.masses.items() if s & mask))

    @property
    def is_probabilistic(self) -> bool:
        return all(s & (s - 1) == 0 for s in self.masses)

    def as_simplex(self) -> FiniteSimplex:
        if not self.is_probabilistic:
            raise ParameterError("mass function has non-singleton focal sets")
        out = np.zeros(len(self.labels))
        for s, m in self.masses.items():
            out[s.bit_length() - 1] = m
        return FiniteSimplex(self.labels, out)

    def __repr__(self) -> str:
        parts = []
        for s, m in self.masses.items():
            names = ",".join(l for i, l in enumerate(self.labels) if s >> i & 1)
            parts.append(f"{{{names}}}: {m:.4g}")
        return "MassFunction(" + "; ".join(parts) + ")"


def simple_support(
    labels: Sequence[str], a: EventSet, alpha: Union[float, ConfidenceValue]
) -> MassFunction:
    """The simple support function: mass alpha on a, 1 - alpha on everything."""
    frac = get_domain("frac")
    s = frac.to_float(frac.coerce(alpha))
    labels = tuple(labels)
    if a.labels != labels:
        raise ParameterError("event over a different world set")
    if a.is_empty:
        raise ParameterError("support event must be nonempty")
    full = (1 << len(labels)) - 1
    return MassFunction(labels, {a.mask: s, full: 1.0 - s})


def dempster_combine(m1: MassFunction, m2: MassFunction, eps: float = MASS_EPS) -> MassFunction:
    """Dempster's rule: conjunctive combination with conflict renormalization."""
    if m1.labels != m2.labels:
        raise ParameterError("mass functions over different world sets")
    out: Dict[int, float] = {}
    conflict = 0.0
    for s1, w1 in m1.masses.items():
        for s2, w2 in m2.masses.items():
            inter = s1 & s2
            w = w1 * w2
            if inter == 0:
                conflict += w
            else:
                out[inter] = out.get(inter, 0.0) + w
    if 1.0 - conflict <= eps:
        raise TotalConflictError(f"total conflict (K = {conflict:.6g})")
    return MassFunction(m1.labels, out)


def ds_plaus_update(
    bel: MassFunction,
    a: EventSet,
    alpha: Union[float, ConfidenceValue],
    eps: float = MASS_EPS,
) -> MassFunction:
    """Graded plausibility update: Dempster-combine with a simple support on a.

    At alpha = 0 this is the identity; at alpha = 1 it is Dempster
    conditioning on a.  The normalizer is 1 - alpha + alpha*Plaus(a); when it
    vanishes the evidence totally conflicts with the state.
    """
    frac = get_domain("frac")
    v = frac.coerce(alpha)
    if v.is_bot:
        return bel
    return dempster_combine(bel, simple_support(bel.labels, a, v), eps=eps)


# ---------------------------------------------------------------------------
# Graded belief tables.


@dataclass(frozen=True)
class GradedBeliefTable:
    """Per-statement support grades in [0, 1], keyed by statement id."""

    entries: Mapping[str, float]

    def __post_init__(self):
        clean = {}
        for key, grade in self.entries.items():
            grade = float(grade)
            if math.isnan(grade) or grade < -MASS_EPS or grade > 1.0 + MASS_EPS:
                raise ParameterError(f"grade {grade!r} for {key!r} outside [0, 1]")
            clean[str(key)] = min(max(grade, 0.0), 1.0)
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def grade(self, key: str) -> float:
        if key not in self.entries:
            raise ParameterError(f"unknown statement {key!r}")
        return self.entries[key]

    def with_grade(self, key: str, grade: float) -> "GradedBeliefTable":
        merged = dict(self.entries)
        if key not in merged:
            raise ParameterError(f"unknown statement {key!r}")
        merged[key] = grade
        return GradedBeliefTable(merged)

    def keys(self) -> Tuple[str, ...]:
        return tuple(self.entries)


# ---------------------------------------------------------------------------
# Distances and the JSON wire format.


def belief_distance(a, b) -> float:
    """A representation-appropriate distance between two belief states.

    Simplexes use total variation; Gaussians, graded tables, and parameter
    vectors use the sup metric on their coordinates; mass functions use total
    variation on the focal masses.
    """
    if isinstance(a, FiniteSimplex) and isinstance(b, FiniteSimplex):
        if a.labels != b.labels:
            raise ParameterError("simplexes over different world sets")
        return float(0.5 * np.abs(np.asarray(a.probs) - np.asarray(b.probs)).sum())
    if isinstance(a, GaussianBelief) and isinstance(b, GaussianBelief):
        dv = 0.0 if (math.isinf(a.var) and math.isinf(b.var)) else abs(a.var - b.var)
        return max(abs(a.mean - b.mean), dv)
    if isinstance(a, MassFunction) and isinstance(b, MassFunction):
        if a.labels != b.labels:
            raise ParameterError("mass functions over different world sets")
        keys = set(a.masses) | set(b.masses)
        return float(
            0.5 * sum(abs(a.masses.get(s, 0.0) - b.masses.get(s, 0.0)) for s in keys)
        )
    if isinstance(a, GradedBeliefTable) and isinstance(b, GradedBeliefTable):
        if a.keys() != b.keys():
            raise ParameterError("tables over different statements")
        return max(
            abs(a.entries[k] - b.entries[k]) for k in a.entries
        )
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        if a.shape != b.shape:
            raise ParameterError("parameter vectors of different shapes")
        return float(np.abs(a - b).max()) if a.size else 0.0
    raise ParameterError(
        f"no distance between {type(a).__name__} and {type(b).__name__}"
    )


def _subset_key(labels: Tuple[str, ...], mask: int) -> str:
    return "|".join(l for i, l in enumerate(labels) if mask >> i & 1)


def belief_to_json(belief) -> dict:
    """Serialize a belief state to its JSON object form."""
    if isinstance(belief, FiniteSimplex):
        return {
            "kind": "simplex",
            "labels": list(belief.labels),
            "probs": [float(x) for x in belief.probs],
        }
    if isinstance(belief, GaussianBelief):
        return {"kind": "gaussian", "mean": belief.mean, "var": belief.var}
    if isinstance(belief, MassFunction):
        return {
            "kind": "mass",
            "labels": list(belief.labels),
            "masses": {
                _subset_key(belief.labels, s): float(m)
                for s, m in belief.masses.items()
            },
        }
    if isinstance(belief, GradedBeliefTable):
        return {"kind": "graded", "entries": {k: float(v) for k, v in belief.entries.items()}}
    if isinstance(belief, np.ndarray):
        return {"kind": "params", "values": [float(x) for x in belief]}
    raise ParameterError(f"cannot serialize belief of type {type(belief).__name__}")


def belief_from_json(obj: Mapping) -> object:
    """Parse the JSON object form back into a belief state."""
    try:
        kind = obj["kind"]
    except (TypeError, KeyError):
        raise ParameterError("belief JSON must be an object with a 'kind'") from None
    if kind == "simplex":
        return FiniteSimplex(tuple(obj["labels"]), np.asarray(obj["probs"], dtype=float))
    if kind == "gaussian":
        var = obj["var"]
        return GaussianBelief(float(obj["mean"]), math.inf if var in ("inf", None) else float(var))
    if kind == "mass":
        labels = tuple(obj["labels"])
        masses = {}
        for key, m in obj["masses"].items():
            names = [n for n in key.split("|") if n]
            masses[EventSet.from_names(labels, names).mask] = float(m)
        return MassFunction(labels, masses)
    if kind == "graded":
        return GradedBeliefTable(dict(obj["entries"]))
    if kind == "params":
        return np.asarray(obj["values"], dtype=float)
    raise ParameterError(f"unknown belief kind {kind!r}")
