"""Deliberately broken learners for exercising the axiom checks.

Each mutant is a small, plausible-looking corruption of a stock learner
that leaves most laws intact but reliably violates the ones listed for it
in MUTANT_TARGETS.  They are the negative controls for the check suite: a
suite that passes every stock learner must still catch every one of these.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Callable, Dict, Tuple

import numpy as np

from .learners import (
    Learner,
    boltzmann_observe,
    interp_observe,
    make_boltzmann_learner,
    make_interp_learner,
)

__all__ = ["MUTANT_TARGETS", "get_mutants"]

# axiom checks each mutant is guaranteed to fail
MUTANT_TARGETS: Dict[str, Tuple[str, ...]] = {
    "mutant-l1-drift": ("L1",),
    "mutant-l2-rough": ("L2",),
    "mutant-l34-cyclic": ("L3", "L4", "B1"),
    "mutant-l5-square": ("L5",),
    "mutant-fc-partial": ("FC", "B3"),
    "mutant-b2-uniform": ("B2",),
    "mutant-b3-timid": ("B3", "FC"),
    "mutant-lb-euclid": ("LB",),
}


def _weight_warp(mutant_id: str, warp: Callable[[float], float], note: str) -> Learner:
    """Interpolation learner whose mixing weight is warped before use.

    The warp drops every closed-form hook tied to the honest weight, so the
    checks see only the corrupted observe map (and the unchanged Bel).
    """
    base = make_interp_learner()
    frac = base.domain

    def observe(phi, chi, theta):
        x = frac.to_float(frac.coerce(chi))
        return interp_observe(phi, warp(x), theta)

    return replace(
        base,
        id=mutant_id,
        observe=observe,
        translate=None,
        make_flow=None,
        closed_field=None,
        path_velocity=None,
        lb_metric=None,
        notes=note,
    )


def _mutant_l1_drift() -> Learner:
    return _weight_warp(
        "mutant-l1-drift",
        lambda x: 0.1 + 0.9 * x,
        "zero confidence still drags the prior a tenth of the way",
    )


def _mutant_l2_rough() -> Learner:
    return _weight_warp(
        "mutant-l2-rough",
        lambda x: min(max(x + 0.2 * x**0.1 * (1.0 - x), 0.0), 1.0),
        "x^0.1 cusp at zero confidence; continuous but violently non-smooth",
    )


def _mutant_l34_cyclic() -> Learner:
    return _weight_warp(
        "mutant-l34-cyclic",
        lambda x: math.sin(math.pi * x),
        "commitment rises then falls back, so the path revisits the prior",
    )


def _mutant_l5_square() -> Learner:
    return _weight_warp(
        "mutant-l5-square",
        lambda x: x * x,
        "squared weight is not a homomorphism of the fractional monoid",
    )


def _mutant_b3_timid() -> Learner:
    return _weight_warp(
        "mutant-b3-timid",
        lambda x: min(x, 0.5),
        "full confidence caps out at a half-strength update",
    )


def _mutant_fc_partial() -> Learner:
    base = make_interp_learner()
    frac = base.domain

    def observe(phi, chi, theta):
        v = frac.coerce(chi)
        if v.is_top:
            return interp_observe(phi, 0.9, theta)
        return interp_observe(phi, frac.to_float(v), theta)

    return replace(
        base,
        id="mutant-fc-partial",
        observe=observe,
        translate=None,
        make_flow=None,
        closed_field=None,
        path_velocity=None,
        lb_metric=None,
        notes="the top update only does ninety percent of the conditioning",
    )


def _mutant_b2_uniform() -> Learner:
    base = make_interp_learner()
    frac = base.domain

    def observe(phi, chi, theta):
        x = frac.to_float(frac.coerce(chi))
        ind = phi.indicator()
        uniform = ind / ind.sum()
        return theta.with_probs((1.0 - x) * np.asarray(theta.probs) + x * uniform)

    return replace(
        base,
        id="mutant-b2-uniform",
        observe=observe,
        translate=None,
        make_flow=None,
        closed_field=None,
        path_velocity=None,
        lb_metric=None,
        notes="pulls toward the uniform law on the event, moving states that already believe it",
    )


def _mutant_lb_euclid() -> Learner:
    """Boltzmann-style learner that descends the raw (unweighted) penalty
    direction instead of the Fisher one, so its initial velocity is not the
    natural gradient of Bel."""
    base = make_boltzmann_learner()
    add = base.domain

    def observe(phi, chi, theta):
        v = add.coerce(chi)
        if v.is_top:
            return boltzmann_observe(phi, add.top, theta)
        t = add.to_float(v)
        tau = 0.02 * -math.expm1(-t)
        pr = np.asarray(theta.probs)
        vals = np.asarray(phi.values)
        mean = float(pr @ vals)
        shifted = np.clip(pr - tau * (vals - mean), 0.0, None)
        return theta.with_probs(shifted)

    return replace(
        base,
        id="mutant-lb-euclid",
        observe=observe,
        make_flow=lambda phi: (lambda t, theta: observe(phi, float(t), theta)),
        closed_field=None,
        path_velocity=None,
        notes="moves along v - E[v] itself rather than p * (E[v] - v)",
    )


def get_mutants() -> Tuple[Learner, ...]:
    """All mutants, in a fixed order matching MUTANT_TARGETS."""
    builders = (
        _mutant_l1_drift,
        _mutant_l2_rough,
        _mutant_l34_cyclic,
        _mutant_l5_square,
        _mutant_fc_partial,
        _mutant_b2_uniform,
        _mutant_b3_timid,
        _mutant_lb_euclid,
    )
    out = tuple(build() for build in builders)
    assert tuple(sorted(m.id for m in out)) == tuple(sorted(MUTANT_TARGETS))
    return out
