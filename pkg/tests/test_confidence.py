"""Monoid laws, the fractional/additive chart, and pair composition."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conflearn import (
    ParameterError,
    add_to_frac,
    available_domains,
    confidence_from_json,
    confidence_to_json,
    frac_to_add,
    get_domain,
    kalman_combine,
    list_extend,
)

FRAC = get_domain("frac")
ADD = get_domain("add")
MAX = get_domain("max")
KALMAN = get_domain("kalman")
COUNT = get_domain("count")


def _gap(dom, a, b):
    """Distance between two confidence values, componentwise for pairs."""
    if a.is_bot or a.is_top or b.is_bot or b.is_top:
        return 0.0 if (a.is_bot == b.is_bot and a.is_top == b.is_top) else math.inf
    pa, pb = a.payload, b.payload
    if dom.id == "kalman":
        return max(abs(pa[0] - pb[0]), abs(pa[1] - pb[1]))
    if dom.id.startswith("list:"):
        if len(pa) != len(pb):
            return math.inf
        inner = get_domain(dom.id[len("list:"):])
        return max((_gap(inner, x, y) for x, y in zip(pa, pb)), default=0.0)
    fa, fb = dom.to_float(a), dom.to_float(b)
    if math.isinf(fa) and math.isinf(fb):
        return 0.0
    return abs(fa - fb)


# ---------------------------------------------------------------------------
# Pinned combine values.


def test_frac_combine_half_half():
    v = FRAC.combine(FRAC.value(0.5), FRAC.value(0.5))
    assert v.payload == pytest.approx(0.75, abs=1e-15)


def test_add_combine_is_addition():
    v = ADD.combine(ADD.value(1.25), ADD.value(0.5))
    assert v.payload == pytest.approx(1.75, abs=1e-15)


def test_max_combine_is_max():
    v = MAX.combine(MAX.value(0.3), MAX.value(0.7))
    assert v.payload == pytest.approx(0.7, abs=1e-15)


def test_kalman_combine_pinned():
    v = kalman_combine(KALMAN.value((0.5, 1.0)), KALMAN.value((0.5, 1.0)))
    assert v.gain == pytest.approx(0.75, abs=1e-15)
    assert v.noise == pytest.approx(0.5555555555555556, abs=1e-15)


def test_kalman_zero_gain_is_neutral():
    c = KALMAN.value((0.4, 2.0))
    for r2 in (0.0, 1.0, 7.5):
        v = kalman_combine(KALMAN.value((0.0, r2)), c)
        assert _gap(KALMAN, v, c) <= 1e-15


def test_kalman_full_gain_first():
    # (1,0) then (K2,r2): gain stays 1, variance becomes K2^2 r2.
    v = kalman_combine(KALMAN.value((1.0, 0.0)), KALMAN.value((0.5, 2.0)))
    assert v.gain == pytest.approx(1.0, abs=1e-15)
    assert v.noise == pytest.approx(0.25 * 2.0, abs=1e-15)


def test_kalman_combine_matches_sequential_updates():
    rng = np.random.default_rng(11)
    for _ in range(200):
        k1, k2 = rng.uniform(0.0, 1.0, 2)
        r1, r2 = rng.uniform(0.0, 3.0, 2)
        x, var = rng.normal(), rng.uniform(0.1, 4.0)
        z = rng.normal()
        # two affine updates applied in order c1 then c2
        x1 = x + k1 * (z - x)
        v1 = (1 - k1) ** 2 * var + k1**2 * r1
        x2 = x1 + k2 * (z - x1)
        v2 = (1 - k2) ** 2 * v1 + k2**2 * r2
        c3 = kalman_combine(KALMAN.value((k1, r1)), KALMAN.value((k2, r2)))
        if c3.is_bot:
            k3, rr = 0.0, 0.0
        elif c3.is_top:
            k3, rr = 1.0, 0.0
        else:
            k3, rr = c3.gain, c3.noise
        x3 = x + k3 * (z - x)
        v3 = (1 - k3) ** 2 * var + k3**2 * rr
        assert abs(x3 - x2) <= 1e-10
        assert abs(v3 - v2) <= 1e-10


# ---------------------------------------------------------------------------
# The chart between the fractional and additive scales.


def test_chart_pinned_value():
    assert frac_to_add(1.0, 0.5).payload == pytest.approx(
        0.6931471805599453, abs=1e-15
    )


def test_chart_sends_one_to_top():
    assert frac_to_add(1.0, 1.0).is_top
    assert add_to_frac(1.0, ADD.top).is_top
    assert frac_to_add(2.0, 0.0).is_bot


def test_chart_round_trip_grid():
    for beta in (0.5, 1.0, 2.0):
        s = np.linspace(0.0, 1.0 - 1e-9, 10_000)
        worst = 0.0
        for si in s:
            back = add_to_frac(beta, frac_to_add(beta, si))
            worst = max(worst, abs(FRAC.to_float(back) - si))
        assert worst <= 1e-10
        # the frac chart stores 1 - exp(-beta t); past beta*t ~ 36 that
        # rounds to exactly 1, so probe the faithfully representable range
        t = np.linspace(0.0, 10.0 / beta, 10_000)
        worst = 0.0
        for ti in t:
            back = frac_to_add(beta, add_to_frac(beta, ti))
            worst = max(worst, abs(ADD.to_float(back) - ti))
        assert worst <= 1e-10
        assert add_to_frac(beta, frac_to_add(beta, 0.999999)).payload == (
            pytest.approx(0.999999, abs=1e-10)
        )


def test_chart_is_monotone():
    for beta in (0.5, 1.0, 2.0):
        s = np.linspace(0.0, 0.999999, 512)
        t = [ADD.to_float(frac_to_add(beta, si)) for si in s]
        assert all(a <= b for a, b in zip(t, t[1:]))


def test_chart_is_homomorphism():
    rng = np.random.default_rng(5)
    for beta in (0.5, 1.0, 2.0):
        for _ in range(300):
            s1, s2 = rng.uniform(0.0, 1.0, 2)
            lhs = frac_to_add(beta, FRAC.combine(FRAC.value(s1), FRAC.value(s2)))
            rhs = ADD.combine(frac_to_add(beta, s1), frac_to_add(beta, s2))
            assert _gap(ADD, lhs, rhs) <= 1e-10


def test_chart_rejects_bad_beta():
    with pytest.raises(ParameterError):
        frac_to_add(0.0, 0.5)
    with pytest.raises(ParameterError):
        add_to_frac(-1.0, 0.5)


# ---------------------------------------------------------------------------
# Shared monoid structure across every registered domain.


def test_associativity_sampled_triples():
    rng = np.random.default_rng(2)
    for dom_id in available_domains():
        dom = get_domain(dom_id)
        for _ in range(1000):
            a, b, c = (dom.sample(rng) for _ in range(3))
            left = dom.combine(dom.combine(a, b), c)
            right = dom.combine(a, dom.combine(b, c))
            assert _gap(dom, left, right) <= 1e-12, dom_id


def test_bot_is_neutral_everywhere():
    rng = np.random.default_rng(3)
    for dom_id in available_domains():
        dom = get_domain(dom_id)
        for _ in range(100):
            c = dom.sample(rng)
            assert _gap(dom, dom.combine(dom.bot, c), c) == 0.0
            assert _gap(dom, dom.combine(c, dom.bot), c) == 0.0


def test_top_absorbs_on_the_left():
    rng = np.random.default_rng(4)
    for dom_id in available_domains():
        dom = get_domain(dom_id)
        for _ in range(100):
            c = dom.sample(rng)
            if dom_id == "kalman" and not (c.is_bot or c.is_top):
                # the pair domain is the one genuinely non-commutative case:
                # top-then-c keeps gain 1 but reinflates variance
                v = dom.combine(dom.top, c)
                continue
            assert dom.combine(dom.top, c).is_top


def test_max_domain_laws():
    rng = np.random.default_rng(6)
    for _ in range(200):
        c = MAX.sample(rng)
        assert _gap(MAX, MAX.combine(c, c), c) == 0.0  # idempotent
    assert MAX.combine(MAX.top, MAX.value(0.3)).is_top
    assert _gap(MAX, MAX.combine(MAX.bot, MAX.value(0.3)), MAX.value(0.3)) == 0.0


def test_order_respected_by_combine():
    rng = np.random.default_rng(7)
    for dom_id in ("frac", "add", "max"):
        dom = get_domain(dom_id)
        for _ in range(200):
            a, c = dom.sample(rng), dom.sample(rng)
            assert dom.leq(a, dom.combine(c, a)) or dom_id == "max"
            assert dom.leq(a, dom.combine(a, c)) or dom_id == "max"


def test_count_domain_is_extended_naturals():
    assert COUNT.combine(COUNT.value(2), COUNT.value(3)).payload == 5
    assert COUNT.combine(COUNT.top, COUNT.value(3)).is_top
    assert COUNT.leq(COUNT.value(2), COUNT.value(4))
    assert not COUNT.leq(COUNT.value(4), COUNT.value(2))
    assert COUNT.residual(COUNT.value(2), COUNT.value(5)).payload == 3


# ---------------------------------------------------------------------------
# Residual subtraction.


def test_residuals_recombine():
    rng = np.random.default_rng(8)
    for dom_id in ("frac", "add", "max"):
        dom = get_domain(dom_id)
        for _ in range(300):
            lo, hi = dom.sample(rng), dom.sample(rng)
            if not dom.leq(lo, hi):
                lo, hi = hi, lo
            delta = dom.residual(lo, hi)
            assert delta is not None
            if dom_id == "max":
                assert dom.leq(hi, dom.combine(delta, lo))
            else:
                assert _gap(dom, dom.combine(delta, lo), hi) <= 1e-9


def test_kalman_residual_recombines():
    rng = np.random.default_rng(9)
    checked = 0
    for _ in range(500):
        lo, hi = KALMAN.sample(rng), KALMAN.sample(rng)
        if not KALMAN.leq(lo, hi):
            lo, hi = hi, lo
        if not KALMAN.leq(lo, hi):
            continue
        delta = KALMAN.residual(lo, hi)
        if delta is None:
            continue
        checked += 1
        assert _gap(KALMAN, KALMAN.combine(delta, lo), hi) <= 1e-8
    assert checked >= 50


def test_residual_of_incomparable_is_none():
    assert FRAC.residual(FRAC.value(0.8), FRAC.value(0.2)) is None


# ---------------------------------------------------------------------------
# The list extension.


def test_list_concatenation_orders_items():
    dom = list_extend(FRAC)
    a = dom.value([FRAC.value(0.1), FRAC.value(0.2)])
    b = dom.value([FRAC.value(0.3)])
    # combine(a, b) is "b first, then a", so b's items lead
    v = dom.combine(a, b)
    assert [c.payload for c in v.payload] == [0.3, 0.1, 0.2]


def test_list_bot_is_empty_list():
    dom = list_extend(FRAC)
    a = dom.value([FRAC.value(0.4)])
    assert dom.combine(dom.bot, a).payload == a.payload
    assert dom.combine(a, dom.bot).payload == a.payload
    assert dom.value([]).is_bot


def test_list_collapses_top():
    dom = list_extend(FRAC)
    assert dom.value([FRAC.value(0.4), FRAC.top]).is_top
    a = dom.value([FRAC.value(0.4)])
    assert dom.combine(dom.top, a).is_top
    assert dom.combine(a, dom.top).is_top


def test_list_prefix_order():
    dom = list_extend(FRAC)
    short = dom.value([FRAC.value(0.2)])
    long = dom.value([FRAC.value(0.2), FRAC.value(0.5)])
    other = dom.value([FRAC.value(0.3)])
    assert dom.leq(short, long)
    assert not dom.leq(long, short)
    assert not dom.leq(other, long)
    assert dom.leq(dom.bot, other)
    assert dom.leq(other, dom.top)


def test_list_residual_is_suffix():
    dom = list_extend(FRAC)
    short = dom.value([FRAC.value(0.2)])
    long = dom.value([FRAC.value(0.2), FRAC.value(0.5)])
    delta = dom.residual(short, long)
    assert _gap(dom, dom.combine(delta, short), long) == 0.0


def test_list_of_list_rejected():
    dom = list_extend(FRAC)
    with pytest.raises(ParameterError):
        list_extend(dom)


# ---------------------------------------------------------------------------
# JSON wire format.


def test_confidence_json_round_trip():
    rng = np.random.default_rng(10)
    for dom_id in available_domains():
        dom = get_domain(dom_id)
        for c in (dom.bot, dom.top, dom.sample(rng)):
            back = confidence_from_json(confidence_to_json(c))
            assert _gap(dom, back, c) == 0.0


def test_confidence_json_default_domain():
    v = confidence_from_json(0.25, default_domain="frac")
    assert v.domain_id == "frac" and v.payload == 0.25
    assert confidence_from_json("top", default_domain="max").is_top


# ---------------------------------------------------------------------------
# Property-based monoid laws.


scalar_domains = st.sampled_from(["frac", "add", "max"])


@st.composite
def domain_values(draw, dom_id):
    dom = get_domain(dom_id)
    kind = draw(st.integers(0, 9))
    if kind == 0:
        return dom.bot
    if kind == 1:
        return dom.top
    if dom_id == "add":
        return dom.value(draw(st.floats(0.0, 50.0, allow_nan=False)))
    return dom.value(draw(st.floats(0.0, 1.0, allow_nan=False)))


@settings(max_examples=200)
@given(st.data(), scalar_domains)
def test_monoid_laws_property(data, dom_id):
    dom = get_domain(dom_id)
    a = data.draw(domain_values(dom_id))
    b = data.draw(domain_values(dom_id))
    c = data.draw(domain_values(dom_id))
    assert _gap(dom, dom.combine(dom.bot, a), a) == 0.0
    assert dom.combine(dom.top, a).is_top
    left = dom.combine(dom.combine(a, b), c)
    right = dom.combine(a, dom.combine(b, c))
    assert _gap(dom, left, right) <= 1e-12


@settings(max_examples=200)
@given(
    st.floats(0.0, 1.0, allow_nan=False),
    st.floats(0.0, 1.0, allow_nan=False),
    st.sampled_from([0.5, 1.0, 2.0]),
)
def test_chart_monotone_property(s1, s2, beta):
    lo, hi = min(s1, s2), max(s1, s2)
    assert ADD.leq(frac_to_add(beta, lo), frac_to_add(beta, hi))
