"""
A tour of confidence domains
============================

Every update rule in this library is parameterised by a *confidence value*
drawn from a domain: an ordered set with a least element (no information),
a greatest element (certainty), and an associative combine operation that
says what two updates in a row amount to.

This script walks the built-in domains and shows combine, the order, the
residual (an "undo" for combine where one exists), and the charts that
translate between the [0,1] scale and the additive [0,inf] scale.
"""

from conflearn import add_to_frac, frac_to_add, get_domain

# ---------------------------------------------------------------------------
# The fractional domain: values in [0,1], combine(s, t) = s + t - s*t.
# Two half-strength updates land at 0.75, not 1.0: confidence saturates.

frac = get_domain("frac")
half = frac.value(0.5)
print("frac: 0.5 * 0.5          ->", frac.to_float(frac.combine(half, half)))
print("frac: bot is neutral     ->", frac.to_float(frac.combine(frac.bot, half)))
print("frac: top absorbs        ->", frac.combine(frac.top, half).is_top)

# ---------------------------------------------------------------------------
# The additive domain: values in [0,inf], combine is ordinary addition.
# This is the natural time axis for flows: "observe for t seconds".

add = get_domain("add")
print("add:  1.25 + 0.75        ->", add.to_float(add.combine(add.value(1.25), add.value(0.75))))

# The two scales are isomorphic.  frac_to_add(beta, s) = -log(1-s)/beta
# turns saturating combination into plain addition, and back.
beta = 2.0
s = 0.5
t = frac_to_add(beta, frac.value(s))
print("chart: frac 0.5 -> add   ->", add.to_float(t))
print("chart: and back          ->", frac.to_float(add_to_frac(beta, t)))

# The chart is a homomorphism: combining then mapping equals mapping then
# adding.
s1, s2 = frac.value(0.3), frac.value(0.6)
lhs = frac_to_add(beta, frac.combine(s1, s2))
rhs = add.combine(frac_to_add(beta, s1), frac_to_add(beta, s2))
print("hom:  |lhs - rhs|        ->", abs(add.to_float(lhs) - add.to_float(rhs)))

# ---------------------------------------------------------------------------
# The max domain: combine keeps the stronger grade.  Re-hearing weaker
# evidence changes nothing, so combine is idempotent.

mx = get_domain("max")
print("max:  0.4 v 0.7          ->", mx.to_float(mx.combine(mx.value(0.4), mx.value(0.7))))
print("max:  0.7 v 0.7          ->", mx.to_float(mx.combine(mx.value(0.7), mx.value(0.7))))

# ---------------------------------------------------------------------------
# The Kalman domain: a confidence is a (gain, noise) pair.  Combining two
# gains mirrors applying two scalar Kalman updates in a row.  Order matters
# here: this is the one non-commutative domain in the library.

kal = get_domain("kalman")
c1 = kal.value((0.5, 1.0))
c2 = kal.value((0.5, 2.0))
print("kalman: c1 then c2       ->", kal.combine(c2, c1).payload)
print("kalman: c2 then c1       ->", kal.combine(c1, c2).payload)

# ---------------------------------------------------------------------------
# Residual subtraction: given a combined confidence and one of its parts,
# recover the other part.  Useful for asking "how much evidence is left?"

total = frac.combine(frac.value(0.3), frac.value(0.6))
part = frac.residual(frac.value(0.3), total)
print("residual: 0.72 minus 0.3 ->", frac.to_float(part))
print("recombined               ->", frac.to_float(frac.combine(part, frac.value(0.3))))

# ---------------------------------------------------------------------------
# The count domain: extended natural numbers, combine is addition.  Used by
# the iterated-training learner, where confidence n means "n gradient steps"
# and top means "train to convergence".

count = get_domain("count")
print("count: 3 + 4             ->", count.to_float(count.combine(count.value(3), count.value(4))))
print("count: top + 4 is top    ->", count.combine(count.top, count.value(4)).is_top)

# ---------------------------------------------------------------------------
# The list lift: confidences for batches.  A list of inner confidences
# combines by concatenation, newest evidence first, and any list containing
# certainty collapses to the single element [top].

lf = get_domain("list:frac")
batch1 = lf.value([0.2])
batch2 = lf.value([0.3, 0.1])
combined = lf.combine(batch1, batch2)
print("list: [0.2] after [0.3,0.1] ->", [frac.to_float(c) for c in combined.payload])

# A batch that contains certainty anywhere is certainty outright: the whole
# list collapses to the top of the lifted domain.
with_top = lf.combine(batch1, lf.value([0.3, 1.0]))
print("list: certainty collapses   ->", with_top, "(is_top:", str(with_top.is_top) + ")")
