"""
One worked update per learner
=============================

A learner pairs a belief space with an update rule Lrn(observation,
confidence, belief).  At confidence bot nothing happens; at top the update
is the classical, fully-trusted rule; in between the confidence scales how
far the belief moves.  This script runs each built-in learner on a small
worked instance.
"""

import numpy as np

from conflearn import (
    BayesModel,
    FiniteSimplex,
    GaussianBelief,
    GradedBeliefTable,
    LabeledExample,
    MassFunction,
    RandomVariable,
    SoftmaxModel,
    bayes_observe,
    boltzmann_observe,
    class_log_probs,
    classifier_step_observe,
    condition,
    ds_plaus_update,
    get_domain,
    get_learner,
    interp_observe,
    kalman_observe,
    kalman_observe_opt,
    lift_to_list,
    max_graded_observe,
    potential_to_likelihood,
)

# ---------------------------------------------------------------------------
# Linear interpolation toward the conditional.
# At alpha the posterior is (1-alpha) * P + alpha * P(.|A).

p = FiniteSimplex(("a", "b", "c"), np.array([0.5, 0.3, 0.2]))
a = p.event(["a", "b"])
print("interp alpha=0   ->", interp_observe(a, 0.0, p).probs)
print("interp alpha=0.5 ->", interp_observe(a, 0.5, p).probs)
print("interp alpha=1   ->", interp_observe(a, 1.0, p).probs)
print("conditioning     ->", condition(p, a).probs)

# ---------------------------------------------------------------------------
# Dempster-Shafer: combine with a simple support function of weight alpha.
# Mass moves onto the event; leftover mass stays on the frame.

m = MassFunction.from_simplex(p)
updated = ds_plaus_update(m, a, 0.5)
print("ds Bel(A) before / after ->", m.bel(a), "/", updated.bel(a))
print("ds vs interp at 0.5      ->", updated.as_simplex().probs,
      "vs", interp_observe(a, 0.5, p).probs)

# ---------------------------------------------------------------------------
# Boltzmann tempering: reweight by exp(-beta * V).  Low potential gains
# probability; beta = top concentrates on the argmin set.

v = RandomVariable(("a", "b", "c"), np.array([2.0, 1.0, 1.0]))
print("boltzmann beta=ln2 ->", boltzmann_observe(v, np.log(2.0), p).probs)
print("boltzmann beta=top ->",
      boltzmann_observe(v, get_domain("add").top, p).probs)

# ---------------------------------------------------------------------------
# Bayes with a strength dial: confidence beta raises the likelihood to the
# beta-th power.  beta=1 is the textbook posterior.

model = BayesModel(("rain", "dry"), {"wet-lawn": [0.9, 0.2]})
prior = FiniteSimplex(("rain", "dry"), np.array([0.3, 0.7]))
post = bayes_observe(model, "wet-lawn", prior)
print("bayes posterior        ->", post.probs)

# The same rule, seen as tempering the negative log likelihood:
u = {"wet-lawn": {"rain": -np.log(0.9), "dry": -np.log(0.2)}}
rebuilt = potential_to_likelihood(u, ("rain", "dry"))
print("via potentials         ->", bayes_observe(rebuilt, "wet-lawn", prior).probs)

# ---------------------------------------------------------------------------
# Scalar Kalman: confidence is a (gain, noise) pair.  The optimal-gain form
# takes just a measurement noise and adds precisions.

b0 = GaussianBelief(mean=0.0, var=4.0)
fused = kalman_observe(10.0, (0.8, 1.0), b0)
print("kalman gain=0.8        -> mean", fused.mean, "var", fused.var)
opt = kalman_observe_opt(10.0, 1.0, b0)
print("kalman optimal gain    -> mean", opt.mean, "var", opt.var)
print("precision sum check    ->", 1.0 / opt.var, "=", 1.0 / 4.0 + 1.0 / 1.0)

# ---------------------------------------------------------------------------
# Graded beliefs under the max domain: an observation raises one entry's
# grade, and only stronger evidence moves it again.

table = GradedBeliefTable({"x": 0.3, "y": 0.6})
table = max_graded_observe("x", 0.8, table)
print("max-graded x raised    ->", table.entries)
table = max_graded_observe("x", 0.5, table)
print("max-graded x unchanged ->", table.entries)

# ---------------------------------------------------------------------------
# Iterated training: confidence n means n gradient steps on one example;
# top means train until the example is fit.

sm = SoftmaxModel(n_features=2, n_classes=2)
theta = sm.init_params()
example = LabeledExample(np.array([1.0, -0.5]), 1)
for n in (1, 4, 16):
    out = classifier_step_observe(example, n, theta, sm)
    print(f"classifier after {n:2d} steps -> log P(y|x) =",
          class_log_probs(sm, out, example.x)[example.y])

# ---------------------------------------------------------------------------
# Batch updates via the list lift: a list of confidences applies newest
# first, matching sequential application of the base learner.

lifted = lift_to_list(get_learner("interp"))
lst = get_domain("list:frac")
batch = lifted.observe(a, lst.value([0.25, 0.5]), p)
seq = interp_observe(a, 0.25, interp_observe(a, 0.5, p))
print("lifted batch           ->", batch.probs)
print("sequential             ->", seq.probs)
