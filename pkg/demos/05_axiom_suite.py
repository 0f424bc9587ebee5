"""
Checking the laws, and catching rules that break them
=====================================================

Ten executable laws pin down what "updating with confidence" should mean:
doing nothing at bot, the classical rule at top, monotone and continuous
response to the dial, additivity over combined confidences, and agreement
between the update's direction and the belief geometry.  run_suite checks
them numerically for any learner; deliberately broken learners ship
alongside the real ones to prove the checks have teeth.
"""

from conflearn import get_learner, get_mutants, run_suite, suite_passed
from conflearn.axioms import CheckConfig

cfg = CheckConfig(seed=7, samples=40)


def show(reports):
    for r in reports:
        status = "skip" if r.skipped else ("pass" if r.passed else "FAIL")
        line = f"  {r.axiom_id:3s} {status:4s}"
        if not r.skipped:
            line += f"  worst={r.worst_violation:.2e} tol={r.tol:.0e}"
        if r.note:
            line += f"  ({r.note})"
        print(line)


# ---------------------------------------------------------------------------
# A well-behaved learner passes everything that applies to it.

print("interp:")
reports = run_suite(get_learner("interp"), cfg)
show(reports)
print("suite passed:", suite_passed(reports))

# The Kalman learner skips the smoothness check: its confidences are
# (gain, noise) pairs, not points on a one-dimensional dial.
print("\nkalman:")
show(run_suite(get_learner("kalman"), cfg))

# ---------------------------------------------------------------------------
# A sabotaged learner: this one squares the event weight when asked to
# combine two updates into one, so sequential and combined application
# disagree.  The additivity check flags it; the rest still pass.

print("\nmutant-l5-square:")
saboteur = next(m for m in get_mutants() if m.id == "mutant-l5-square")
reports = run_suite(saboteur, cfg)
show(reports)
failed = [r.axiom_id for r in reports if not r.passed and not r.skipped]
print("caught by:", failed)

# A failing report carries a concrete witness for replay.
worst = max((r for r in reports if not r.passed), key=lambda r: r.worst_violation)
print("witness for", worst.axiom_id, "->", worst.witness)
