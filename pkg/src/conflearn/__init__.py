"""Confidence-graded belief updating.

Learners revise belief states in response to observations carrying a
confidence grade drawn from an ordered monoid.  The package provides the
stock confidence domains and learners, the revision rules on finite
probability spaces, a vector-field calculus for additive updates (parallel
combination, integration, interleaving), and an executable suite of the
laws a well-behaved learner satisfies.
"""

from .errors import (
    ConfLearnError,
    ConfigError,
    DomainError,
    DomainMismatchError,
    InvalidImagingMapError,
    NoLimitError,
    NumericalError,
    ParameterError,
    TotalConflictError,
    UnsupportedError,
    ZeroMassEventError,
)
from .confidence import (
    ConfidenceDomain,
    ConfidenceValue,
    add_to_frac,
    available_domains,
    confidence_from_json,
    confidence_to_json,
    frac_to_add,
    get_domain,
    kalman_combine,
    list_extend,
)
from .beliefs import (
    EventSet,
    FiniteSimplex,
    GaussianBelief,
    GradedBeliefTable,
    MassFunction,
    RandomVariable,
    belief_distance,
    belief_from_json,
    belief_to_json,
    condition,
    dempster_combine,
    ds_plaus_update,
    image,
    jeffrey,
    simple_support,
)
from .learners import (
    BayesModel,
    LabeledExample,
    Learner,
    NonConvergenceWarning,
    SoftmaxModel,
    available_learners,
    bayes_observe,
    boltzmann_observe,
    class_log_probs,
    classifier_step_observe,
    get_learner,
    gradient_step,
    in_domain,
    interp_observe,
    kalman_observe,
    kalman_observe_opt,
    lift_to_list,
    make_bayes_learner,
    make_boltzmann_learner,
    make_classifier_learner,
    make_ds_learner,
    make_interp_learner,
    make_kalman_learner,
    make_max_graded_learner,
    max_graded_observe,
    optimal_gain,
    potential_to_likelihood,
    train_limit,
)
from .flows import (
    IntegratorConfig,
    ParallelObservation,
    TangentVector,
    TrajectoryRecord,
    VectorFieldHandle,
    additive_form,
    belief_coords,
    belief_rebuild,
    combine_fields,
    coord_labels,
    derivative_field,
    integrate,
    integrate_sampled,
    metric_gradient,
    natural_gradient,
    parallel_field,
    trotter_interleave,
)
from .axioms import (
    AXIOMS,
    AxiomReport,
    CheckConfig,
    check_axiom,
    reports_to_json,
    run_suite,
    suite_passed,
)
from .mutants import MUTANT_TARGETS, get_mutants

__version__ = "0.1.0"

__all__ = [
    "ConfLearnError",
    "ConfigError",
    "DomainError",
    "DomainMismatchError",
    "InvalidImagingMapError",
    "NoLimitError",
    "NumericalError",
    "ParameterError",
    "TotalConflictError",
    "UnsupportedError",
    "ZeroMassEventError",
    "ConfidenceDomain",
    "ConfidenceValue",
    "add_to_frac",
    "available_domains",
    "confidence_from_json",
    "confidence_to_json",
    "frac_to_add",
    "get_domain",
    "kalman_combine",
    "list_extend",
    "EventSet",
    "FiniteSimplex",
    "GaussianBelief",
    "GradedBeliefTable",
    "MassFunction",
    "RandomVariable",
    "belief_distance",
    "belief_from_json",
    "belief_to_json",
    "condition",
    "dempster_combine",
    "ds_plaus_update",
    "image",
    "jeffrey",
    "simple_support",
    "BayesModel",
    "LabeledExample",
    "Learner",
    "NonConvergenceWarning",
    "SoftmaxModel",
    "available_learners",
    "bayes_observe",
    "boltzmann_observe",
    "class_log_probs",
    "classifier_step_observe",
    "get_learner",
    "gradient_step",
    "in_domain",
    "interp_observe",
    "kalman_observe",
    "kalman_observe_opt",
    "lift_to_list",
    "make_bayes_learner",
    "make_boltzmann_learner",
    "make_classifier_learner",
    "make_ds_learner",
    "make_interp_learner",
    "make_kalman_learner",
    "make_max_graded_learner",
    "max_graded_observe",
    "optimal_gain",
    "potential_to_likelihood",
    "train_limit",
    "IntegratorConfig",
    "ParallelObservation",
    "TangentVector",
    "TrajectoryRecord",
    "VectorFieldHandle",
    "additive_form",
    "belief_coords",
    "belief_rebuild",
    "combine_fields",
    "coord_labels",
    "derivative_field",
    "integrate",
    "integrate_sampled",
    "metric_gradient",
    "natural_gradient",
    "parallel_field",
    "trotter_interleave",
    "AXIOMS",
    "AxiomReport",
    "CheckConfig",
    "check_axiom",
    "reports_to_json",
    "run_suite",
    "suite_passed",
    "MUTANT_TARGETS",
    "get_mutants",
    "__version__",
]
