"""Difference-in-differences for ordinal outcomes.

A latent location-scale ordered-probit model identifies the treated
group's counterfactual outcome distribution from three observed
group-period cells; distributional and cumulative treatment effects,
cluster-bootstrap intervals, an equivalence-based pre-trend test, and
partial-identification bounds for the proportion who benefit are built
on top of it.
"""

from .bootstrap import BootstrapSpec, IntervalSet, block_bootstrap
from .bounds import (BenefitBounds, bounds_from_marginals, eta_bounds,
                     tau_bounds)
from .covariates import (CovariateDesign, GammaParams, build_design,
                         covariate_effects, fit_covariate_model,
                         predicted_probs)
from .effects import (CounterfactualParams, EffectEstimate,
                      counterfactual_params, effects_invariance_check,
                      estimate_effects, estimate_pipeline)
from .equivalence import (EquivalenceResult, QuantileShift, default_delta,
                          default_grid, equivalence_test, pointwise_bands,
                          qtilde, t_gradient, t_grid)
from .errors import (CollinearityError, ConfigError, ConvergenceError,
                     CovarianceError, DataError, DomainError, EmptyCellError,
                     NonIdentifiedError, OrdinalDidError)
from .golden import run_golden_suite
from .panel import (CellCounts, ColumnMap, PanelDataset, load_csv,
                    write_csv)
from .probit import (CellFit, CellParams, Cutoffs, FitResult, cell_probs,
                     fit_cell, fit_joint, fit_pretreatment, invert_cell_j3)
from .simulate import (DgpSpec, McReport, dgp_from_dict, pt_gap,
                       run_equivalence_mc, run_estimator_mc, simulate_cell,
                       simulate_panel, simulate_pretreatment_panel,
                       true_delta, true_tmax)

__version__ = "1.0.0"

__all__ = [
    "__version__",
    # panel
    "ColumnMap", "CellCounts", "PanelDataset", "load_csv", "write_csv",
    # probit
    "CellParams", "Cutoffs", "CellFit", "FitResult", "cell_probs",
    "invert_cell_j3", "fit_cell", "fit_joint", "fit_pretreatment",
    # effects
    "CounterfactualParams", "EffectEstimate", "counterfactual_params",
    "estimate_effects", "estimate_pipeline", "effects_invariance_check",
    # bootstrap
    "BootstrapSpec", "IntervalSet", "block_bootstrap",
    # equivalence
    "QuantileShift", "EquivalenceResult", "default_grid", "default_delta",
    "qtilde", "t_grid", "t_gradient", "pointwise_bands", "equivalence_test",
    # bounds
    "BenefitBounds", "eta_bounds", "tau_bounds", "bounds_from_marginals",
    # covariates
    "CovariateDesign", "GammaParams", "build_design", "fit_covariate_model",
    "predicted_probs", "covariate_effects",
    # simulation
    "DgpSpec", "McReport", "simulate_cell", "simulate_panel",
    "simulate_pretreatment_panel", "true_delta", "true_tmax",
    "run_estimator_mc", "run_equivalence_mc", "pt_gap", "dgp_from_dict",
    # golden
    "run_golden_suite",
    # errors
    "OrdinalDidError", "DomainError", "DataError", "EmptyCellError",
    "NonIdentifiedError", "ConvergenceError", "CovarianceError",
    "CollinearityError", "ConfigError",
]
