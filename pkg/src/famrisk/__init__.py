"""famrisk: what published familial relative risks imply about how disease
risk is spread across a population.

Two models translate (FRR) estimates into explicit risk structure: a
two-group model solved for the risk ratio and high-risk fraction, and a
continuous beta risk model yielding Lorenz curves, Gini indices, burden
shares, and risk ratios. A Monte Carlo family simulator validates both
analytically derived maps by brute force.
"""

__version__ = "0.1.0"

from .betarisk import BetaRiskModel, LorenzCurve, fit_from_risk_and_frr
from .dataset import DiseaseRecord, load_records
from .dichotomous import (DichotomousRiskModel, RiskStructureSolution,
                          frr_curve, frr_map, frr_one_affected, frr_supremum,
                          frr_two_affected, irr_given_frr, peak_q,
                          solve_risk_structure)
from .errors import (AmbiguousSolutionError, FamriskError, InfeasibleError,
                     UnattainableError)
from .report import AnalysisResult, analyze, analyze_many, render_lorenz_figure, render_report
from .simulate import SimulationConfig, SimulationOutcome, estimate_gini_by_sampling, simulate
from .special import BetaParams, beta_pdf, beta_sample, inv_reg_inc_beta, log_beta, log_gamma, reg_inc_beta

__all__ = [
    "AmbiguousSolutionError",
    "AnalysisResult",
    "BetaParams",
    "BetaRiskModel",
    "DichotomousRiskModel",
    "DiseaseRecord",
    "FamriskError",
    "InfeasibleError",
    "LorenzCurve",
    "RiskStructureSolution",
    "SimulationConfig",
    "SimulationOutcome",
    "UnattainableError",
    "analyze",
    "analyze_many",
    "beta_pdf",
    "beta_sample",
    "estimate_gini_by_sampling",
    "fit_from_risk_and_frr",
    "frr_curve",
    "frr_map",
    "frr_one_affected",
    "frr_supremum",
    "frr_two_affected",
    "inv_reg_inc_beta",
    "irr_given_frr",
    "load_records",
    "log_beta",
    "log_gamma",
    "peak_q",
    "reg_inc_beta",
    "render_lorenz_figure",
    "render_report",
    "simulate",
    "solve_risk_structure",
    "__version__",
]
