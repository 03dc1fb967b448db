"""Perturbation determinants, spectral shift functions and trace formulas."""

from .appendix import (
    counting_difference,
    krein_exp_rep_check,
    krein_recovery,
    outer_rep_check,
    random_accumulative,
)
from .determinants import (
    PerturbationDeterminant,
    chain_rule_check,
    pert_det_disk,
    pert_det_halfplane,
    ratio_identity_defect,
    resolvent_trace_difference,
)
from .disk import (
    contour_integral,
    laurent_coefficients,
    logdet_on_circle,
    mass_identity,
    ssf_canonical,
    ssf_representatives,
    track_branch,
    verify_function_trace,
    verify_resolvent_trace,
)
from .flatten import flatten_real, zygmund_functional
from .halfplane import (
    cayley_transfer,
    cross_domain_check,
    logdet_on_line,
    ssf_halfplane,
    verify_halfplane_function_trace,
    verify_halfplane_trace,
)
from .rank_one import (
    RankOneModel,
    cayley_corollary_map,
    eta_integral,
    growth_alphas,
    halfplane_argument_check,
    rank_one_criterion,
    rank_one_eta,
    rank_one_exp_rep_check,
)
from .result import SSFResult

__all__ = [name for name in dir() if not name.startswith("_")]
