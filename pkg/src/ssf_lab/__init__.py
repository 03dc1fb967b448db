"""Finite-dimensional spectral shift functions, perturbation determinants and
double operator integrals for contractions and dissipative matrices."""

from . import doi, funcalc, numkernel, operators, ssf
from .errors import *  # noqa: F401,F403
from .funcalc import AnalyticFunction, BoundaryGrid, FourierSeries
from .operators import (
    Contraction,
    MDissipative,
    cayley_L_to_T,
    cayley_T_to_L,
    check_contraction,
    check_dissipative,
    egervary_dilation,
    random_contraction,
)
from .ssf import SSFResult, ssf_canonical, ssf_halfplane

__version__ = "0.1.0"
