"""Forms of the basic bundle gerbe on U(n) and its equivariant class."""

from .forms import (
    EPS_CUT,
    CutPoint,
    EigenvalueOnCut,
    GmodTPoint,
    YPoint,
    alpha,
    as_cut,
    beta,
    beta_by_quadrature,
    between,
    curving_f,
    curving_f_closed,
    log_branch,
    make_ypoint,
    nu,
    omega,
    omega_as_printed,
    omega_class,
    p_Y,
    p_Y_push,
    projector_between,
    random_gmodt,
    random_gmodt_tangent,
)
from .spaces import GerbeSpaces, sample_y
from .integrals import hopf, nu_su2_integral, omega_u1_integral
from .verify import cocycle_report, verify_thm52

__all__ = [name for name in dir() if not name.startswith("_")]
