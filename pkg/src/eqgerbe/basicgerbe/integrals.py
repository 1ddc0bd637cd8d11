"""Grid integrals of ν over SU(2) and of ω over the maximal torus of U(1)×U(1)."""

from __future__ import annotations

import numpy as np

from .. import excalc as ex
from .spaces import GerbeSpaces


def hopf(u):
    """SU(2) element at Hopf coordinates u = (η, ξ₁, ξ₂), η ∈ [0, π/2], ξ ∈ [0, 2π]."""
    eta, x1, x2 = u
    a, b = np.exp(1j * x1) * np.cos(eta), np.exp(1j * x2) * np.sin(eta)
    return np.array([[a, b], [-np.conj(b), np.conj(a)]])


def hopf_partials(u):
    eta, x1, x2 = u
    c, s = np.cos(eta), np.sin(eta)
    e1, e2 = np.exp(1j * x1), np.exp(1j * x2)

    def mat(a, b):
        return np.array([[a, b], [-np.conj(b), np.conj(a)]])

    return [
        (mat(-e1 * s, e2 * c),),
        (mat(1j * e1 * c, 0.0),),
        (mat(0.0, 1j * e2 * s),),
    ]


def nu_su2_integral(grid=48):
    """∫ ν over SU(2) by the midpoint rule on a grid³ Hopf box."""
    S = GerbeSpaces(2)
    dom = ex.Parametrization(
        S.G, [0.0, 0.0, 0.0], [np.pi / 2, 2 * np.pi, 2 * np.pi], lambda u: (hopf(u),), partials=hopf_partials
    )
    return ex.integrate_grid(S.nu_form(), dom, grid)


def _torus(u):
    return (np.array([[np.exp(1j * u[0])]]), np.array([[np.exp(1j * u[1])]]))


def _torus_partials(u):
    g, h = _torus(u)
    z = np.zeros((1, 1), complex)
    return [(1j * g, z), (z, 1j * h)]


def omega_u1_integral(grid=256, omega=None):
    """∫ ω over U(1)×U(1) with the (φ_g, φ_h) orientation, midpoint rule on grid²."""
    S = GerbeSpaces(1)
    form = S.omega_form() if omega is None else S.omega_form(omega)
    dom = ex.Parametrization(S.GG, [0.0, 0.0], [2 * np.pi, 2 * np.pi], _torus, partials=_torus_partials)
    return ex.integrate_grid(form, dom, grid)
