"""The spaces Y, Y×G^k, Y^[2]×G, G, G×G and the gerbe forms living on them."""

from __future__ import annotations

import numpy as np

from .. import excalc as ex
from .. import matkit
from .. import simpx
from . import forms as bf


def sample_y(n, rng, eps_cut=bf.EPS_CUT, eps_gap=matkit.EPS_GAP):
    """Draw (ψ, g) until g has a simple spectrum away from the cut. Returns (y, redraws)."""
    redraws = 0
    while True:
        g = matkit.haar_unitary(n, rng)
        psi = rng.uniform(0.0, 2 * np.pi)
        try:
            return bf.make_ypoint(psi, g, eps_cut, eps_gap), redraws
        except (matkit.DegenerateSpectrum, bf.EigenvalueOnCut, ValueError):
            redraws += 1


class GerbeSpaces:
    """All spaces and forms for one matrix size n."""

    def __init__(self, n, method="residue", nodes=None, radii=None):
        self.n = matkit.check_dim(n)
        self.method = method
        self.nodes = nodes
        self.radii = radii
        self.G = simpx.group_space(n)
        circle = ex.CircleFactor()
        uf = self.G.factors[0]
        self.Y = ex.Space(f"Y(U({n}))", [circle, uf], sampler=self._y_sampler(0))
        self.YG = ex.Space(f"YxG(U({n}))", [circle, uf, uf], sampler=self._y_sampler(1))
        self.YG2 = ex.Space(f"YxG2(U({n}))", [circle, uf, uf, uf], sampler=self._y_sampler(2))
        self.GG = ex.Space(f"GxG(U({n}))", [uf, uf])
        self.act, self.act_push = simpx.conjugation_action(n)

    def _y_sampler(self, k):
        def sample(rng):
            y, _ = sample_y(self.n, rng)
            return (y.z.psi, y.g) + tuple(matkit.haar_unitary(self.n, rng) for _ in range(k))
        return sample

    def ypoint(self, psi, g):
        return bf.make_ypoint(psi, g, eps_cut=0.0, eps_gap=0.0)

    # -------------------------------------------------------- forms

    def f_form(self):
        kw = {}
        if self.nodes is not None:
            kw["N"] = self.nodes
        if self.radii is not None:
            kw["radii"] = self.radii

        def ev(p, v, w):
            return bf.curving_f(self.ypoint(p[0], p[1]), self.method, **kw)(v, w)

        return ex.DifferentialForm(self.Y, 2, ev, name="f")

    def beta_form(self):
        def ev(p, v):
            y = self.ypoint(p[0], p[1])
            return bf.beta(y, v[2] @ p[2].conj().T)

        return ex.DifferentialForm(self.YG, 1, ev, name="beta")

    def nu_form(self):
        return ex.DifferentialForm(self.G, 3, lambda p, a, b, c: bf.nu(p[0])(a[0], b[0], c[0]), name="nu")

    def omega_form(self, variant=bf.omega):
        return ex.DifferentialForm(self.GG, 2, lambda p, v, w: variant(p[0], p[1])(v, w), name="omega")

    # --------------------------------------------------------- maps

    def d0_YG(self):
        """(z, g, h) ↦ (z, h⁻¹gh)."""
        return ex.SmoothMap(
            self.YG,
            self.Y,
            lambda p: (p[0], self.act(p[1], p[2])),
            lambda p, v: (v[0], self.act_push(p[1], p[2], v[1], v[2])),
            name="d0",
        )

    def d1_YG(self):
        return ex.SmoothMap(self.YG, self.Y, lambda p: (p[0], p[1]), lambda p, v: (v[0], v[1]), name="d1")

    def pi_YG(self):
        """(z, g, h) ↦ (g, h)."""
        return ex.SmoothMap(self.YG, self.GG, lambda p: (p[1], p[2]), lambda p, v: (v[1], v[2]), name="pi")

    def faces_YG2(self):
        """Faces Y×G² → Y×G of the action nerve."""
        act, push = self.act, self.act_push
        d0 = ex.SmoothMap(
            self.YG2,
            self.YG,
            lambda p: (p[0], act(p[1], p[2]), p[3]),
            lambda p, v: (v[0], push(p[1], p[2], v[1], v[2]), v[3]),
            name="d0",
        )
        d1 = ex.SmoothMap(
            self.YG2,
            self.YG,
            lambda p: (p[0], p[1], p[2] @ p[3]),
            lambda p, v: (v[0], v[1], v[2] @ p[3] + p[2] @ v[3]),
            name="d1",
        )
        d2 = ex.SmoothMap(
            self.YG2, self.YG, lambda p: (p[0], p[1], p[2]), lambda p, v: (v[0], v[1], v[2]), name="d2"
        )
        return [d0, d1, d2]

    def e2_form(self, step=ex.FD_STEP, omega=bf.omega):
        """d₀*f − d₁*f − dβ − π*ω on Y×G."""
        f = self.f_form()
        return (
            ex.pullback(self.d0_YG(), f)
            - ex.pullback(self.d1_YG(), f)
            - ex.d_fd(self.beta_form(), step)
            - ex.pullback(self.pi_YG(), self.omega_form(omega))
        )

    def e3_form(self):
        """δβ on Y×G²."""
        beta = self.beta_form()
        d0, d1, d2 = (ex.pullback(d, beta) for d in self.faces_YG2())
        return d0 - d1 + d2

    def cocycle(self, omega=bf.omega_class):
        """(0, 0, ω, ν) as a bigraded cochain on the conjugation nerve."""
        S = simpx.conjugation_nerve(self.n, 2)
        nu = ex.DifferentialForm(S.levels[0], 3, lambda p, a, b, c: bf.nu(p[0])(a[0], b[0], c[0]), name="nu")
        om = ex.DifferentialForm(S.levels[1], 2, lambda p, v, w: omega(p[0], p[1])(v, w), name="omega")
        return simpx.BigradedCochain({(3, 0): nu, (2, 1): om}), S
