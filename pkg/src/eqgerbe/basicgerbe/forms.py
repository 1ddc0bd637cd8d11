"""Spectral forms of the basic gerbe on U(n).

Tangents on Y are pairs (dψ, V) with V a tangent at g; tangents on
Y×G^k append tangents at each group entry. The 1-forms α and β only see the
last group slot, through its right Maurer–Cartan value θ_h(W) = W h⁻¹.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import excalc as ex
from .. import matkit
from . import contour

EPS_CUT = 1e-3
TWO_PI = 2 * np.pi


class EigenvalueOnCut(ValueError):
    """An eigenvalue lies within the exclusion zone of a cut point."""


@dataclass(frozen=True)
class CutPoint:
    psi: float

    def __post_init__(self):
        if not (0.0 < self.psi < TWO_PI):
            raise ValueError(f"cut angle must lie in (0, 2π), got {self.psi!r}")

    @property
    def z(self):
        return np.exp(1j * self.psi)


def as_cut(z):
    return z if isinstance(z, CutPoint) else CutPoint(float(z))


@dataclass(frozen=True)
class YPoint:
    z: CutPoint
    g: np.ndarray
    spec: matkit.SpectralData


def cut_distance(psi, lam):
    return float(np.min(np.abs(np.asarray(lam) - np.exp(1j * psi))))


def make_ypoint(psi, g, eps_cut=EPS_CUT, eps_gap=matkit.EPS_GAP):
    z = as_cut(psi)
    spec = matkit.eig_unitary(g, eps_gap)
    if cut_distance(z.psi, spec.eigenvalues) <= eps_cut:
        raise EigenvalueOnCut(f"eigenvalue within {eps_cut} of the cut at {z.psi:.6f}")
    return YPoint(z, np.asarray(g), spec)


def log_branch(z, xi):
    """log_z ξ = iφ with ξ = e^{iφ} and φ in (ψ − 2π, ψ)."""
    psi = as_cut(z).psi
    xi = complex(xi)
    if abs(abs(xi) - 1.0) > 1e-9:
        raise ValueError("log_branch expects a unit-modulus argument")
    if abs(xi - np.exp(1j * psi)) <= 1e-9:
        raise EigenvalueOnCut("argument lies on the cut")
    phi = float(np.mod(np.angle(xi), TWO_PI))
    if phi >= psi:
        phi -= TWO_PI
    return 1j * phi


def between(z1, z2, lam):
    """Whether λ lies on the arc between the two cut points that avoids 1."""
    p1, p2 = as_cut(z1).psi, as_cut(z2).psi
    a = float(matkit.arg_0_2pi(complex(lam)))
    if p1 == p2:
        return False
    if abs(lam - np.exp(1j * p1)) < 1e-12 or abs(lam - np.exp(1j * p2)) < 1e-12:
        raise EigenvalueOnCut("eigenvalue coincides with a cut point")
    lo, hi = min(p1, p2), max(p1, p2)
    return lo < a < hi


def _check_cut(psi, spec, eps_cut):
    if cut_distance(psi, spec.eigenvalues) <= eps_cut:
        raise EigenvalueOnCut(f"eigenvalue within {eps_cut} of the cut at {psi:.6f}")


def projector_between(z1, z2, g, eps_cut=EPS_CUT, spec=None):
    """Sum of eigenprojectors of g whose eigenvalues lie between z1 and z2."""
    z1, z2 = as_cut(z1), as_cut(z2)
    spec = spec or matkit.eig_unitary(g)
    _check_cut(z1.psi, spec, eps_cut)
    _check_cut(z2.psi, spec, eps_cut)
    n = spec.n
    out = np.zeros((n, n), complex)
    for lam, P in zip(spec.eigenvalues, spec.projectors):
        if between(z1, z2, lam):
            out = out + P
    return out


def orientation(z1, z2):
    """+1 on the ψ₁ < ψ₂ component, −1 on the reversed one, 0 on the diagonal."""
    return float(np.sign(as_cut(z2).psi - as_cut(z1).psi))


def alpha(z1, z2, g, B, eps_cut=EPS_CUT, spec=None):
    """α evaluated on an h-tangent with Maurer–Cartan value B.

    For ψ₁ > ψ₂ the between-projector enters with a minus sign: on that
    component the line is the dual one, and this is the sign for which
    α = β(z₂) − β(z₁).
    """
    s = orientation(z1, z2)
    if s == 0:
        return 0j
    P = projector_between(z1, z2, g, eps_cut, spec)
    return complex(s * np.trace(B @ P))


def beta(y, B):
    """−(i/2π) Σ_i log_z(λ_i) tr(B P_i)."""
    total = 0j
    for lam, P in zip(y.spec.eigenvalues, y.spec.projectors):
        total += log_branch(y.z, lam) * np.trace(B @ P)
    return complex(-1j / TWO_PI * total)


def beta_by_quadrature(y, B, N=contour.DEFAULT_NODES, radii=contour.DEFAULT_RADII):
    return complex(contour.beta_quad(y.z.psi, y.g, B, N, radii))


def log_divided_differences(y):
    """c_ij = log_z[λ_i, λ_j, λ_j], the residue weights of the curving integrand."""
    lam = y.spec.eigenvalues
    logs = np.array([log_branch(y.z, l) for l in lam])
    n = len(lam)
    c = np.empty((n, n), complex)
    for i in range(n):
        for j in range(n):
            if i == j:
                c[i, j] = -0.5 / lam[i] ** 2
            else:
                first = (logs[i] - logs[j]) / (lam[i] - lam[j])
                c[i, j] = (first - 1.0 / lam[j]) / (lam[i] - lam[j])
    return c


def curving_f(y, method="quadrature", N=contour.DEFAULT_NODES, radii=contour.DEFAULT_RADII):
    """Curving 2-form at y, as an evaluator on pairs of Y-tangents (dψ, V).

    ``method="quadrature"`` integrates the resolvent formula numerically;
    ``method="residue"`` sums the residues at the eigenvalues.
    """
    if method == "quadrature":
        def f(v, w):
            return complex(contour.f_quad(y.z.psi, y.g, v[1], w[1], N, radii))
    elif method == "residue":
        c = log_divided_differences(y)
        P = y.spec.projectors
        n = y.spec.n
        scale = 2j * np.pi / (8 * np.pi ** 2)

        def f(v, w):
            V, W = v[1], w[1]
            total = 0j
            for i in range(n):
                PV, PW = P[i] @ V, P[i] @ W
                for j in range(n):
                    if i == j:
                        continue
                    total += c[i, j] * (np.trace(PV @ P[j] @ W) - np.trace(PW @ P[j] @ V))
            return complex(scale * total)
    else:
        raise ValueError(f"unknown method {method!r}")
    return f


# ---------------------------------------------------------- G/T × Y_T


@dataclass(frozen=True)
class GmodTPoint:
    """(P, λ, z): frame u with P_i = u E_ii u†, angles of λ, and a cut point."""

    u: np.ndarray
    angles: np.ndarray
    z: CutPoint

    @property
    def eigenvalues(self):
        return np.exp(1j * np.asarray(self.angles))

    @property
    def projectors(self):
        return tuple(np.outer(self.u[:, i], self.u[:, i].conj()) for i in range(self.u.shape[0]))

    def g(self):
        return sum(l * P for l, P in zip(self.eigenvalues, self.projectors))

    def spectral(self):
        lam = self.eigenvalues
        n = len(lam)
        gap = float(np.min([abs(lam[i] - lam[j]) for i in range(n) for j in range(n) if i != j])) if n > 1 else float("inf")
        return matkit.SpectralData(lam, self.projectors, gap)


def random_gmodt(n, rng, eps_cut=EPS_CUT, eps_gap=matkit.EPS_GAP):
    """Random point of G/T × Y_T with the usual gap and cut exclusions."""
    while True:
        u = matkit.haar_unitary(n, rng)
        angles = np.sort(rng.uniform(0.0, TWO_PI, n))
        psi = rng.uniform(0.0, TWO_PI)
        lam = np.exp(1j * angles)
        if n > 1 and np.min(np.abs(np.diff(lam))) <= eps_gap:
            continue
        if psi <= 0.0 or cut_distance(psi, lam) <= eps_cut:
            continue
        return GmodTPoint(u, angles, CutPoint(psi))


def random_gmodt_tangent(q, rng):
    """(Ξ, dφ, dψ): Ξ skew-Hermitian moves the frame, P_i ↦ P_i + [Ξ, P_i]."""
    n = q.u.shape[0]
    return (matkit.random_skew(n, rng), rng.standard_normal(n), rng.standard_normal())


def p_Y(q):
    """(P, λ, z) ↦ (z, Σ λ_i P_i)."""
    return (q.z.psi, q.g())


def p_Y_push(q, t):
    xi, dphi, dpsi = t
    g = q.g()
    dg = xi @ g - g @ xi
    for l, P, a in zip(q.eigenvalues, q.projectors, dphi):
        dg = dg + 1j * l * a * P
    return (dpsi, dg)


def curving_f_closed(q):
    """(i/4π) Σ_{i≠k} A_ik [tr(P_i dP_k(V) dP_k(W)) − tr(P_i dP_k(W) dP_k(V))].

    A_ik = log λ_i − log λ_k + (λ_k − λ_i)/λ_k. The dP_k come from the frame
    part of the tangent, fed through the first-order projector formula.
    """
    lam = q.eigenvalues
    P = q.projectors
    n = len(lam)
    logs = [log_branch(q.z, l) for l in lam]
    A = np.zeros((n, n), complex)
    for i in range(n):
        for k in range(n):
            if i != k:
                A[i, k] = logs[i] - logs[k] + (lam[k] - lam[i]) / lam[k]
    g = q.g()
    spec = q.spectral()

    def frame_dP(t):
        xi = t[0]
        return matkit.dP(g, spec, xi @ g - g @ xi)

    def f(v, w):
        dv, dw = frame_dP(v), frame_dP(w)
        total = 0j
        for i in range(n):
            for k in range(n):
                if i == k:
                    continue
                total += A[i, k] * (np.trace(P[i] @ dv[k] @ dw[k]) - np.trace(P[i] @ dw[k] @ dv[k]))
        return complex(1j / (4 * np.pi) * total)

    return f


# ------------------------------------------------------------ ν and ω


def nu(g):
    """−(1/24π²) tr(g⁻¹dg)³ at g, as an evaluator on three tangents."""
    gi = g.conj().T

    def ev(v1, v2, v3):
        a = [gi @ v for v in (v1, v2, v3)]
        total = 0j
        for (i, j, k), s in ex._S3:
            total += s * np.trace(a[i] @ a[j] @ a[k])
        return complex(-total / (24 * np.pi ** 2))

    return ev


def _omega_terms(g, h, v, w):
    """tr(θ_h θ̂_h), tr(θ θ_h), tr(θ θ̂_h) as 2-forms on (V, W)."""
    gi, hi = g.conj().T, h.conj().T

    def parts(x):
        thh = x[1] @ hi
        return gi @ x[0], thh, gi @ thh @ g

    a, b = parts(v), parts(w)

    def t2(i, j):
        return np.trace(a[i] @ b[j]) - np.trace(b[i] @ a[j])

    return t2(1, 2), t2(0, 1), t2(0, 2)


def omega(g, h):
    """(i/4π)[tr(θ_h θ̂_h) + tr(θ θ_h) + tr(θ θ̂_h)] at (g, h) on tangents (V_g, V_h).

    θ = g⁻¹dg, θ_h = dh h⁻¹, θ̂_h = g⁻¹θ_h g. Note tr(θ_h θ̂_h) = −tr(θ̂_h θ_h)
    for 1-forms. This normalization matches f and β, so that
    d₀*f − d₁*f − dβ = π*ω.
    """
    def ev(v, w):
        return complex(1j / (4 * np.pi) * sum(_omega_terms(g, h, v, w)))

    return ev


def omega_class(g, h):
    """ω/(2πi): the normalization that pairs with ν in the total complex."""
    om = omega(g, h)

    def ev(v, w):
        return om(v, w) / (2j * np.pi)

    return ev


def omega_as_printed(g, h):
    """(i/4π)[tr(θ̂_h θ_h) + tr(θ θ_h) + tr(θ θ̂_h)], kept for diagnostics."""
    def ev(v, w):
        t1, t2, t3 = _omega_terms(g, h, v, w)
        return complex(1j / (4 * np.pi) * (-t1 + t2 + t3))

    return ev
