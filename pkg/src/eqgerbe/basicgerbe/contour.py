"""Contour quadrature for resolvent integrals, used as an independent oracle.

Contours are annular sectors {r_in ≤ |ξ| ≤ r_out, φ_a ≤ arg ξ ≤ φ_b} traced
anticlockwise. They are parametrized in w = log ξ, where the sector becomes a
rectangle. Each of the four sides gets a Gauss–Legendre rule (the integrands
are analytic up to the corners, so no endpoint clustering is needed), and the
two radial sides are stretched with u = d·sinh(s) so that nodes cluster near
|ξ| = 1, where an eigenvalue may sit at angular distance ~d from the ray.
"""

from __future__ import annotations

import numpy as np

DEFAULT_NODES = 512
DEFAULT_RADII = (0.5, 2.0)
MIN_SIDE_NODES = 32


def gauss_legendre(m):
    """m-point Gauss–Legendre nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(m)


def _split(N, weights):
    """Distribute N nodes over the sides: a floor of MIN_SIDE_NODES each, rest by weight."""
    k = len(weights)
    if N < k * MIN_SIDE_NODES:
        raise ValueError(f"need at least {k * MIN_SIDE_NODES} nodes, got {N}")
    weights = np.asarray(weights, float)
    ms = MIN_SIDE_NODES + np.floor((N - k * MIN_SIDE_NODES) * weights / weights.sum()).astype(int)
    ms[1] += (N - ms.sum()) // 2
    ms[-1] += N - ms.sum()
    return ms


def sector(phi_a, phi_b, d_a, d_b, N=DEFAULT_NODES, radii=DEFAULT_RADII):
    """Nodes ξ_j and weights dξ_j for the anticlockwise boundary of a sector.

    ``d_a`` and ``d_b`` are the clustering scales of the radial sides at
    angles ``phi_a`` and ``phi_b`` (phi_a < phi_b).
    """
    r_in, r_out = radii
    if not (0 < r_in < 1 < r_out):
        raise ValueError("radii must satisfy 0 < r_in < 1 < r_out")
    if not phi_a < phi_b:
        raise ValueError("phi_a must be smaller than phi_b")
    ui, uo = np.log(r_in), np.log(r_out)
    half = 0.5 * (phi_b - phi_a)
    mid = 0.5 * (phi_a + phi_b)
    ray_b = 0.5 * (np.arcsinh(uo / d_b) - np.arcsinh(ui / d_b))
    ray_a = 0.5 * (np.arcsinh(uo / d_a) - np.arcsinh(ui / d_a))
    ms = _split(N, [half / abs(uo), ray_b / (0.5 * np.pi), half / abs(ui), ray_a / (0.5 * np.pi)])

    ws, dws = [], []
    # outer arc, phi_a -> phi_b
    x, w = gauss_legendre(ms[0])
    ws.append(uo + 1j * (mid + half * x))
    dws.append(1j * half * w)
    # ray at phi_b, outward to inward
    x, w = gauss_legendre(ms[1])
    s0, s1 = np.arcsinh(uo / d_b), np.arcsinh(ui / d_b)
    s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * x
    ws.append(d_b * np.sinh(s) + 1j * phi_b)
    dws.append(d_b * np.cosh(s) * 0.5 * (s1 - s0) * w)
    # inner arc, phi_b -> phi_a
    x, w = gauss_legendre(ms[2])
    ws.append(ui + 1j * (mid - half * x))
    dws.append(-1j * half * w)
    # ray at phi_a, inward to outward
    x, w = gauss_legendre(ms[3])
    s0, s1 = np.arcsinh(ui / d_a), np.arcsinh(uo / d_a)
    s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * x
    ws.append(d_a * np.sinh(s) + 1j * phi_a)
    dws.append(d_a * np.cosh(s) * 0.5 * (s1 - s0) * w)

    wv = np.concatenate(ws)
    xi = np.exp(wv)
    return xi, xi * np.concatenate(dws)


def _ang_dist(a, b):
    return np.abs(np.angle(np.exp(1j * (np.asarray(a) - b))))


def resolvents(g, xi):
    """(ξ_j − g)⁻¹ for every node, shape (N, n, n)."""
    n = g.shape[0]
    return np.linalg.inv(xi[:, None, None] * np.eye(n)[None] - g[None])


def projector_quad(psi1, psi2, g, N=DEFAULT_NODES, radii=DEFAULT_RADII):
    """(1/2πi)∮ (ξ − g)⁻¹ dξ around the sector between the cut rays at psi1 and psi2."""
    a, b = min(psi1, psi2), max(psi1, psi2)
    ang = np.angle(np.linalg.eigvals(g))
    xi, dxi = sector(a, b, np.min(_ang_dist(ang, a)), np.min(_ang_dist(ang, b)), N, radii)
    R = resolvents(g, xi)
    return np.einsum("j,jab->ab", dxi, R) / (2j * np.pi)


def keyhole(psi, g, N=DEFAULT_NODES, radii=DEFAULT_RADII):
    """Contour around all eigenvalues avoiding the cut ray at angle psi.

    The radial sides sit at psi ± ε with ε half the angular distance from
    psi to the nearest eigenvalue. Angles are returned in (psi − 2π, psi).
    """
    ang = np.angle(np.linalg.eigvals(g))
    eps = 0.5 * float(np.min(_ang_dist(ang, psi)))
    return sector(psi - 2 * np.pi + eps, psi - eps, eps, eps, N, radii)


def log_on_plane(psi, xi):
    """log ξ with the cut along the ray at angle psi and log 1 = 0."""
    phi = np.angle(xi * np.exp(-1j * psi)) + psi
    phi = np.where(phi >= psi, phi - 2 * np.pi, phi)
    return np.log(np.abs(xi)) + 1j * phi


def beta_quad(psi, g, B, N=DEFAULT_NODES, radii=DEFAULT_RADII):
    """−(1/4π²)∮ log_z ξ tr(B (ξ − g)⁻¹) dξ."""
    xi, dxi = keyhole(psi, g, N, radii)
    R = resolvents(g, xi)
    tr = np.einsum("ab,jba->j", B, R)
    return -np.sum(log_on_plane(psi, xi) * tr * dxi) / (4 * np.pi ** 2)


def f_quad(psi, g, V, W, N=DEFAULT_NODES, radii=DEFAULT_RADII):
    """(1/8π²)∮ log_z ξ [tr(R V R² W) − tr(R W R² V)] dξ with R = (ξ − g)⁻¹."""
    xi, dxi = keyhole(psi, g, N, radii)
    R = resolvents(g, xi)
    RV = R @ V
    RW = R @ W
    t1 = np.einsum("jab,jba->j", RV, R @ RW)
    t2 = np.einsum("jab,jba->j", RW, R @ RV)
    return np.sum(log_on_plane(psi, xi) * (t1 - t2) * dxi) / (8 * np.pi ** 2)
