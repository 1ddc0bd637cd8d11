"""Small dense unitary matrices: Haar sampling, spectral data, projector derivatives."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

EPS_GAP = 1e-6
MAX_DIM = 6

TWO_PI = 2.0 * np.pi


class DegenerateSpectrum(ValueError):
    """Raised when two eigenvalues are closer than the configured gap."""


def make_rng(seed, index=None):
    """Counter-based generator keyed by ``seed`` and an optional stream index.

    Each (seed, index) pair gets its own Philox key, so per-sample streams are
    independent of evaluation order.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    key = int(seed) % (1 << 64)
    if index is not None:
        key = (key << 64) | (int(index) % (1 << 64))
    return np.random.Generator(np.random.Philox(key=key))


def check_dim(n):
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= MAX_DIM):
        raise ValueError(f"dimension must be an integer in [1, {MAX_DIM}], got {n!r}")
    return int(n)


def haar_unitary(n, seed=0):
    """Haar-distributed U(n) element.

    QR of a complex Gaussian matrix, with the phases of diag(R) pushed back
    into Q so the result does not depend on the QR sign convention.
    """
    n = check_dim(n)
    rng = make_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    ph = d / np.abs(d)
    return q * ph[None, :]


def is_unitary(g, tol=1e-12):
    g = np.asarray(g)
    return np.linalg.norm(g @ g.conj().T - np.eye(g.shape[0])) < tol


def skew(a):
    return 0.5 * (a - a.conj().T)


def random_skew(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return skew(a)


def random_tangent(g, rng):
    """Random tangent g·A at g with A skew-Hermitian."""
    return g @ random_skew(g.shape[0], rng)


def arg_0_2pi(z):
    """Argument in (0, 2π]."""
    a = np.mod(np.angle(z), TWO_PI)
    return np.where(a <= 0.0, TWO_PI, a)


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    projectors: tuple
    gap: float

    @property
    def n(self):
        return len(self.eigenvalues)

    @property
    def args(self):
        return arg_0_2pi(self.eigenvalues)

    def reconstruct(self):
        return sum(l * p for l, p in zip(self.eigenvalues, self.projectors))


def eig_unitary(g, eps_gap=EPS_GAP):
    """Eigenvalues sorted by argument in (0, 2π] and orthogonal eigenprojectors.

    A complex Schur form of a normal matrix is diagonal up to roundoff, so the
    Schur vectors give an orthonormal eigenbasis even for close eigenvalues.
    """
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    t, z = sla.schur(g, output="complex")
    lam = np.diag(t).copy()
    lam = lam / np.abs(lam)
    order = np.argsort(arg_0_2pi(lam), kind="stable")
    lam = lam[order]
    z = z[:, order]
    if n > 1:
        diffs = np.abs(lam[:, None] - lam[None, :])
        gap = float(np.min(diffs[~np.eye(n, dtype=bool)]))
    else:
        gap = float("inf")
    if gap <= eps_gap:
        raise DegenerateSpectrum(f"eigenvalue gap {gap:.3e} <= {eps_gap:.1e}")
    projs = tuple(np.outer(z[:, i], z[:, i].conj()) for i in range(n))
    return SpectralData(lam, projs, gap)


def dP(g, spec, v):
    """First-order change of every eigenprojector along the tangent ``v`` at ``g``."""
    lam = spec.eigenvalues
    P = spec.projectors
    n = len(lam)
    if n > 1 and spec.gap <= 0:
        raise DegenerateSpectrum("dP needs a simple spectrum")
    out = []
    for k in range(n):
        acc = np.zeros_like(v, dtype=complex)
        for j in range(n):
            if j == k:
                continue
            acc = acc + (P[j] @ v @ P[k] + P[k] @ v @ P[j]) / (lam[k] - lam[j])
        out.append(acc)
    return out


def u_basis(n):
    """Basis of skew-Hermitian n×n matrices, orthonormal for Re tr(A†B).

    Order: i·E_jj, then (E_jk − E_kj)/√2 and i(E_jk + E_kj)/√2 for j < k.
    """
    basis = []
    for j in range(n):
        e = np.zeros((n, n), complex)
        e[j, j] = 1j
        basis.append(e)
    s = 1.0 / np.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            e = np.zeros((n, n), complex)
            e[j, k], e[k, j] = s, -s
            basis.append(e)
            e = np.zeros((n, n), complex)
            e[j, k], e[k, j] = 1j * s, 1j * s
            basis.append(e)
    return np.array(basis)


def skew_coords(a, basis):
    """Coefficients of the skew-Hermitian matrix ``a`` in an orthonormal ``basis``."""
    return np.real(np.einsum("aij,ij->a", basis.conj(), a))
