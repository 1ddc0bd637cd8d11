"""Differential forms as multilinear evaluators on products of U(n), circles and boxes.

Points of a :class:`Space` are tuples with one entry per factor, tangent
vectors are tuples of the same shape. A U(n) entry is an n×n unitary matrix
with tangents g·A (A skew-Hermitian, stored as the ambient matrix), a circle
entry is an angle with real tangents, and a Euclidean entry is a 1-d array.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.linalg import expm, expm_frechet

from . import matkit

FD_STEP = 1e-5
PUSH_STEP = 1e-5


def perm_sign(p):
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


# ---------------------------------------------------------------- factors


class UnitaryFactor:
    def __init__(self, n):
        self.n = matkit.check_dim(n)
        self.basis = matkit.u_basis(self.n)
        self.dim = self.n * self.n

    def _alg(self, x):
        return np.tensordot(x, self.basis, axes=1)

    def chart(self, base, x):
        if not np.any(x):
            return base
        return base @ expm(self._alg(x))

    def chart_tangent(self, base, x, c):
        if not np.any(x):
            return base @ self._alg(c)
        _, d = expm_frechet(self._alg(x), self._alg(c))
        return base @ d

    def coords(self, base, v):
        return matkit.skew_coords(base.conj().T @ v, self.basis)

    def diff(self, a, b):
        return a - b

    def sample(self, rng):
        return matkit.haar_unitary(self.n, rng)

    def sample_tangent(self, p, rng):
        return matkit.random_tangent(p, rng)

    def zero(self, p):
        return np.zeros_like(p)


class CircleFactor:
    dim = 1

    def chart(self, base, x):
        return base + x[0]

    def chart_tangent(self, base, x, c):
        return float(c[0])

    def coords(self, base, v):
        return np.array([float(v)])

    def diff(self, a, b):
        return (a - b + np.pi) % (2 * np.pi) - np.pi

    def sample(self, rng):
        return rng.uniform(0.0, 2 * np.pi)

    def sample_tangent(self, p, rng):
        return rng.standard_normal()

    def zero(self, p):
        return 0.0


class EuclideanFactor:
    def __init__(self, d):
        self.dim = int(d)

    def chart(self, base, x):
        return np.asarray(base, float) + x

    def chart_tangent(self, base, x, c):
        return np.array(c, float)

    def coords(self, base, v):
        return np.asarray(v, float)

    def diff(self, a, b):
        return np.asarray(a) - np.asarray(b)

    def sample(self, rng):
        return rng.standard_normal(self.dim)

    def sample_tangent(self, p, rng):
        return rng.standard_normal(self.dim)

    def zero(self, p):
        return np.zeros(self.dim)


class Space:
    """Product of factors with a chart centred at any point.

    ``sampler(rng)`` may replace the default product sampling when the space
    is an open subset with constraints (for example pairs (z, g) with z not
    close to an eigenvalue of g).
    """

    def __init__(self, name, factors, sampler=None, chart_radius=1.0):
        self.name = name
        self.factors = tuple(factors)
        self.dim = sum(f.dim for f in self.factors)
        self._sampler = sampler
        self.chart_radius = chart_radius
        offs = np.cumsum([0] + [f.dim for f in self.factors])
        self._slices = [slice(offs[i], offs[i + 1]) for i in range(len(self.factors))]

    def __repr__(self):
        return f"Space({self.name!r}, dim={self.dim})"

    def chart(self, p, x):
        x = np.asarray(x, float)
        if np.max(np.abs(x), initial=0.0) > self.chart_radius:
            raise ValueError("point outside chart box")
        return tuple(f.chart(pi, x[s]) for f, pi, s in zip(self.factors, p, self._slices))

    def chart_tangent(self, p, x, c):
        x = np.asarray(x, float)
        return tuple(
            f.chart_tangent(pi, x[s], c[s]) for f, pi, s in zip(self.factors, p, self._slices)
        )

    def coords(self, p, v):
        return np.concatenate([f.coords(pi, vi) for f, pi, vi in zip(self.factors, p, v)])

    def diff(self, a, b):
        return tuple(f.diff(ai, bi) for f, ai, bi in zip(self.factors, a, b))

    def coord_tangent(self, p, c):
        return self.chart_tangent(p, np.zeros(self.dim), np.asarray(c, float))

    def basis_tangents(self, p):
        eye = np.eye(self.dim)
        return [self.coord_tangent(p, eye[a]) for a in range(self.dim)]

    def zero_tangent(self, p):
        return tuple(f.zero(pi) for f, pi in zip(self.factors, p))

    def random_point(self, rng):
        if self._sampler is not None:
            return self._sampler(rng)
        return tuple(f.sample(rng) for f in self.factors)

    def random_tangent(self, p, rng):
        return tuple(f.sample_tangent(pi, rng) for f, pi in zip(self.factors, p))


def product(name, *spaces, sampler=None):
    return Space(name, [f for s in spaces for f in s.factors], sampler=sampler)


def tangent_combo(coeffs, tangents):
    """Linear combination Σ c_i V_i of tangent tuples."""
    out = None
    for c, v in zip(coeffs, tangents):
        term = tuple(c * vi for vi in v)
        out = term if out is None else tuple(a + b for a, b in zip(out, term))
    return out


# ------------------------------------------------------------------ forms


class DifferentialForm:
    """Alternating multilinear evaluator ``fn(point, *tangents) -> complex``.

    ``chart_eval(p0, x, cs)`` evaluates the form at chart(p0, x) on the
    constant coordinate fields ``cs`` of the chart centred at p0. Forms built
    by :func:`d_fd` override it so that nested derivatives share one chart.
    """

    def __init__(self, space, degree, fn, name="", chart_eval=None):
        self.space = space
        self.degree = int(degree)
        self.fn = fn
        self.name = name
        self._chart_eval = chart_eval

    def __call__(self, p, *vs):
        if len(vs) != self.degree:
            raise TypeError(f"{self.name or 'form'} of degree {self.degree} got {len(vs)} tangents")
        return complex(self.fn(p, *vs))

    def chart_eval(self, p0, x, cs):
        if self._chart_eval is not None:
            return self._chart_eval(p0, x, cs)
        sp = self.space
        return self.fn(sp.chart(p0, x), *[sp.chart_tangent(p0, x, c) for c in cs])

    def __repr__(self):
        return f"DifferentialForm({self.name!r}, degree={self.degree}, space={self.space.name!r})"

    def _check(self, other):
        if other.space is not self.space or other.degree != self.degree:
            raise ValueError("forms live on different spaces or have different degrees")

    def _combine(self, other, op, name):
        self._check(other)
        return DifferentialForm(
            self.space,
            self.degree,
            lambda p, *v: op(self.fn(p, *v), other.fn(p, *v)),
            name=name,
            chart_eval=lambda p0, x, cs: op(self.chart_eval(p0, x, cs), other.chart_eval(p0, x, cs)),
        )

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, f"({self.name}+{other.name})")

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, f"({self.name}-{other.name})")

    def __neg__(self):
        return -1.0 * self

    def __rmul__(self, c):
        return DifferentialForm(
            self.space,
            self.degree,
            lambda p, *v: c * self.fn(p, *v),
            name=f"{c}*{self.name}",
            chart_eval=lambda p0, x, cs: c * self.chart_eval(p0, x, cs),
        )


def zero_form(space, degree):
    return DifferentialForm(space, degree, lambda p, *v: 0.0, name="0")


class MatrixForm:
    """Matrix-valued form, used for Maurer–Cartan type 1-forms."""

    def __init__(self, space, degree, fn, name=""):
        self.space = space
        self.degree = int(degree)
        self.fn = fn
        self.name = name

    def __call__(self, p, *vs):
        return self.fn(p, *vs)


def _same_space(*forms):
    sp = forms[0].space
    for f in forms[1:]:
        if f.space is not sp:
            raise ValueError("forms live on different spaces")
    return sp


def wedge(a, b):
    sp = _same_space(a, b)
    k, l = a.degree, b.degree
    m = k + l
    shuffles = []
    for idx in itertools.combinations(range(m), k):
        rest = tuple(i for i in range(m) if i not in idx)
        shuffles.append((idx, rest, perm_sign(idx + rest)))

    def ev(p, *vs):
        total = 0.0
        for idx, rest, s in shuffles:
            total += s * a.fn(p, *[vs[i] for i in idx]) * b.fn(p, *[vs[i] for i in rest])
        return total

    return DifferentialForm(sp, m, ev, name=f"({a.name}^{b.name})")


def trace2(a, b):
    sp = _same_space(a, b)

    def ev(p, v, w):
        return np.trace(a.fn(p, v) @ b.fn(p, w)) - np.trace(a.fn(p, w) @ b.fn(p, v))

    return DifferentialForm(sp, 2, ev, name=f"tr({a.name}{b.name})")


_S3 = [(s, perm_sign(s)) for s in itertools.permutations(range(3))]


def trace3(a, b, c):
    sp = _same_space(a, b, c)

    def ev(p, *vs):
        av = [a.fn(p, v) for v in vs]
        bv = av if b is a else [b.fn(p, v) for v in vs]
        cv = av if c is a else [c.fn(p, v) for v in vs]
        total = 0.0
        for (i, j, k), s in _S3:
            total += s * np.trace(av[i] @ bv[j] @ cv[k])
        return total

    return DifferentialForm(sp, 3, ev, name=f"tr({a.name}{b.name}{c.name})")


def d_fd(omega, step=FD_STEP, richardson=False):
    """Exterior derivative by central differences in the chart centred at the point.

    dω(V_0..V_k) = Σ_j (−1)^j D_{V_j}[ω(Ṽ_0, ..^j.., Ṽ_k)] where the Ṽ_i are the
    constant-coefficient coordinate fields through V_i. They commute, so no
    bracket terms appear. Nested applications reuse the outermost chart.

    D_V is assembled from coordinate partials contracted with the coordinates
    of V, so the result is exactly linear in each tangent argument.
    """
    sp = omega.space
    k = omega.degree
    if step <= 0:
        raise ValueError("step must be positive")

    def directional(p0, x, cj, others, h):
        total = 0.0
        for a in np.flatnonzero(cj):
            e = np.zeros_like(x)
            e[a] = h
            plus = omega.chart_eval(p0, x + e, others)
            minus = omega.chart_eval(p0, x - e, others)
            total = total + cj[a] * (plus - minus) / (2 * h)
        return total

    def chart_eval(p0, x, cs):
        total = 0.0
        for j in range(k + 1):
            others = cs[:j] + cs[j + 1:]
            dh = directional(p0, x, cs[j], others, step)
            if richardson:
                dh2 = directional(p0, x, cs[j], others, step / 2)
                dh = (4 * dh2 - dh) / 3
            total += (-1) ** j * dh
        return total

    def ev(p, *vs):
        return chart_eval(p, np.zeros(sp.dim), [sp.coords(p, v) for v in vs])

    return DifferentialForm(sp, k + 1, ev, name=f"d({omega.name})", chart_eval=chart_eval)


# ------------------------------------------------------------ smooth maps


class SmoothMap:
    """Map between spaces with an analytic or finite-difference pushforward."""

    def __init__(self, source, target, fn, push=None, name="", fd_step=PUSH_STEP):
        self.source = source
        self.target = target
        self.fn = fn
        self.push_fn = push
        self.name = name
        self.fd_step = fd_step

    @property
    def analytic(self):
        return self.push_fn is not None

    def __call__(self, p):
        return self.fn(p)

    def push(self, p, v):
        if self.push_fn is not None:
            return self.push_fn(p, v)
        return self.push_fd(p, v)

    def push_fd(self, p, v):
        h = self.fd_step
        c = self.source.coords(p, v)
        a = self.fn(self.source.chart(p, h * c))
        b = self.fn(self.source.chart(p, -h * c))
        return tuple(d / (2 * h) for d in self.target.diff(a, b))

    def without_push(self):
        return SmoothMap(self.source, self.target, self.fn, None, self.name + "[fd]", self.fd_step)

    def __repr__(self):
        return f"SmoothMap({self.name!r}: {self.source.name} -> {self.target.name})"


def compose(g, f):
    """g ∘ f."""
    if f.target is not g.source:
        raise ValueError("maps do not compose")
    push = None
    if f.analytic and g.analytic:
        def push(p, v):
            return g.push(f(p), f.push(p, v))
    return SmoothMap(f.source, g.target, lambda p: g(f(p)), push, name=f"{g.name}.{f.name}")


def identity_map(space):
    return SmoothMap(space, space, lambda p: p, lambda p, v: v, name="id")


def pullback(F, omega):
    if omega.space is not F.target:
        raise ValueError(f"form lives on {omega.space.name}, map targets {F.target.name}")

    def ev(p, *vs):
        return omega.fn(F(p), *[F.push(p, v) for v in vs])

    return DifferentialForm(F.source, omega.degree, ev, name=f"{F.name}*{omega.name}")


# ------------------------------------------------------------ integration


class Parametrization:
    """Coordinate box [lo, hi] mapped into a space.

    ``partials(u)`` returns the tangent tuples ∂/∂u_i at fn(u). When omitted
    they are taken by central differences with step ``fd_step``.
    """

    def __init__(self, space, lo, hi, fn, partials=None, fd_step=1e-6):
        self.space = space
        self.lo = np.asarray(lo, float)
        self.hi = np.asarray(hi, float)
        self.fn = fn
        self.partials_fn = partials
        self.fd_step = fd_step

    @property
    def dim(self):
        return len(self.lo)

    def partials(self, u):
        if self.partials_fn is not None:
            return self.partials_fn(u)
        out = []
        h = self.fd_step
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = h
            d = self.space.diff(self.fn(u + e), self.fn(u - e))
            out.append(tuple(x / (2 * h) for x in d))
        return out


def integrate_grid(omega, domain, resolution):
    """Midpoint rule for a top-degree form over a parametrized box."""
    if omega.degree != domain.dim:
        raise ValueError(f"degree {omega.degree} form over a {domain.dim}-dimensional box")
    if omega.space is not domain.space:
        raise ValueError("form and domain live on different spaces")
    res = [int(resolution)] * domain.dim if np.isscalar(resolution) else [int(r) for r in resolution]
    du = (domain.hi - domain.lo) / np.array(res)
    axes = [domain.lo[i] + (np.arange(res[i]) + 0.5) * du[i] for i in range(domain.dim)]
    vals = np.empty(math.prod(res), dtype=complex)
    for idx, u in enumerate(itertools.product(*axes)):
        u = np.array(u)
        vals[idx] = omega.fn(domain.fn(u), *domain.partials(u))
    return complex(np.sum(vals) * np.prod(du))
