"""Simplicial spaces, the alternating face-map operator on forms, and the total differential."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import excalc as ex
from . import matkit


class SimplicialSpace:
    """Levels X_0..X_L with face maps d_i: X_p -> X_{p-1}, i = 0..p."""

    def __init__(self, name, levels, faces):
        self.name = name
        self.levels = list(levels)
        self.faces = dict(faces)
        for p in range(1, len(self.levels)):
            if len(self.faces[p]) != p + 1:
                raise ValueError(f"level {p} needs {p + 1} face maps")

    @property
    def L(self):
        return len(self.levels) - 1

    def level_of(self, space):
        for q, s in enumerate(self.levels):
            if s is space:
                return q
        raise ValueError(f"{space.name} is not a level of {self.name}")

    def identity_residuals(self, p, point):
        """max over i < j of |d_i d_j x − d_{j−1} d_i x| at a point of level p."""
        out = {}
        sp = self.levels[p - 2]
        for j in range(p + 1):
            for i in range(j):
                a = self.faces[p - 1][i](self.faces[p][j](point))
                b = self.faces[p - 1][j - 1](self.faces[p][i](point))
                out[(i, j)] = max(float(np.max(np.abs(d))) for d in sp.diff(a, b))
        return out


def group_space(n, name="G"):
    return ex.Space(f"{name}=U({n})", [ex.UnitaryFactor(n)])


def conjugation_action(n):
    """Right action m·h = h⁻¹ m h of U(n) on itself, with its analytic pushforward."""

    def act(m, h):
        return h.conj().T @ m @ h

    def push(m, h, vm, vh):
        hi = h.conj().T
        mh = hi @ m @ h
        b = hi @ vh
        return hi @ vm @ h + mh @ b - b @ mh

    return act, push


def _mul(g, h):
    return g @ h


def _mul_push(g, h, vg, vh):
    return vg @ h + g @ vh


def eg_nerve(M, G, L, action, name=None):
    """Nerve of a right action: X_p = M × G^p.

    d_0(m, g_1, ..) = (m·g_1, g_2, ..); d_i multiplies g_i g_{i+1};
    d_p drops g_p. ``action`` is a pair (act(m, g), push(m, g, vm, vg)).
    M and G are single-factor spaces.
    """
    act, act_push = action
    gf = G.factors[0]
    levels = [ex.Space(f"{M.name}x{G.name}^{p}", list(M.factors) + [gf] * p) for p in range(L + 1)]
    faces = {}
    for p in range(1, L + 1):
        src, tgt = levels[p], levels[p - 1]
        fs = []
        for i in range(p + 1):
            fs.append(ex.SmoothMap(src, tgt, *_eg_face(p, i, act, act_push), name=f"d{i}"))
        faces[p] = fs
    return SimplicialSpace(name or f"EG({M.name},{G.name})", levels, faces)


def _eg_face(p, i, act, act_push):
    if i == 0:
        def fn(x):
            return (act(x[0], x[1]),) + tuple(x[2:])

        def push(x, v):
            return (act_push(x[0], x[1], v[0], v[1]),) + tuple(v[2:])
    elif i == p:
        def fn(x):
            return tuple(x[:-1])

        def push(x, v):
            return tuple(v[:-1])
    else:
        def fn(x):
            return tuple(x[:i]) + (_mul(x[i], x[i + 1]),) + tuple(x[i + 2:])

        def push(x, v):
            return tuple(v[:i]) + (_mul_push(x[i], x[i + 1], v[i], v[i + 1]),) + tuple(v[i + 2:])
    return fn, push


def conjugation_nerve(n, L):
    G = group_space(n)
    return eg_nerve(G, G, L, conjugation_action(n), name=f"EG(U({n}))")


def nerve_iso(m, *gs):
    """(m, g_1, .., g_k) ↦ (m, m g_1, m g_1 g_2, ..)."""
    out = [m]
    for g in gs:
        out.append(out[-1] @ g)
    return tuple(out)


def fibre_product_faces(x):
    """Faces of the fibre-product nerve: d_i drops the i-th entry."""
    return [tuple(x[:i]) + tuple(x[i + 1:]) for i in range(len(x))]


def delta_form(omega, S):
    """δω = Σ_i (−1)^i d_i^* ω, taking ω on level p to level p+1."""
    p = S.level_of(omega.space)
    if p + 1 > S.L:
        raise ValueError(f"level {p} form has no level {p + 1} to land on (L = {S.L})")
    pulls = [ex.pullback(d, omega) for d in S.faces[p + 1]]

    def ev(x, *vs):
        return sum((-1) ** i * f.fn(x, *vs) for i, f in enumerate(pulls))

    return ex.DifferentialForm(S.levels[p + 1], omega.degree, ev, name=f"delta({omega.name})")


@dataclass
class BigradedCochain:
    """Partial map (form degree p, level q) -> DifferentialForm."""

    components: dict = field(default_factory=dict)

    def get(self, p, q):
        return self.components.get((p, q))

    def total_degree(self):
        degs = {p + q for p, q in self.components}
        if len(degs) > 1:
            raise ValueError("mixed total degree")
        return degs.pop() if degs else None


def D_component(eta, S, p, q, step=ex.FD_STEP):
    """Component (p, q) of Dη: (−1)^q d η_{(p−1,q)} + δ η_{(p,q−1)}, or None if both absent."""
    terms = []
    a = eta.get(p - 1, q) if p >= 1 else None
    if a is not None:
        da = ex.d_fd(a, step)
        terms.append(da if q % 2 == 0 else -da)
    b = eta.get(p, q - 1) if q >= 1 else None
    if b is not None:
        terms.append(delta_form(b, S))
    if not terms:
        return None
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out


@dataclass(frozen=True)
class ProbePlan:
    points: int = 20
    tangents: int = 5
    seed: int = 0
    stream: int = 0


CONDITION_NAMES = {
    (0, 4): "delta eta03",
    (1, 3): "-d eta03 + delta eta12",
    (2, 2): "d eta12 + delta eta21",
    (3, 1): "-d eta21 + delta eta30",
    (4, 0): "d eta30",
}


def total_D_residual(eta, S, probes=ProbePlan(), step=ex.FD_STEP, total=3):
    """Max |Dη| per bidegree of total degree ``total + 1``.

    Conditions whose contributing components are all absent are reported as
    exactly 0 without evaluation.
    """
    out = []
    for p in range(total + 2):
        q = total + 1 - p
        form = None
        if q <= S.L:
            form = D_component(eta, S, p, q, step)
        worst = 0.0
        if form is not None:
            sp = S.levels[q]
            for ip in range(probes.points):
                rng = matkit.make_rng(probes.seed, (probes.stream << 32) + 1000 * q + ip)
                x = sp.random_point(rng)
                for _ in range(probes.tangents):
                    vs = [sp.random_tangent(x, rng) for _ in range(p)]
                    worst = max(worst, abs(form(x, *vs)))
        elif q > S.L and (eta.get(p, q - 1) is not None):
            raise ValueError(f"nerve too short: condition ({p},{q}) needs level {q}")
        out.append(
            {
                "condition": CONDITION_NAMES.get((p, q), f"({p},{q})"),
                "degree": p,
                "level": q,
                "evaluated": form is not None,
                "max_abs_residual": worst,
            }
        )
    return out
