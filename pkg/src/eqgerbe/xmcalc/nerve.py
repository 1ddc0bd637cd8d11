"""Face maps of the 2-group nerves as substitutions on formal tuples, and δ of fibres.

A formal tuple assigns a word to each slot. The slot ``p`` is the opaque base
point; its value is the L-word u standing for p·u (for paths this is p·γ(1)).
Slots ``g*`` hold L-words (paths), slots ``w*`` hold K-words (loops).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import normal as N
from . import words as W
from .parse import parse_word


def _sort_of(slot):
    if slot == "p":
        return W.L
    return W.K if slot.startswith("w") else W.L


class SymbolicMap:
    """Map between formal tuples given by one word template per target slot.

    Templates are written in the source slot names; the ``p`` template is the
    L-word by which the base point is moved.
    """

    def __init__(self, name, source, target):
        self.name = name
        self.source = tuple(source)
        self.target = tuple(s for s, _ in target)
        self.templates = {}
        for slot, text in target:
            w = parse_word(text, _sort_of(slot)) if isinstance(text, str) else text
            if w.sort != _sort_of(slot):
                raise W.SortError(f"{name}: slot {slot} needs a {_sort_of(slot)}-word")
            for g in W.generators(w):
                if g not in self.source or g == "p":
                    raise ValueError(f"{name}: template for {slot} uses unknown slot {g}")
            self.templates[slot] = w

    def __call__(self, values):
        env = {k: v for k, v in values.items() if k != "p"}
        out = {}
        for slot in self.target:
            w = W.substitute(self.templates[slot], env)
            out[slot] = W.mul(values["p"], w) if slot == "p" else w
        return out

    def __repr__(self):
        return f"SymbolicMap({self.name}: {self.source} -> {self.target})"


def generic_tuple(slots):
    """The tuple whose entries are the slot generators themselves (p starts at one)."""
    return {s: W.one(W.L) if s == "p" else W.Gen(_sort_of(s), s) for s in slots}


def tuple_normal(values):
    out = {}
    for slot, w in values.items():
        if slot == "p":
            out[slot] = N.point_normal(w)
        elif w.sort == W.K:
            out[slot] = N.k_normal(w)
        else:
            out[slot] = N.l_normal(w)
    return out


def format_tuple(nf):
    parts = []
    for slot, v in nf.items():
        if slot == "p":
            parts.append("p" if not v else "p." + N.format_normal(v, W.L))
        else:
            parts.append(N.format_normal(v, _sort_of(slot)))
    return "(" + ", ".join(parts) + ")"


SLOTS = {
    0: ("p",),
    1: ("p", "g1"),
    2: ("p", "g1", "g2", "w1"),
    3: ("p", "g1", "g2", "g3", "w1", "w2", "w3"),
}

def _faces(level, rows):
    src, tgt = SLOTS[level], SLOTS[level - 1]
    return [SymbolicMap(f"d{i}", src, list(zip(tgt, row))) for i, row in enumerate(rows)]


def ek_nerve_faces(level, family="crossed"):
    """Face maps d_0..d_level from ``level`` to ``level - 1``.

    family "crossed" is the nerve of the crossed module K → L acting on P;
    family "paths" is the chain P × PG^q × ΩG^* written with paths γ and
    loops ω, where the base point moves by γ(1).
    """
    if family not in ("crossed", "paths"):
        raise ValueError(f"unknown face family {family!r}")
    if level == 1:
        return _faces(1, [["g1"], ["one"]])
    if level == 2:
        return _faces(
            2,
            [
                ["g1", "g2"],
                ["one", "mul(mul(g1, g2), t(w1))"],
                ["one", "g1"],
            ],
        )
    if level == 3:
        if family == "crossed":
            rows = [
                ["g1", "g2", "g3", "w3"],
                ["one", "mul(mul(g1, g2), t(w1))", "g3", "w2"],
                ["one", "g1", "mul(mul(g2, g3), t(w3))", "mul(mul(inv(w3), ad(inv(g3), w1)), w2)"],
                ["one", "g1", "g2", "w1"],
            ]
        else:
            rows = [
                ["g1", "g2", "g3", "w3"],
                ["one", "mul(mul(g1, g2), t(w1))", "g3", "mul(ad(inv(g3), inv(w1)), w2)"],
                ["one", "g1", "mul(mul(g2, g3), t(w3))", "mul(inv(w3), w2)"],
                ["one", "g1", "g2", "w1"],
            ]
        return _faces(3, rows)
    raise ValueError("level must be 1, 2 or 3")


@dataclass(frozen=True)
class IdentityResult:
    level: int
    i: int
    j: int
    equal: bool
    left: str
    right: str

    def as_dict(self):
        return {"level": self.level, "pair": [self.i, self.j], "equal": self.equal, "lhs": self.left, "rhs": self.right}


class NerveIdentityError(AssertionError):
    def __init__(self, result):
        self.result = result
        super().__init__(
            f"d{result.i}∘d{result.j} != d{result.j - 1}∘d{result.i} at level {result.level}: "
            f"{result.left} vs {result.right}"
        )


def check_identities(level, family="crossed", raise_on_failure=False, faces=None):
    """d_i∘d_j = d_{j−1}∘d_i for all i < j on the generic tuple of ``level``.

    ``faces`` may replace ek_nerve_faces (a callable level -> list of maps).
    """
    faces = faces or (lambda q: ek_nerve_faces(q, family))
    upper, lower = faces(level), faces(level - 1)
    x = generic_tuple(SLOTS[level])
    out = []
    for j in range(level + 1):
        for i in range(j):
            a = tuple_normal(lower[i](upper[j](x)))
            b = tuple_normal(lower[j - 1](upper[i](x)))
            r = IdentityResult(level, i, j, a == b, format_tuple(a), format_tuple(b))
            if raise_on_failure and not r.equal:
                raise NerveIdentityError(r)
            out.append(r)
    return out


def delta_fiber(faces, fiber_template, flip=None):
    """δ of a bundle whose fibre is ``fiber_template`` (words in the target slots).

    Returns ⊗_i (d_i^* E)^{(−1)^i}. ``flip`` reverses the sign of one face,
    which breaks the construction on purpose.
    """
    terms = []
    for i, d in enumerate(faces):
        sign = (-1) ** i
        if flip == i:
            sign = -sign
        x = d(generic_tuple(d.source))
        env = {k: v for k, v in x.items() if k != "p"}
        for w, s in fiber_template.terms:
            terms.append((W.substitute(w, env), s * sign))
    return W.FiberExpr(tuple(terms))


def cs2_delta_m_fiber(flip=None):
    """Fibre of δ(M) on P × PG³ × ΩG³, where M has fibre K̂*_ω over P × PG² × ΩG."""
    M = W.fiber((W.kgen("w1"), -1))
    return delta_fiber(ek_nerve_faces(3, "paths"), M, flip)


FIBRE_PRODUCT_SLOTS = ("p", "g1", "g2", "w0", "w1", "w2", "w3")


def fibre_product_faces():
    """The three faces of the two-fold fibre product of P × PG × ΩG, to P × PG × ΩG."""
    tgt = ("p", "g1", "w1")
    rows = [
        ["g1", "g2", "w2"],
        ["one", "mul(mul(g1, g2), t(w0))", "mul(mul(mul(inv(w0), ad(inv(g2), w1)), w2), w3)"],
        ["one", "g1", "w1"],
    ]
    return [SymbolicMap(f"d{i}", FIBRE_PRODUCT_SLOTS, list(zip(tgt, row))) for i, row in enumerate(rows)]


def cs2_e_fiber(flip=None):
    """Fibre of E = δ(P × PG × K̂), whose fibre over (p, γ, ω) is K̂_ω."""
    return delta_fiber(fibre_product_faces(), W.fiber((W.kgen("w1"), 1)), flip)
