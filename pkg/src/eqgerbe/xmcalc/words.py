"""Formal words over a crossed module K → L and tensor expressions of their fibres.

Two sorts: ``"K"`` words (generators w0, w1, ...) and ``"L"`` words
(generators g0, g1, ...). ``t(k)`` embeds a K-word into L, and ``ad(l, k)``
is the action of L on K.
"""

from __future__ import annotations

from dataclasses import dataclass, field

K, L = "K", "L"


class XmError(ValueError):
    """Base class for parse and sort errors; ``pos`` is a character offset or None."""

    def __init__(self, msg, pos=None):
        self.msg = msg
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} (at position {pos})")


class ParseError(XmError):
    pass


class SortError(XmError):
    pass


@dataclass(frozen=True)
class Gen:
    sort: str
    name: str
    pos: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class One:
    sort: str
    pos: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Mul:
    sort: str
    left: object
    right: object
    pos: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Inv:
    sort: str
    arg: object
    pos: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Embed:
    arg: object
    pos: int | None = field(default=None, compare=False)
    sort: str = field(default=L, init=False)


@dataclass(frozen=True)
class Ad:
    l: object
    k: object
    pos: int | None = field(default=None, compare=False)
    sort: str = field(default=K, init=False)


def _need(word, sort, what):
    if word.sort != sort:
        raise SortError(f"{what} needs a {sort}-word, got a {word.sort}-word", getattr(word, "pos", None))


def kgen(name, pos=None):
    return Gen(K, name, pos)


def lgen(name, pos=None):
    return Gen(L, name, pos)


def one(sort=K):
    return One(sort)


def mul(a, b, *rest):
    if a.sort != b.sort:
        raise SortError(f"mul of a {a.sort}-word and a {b.sort}-word", getattr(b, "pos", None))
    out = Mul(a.sort, a, b)
    for c in rest:
        out = mul(out, c)
    return out


def inv(a):
    return Inv(a.sort, a)


def t(k):
    _need(k, K, "t")
    return Embed(k)


def ad(l, k):
    _need(l, L, "first argument of ad")
    _need(k, K, "second argument of ad")
    return Ad(l, k)


def to_text(w):
    if isinstance(w, Gen):
        return w.name
    if isinstance(w, One):
        return "one"
    if isinstance(w, Mul):
        return f"mul({to_text(w.left)}, {to_text(w.right)})"
    if isinstance(w, Inv):
        return f"inv({to_text(w.arg)})"
    if isinstance(w, Embed):
        return f"t({to_text(w.arg)})"
    if isinstance(w, Ad):
        return f"ad({to_text(w.l)}, {to_text(w.k)})"
    raise TypeError(f"not a word: {w!r}")


def generators(w, sort=None):
    """Generator names occurring in w, in first-occurrence order."""
    out = []

    def walk(x):
        if isinstance(x, Gen):
            if (sort is None or x.sort == sort) and x.name not in out:
                out.append(x.name)
        elif isinstance(x, Mul):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, Inv):
            walk(x.arg)
        elif isinstance(x, Embed):
            walk(x.arg)
        elif isinstance(x, Ad):
            walk(x.l)
            walk(x.k)

    walk(w)
    return out


def substitute(w, env):
    """Replace generator leaves by the words in ``env`` (keyed by name)."""
    if isinstance(w, Gen):
        if w.name in env:
            r = env[w.name]
            if r.sort != w.sort:
                raise SortError(f"cannot substitute a {r.sort}-word for {w.name}")
            return r
        return w
    if isinstance(w, One):
        return w
    if isinstance(w, Mul):
        return mul(substitute(w.left, env), substitute(w.right, env))
    if isinstance(w, Inv):
        return inv(substitute(w.arg, env))
    if isinstance(w, Embed):
        return t(substitute(w.arg, env))
    if isinstance(w, Ad):
        return ad(substitute(w.l, env), substitute(w.k, env))
    raise TypeError(f"not a word: {w!r}")


@dataclass(frozen=True)
class FiberExpr:
    """Formal tensor product: sign +1 stands for the fibre K̂_w, −1 for its dual."""

    terms: tuple = ()

    def __post_init__(self):
        for w, s in self.terms:
            _need(w, K, "a fibre")
            if s not in (1, -1):
                raise ValueError("fibre signs must be +1 or -1")

    def __mul__(self, other):
        return FiberExpr(self.terms + other.terms)

    def __len__(self):
        return len(self.terms)

    def dual(self):
        return FiberExpr(tuple((w, -s) for w, s in self.terms))

    def to_text(self):
        return " * ".join(f"{'K' if s > 0 else 'Kd'}({to_text(w)})" for w, s in self.terms)

    def __str__(self):
        return self.to_text()


def fiber(*terms):
    return FiberExpr(tuple(terms))
