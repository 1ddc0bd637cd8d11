"""Normal forms.

Two levels of normalization live here.

``reduce`` is the coarse one used for fibre expressions: drop every ``ad``,
count signed occurrences of each K-generator, and forget the order of tensor
factors. Two fibre expressions admit an xm-morphism exactly when these
exponent vectors agree.

``k_normal`` / ``l_normal`` / ``point_normal`` are exact normal forms in the
free crossed module on the generators that occur. L is the free group on the
g-letters and one letter T_w = t(w) per K-generator; K is identified with the
normal closure of the T letters, which is free on the conjugates u T_w u⁻¹
with u a reduced word in the g-letters. A K-letter is stored as
``(u, name, ±1)`` and stands for ``ad(u, w^±1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import words as W


def erase_ad(w):
    """Replace every ad(u, v) by v, recursively."""
    if isinstance(w, W.Ad):
        return erase_ad(w.k)
    if isinstance(w, W.Mul):
        return W.mul(erase_ad(w.left), erase_ad(w.right))
    if isinstance(w, W.Inv):
        return W.inv(erase_ad(w.arg))
    if isinstance(w, W.Embed):
        return W.t(erase_ad(w.arg))
    return w


def letters(w, sign=1):
    """Flatten a word (after erase_ad) into signed generator letters, left to right."""
    if isinstance(w, W.Gen):
        return [(w.name, sign)]
    if isinstance(w, W.One):
        return []
    if isinstance(w, W.Mul):
        a, b = letters(w.left, sign), letters(w.right, sign)
        return a + b if sign > 0 else b + a
    if isinstance(w, W.Inv):
        return letters(w.arg, -sign)
    if isinstance(w, W.Embed):
        return letters(w.arg, sign)
    if isinstance(w, W.Ad):
        return letters(w.k, sign)
    raise TypeError(f"not a word: {w!r}")


def _gen_key(name):
    m = re.match(r"([A-Za-z_]+)([0-9]*)\Z", name)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1, name) if m else ("", -1, name)


class ExponentVector(dict):
    """K-generator -> nonzero integer exponent."""

    def __init__(self, data=()):
        super().__init__()
        for k, v in dict(data).items():
            if v:
                self[k] = int(v)

    def items_sorted(self):
        return sorted(self.items(), key=lambda kv: _gen_key(kv[0]))

    def __str__(self):
        return "{" + ", ".join(f"{k}: {v:+d}" for k, v in self.items_sorted()) + "}"

    def __repr__(self):
        return f"ExponentVector({str(self)})"

    def is_trivial(self):
        return len(self) == 0


def reduce(e):
    """Exponent vector of a fibre expression."""
    acc = {}
    for w, s in e.terms:
        for name, sign in letters(erase_ad(w), s):
            acc[name] = acc.get(name, 0) + sign
    return ExponentVector(acc)


def xm_equal(e1, e2):
    return reduce(e1) == reduce(e2)


def dual(e):
    return e.dual()


# exact crossed-module normal forms -------------------------------------------


def _free_reduce(seq):
    out = []
    for a in seq:
        if out and out[-1][:-1] == a[:-1] and out[-1][-1] == -a[-1]:
            out.pop()
        else:
            out.append(a)
    return out


def _inverse(seq):
    return [x[:-1] + (-x[-1],) for x in reversed(seq)]


def _free_u(seq):
    return tuple(_free_reduce(list(seq)))


def _ad_letter(letter, kseq):
    """Act by one L-letter on a K normal form."""
    kind, name, e = letter
    if kind == "g":
        return [(_free_u(((name, e),) + u), k, s) for u, k, s in kseq]
    k = ((), name, e)
    conj = [k] + list(kseq) + [((), name, -e)]
    return _free_reduce(conj)


def _ad(lseq, kseq):
    out = list(kseq)
    for letter in reversed(lseq):
        out = _ad_letter(letter, out)
    return _free_reduce(out)


def _t(kseq):
    out = []
    for u, k, s in kseq:
        lu = [("g", n, e) for n, e in u]
        out += lu + [("T", k, s)] + _inverse(lu)
    return _free_reduce(out)


def k_normal(w):
    """Reduced sequence of K-letters (u, name, ±1) for a K-word."""
    if w.sort != W.K:
        raise W.SortError("k_normal needs a K-word")
    return tuple(_knf(w))


def l_normal(w):
    """Reduced sequence of L-letters ("g"|"T", name, ±1) for an L-word."""
    if w.sort != W.L:
        raise W.SortError("l_normal needs an L-word")
    return tuple(_lnf(w))


def point_normal(w):
    """Normal form of p·w: K acts trivially on the base, so T letters drop out."""
    return tuple(_free_reduce([x for x in _lnf(w) if x[0] == "g"]))


def _knf(w):
    if isinstance(w, W.Gen):
        return [((), w.name, 1)]
    if isinstance(w, W.One):
        return []
    if isinstance(w, W.Mul):
        return _free_reduce(_knf(w.left) + _knf(w.right))
    if isinstance(w, W.Inv):
        return _inverse(_knf(w.arg))
    if isinstance(w, W.Ad):
        return _ad(_lnf(w.l), _knf(w.k))
    raise TypeError(f"not a K-word: {w!r}")


def _lnf(w):
    if isinstance(w, W.Gen):
        return [("g", w.name, 1)]
    if isinstance(w, W.One):
        return []
    if isinstance(w, W.Mul):
        return _free_reduce(_lnf(w.left) + _lnf(w.right))
    if isinstance(w, W.Inv):
        return _inverse(_lnf(w.arg))
    if isinstance(w, W.Embed):
        return _t(_knf(w.arg))
    raise TypeError(f"not an L-word: {w!r}")


def format_normal(nf, sort):
    """Readable text for a normal form; ``one`` when empty."""
    if not nf:
        return "one"
    parts = []
    if sort == W.K:
        for u, k, s in nf:
            base = k if s > 0 else f"{k}^-1"
            if u:
                ustr = ".".join(n if e > 0 else f"{n}^-1" for n, e in u)
                base = f"ad({ustr}, {base})"
            parts.append(base)
    else:
        for kind, n, e in nf:
            sym = n if kind == "g" else f"t({n})"
            parts.append(sym if e > 0 else f"{sym}^-1")
    return ".".join(parts)


@dataclass(frozen=True)
class WordCheck:
    """Result of comparing two words in the free crossed module."""

    equal: bool
    left: str
    right: str


def words_equal(a, b):
    if a.sort != b.sort:
        raise W.SortError("comparing words of different sorts")
    f = k_normal if a.sort == W.K else l_normal
    na, nb = f(a), f(b)
    return WordCheck(na == nb, format_normal(na, a.sort), format_normal(nb, a.sort))
