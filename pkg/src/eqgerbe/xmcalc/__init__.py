"""Symbolic crossed-module calculus: words, fibre expressions, normal forms and nerve faces."""

from .words import (
    K,
    L,
    FiberExpr,
    ParseError,
    SortError,
    XmError,
    ad,
    fiber,
    inv,
    kgen,
    lgen,
    mul,
    one,
    t,
    to_text,
)
from .parse import parse, parse_word
from .normal import ExponentVector, dual, erase_ad, k_normal, l_normal, point_normal, reduce, words_equal, xm_equal
from .nerve import (
    NerveIdentityError,
    SymbolicMap,
    check_identities,
    cs2_delta_m_fiber,
    cs2_e_fiber,
    delta_fiber,
    ek_nerve_faces,
    fibre_product_faces,
)
