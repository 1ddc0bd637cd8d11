import pytest
from hypothesis import given, settings, strategies as st

from eqgerbe import xmcalc as xm
from eqgerbe.matkit import make_rng
from eqgerbe.xmcalc import words as W
from eqgerbe.xmcalc.nerve import SymbolicMap, check_identities, ek_nerve_faces
import xmgen

seeds = st.integers(0, 2**32 - 1)


def ev(d):
    return xm.ExponentVector(d)


# parsing ---------------------------------------------------------------------


def test_parse_two_terms():
    e = xm.parse("K(w0) * Kd(w3)")
    assert [(W.to_text(w), s) for w, s in e.terms] == [("w0", 1), ("w3", -1)]


def test_parse_ad_node():
    e = xm.parse("K(ad(inv(g2), w1))")
    assert len(e) == 1
    w, s = e.terms[0]
    assert isinstance(w, W.Ad) and s == 1
    assert isinstance(w.l, W.Inv) and w.l.arg.name == "g2"


def test_parse_sort_error_with_position():
    with pytest.raises(xm.SortError) as info:
        xm.parse("K(mul(w0, g1))")
    assert info.value.pos == 10


@pytest.mark.parametrize(
    "text, exc",
    [
        ("K(ad(w1, w1))", xm.SortError),
        ("K(t(w1))", xm.SortError),
        ("K(mul(w0 w1))", xm.ParseError),
        ("K(w0) *", xm.ParseError),
        ("K(w0))", xm.ParseError),
        ("K(x1)", xm.ParseError),
        ("L(w0)", xm.ParseError),
        ("K(w0) # K(w1)", xm.ParseError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        xm.parse(text)


def test_parse_ignores_whitespace_and_accepts_empty():
    a = xm.parse("K( ad( t(w2) , w1 ) )*Kd(one)")
    b = xm.parse("  K(ad(t(w2),w1)) *\n Kd( one )")
    assert a == b
    assert xm.parse("") == xm.FiberExpr(())
    assert xm.parse("   ") == xm.FiberExpr(())


def test_constructors_check_sorts():
    with pytest.raises(xm.SortError):
        xm.mul(xm.kgen("w0"), xm.lgen("g1"))
    with pytest.raises(xm.SortError):
        xm.t(xm.lgen("g1"))
    with pytest.raises(xm.SortError):
        xm.ad(xm.kgen("w0"), xm.kgen("w1"))
    with pytest.raises(xm.SortError):
        xm.fiber((xm.lgen("g1"), 1))


@settings(max_examples=200, deadline=None)
@given(seed=seeds)
def test_text_roundtrip(seed):
    e = xmgen.random_expr(make_rng(seed))
    assert xm.parse(e.to_text()) == e


# erase_ad and reduce ----------------------------------------------------------


def test_erase_ad_examples():
    l, l2, k, k1, k2 = xm.lgen("g1"), xm.lgen("g2"), xm.kgen("w0"), xm.kgen("w1"), xm.kgen("w2")
    assert xm.erase_ad(xm.ad(l, k)) == k
    assert xm.erase_ad(xm.inv(xm.ad(l, xm.mul(k1, k2)))) == xm.inv(xm.mul(k1, k2))
    assert xm.erase_ad(xm.ad(l, xm.ad(l2, k))) == k


def _has_ad(w):
    if isinstance(w, W.Ad):
        return True
    if isinstance(w, W.Mul):
        return _has_ad(w.left) or _has_ad(w.right)
    if isinstance(w, (W.Inv, W.Embed)):
        return _has_ad(w.arg)
    return False


@settings(max_examples=200, deadline=None)
@given(seed=seeds)
def test_erase_ad_structural(seed):
    rng = make_rng(seed)
    a, b = xmgen.random_word(rng, xm.K), xmgen.random_word(rng, xm.K)
    assert not _has_ad(xm.erase_ad(a))
    assert xm.erase_ad(xm.mul(a, b)) == xm.mul(xm.erase_ad(a), xm.erase_ad(b))
    assert xm.erase_ad(xm.inv(a)) == xm.inv(xm.erase_ad(a))


def test_reduce_cs2_chain():
    e = xm.parse("K(w2) * Kd(mul(mul(mul(inv(w0), ad(inv(g2), w1)), w2), w3)) * K(w1)")
    assert xm.reduce(e) == ev({"w0": 1, "w3": -1})
    assert str(xm.reduce(e)) == "{w0: +1, w3: -1}"


def test_reduce_trivial_cases():
    assert xm.reduce(xm.parse("K(w5) * Kd(w5)")) == {}
    assert str(xm.reduce(xm.FiberExpr(()))) == "{}"
    assert xm.reduce(xm.parse("K(one)")) == {}


def test_exponent_vector_is_canonical():
    v = ev({"w10": 2, "w2": 0, "w1": -1})
    assert "w2" not in v
    assert str(v) == "{w1: -1, w10: +2}"


def test_xm_equal_examples():
    assert xm.xm_equal(xm.parse("K(mul(w1, w2))"), xm.parse("K(w1) * K(w2)"))
    assert xm.xm_equal(xm.parse("K(ad(g1, w1))"), xm.parse("K(w1)"))
    assert not xm.xm_equal(xm.parse("K(w1)"), xm.parse("K(w2)"))
    assert xm.xm_equal(xm.parse("K(inv(w1))"), xm.parse("Kd(w1)"))


@settings(max_examples=300, deadline=None)
@given(seed=seeds)
def test_reduce_invariances(seed):
    rng = make_rng(seed)
    e = xmgen.random_expr(rng)
    r = xm.reduce(e)
    assert xm.reduce(e * xm.dual(e)) == {}
    assert xm.reduce(xmgen.insert_ad(e, rng)) == r
    assert xm.reduce(xmgen.split_products(e)) == r
    assert xm.reduce(xmgen.double_inverse(e)) == r
    assert xm.reduce(xmgen.permute(e, rng)) == r


@settings(max_examples=200, deadline=None)
@given(seed=seeds)
def test_xm_equal_is_an_equivalence(seed):
    rng = make_rng(seed)
    a = xmgen.random_expr(rng)
    b = xmgen.permute(xmgen.insert_ad(a, rng), rng)
    c = xmgen.split_products(xmgen.double_inverse(b))
    d = xmgen.random_expr(rng)
    assert xm.xm_equal(a, a)
    assert xm.xm_equal(a, b) and xm.xm_equal(b, a)
    assert xm.xm_equal(b, c) and xm.xm_equal(a, c)
    for x, y, z in ((a, d, c), (d, a, b)):
        if xm.xm_equal(x, y) and xm.xm_equal(y, z):
            assert xm.xm_equal(x, z)
        assert xm.xm_equal(x, y) == xm.xm_equal(y, x)


# crossed-module normal forms --------------------------------------------------


def _eq(a, b):
    return xm.words_equal(a, b).equal


def test_crossed_module_relations():
    l, m = xm.lgen("g1"), xm.lgen("g2")
    k1, k2 = xm.kgen("w1"), xm.kgen("w2")
    # t is equivariant: t(ad(l, k)) = l t(k) l^-1
    assert _eq(xm.t(xm.ad(l, k1)), xm.mul(l, xm.t(k1), xm.inv(l)))
    # Peiffer: ad(t(k1), k2) = k1 k2 k1^-1
    assert _eq(xm.ad(xm.t(k1), k2), xm.mul(k1, k2, xm.inv(k1)))
    # ad is an action and acts by automorphisms
    assert _eq(xm.ad(xm.mul(l, m), k1), xm.ad(l, xm.ad(m, k1)))
    assert _eq(xm.ad(l, xm.mul(k1, k2)), xm.mul(xm.ad(l, k1), xm.ad(l, k2)))
    assert _eq(xm.t(xm.mul(k1, k2)), xm.mul(xm.t(k1), xm.t(k2)))
    assert _eq(xm.mul(l, xm.inv(l)), xm.one(xm.L))
    assert _eq(xm.ad(xm.one(xm.L), k1), k1)
    # and it does not identify things it should not
    assert not _eq(xm.ad(l, k1), k1)
    assert not _eq(xm.mul(k1, k2), xm.mul(k2, k1))
    assert not _eq(xm.mul(l, xm.t(k1)), xm.mul(xm.t(k1), l))


@settings(max_examples=200, deadline=None)
@given(seed=seeds)
def test_normal_form_respects_group_laws(seed):
    rng = make_rng(seed)
    for sort in (xm.K, xm.L):
        a, b, c = (xmgen.random_word(rng, sort) for _ in range(3))
        assert _eq(xm.mul(xm.mul(a, b), c), xm.mul(a, xm.mul(b, c)))
        assert _eq(xm.mul(a, xm.inv(a)), xm.one(sort))
        assert _eq(xm.inv(xm.inv(a)), a)
    l = xmgen.random_word(rng, xm.L)
    k = xmgen.random_word(rng, xm.K)
    k2 = xmgen.random_word(rng, xm.K)
    assert _eq(xm.t(xm.ad(l, k)), xm.mul(l, xm.t(k), xm.inv(l)))
    assert _eq(xm.ad(xm.t(k), k2), xm.mul(k, k2, xm.inv(k)))


def test_normal_form_agrees_with_reduce_after_abelianizing():
    rng = make_rng(5)
    for _ in range(100):
        w = xmgen.random_word(rng, xm.K)
        counts = {}
        for _, name, e in xm.k_normal(w):
            counts[name] = counts.get(name, 0) + e
        assert xm.ExponentVector(counts) == xm.reduce(xm.fiber((w, 1)))


# nerve faces and the Chern-Simons chains --------------------------------------


@pytest.mark.parametrize("family", ["crossed", "paths"])
@pytest.mark.parametrize("level", [2, 3])
def test_simplicial_identities(family, level):
    results = check_identities(level, family)
    assert len(results) == level * (level + 1) // 2
    assert all(r.equal for r in results)


def test_level2_d0d2_equals_d1d0():
    r = {(x.i, x.j): x for x in check_identities(2)}[(0, 2)]
    assert r.equal and r.left == r.right == "(p.g1)"


def test_level3_pairs():
    res = {(x.i, x.j): x for x in check_identities(3)}
    assert res[(0, 3)].equal
    # d1∘d2 runs through the conjugation term of d2 and needs t(ad(l, k)) = l t(k) l^-1
    assert res[(1, 2)].equal
    assert res[(1, 2)].left == "(p, g1.g2.t(w1).g3.t(w2))"


def test_identity_failure_is_reported():
    good = ek_nerve_faces(3)
    bad = list(good)
    src, tgt = good[2].source, good[2].target
    bad[2] = SymbolicMap("d2", src, list(zip(tgt, ["one", "g1", "mul(mul(g2, g3), t(w3))", "mul(mul(inv(w3), w1), w2)"])))

    def faces(level):
        return bad if level == 3 else ek_nerve_faces(level)

    results = check_identities(3, faces=faces)
    failed = [r for r in results if not r.equal]
    assert [(r.i, r.j) for r in failed] == [(1, 2)]
    with pytest.raises(xm.NerveIdentityError) as info:
        check_identities(3, faces=faces, raise_on_failure=True)
    msg = str(info.value)
    assert "d1∘d2" in msg and failed[0].left in msg and failed[0].right in msg


def test_cs2_chains():
    assert xm.reduce(xm.cs2_e_fiber()) == {"w0": 1, "w3": -1}
    assert xm.reduce(xm.cs2_delta_m_fiber()) == {}
    assert len(xm.cs2_delta_m_fiber()) == 4
    assert len(xm.cs2_e_fiber()) == 3


def test_cs2_chain_is_built_from_faces():
    text = xm.cs2_delta_m_fiber().to_text()
    assert text == "Kd(w3) * K(mul(ad(inv(g3), inv(w1)), w2)) * Kd(mul(inv(w3), w2)) * K(w1)"


@pytest.mark.parametrize("face", [0, 1, 2, 3])
def test_sign_flip_breaks_delta_m(face):
    assert xm.reduce(xm.cs2_delta_m_fiber(flip=face)) != {}


@pytest.mark.parametrize("face", [0, 1, 2])
def test_sign_flip_breaks_e_fibre(face):
    assert xm.reduce(xm.cs2_e_fiber(flip=face)) != {"w0": 1, "w3": -1}
