import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from eqgerbe import excalc as ex
from eqgerbe import matkit
from eqgerbe.basicgerbe import contour
from eqgerbe.basicgerbe import forms as bf
from eqgerbe.basicgerbe import GerbeSpaces, sample_y, verify_thm52

# A fixed U(3) point with eigenvalue angles 0.5, 2.0, 4.0, built without any RNG,
# and fixed tangent data.
_A = np.array([[0.3j, 0.4 + 0.1j, -0.2], [-0.4 + 0.1j, -0.7j, 0.5j], [0.2, 0.5j, 1.1j]])
_U = expm(_A)
G_FIXED = _U @ np.diag(np.exp(1j * np.array([0.5, 2.0, 4.0]))) @ _U.conj().T
B_FIXED = np.array([[0.2j, 0.3, 0.1j], [-0.3, -0.5j, 0.4], [0.1j, -0.4, 0.9j]])
V_FIXED = G_FIXED @ np.array([[0.1j, 0.2, -0.3j], [-0.2, 0.4j, 0.1], [-0.3j, -0.1, -0.2j]])
W_FIXED = G_FIXED @ np.array([[-0.3j, 0.1 + 0.2j, 0.2], [-0.1 + 0.2j, 0.2j, -0.5j], [-0.2, -0.5j, 0.6j]])

# Frozen from 4096-node contour quadrature of the resolvent integrals at the
# point above with cut angle 1.0 (2048 nodes agree to 1e-15).
BETA_ORACLE = -0.061125653357054686j
F_ORACLE = -0.029250928534536935j
TR_BP_ORACLE = -0.12473234584974882j  # tr(B P) for P between cut angles 1.0 and 3.0


def test_frozen_oracles():
    y = bf.make_ypoint(1.0, G_FIXED)
    assert abs(bf.beta(y, B_FIXED) - BETA_ORACLE) < 1e-12
    f = bf.curving_f(y, "residue")
    assert abs(f((0.0, V_FIXED), (0.0, W_FIXED)) - F_ORACLE) < 1e-12
    P = bf.projector_between(1.0, 3.0, G_FIXED)
    assert abs(np.trace(B_FIXED @ P) - TR_BP_ORACLE) < 1e-12


def test_log_branch():
    for psi in (0.3, np.pi, 5.9):
        assert bf.log_branch(psi, 1.0) == 0
    assert bf.log_branch(np.pi, 1j) == pytest.approx(1j * np.pi / 2)
    assert bf.log_branch(np.pi, -1j) == pytest.approx(-1j * np.pi / 2)
    psi, eps = 2.0, 1e-3
    jump = bf.log_branch(psi, np.exp(1j * (psi - eps))) - bf.log_branch(psi, np.exp(1j * (psi + eps)))
    assert jump == pytest.approx(2j * np.pi - 2j * eps, abs=1e-12)


def test_cut_point_range():
    for bad in (0.0, 2 * np.pi, -1.0):
        with pytest.raises(ValueError):
            bf.CutPoint(bad)


def test_between():
    assert bf.between(np.pi / 4, 3 * np.pi / 4, 1j)
    assert not bf.between(1.0, 1.0, 1j)
    assert bf.between(3 * np.pi / 2, np.pi / 2, -1.0)
    assert not bf.between(np.pi / 4, 3 * np.pi / 4, -1.0)


def test_projector_between_examples():
    g = np.diag([1j, -1.0])
    assert np.allclose(bf.projector_between(np.pi / 4, 3 * np.pi / 4, g), np.diag([1, 0]))
    assert np.all(bf.projector_between(0.1, 0.2, g) == 0)


def test_projector_between_refuses_eigenvalue_on_cut():
    with pytest.raises(bf.EigenvalueOnCut):
        bf.projector_between(np.pi / 2 + 1e-4, 3.0, np.diag([1j, -1.0]))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_projector_between_properties(seed, n):
    rng = matkit.make_rng(seed)
    y, _ = sample_y(n, rng)
    psi2 = rng.uniform(0.01, 2 * np.pi - 0.01)
    if bf.cut_distance(psi2, y.spec.eigenvalues) <= bf.EPS_CUT:
        return
    P = bf.projector_between(y.z.psi, psi2, y.g)
    assert np.linalg.norm(P @ P - P) < 1e-9
    assert np.linalg.norm(P - P.conj().T) < 1e-9
    assert np.linalg.norm(P @ y.g - y.g @ P) < 1e-9


def test_projector_residue_vs_quadrature_u3():
    rng = matkit.make_rng(21)
    for _ in range(5):
        y, _ = sample_y(3, rng)
        psi2 = rng.uniform(0, 2 * np.pi)
        if bf.cut_distance(psi2, y.spec.eigenvalues) <= bf.EPS_CUT:
            continue
        P = bf.projector_between(y.z.psi, psi2, y.g)
        Q = contour.projector_quad(y.z.psi, psi2, y.g)
        assert np.linalg.norm(P - Q) < 1e-8


def test_alpha_examples():
    g = np.diag([1j, -1.0])
    a, b = 0.7, -1.9
    B = np.diag([1j * a, 1j * b])
    assert bf.alpha(np.pi / 4, 3 * np.pi / 4, g, B) == pytest.approx(1j * a)
    assert bf.alpha(np.pi / 4, 3 * np.pi / 4, g, np.zeros((2, 2))) == 0
    assert bf.alpha(1.0, 1.0, g, B) == 0


def test_beta_examples():
    y = bf.make_ypoint(np.pi, np.array([[1j]]))
    assert bf.beta(y, np.array([[1j]])) == pytest.approx(0.25j)
    assert bf.beta(y, np.zeros((1, 1))) == 0


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_alpha_beta_linear_and_alpha_is_delta_beta(seed):
    rng = matkit.make_rng(seed)
    y, _ = sample_y(3, rng)
    psi2 = rng.uniform(0.01, 2 * np.pi - 0.01)
    if bf.cut_distance(psi2, y.spec.eigenvalues) <= bf.EPS_CUT:
        return
    y2 = bf.make_ypoint(psi2, y.g)
    B1, B2 = matkit.random_skew(3, rng), matkit.random_skew(3, rng)
    s, t = rng.standard_normal(2)
    assert abs(bf.beta(y, s * B1 + t * B2) - s * bf.beta(y, B1) - t * bf.beta(y, B2)) < 1e-12
    al = bf.alpha(y.z, y2.z, y.g, s * B1 + t * B2)
    assert abs(al - s * bf.alpha(y.z, y2.z, y.g, B1) - t * bf.alpha(y.z, y2.z, y.g, B2)) < 1e-12
    assert abs(bf.alpha(y.z, y2.z, y.g, B1) - (bf.beta(y2, B1) - bf.beta(y, B1))) < 1e-8


def test_beta_residue_vs_quadrature_u2():
    rng = matkit.make_rng(31)
    for _ in range(5):
        y, _ = sample_y(2, rng)
        B = matkit.random_skew(2, rng)
        assert abs(bf.beta(y, B) - bf.beta_by_quadrature(y, B)) < 1e-8


def test_curving_f_antisymmetric():
    y = bf.make_ypoint(1.0, G_FIXED)
    for method in ("residue", "quadrature"):
        f = bf.curving_f(y, method)
        assert abs(f((0.0, V_FIXED), (0.0, V_FIXED))) < 1e-14


def test_curving_f_n1_stable_under_doubling():
    y = bf.make_ypoint(2.0, np.array([[np.exp(0.7j)]]))
    V = (1.0, np.array([[0.0]]))
    W = (0.0, np.array([[1j * np.exp(0.7j)]]))
    a = bf.curving_f(y, "quadrature", N=256)(V, W)
    b = bf.curving_f(y, "quadrature", N=512)(V, W)
    assert np.isfinite(a) and abs(a - b) < 1e-8
    assert abs(b) < 1e-12


def test_curving_f_residue_vs_quadrature_and_contour_independence():
    rng = matkit.make_rng(41)
    for _ in range(5):
        y, _ = sample_y(3, rng)
        v = (0.0, matkit.random_tangent(y.g, rng))
        w = (0.0, matkit.random_tangent(y.g, rng))
        q1 = bf.curving_f(y, "quadrature")(v, w)
        q2 = bf.curving_f(y, "quadrature", radii=(0.7, 1.5))(v, w)
        r = bf.curving_f(y, "residue")(v, w)
        assert abs(q1 - q2) < 1e-8
        assert abs(q1 - r) < 1e-8


def test_curving_f_closed_vanishing_cases():
    rng = matkit.make_rng(51)
    q = bf.random_gmodt(2, rng)
    zero = np.zeros((2, 2), complex)
    f = bf.curving_f_closed(q)
    assert f((zero, rng.standard_normal(2), 0.3), (zero, rng.standard_normal(2), -1.0)) == 0
    q1 = bf.random_gmodt(1, rng)
    t = bf.random_gmodt_tangent(q1, rng)
    assert bf.curving_f_closed(q1)(t, bf.random_gmodt_tangent(q1, rng)) == 0


def test_curving_f_closed_equals_pullback_of_f():
    rng = matkit.make_rng(61)
    for _ in range(10):
        q = bf.random_gmodt(2, rng)
        psi, g = bf.p_Y(q)
        y = bf.make_ypoint(psi, g)
        s, t = bf.random_gmodt_tangent(q, rng), bf.random_gmodt_tangent(q, rng)
        pulled = bf.curving_f(y, "quadrature")(bf.p_Y_push(q, s), bf.p_Y_push(q, t))
        assert abs(bf.curving_f_closed(q)(s, t) - pulled) < 1e-6


def test_nu_values():
    rng = matkit.make_rng(71)
    g1 = matkit.haar_unitary(1, rng)
    v = 1j * g1
    assert bf.nu(g1)(v, v, v) == 0
    g = matkit.haar_unitary(3, rng)
    a, b = matkit.random_tangent(g, rng), matkit.random_tangent(g, rng)
    assert abs(bf.nu(g)(a, a, b)) < 1e-14
    s = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
    # tr((iσ1)(iσ2)(iσ3)) = 2 and six signed permutations give 12
    assert bf.nu(np.eye(2))(*[1j * m for m in s]) == pytest.approx(-1 / (2 * np.pi**2))


def test_omega_abelian_value_and_swap():
    g, h = np.array([[np.exp(0.4j)]]), np.array([[np.exp(2.1j)]])
    d1 = (1j * g, np.zeros((1, 1)))
    d2 = (np.zeros((1, 1)), 1j * h)
    assert bf.omega(g, h)(d1, d2) == pytest.approx(-1j / (2 * np.pi))
    assert bf.omega(g, h)(d2, d1) == pytest.approx(1j / (2 * np.pi))
    assert bf.omega_class(g, h)(d1, d2) == pytest.approx(-1 / (4 * np.pi**2))


def _omega_entrywise(g, h, v, w):
    """ω from explicit index sums, without matrix products."""
    n = g.shape[0]
    gi, hi = g.conj().T, h.conj().T

    def mm(a, b):
        out = np.zeros((n, n), complex)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    out[i, j] += a[i, k] * b[k, j]
        return out

    def tr(a, b):
        return sum(a[i, j] * b[j, i] for i in range(n) for j in range(n))

    def pieces(x):
        th = mm(gi, x[0])
        thh = mm(x[1], hi)
        return th, thh, mm(mm(gi, thh), g)

    (a0, a1, a2), (b0, b1, b2) = pieces(v), pieces(w)
    total = (tr(a1, b2) - tr(b1, a2)) + (tr(a0, b1) - tr(b0, a1)) + (tr(a0, b2) - tr(b0, a2))
    return 1j / (4 * np.pi) * total


def test_omega_against_entrywise_oracle():
    rng = matkit.make_rng(81)
    for _ in range(5):
        g, h = matkit.haar_unitary(2, rng), matkit.haar_unitary(2, rng)
        v = (matkit.random_tangent(g, rng), matkit.random_tangent(h, rng))
        w = (matkit.random_tangent(g, rng), matkit.random_tangent(h, rng))
        assert abs(bf.omega(g, h)(v, w) - _omega_entrywise(g, h, v, w)) < 1e-13


def test_printed_omega_differs_only_beyond_u1():
    rng = matkit.make_rng(91)
    g, h = matkit.haar_unitary(1, rng), matkit.haar_unitary(1, rng)
    v = (1j * g, 0.5j * h)
    w = (-0.3j * g, 2j * h)
    assert abs(bf.omega(g, h)(v, w) - bf.omega_as_printed(g, h)(v, w)) < 1e-15
    g, h = matkit.haar_unitary(2, rng), matkit.haar_unitary(2, rng)
    v = (matkit.random_tangent(g, rng), matkit.random_tangent(h, rng))
    w = (matkit.random_tangent(g, rng), matkit.random_tangent(h, rng))
    assert abs(bf.omega(g, h)(v, w) - bf.omega_as_printed(g, h)(v, w)) > 1e-3


def test_curvature_of_curving_is_2pi_i_nu():
    S = GerbeSpaces(2)
    df = ex.d_fd(S.f_form())
    rng = matkit.make_rng(101)
    p = S.Y.random_point(rng)
    vs = [S.Y.random_tangent(p, rng) for _ in range(3)]
    nu = bf.nu(p[1])(*[v[1] for v in vs])
    assert abs(df(p, *vs) - 2j * np.pi * nu) < 1e-6


def test_verify_thm52_n1_tight():
    r = verify_thm52(1, samples=50, diagnostics=False)
    assert r.passed
    for c in r.checks:
        assert c.max_abs_residual < 1e-8, c.check_id


def test_verify_thm52_n2_pass():
    r = verify_thm52(2, samples=20)
    assert r.passed
    assert [c.check_id for c in r.checks] == ["E1", "E2", "E3", "E4"]


def test_verify_thm52_tiny_tolerance_fails_with_worst_sample():
    r = verify_thm52(2, samples=3, tol_closed=1e-16, tol_fd=1e-16, diagnostics=False)
    assert not r.passed
    failing = [c for c in r.checks if not c.passed]
    assert failing and all(c.worst_sample is not None for c in failing)


def test_verify_thm52_rejects_bad_n():
    with pytest.raises(ValueError):
        verify_thm52(7)


def test_report_json_shape():
    r = verify_thm52(1, samples=2)
    d = json.loads(r.to_json())
    assert d["schema"] == 1
    assert d["wallclock_ms"] is None
    assert json.loads(r.to_json(timing=True))["wallclock_ms"] >= 0
    assert set(d["checks"][0]) >= {"check_id", "space", "samples", "max_abs_residual", "tolerance", "pass"}
    assert d["config"]["seed"] == 42
