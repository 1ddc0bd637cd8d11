"""Sampling suite for the strongly equivariant class of the basic gerbe."""

from __future__ import annotations

import time

import numpy as np

from .. import excalc as ex
from .. import matkit
from .. import simpx
from ..report import Check, Report
from . import contour
from . import forms as bf
from .spaces import GerbeSpaces, sample_y

MAX_N = 4


def _second_cut(y, rng, eps_cut):
    redraws = 0
    while True:
        psi = rng.uniform(0.0, 2 * np.pi)
        if psi > 0.0 and bf.cut_distance(psi, y.spec.eigenvalues) > eps_cut:
            return psi, redraws
        redraws += 1


class _Worst:
    def __init__(self):
        self.value = 0.0
        self.sample = None

    def update(self, r, s):
        r = float(abs(r))
        if self.sample is None or r > self.value:
            self.value, self.sample = r, s


def verify_thm52(
    n,
    samples=50,
    seed=42,
    tol_closed=1e-8,
    tol_fd=1e-4,
    f_method="residue",
    fd_step=ex.FD_STEP,
    tangents=2,
    eps_cut=bf.EPS_CUT,
    eps_gap=matkit.EPS_GAP,
    diagnostics=True,
):
    """Evaluate E1–E4 on ``samples`` Haar draws and collect worst residuals.

    E1  α(z₁,z₂,g,·) − [β(z₂,g,·) − β(z₁,g,·)]
    E2  d₀*f − d₁*f − dβ − π*ω on Y×G
    E3  δβ on Y×G²
    E4  total differential of (0, 0, ω/(2πi), ν) on the conjugation nerve
    """
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= MAX_N):
        raise ValueError(f"n must be an integer in [1, {MAX_N}], got {n!r}")
    if samples < 1:
        raise ValueError("samples must be positive")
    t0 = time.perf_counter()
    S = GerbeSpaces(n, method=f_method)
    e2 = S.e2_form(fd_step)
    e3 = S.e3_form()
    eta, nerve = S.cocycle()
    worst = {k: _Worst() for k in ("E1", "E2", "E3", "E4")}
    d4 = {}
    diag = {"E2": _Worst(), "E4": _Worst()}
    if diagnostics:
        e2_printed = S.e2_form(fd_step, omega=bf.omega_as_printed)
        eta_printed, nerve_printed = S.cocycle(omega=bf.omega_as_printed)
    resamples = 0

    for s in range(samples):
        rng = matkit.make_rng(seed, s)
        y, r1 = sample_y(n, rng, eps_cut, eps_gap)
        psi2, r2 = _second_cut(y, rng, eps_cut)
        resamples += r1 + r2
        y2 = bf.make_ypoint(psi2, y.g, eps_cut, eps_gap)
        h = matkit.haar_unitary(n, rng)
        k = matkit.haar_unitary(n, rng)

        for _ in range(tangents):
            B = matkit.random_skew(n, rng)
            a = bf.alpha(y.z, y2.z, y.g, B, eps_cut, y.spec)
            worst["E1"].update(a - (bf.beta(y2, B) - bf.beta(y, B)), s)

        p = (y.z.psi, y.g, h)
        q = (y.z.psi, y.g, h, k)
        for _ in range(tangents):
            v, w = S.YG.random_tangent(p, rng), S.YG.random_tangent(p, rng)
            worst["E2"].update(e2(p, v, w), s)
            if diagnostics:
                diag["E2"].update(e2_printed(p, v, w), s)
            worst["E3"].update(e3(q, S.YG2.random_tangent(q, rng)), s)

        plan = simpx.ProbePlan(points=1, tangents=tangents, seed=seed, stream=s + 1)
        for row in simpx.total_D_residual(eta, nerve, plan, step=fd_step):
            worst["E4"].update(row["max_abs_residual"], s)
            key = row["condition"]
            d4[key] = max(d4.get(key, 0.0), row["max_abs_residual"])
        if diagnostics:
            for row in simpx.total_D_residual(eta_printed, nerve_printed, plan, step=fd_step):
                diag["E4"].update(row["max_abs_residual"], s)

    checks = [
        Check("E1", f"Y^[2]xG(U({n}))", samples, worst["E1"].value, tol_closed, worst["E1"].sample),
        Check("E2", S.YG.name, samples, worst["E2"].value, tol_fd, worst["E2"].sample),
        Check("E3", S.YG2.name, samples, worst["E3"].value, tol_closed, worst["E3"].sample),
        Check("E4", nerve.name, samples, worst["E4"].value, tol_fd, worst["E4"].sample),
    ]
    config = {
        "n": int(n),
        "samples": int(samples),
        "seed": int(seed),
        "tol_closed": tol_closed,
        "tol_fd": tol_fd,
        "f_method": f_method,
        "fd_step": fd_step,
        "tangents_per_sample": int(tangents),
        "eps_cut": eps_cut,
        "eps_gap": eps_gap,
        "rng": "numpy Philox keyed by (seed, sample index)",
        "omega_E2": "(i/4pi)[tr(th_h hat_th_h) + tr(th th_h) + tr(th hat_th_h)]",
        "omega_E4": "omega/(2 pi i)",
    }
    if f_method == "quadrature":
        config["quadrature_nodes"] = contour.DEFAULT_NODES
        config["quadrature_radii"] = list(contour.DEFAULT_RADII)
    report = Report("verify-thm52", config, checks, resample_count=resamples)
    report.values["E4_conditions"] = d4
    if diagnostics:
        report.diagnostics = [
            {
                "id": f"{k}-omega-as-printed",
                "note": "omega with the displayed sign of tr(hat_th_h th_h); informational only",
                "max_abs_residual": diag[k].value,
                "worst_sample": diag[k].sample,
            }
            for k in ("E2", "E4")
        ]
    report.wallclock_ms = int(round(1000 * (time.perf_counter() - t0)))
    return report


def cocycle_report(n, probes=20, tangents=5, seed=42, tol=1e-4, fd_step=ex.FD_STEP):
    """The five components of D(0, 0, ω/(2πi), ν) on the conjugation nerve of U(n)."""
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= MAX_N):
        raise ValueError(f"n must be an integer in [1, {MAX_N}], got {n!r}")
    t0 = time.perf_counter()
    eta, nerve = GerbeSpaces(n).cocycle()
    plan = simpx.ProbePlan(points=probes, tangents=tangents, seed=seed)
    rows = simpx.total_D_residual(eta, nerve, plan, step=fd_step)
    checks = []
    for row in rows:
        q = row["level"]
        space = nerve.levels[q].name if q <= nerve.L else f"level {q}"
        samples = probes if row["evaluated"] else 0
        checks.append(Check(row["condition"], space, samples, row["max_abs_residual"], tol))
    config = {
        "n": int(n),
        "probes": int(probes),
        "tangents_per_probe": int(tangents),
        "seed": int(seed),
        "tol": tol,
        "fd_step": fd_step,
        "rng": "numpy Philox keyed by (seed, 1000*level + probe index)",
        "cochain": "(nu, omega/(2 pi i)) in bidegrees (3,0), (2,1)",
    }
    report = Report("cocycle", config, checks)
    report.values["evaluated"] = {row["condition"]: row["evaluated"] for row in rows}
    report.wallclock_ms = int(round(1000 * (time.perf_counter() - t0)))
    return report
