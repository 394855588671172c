"""Built-in oracle smoke suite behind the `selftest` CLI subcommand.

Each check validates a closed form or an optimizer output against an
independent route (Monte Carlo moments, brute-force search, analytic limit)
at small scale. The pytest suite runs the same ideas at full acceptance
strength; this is the quick in-field version.
"""

from __future__ import annotations

import numpy as np

from . import estimation, pilots, powerctl, rates
from .geometry import draw_cn
from .harness import substream


def _random_instance(rng, m=8, k=3, tau_ul=2, tau_dl=2):
    beta = 10 ** rng.uniform(-1.0, 1.0, size=(m, k))
    pool = pilots.make_pair_pool(tau_ul, tau_dl)
    plan = pilots.baseline_assign(pool, k, rng)
    rho_up, rho_d, rho_dp = 5.0, 8.0, 8.0
    _, gamma = estimation.mmse_uplink(beta, plan, rho_up, tau_ul)
    eta = powerctl.cd_fpt(gamma).eta
    return beta, gamma, eta, plan, rho_up, rho_d, rho_dp


def check_moments(rng, draws=20000, tol_se=3.5):
    """Closed-form downlink moments vs Monte Carlo over the full chain."""
    beta, gamma, eta, plan, rho_up, _, rho_dp = _random_instance(rng)
    m, k = beta.shape
    tau_ul, tau_dl = plan.ul_book.length, plan.dl_book.length
    mom = estimation.downlink_moments(beta, gamma, eta, plan, rho_dp, tau_dl)
    c, _ = estimation.mmse_uplink(beta, plan, rho_up, tau_ul)
    g = np.sqrt(beta) * draw_cn((draws, m, k), rng)
    y_up = np.sqrt(tau_ul * rho_up) * (g @ estimation.ul_gram(plan)) + draw_cn((draws, m, k), rng)
    a = np.einsum("nmk,nml->nkl", g, np.sqrt(eta) * np.conj(c * y_up))
    akk = a[:, np.arange(k), np.arange(k)]
    gram_dl = estimation.dl_gram(plan)
    y_dp = np.sqrt(tau_dl * rho_dp) * np.sum(a * gram_dl, axis=2) + draw_cn((draws, k), rng)
    ok = True
    mean_akk = akk.mean(axis=0)
    se = akk.std(axis=0) / np.sqrt(draws)
    ok &= np.all(np.abs(mean_akk.real - mom.mean_a) <= tol_se * se + 1e-12)
    var_y = np.var(y_dp, axis=0)
    z = np.abs(y_dp - y_dp.mean(axis=0)) ** 2
    se_var = z.std(axis=0) / np.sqrt(draws)
    ok &= np.all(np.abs(var_y - mom.var_y) <= tol_se * se_var)
    ahat = estimation.estimate_a(y_dp, mom)
    z2 = np.abs(ahat - ahat.mean(axis=0)) ** 2
    ok &= np.all(np.abs(np.var(ahat, axis=0) - mom.kappa)
                 <= tol_se * z2.std(axis=0) / np.sqrt(draws))
    return bool(ok)


def check_rate_ordering(rng, instances=200):
    """scsi <= cf <= ub elementwise on random valid instances."""
    for _ in range(instances):
        beta, gamma, eta, plan, rho_up, rho_d, rho_dp = _random_instance(rng)
        ri = rates.RateInputs(beta=beta, gamma=gamma, eta=eta, plan=plan,
                              rho_d=rho_d, rho_dp=rho_dp, tau_dp=plan.dl_book.length)
        r_scsi, r_cf, r_ub = rates.rate_scsi(ri), rates.rate_cf(ri), rates.rate_ub(ri)
        if np.any(r_scsi > r_cf + 1e-12) or np.any(r_cf > r_ub + 1e-12):
            return False
    return True


def check_kappa_limit():
    """kappa -> varsigma when tau*rho*varsigma >> 1 (orthogonal DL pilots)."""
    beta = np.array([[1.0]])
    gamma = np.array([[0.5]])
    eta = np.array([[1.0]])
    plan = pilots.orthogonal_plan(1)
    mom = estimation.downlink_moments(beta, gamma, eta, plan, rho_dp=2000.0, tau_dp=1)
    return abs(mom.kappa[0] / mom.varsigma[0, 0] - 1.0) < 1e-3


def check_plan_constraint(rng, runs=200):
    pool = pilots.make_pair_pool(4, 3)
    return all(pilots.validate_plan(pilots.baseline_assign(pool, 10, rng)) for _ in range(runs))


def check_maxmin_vs_grid(rng, points=25):
    """Bisection max-min vs brute-force grid on an M=2, K=2 instance."""
    beta = 10 ** rng.uniform(-0.5, 0.5, size=(2, 2))
    plan = pilots.orthogonal_plan(2)
    _, gamma = estimation.mmse_uplink(beta, plan, 5.0, 2)
    data = powerctl.MaxMinData(beta=beta, gamma=gamma, ul_gram=estimation.ul_gram(plan),
                               rho_d=10.0)
    result = powerctl.bisection_maxmin(data, eps=1e-4, n_iters=6)
    achieved = float(np.min(powerctl.sinr_ub(data, result.coefficients.zeta)))
    axes = [np.linspace(0, 1.0 / np.sqrt(gamma[m, k]), points)
            for m in range(2) for k in range(2)]
    grid = np.meshgrid(*axes, indexing="ij")
    zeta_all = np.stack([g.ravel() for g in grid], axis=0).reshape(2, 2, -1)
    load = np.einsum("mk,mkn->mn", gamma, zeta_all**2)
    zeta_all = zeta_all[:, :, np.all(load <= 1.0 + 1e-12, axis=0)]
    # batch min-SINR over all candidates at once
    eta = zeta_all**2
    vs = np.einsum("mk,mlp->klp", beta, gamma[:, :, None] * eta)
    coh = np.einsum("mk,mkp->kp", gamma, zeta_all)
    diag = np.arange(2)
    num = coh**2 + vs[diag, diag, :]
    den = vs.sum(axis=1) - vs[diag, diag, :] + 1.0 / data.rho_d
    best = float((num / den).min(axis=0).max())
    return achieved >= 0.98 * best


def run_selftest() -> int:
    rng = substream(20240901)
    checks = [
        ("moment oracle (MC vs closed form)", lambda: check_moments(substream(7, 1))),
        ("rate ordering scsi<=cf<=ub", lambda: check_rate_ordering(substream(7, 2))),
        ("kappa limit", check_kappa_limit),
        ("pilot plan joint constraint", lambda: check_plan_constraint(substream(7, 3))),
        ("max-min vs grid search", lambda: check_maxmin_vs_grid(substream(7, 4))),
    ]
    del rng
    failures = 0
    for name, fn in checks:
        try:
            passed = fn()
        except Exception as exc:  # report, keep testing
            print(f"FAIL {name}: {exc}")
            failures += 1
            continue
        print(("PASS" if passed else "FAIL") + f" {name}")
        failures += 0 if passed else 1
    return 0 if failures == 0 else 1
