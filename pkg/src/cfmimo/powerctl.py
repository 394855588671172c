"""Downlink power control under per-AP constraints.

Two policies: the channel-dependent full-power heuristic (every AP spends
its whole budget, split by estimation quality), and max-min fairness via
bisection over a second-order-cone feasibility problem. With downlink
training the max-min objective is the upper-bound SINR, whose coherent term
is nonconvex in the amplitude variables zeta = sqrt(eta); a sequential
convex approximation linearizes it and re-solves, warm-starting each round
from the previous solution. Without downlink training (kappa = 0) the
problem is a plain SOCP and one bisection finds the global optimum.

The feasibility subproblem is assembled explicitly as cone data
(nonnegativity rows, one per-AP power cone, one SINR cone per UE) and handed
to Clarabel's primal-dual interior-point solver. Raw large-scale gains are
rescaled internally (beta, gamma, rho_d, zeta) -> (beta/s, gamma/s, rho_d*s,
zeta*sqrt(s)), an exact invariance of the constraint set that keeps the cone
data O(1) for the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import clarabel
import numpy as np
from scipy import sparse

POWER_SLACK = 1e-9


class PowerControlError(RuntimeError):
    """Raised when the conic solver fails numerically or the scenario is degenerate."""


@dataclass(frozen=True)
class PowerCoefficients:
    """Per-(AP, UE) power control coefficients eta_mk >= 0."""

    eta: np.ndarray

    @property
    def zeta(self) -> np.ndarray:
        return np.sqrt(self.eta)

    @classmethod
    def from_zeta(cls, zeta: np.ndarray) -> "PowerCoefficients":
        return cls(eta=np.asarray(zeta) ** 2)


def cd_fpt(gamma: np.ndarray, mask: np.ndarray | None = None) -> PowerCoefficients:
    """Channel-dependent full power transmission.

    eta_mk = 1 / sum_k' gamma_mk' (over the served UEs when a serving mask is
    given), which meets the per-AP constraint with equality.
    """
    gamma = np.asarray(gamma, dtype=float)
    if mask is None:
        mask = np.ones_like(gamma, dtype=bool)
    load = np.sum(np.where(mask, gamma, 0.0), axis=1)
    serving = mask.any(axis=1)
    if np.any(serving & (load <= 0.0)):
        raise ValueError("cd_fpt needs a positive gamma sum at every serving AP")
    inv = np.zeros_like(load)
    inv[serving] = 1.0 / load[serving]
    eta = np.where(mask, inv[:, None], 0.0)
    return PowerCoefficients(eta=eta)


def check_power(eta: np.ndarray, gamma: np.ndarray, slack: float = POWER_SLACK) -> bool:
    """True iff sum_k eta_mk gamma_mk <= 1 (+slack) at every AP."""
    return bool(np.all(np.sum(eta * gamma, axis=1) <= 1.0 + slack))


@dataclass(frozen=True)
class MaxMinData:
    """Coefficient data of the max-min problem for one large-scale state."""

    beta: np.ndarray      # (M, K)
    gamma: np.ndarray     # (M, K)
    ul_gram: np.ndarray   # (K, K) 0/1 uplink pilot inner products
    rho_d: float
    mask: np.ndarray | None = None  # serving support; zeta fixed to 0 outside


def _cross_sum(mat: np.ndarray) -> np.ndarray:
    return np.sum(mat, axis=1) - np.diag(mat)


def sinr_ub(data: MaxMinData, zeta: np.ndarray) -> np.ndarray:
    """Upper-bound SINR per UE at the amplitude point zeta."""
    beta, gamma = data.beta, data.gamma
    eta = zeta**2
    vs = beta.T @ (eta * gamma)
    coh = np.sum(gamma * zeta, axis=0)
    u = beta.T @ (gamma * zeta / beta)
    ups = data.ul_gram * u**2
    num = coh**2 + np.diag(vs)
    den = _cross_sum(vs) + _cross_sum(ups) + 1.0 / data.rho_d
    return num / den


def sinr_scsi(data: MaxMinData, zeta: np.ndarray) -> np.ndarray:
    """Statistical-CSI SINR per UE (kappa = 0 objective)."""
    beta, gamma = data.beta, data.gamma
    eta = zeta**2
    vs = beta.T @ (eta * gamma)
    coh = np.sum(gamma * zeta, axis=0)
    u = beta.T @ (gamma * zeta / beta)
    ups = data.ul_gram * u**2
    den = np.sum(vs, axis=1) + _cross_sum(ups) + 1.0 / data.rho_d
    return coh**2 / den


def f_value(gamma_k: np.ndarray, beta_k: np.ndarray, zeta_k: np.ndarray, nu: float) -> float:
    """RHS of the epigraph SINR constraint: the coherent term plus the
    (1+nu)-weighted own-variance term."""
    return float((gamma_k @ zeta_k) ** 2 + (1.0 + nu) * np.sum(beta_k * gamma_k * zeta_k**2))


def linearize_f(gamma_k: np.ndarray, beta_k: np.ndarray, zeta_n_k: np.ndarray, nu: float):
    """First-order model of f at zeta_n: coefficients (c, d) such that
    f_hat(zeta) = (1+nu) * (c @ zeta + d) - (gamma_k @ zeta_n_k)^2, which is
    exact at zeta_n and gradient-matched there."""
    gz = float(gamma_k @ zeta_n_k)
    c = (2.0 / (1.0 + nu)) * gz * gamma_k + 2.0 * gamma_k * beta_k * zeta_n_k
    d = -float(np.sum(gamma_k * beta_k * zeta_n_k**2))
    return c, d


@dataclass
class SocpFeasibilityProblem:
    """Assembled cone data of the feasibility subproblem at one SINR target.

    Constraint convention is A x + s = b with s in the product cone; the
    variable vector stacks zeta (column-major UE blocks), the per-AP power
    slacks, and one phase-I margin variable that shifts the SINR cone heads.
    Feasibility is decided by maximizing the margin, which keeps the
    interior-point solve well posed even at targets sitting on the
    feasibility boundary. num_rho counts the contamination components
    (co-uplink-pilot pairs) present across the SINR cones.
    """

    nu: float
    zeta_n: np.ndarray
    n_vars: int
    a_mat: sparse.csc_matrix
    b_vec: np.ndarray
    cones: list  # ("zero"|"nonneg"|"soc", dim)
    scale: float
    shape: tuple
    num_rho: int
    uscale: np.ndarray  # per-variable scaling: solver variable u = zeta' * uscale
    mask: np.ndarray | None = None
    soc_arg_dims: list = field(default_factory=list)

    @property
    def margin_index(self) -> int:
        return self.n_vars - 1

    def extract_zeta(self, x: np.ndarray) -> np.ndarray:
        m, k = self.shape
        zeta = x[: m * k].reshape(k, m).T / self.uscale / np.sqrt(self.scale)
        if self.mask is not None:
            zeta = np.where(self.mask, zeta, 0.0)
        return np.maximum(zeta, 0.0)

    def residual(self, x: np.ndarray) -> float:
        """Worst cone violation at the point x with the margin zeroed out,
        i.e. the violation of the original (unshifted) constraint set."""
        x0 = np.asarray(x, dtype=float).copy()
        x0[self.margin_index] = 0.0
        s = self.b_vec - self.a_mat @ x0
        worst = 0.0
        at = 0
        for kind, dim in self.cones:
            seg = s[at : at + dim]
            if kind == "zero":
                worst = max(worst, float(np.max(np.abs(seg), initial=0.0)))
            elif kind == "nonneg":
                worst = max(worst, float(np.max(-seg, initial=0.0)))
            else:
                worst = max(worst, float(np.linalg.norm(seg[1:]) - seg[0]))
            at += dim
        return worst


class _Assembler:
    """Vectorized cone assembly shared by every (nu, zeta_n) probe.

    Static rows (variable bounds, power cones, the contamination and theta
    components of the SINR cones) are built once; each probe only recomputes
    the linearization rows and the probe constants.
    """

    def __init__(self, data: MaxMinData, scsi: bool = False):
        beta = np.asarray(data.beta, dtype=float)
        gamma = np.asarray(data.gamma, dtype=float)
        if np.any(beta <= 0) or np.any(gamma < 0):
            raise ValueError("beta must be positive and gamma nonnegative")
        self.scsi = scsi
        self.scale = float(np.median(beta))
        self.beta = beta / self.scale
        self.gamma = gamma / self.scale
        self.rho = data.rho_d * self.scale
        self.gram = np.asarray(data.ul_gram, dtype=float)
        self.mask = data.mask
        # The solver variable is u = zeta' * sqrt(gamma'): the per-AP power
        # cones become orthonormal, which conditions the whole problem.
        self.uscale = np.sqrt(self.gamma)
        m, k = beta.shape
        self.m, self.k = m, k
        self.shape = (m, k)
        nz, nt = m * k, m
        self.n = nz + nt + 1  # trailing slot: phase-I margin
        self.midx = self.n - 1
        self.zidx = np.arange(nz).reshape(k, m).T  # zidx[m, k]
        self.tidx = nz + np.arange(m)
        self._build_static()

    def _build_static(self):
        m, k = self.m, self.k
        rows, cols, vals = [], [], []
        cones = []
        r = 0

        fixed = np.array([], dtype=int)
        if self.mask is not None:
            fixed = self.zidx[~np.asarray(self.mask, dtype=bool)]
        if fixed.size:
            rows.append(r + np.arange(fixed.size))
            cols.append(fixed)
            vals.append(-np.ones(fixed.size))
            cones.append(("zero", fixed.size))
            r += fixed.size

        # Nonnegative block: zeta >= 0 and theta <= 1. The linearized RHS
        # s_k >= 0 needs no row of its own: the SOC form ||[2v, s-t]|| <=
        # s + t already forces both s and t nonnegative.
        nn_start = r
        rows.append(r + np.arange(m * k))
        cols.append(np.arange(m * k))
        vals.append(-np.ones(m * k))
        r += m * k
        theta_rows = r + np.arange(m)
        rows.append(theta_rows)
        cols.append(self.tidx)
        vals.append(np.ones(m))
        r += m
        cones.append(("nonneg", r - nn_start))

        # Per-AP power cones: theta_m >= ||sqrt(gamma_m.) o zeta_m.||
        power_heads = r + (k + 1) * np.arange(m)
        rows.append(power_heads)
        cols.append(self.tidx)
        vals.append(-np.ones(m))
        rows.append((power_heads[:, None] + 1 + np.arange(k)[None, :]).ravel())
        cols.append(self.zidx.ravel())
        vals.append(-np.ones(m * k))  # orthonormal in the u variables
        cones.extend([("soc", k + 1)] * m)
        r += m * (k + 1)

        # SINR cones. The contamination components (co-uplink-pilot pairs
        # only; the others are structurally zero) enter the cone argument as
        # direct affine expressions sum_m gamma_mk' (beta_mk/beta_mk')
        # zeta_mk', which is equivalent to the slack-variable form since each
        # slack would appear in exactly one component and bind at optimum.
        w = self.gamma / self.beta
        self._soc_head_rows = []
        self._soc_tail_rows = []
        self._soc_const_rows = []
        self.soc_arg_dims = []
        self.num_rho = 0
        coef = 1.0 if self.scsi else 2.0
        for kk in range(k):
            head = r
            r += 1
            copilots = [kp for kp in range(k) if kp != kk and self.gram[kp, kk] != 0.0]
            for kp in copilots:
                rows.append(np.full(m, r))
                cols.append(self.zidx[:, kp])
                vals.append(-coef * w[:, kp] * self.beta[:, kk] / self.uscale[:, kp])
                r += 1
            n_rho = len(copilots)
            self.num_rho += n_rho
            rows.append(r + np.arange(m))
            cols.append(self.tidx)
            vals.append(-coef * np.sqrt(self.beta[:, kk]))
            r += m
            if self.scsi:
                const_rows = [r]
                r += 1
                tail = None
                arg_dim = n_rho + m + 1
            else:
                const_rows = [r, r + 1]
                r += 2
                tail = r
                r += 1
                arg_dim = n_rho + m + 3
            self._soc_head_rows.append(head)
            self._soc_const_rows.append(const_rows)
            self._soc_tail_rows.append(tail)
            self.soc_arg_dims.append(arg_dim)
            cones.append(("soc", arg_dim + 1))

        # Phase-I margin: the SINR cone heads are shifted by +t and t is
        # maximized. The auxiliary constraints (bounds, power cones, the
        # linearized RHS) are satisfiable on their own, so the feasibility
        # question lives entirely in these K cones; keeping the margin out of
        # the other rows also keeps its column sparse.
        shifted = np.array(self._soc_head_rows, int)
        rows.append(shifted)
        cols.append(np.full(shifted.size, self.midx))
        vals.append(np.ones(shifted.size))

        self.n_rows = r
        self.cones = cones
        self._static_rows = np.concatenate(rows)
        self._static_cols = np.concatenate(cols)
        self._static_vals = np.concatenate(vals)
        self._b_static = np.zeros(self.n_rows)
        self._b_static[theta_rows] = 1.0

    def build(self, nu: float, zeta_n: np.ndarray) -> SocpFeasibilityProblem:
        if nu <= 0:
            raise ValueError("SINR target must be positive")
        m, k = self.m, self.k
        zn = np.asarray(zeta_n, dtype=float) * np.sqrt(self.scale)
        b = self._b_static.copy()
        rows = [self._static_rows]
        cols = [self._static_cols]
        vals = [self._static_vals]
        if self.scsi:
            for kk in range(k):
                head = self._soc_head_rows[kk]
                rows.append(np.full(m, head))
                cols.append(self.zidx[:, kk])
                vals.append(-self.gamma[:, kk] / np.sqrt(nu) / self.uscale[:, kk])
                b[self._soc_const_rows[kk][0]] = 1.0 / np.sqrt(self.rho)
        else:
            t = 1.0 + 1.0 / nu
            for kk in range(k):
                gk = self.gamma[:, kk]
                znk = zn[:, kk]
                gz = float(gk @ znk)
                ck, dk = linearize_f(gk, self.beta[:, kk], znk, nu)
                cku = ck / self.uscale[:, kk]
                zcols = self.zidx[:, kk]
                head = self._soc_head_rows[kk]
                rows.append(np.full(m, head))
                cols.append(zcols)
                vals.append(-cku)
                b[head] = dk + t
                c1, c2 = self._soc_const_rows[kk]
                b[c1] = 2.0 / np.sqrt(nu) * gz
                b[c2] = 2.0 / np.sqrt(self.rho)
                tail = self._soc_tail_rows[kk]
                rows.append(np.full(m, tail))
                cols.append(zcols)
                vals.append(-cku)
                b[tail] = dk - t
        a_mat = sparse.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.n_rows, self.n),
        ).tocsc()
        return SocpFeasibilityProblem(
            nu=nu, zeta_n=np.asarray(zeta_n, dtype=float), n_vars=self.n, a_mat=a_mat,
            b_vec=b, cones=list(self.cones), scale=self.scale, shape=self.shape,
            num_rho=self.num_rho, uscale=self.uscale, mask=self.mask,
            soc_arg_dims=list(self.soc_arg_dims),
        )


def build_feasibility(nu: float, zeta_n: np.ndarray, data: MaxMinData) -> SocpFeasibilityProblem:
    """Assemble the SINR-target feasibility problem linearized at zeta_n."""
    return _Assembler(data).build(nu, zeta_n)


@dataclass(frozen=True)
class SolveOutcome:
    status: str  # feasible | infeasible | numerical-failure
    zeta: np.ndarray | None
    iterations: int
    residual: float
    solver_status: str
    margin: float = float("nan")


_SOLVED_STATUSES = {"Solved", "AlmostSolved"}
_INFEASIBLE_STATUSES = {"PrimalInfeasible", "AlmostPrimalInfeasible"}
MARGIN_TOL = 1e-9


def _clarabel_cones(cones):
    out = []
    for kind, dim in cones:
        if kind == "zero":
            out.append(clarabel.ZeroConeT(dim))
        elif kind == "nonneg":
            out.append(clarabel.NonnegativeConeT(dim))
        else:
            out.append(clarabel.SecondOrderConeT(dim))
    return out


def solve_feasibility(problem: SocpFeasibilityProblem, tol: float = 1e-6) -> SolveOutcome:
    """Decide one feasibility subproblem with an interior-point method.

    Solves the phase-I program "maximize the margin t by which all
    inequality cones hold". A positive optimal margin certifies a strictly
    feasible point (returned after a cone residual check); a nonpositive one
    certifies infeasibility. Boundary ties resolve to infeasible, the
    pessimistic side. A stalled solve is retried once at relaxed interior
    tolerances; if it still cannot be certified either way it is reported as
    numerical-failure, never silently downgraded to infeasible.
    """
    p_mat = sparse.csc_matrix((problem.n_vars, problem.n_vars))
    q = np.zeros(problem.n_vars)
    q[problem.margin_index] = -1.0
    cones = _clarabel_cones(problem.cones)
    outcome = None
    for relaxed in (False, True):
        settings = clarabel.DefaultSettings()
        settings.verbose = False
        settings.max_iter = 200
        # accept nearly converged iterates as Almost* verdicts
        settings.reduced_tol_gap_abs = 1e-6
        settings.reduced_tol_gap_rel = 1e-6
        settings.reduced_tol_feas = 1e-7
        settings.reduced_tol_infeas_abs = 1e-6
        settings.reduced_tol_infeas_rel = 1e-6
        if relaxed:
            settings.max_iter = 500
            settings.tol_gap_abs = 1e-6
            settings.tol_gap_rel = 1e-6
            settings.tol_feas = 1e-7
        solver = clarabel.DefaultSolver(p_mat, q, problem.a_mat, problem.b_vec,
                                        cones, settings)
        sol = solver.solve()
        status = str(sol.status)
        iters = int(getattr(sol, "iterations", 0))
        x = np.asarray(sol.x, dtype=float)
        if status in _INFEASIBLE_STATUSES:
            return SolveOutcome(status="infeasible", zeta=None, iterations=iters,
                                residual=float("nan"), solver_status=status)
        if x.size != problem.n_vars:
            outcome = SolveOutcome(status="numerical-failure", zeta=None,
                                   iterations=iters, residual=float("inf"),
                                   solver_status=status)
            continue
        margin = float(x[problem.margin_index])
        res = problem.residual(x)
        if margin > MARGIN_TOL and res <= tol:
            # clip the interior-point tolerance so the per-AP budget holds exactly
            gamma_nat = problem.uscale**2 * problem.scale
            zeta = _renormalize(problem.extract_zeta(x), gamma_nat)
            return SolveOutcome(status="feasible", zeta=zeta,
                                iterations=iters, residual=res, solver_status=status,
                                margin=margin)
        if status in _SOLVED_STATUSES:
            # Optimal margin at or below zero: no point satisfies all cones.
            return SolveOutcome(status="infeasible", zeta=None, iterations=iters,
                                residual=res, solver_status=status, margin=margin)
        # Stalled short of a certificate. If the primal margin estimate and
        # the dual bound on it agree the margin is clearly negative, report
        # infeasible: that direction is conservative for the bisection (the
        # achieved target only ratchets up on residual-verified points).
        z = np.asarray(getattr(sol, "z", np.empty(0)), dtype=float)
        if z.size == problem.b_vec.size:
            dual_bound = float(problem.b_vec @ z)
            if margin < -1e-6 and dual_bound < -1e-6:
                return SolveOutcome(status="infeasible", zeta=None, iterations=iters,
                                    residual=res, solver_status=status, margin=margin)
        outcome = SolveOutcome(status="numerical-failure", zeta=None, iterations=iters,
                               residual=res, solver_status=status, margin=margin)
    return outcome


def _renormalize(zeta: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Clip tiny constraint overshoot: rescale any AP row above full power."""
    load = np.sum(gamma * zeta**2, axis=1)
    over = load > 1.0
    if np.any(over):
        zeta = zeta.copy()
        zeta[over, :] /= np.sqrt(load[over])[:, None]
    return zeta


@dataclass
class MaxMinResult:
    coefficients: PowerCoefficients
    target_sinr: float
    trace: list        # one dict per SCA iteration: iteration, nu, zeta
    bisection: list    # per iteration: list of (nu, status) probes
    solves: int


def _bisect(assembler, zeta_lin, nu_lo, nu_cap, eps, tol):
    """Bisection on the SINR target, re-linearizing at every accepted point.

    The bracket grows by doubling from the known-feasible side (staying away
    from deeply infeasible targets, which condition poorly) until a probe
    rejects or the cap is hit, then halves. Every accepted point is feasible
    for the true constraint set (the linearized RHS underestimates the exact
    one), so moving the expansion point to it is safe and recovers the fast
    convergence the outer loop alone does not give. nu_lo stays feasible
    (witnessed by zeta_best); the exit reports the feasible side.
    """
    zeta_best = zeta_lin
    probes = []
    solves = 0

    def probe(nu):
        nonlocal zeta_best, zeta_lin, solves
        outcome = solve_feasibility(assembler.build(nu, zeta_lin), tol)
        solves += 1
        probes.append((nu, outcome.status))
        if outcome.status == "feasible":
            zeta_best = outcome.zeta
            zeta_lin = outcome.zeta
        elif outcome.status == "numerical-failure":
            raise PowerControlError(
                f"conic solver failed at target {nu:.6g} "
                f"(status {outcome.solver_status}, residual {outcome.residual:.3g})"
            )
        return outcome.status == "feasible"

    nu_hi = None
    expansions = 0
    while nu_hi is None:
        nu = min(2.0 * nu_lo, nu_cap)
        if probe(nu):
            if nu >= nu_cap:
                if expansions >= 4:
                    nu_hi = nu_cap  # give up expanding; report the cap
                    break
                nu_cap *= 10.0
                expansions += 1
            nu_lo = nu
        else:
            nu_hi = nu
    while nu_hi - nu_lo > eps * max(nu_hi, 1e-12):
        nu = 0.5 * (nu_lo + nu_hi)
        if probe(nu):
            nu_lo = nu
        else:
            nu_hi = nu
    return zeta_best, nu_lo, probes, solves


def bisection_maxmin(data: MaxMinData, zeta0: np.ndarray | None = None,
                     nu_max: float | None = None, eps: float = 1e-3,
                     n_iters: int = 5, tol: float = 1e-6) -> MaxMinResult:
    """Max-min power control on the upper-bound SINR via SCA + bisection.

    Each outer iteration restarts a bisection from the current point, which
    is feasible at its own linearization by Taylor exactness; inside the
    bisection the linearization follows every accepted solution. The
    achieved target never decreases across outer iterations.
    """
    if zeta0 is None:
        zeta0 = cd_fpt(data.gamma, data.mask).zeta
    zeta = np.asarray(zeta0, dtype=float)
    start = sinr_ub(data, zeta)
    if not np.all(np.isfinite(start)) or np.min(start) <= 0.0:
        raise PowerControlError("degenerate scenario: initial point has nonpositive SINR")
    if nu_max is None:
        nu_max = 10.0 * float(np.max(start))
    assembler = _Assembler(data)
    trace = []
    bisection = []
    solves = 0
    nu_achieved = float(np.min(sinr_ub(data, zeta)))
    for it in range(n_iters):
        nu_lo = float(np.min(sinr_ub(data, zeta)))
        zeta, nu_achieved, probes, used = _bisect(assembler, zeta, nu_lo, nu_max, eps, tol)
        solves += used
        bisection.append(probes)
        trace.append({"iteration": it + 1, "nu": nu_achieved, "zeta": zeta.copy()})
    zeta = _renormalize(zeta, data.gamma)
    return MaxMinResult(coefficients=PowerCoefficients.from_zeta(zeta),
                        target_sinr=nu_achieved, trace=trace, bisection=bisection,
                        solves=solves)


def bisection_maxmin_scsi(data: MaxMinData, nu_max: float | None = None,
                          eps: float = 1e-3, tol: float = 1e-6) -> MaxMinResult:
    """Global max-min power control on the kappa = 0 (statistical CSI) SINR.

    The coherent term is linear in zeta here, so a single bisection over the
    plain SOCP solves the problem; no convex approximation is involved.
    """
    zeta0 = cd_fpt(data.gamma, data.mask).zeta
    start = sinr_scsi(data, zeta0)
    if not np.all(np.isfinite(start)) or np.min(start) <= 0.0:
        raise PowerControlError("degenerate scenario: initial point has nonpositive SINR")
    if nu_max is None:
        nu_max = 10.0 * float(np.max(start))
    assembler = _Assembler(data, scsi=True)
    zeta = zeta0
    nu_lo = float(np.min(sinr_scsi(data, zeta)))
    zeta_best, nu_achieved, probes, solves = _bisect(assembler, zeta, nu_lo, nu_max, eps, tol)
    zeta_best = _renormalize(zeta_best, data.gamma)
    return MaxMinResult(coefficients=PowerCoefficients.from_zeta(zeta_best),
                        target_sinr=nu_achieved, trace=[{"iteration": 1, "nu": nu_achieved,
                                                         "zeta": zeta_best.copy()}],
                        bisection=[probes], solves=solves)
