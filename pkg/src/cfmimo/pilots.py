"""Pilot books and joint uplink/downlink pilot assignment.

Pilots come from canonical orthonormal books, so two UEs either share a
sequence exactly or are orthogonal. A joint assignment hands each UE one
(uplink index, downlink index) pair from the Cartesian product of the two
books; drawing the pairs without replacement automatically guarantees that
co-uplink-pilot UEs get orthogonal downlink pilots. The greedy variants
iteratively reassign the pair of the worst-rate UE, swapping with whichever
UE currently holds the chosen pair, and fall back to the initial assignment
if they failed to raise the minimum rate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from . import estimation, rates


@dataclass(frozen=True)
class PilotBook:
    """tau mutually orthonormal sequences of length tau (canonical basis)."""

    length: int
    sequences: np.ndarray  # (tau, tau), columns are the pilots


def make_book(tau: int) -> PilotBook:
    if tau < 1:
        raise ValueError("pilot book length must be at least 1")
    return PilotBook(length=tau, sequences=np.eye(tau, dtype=complex))


@dataclass(frozen=True)
class PilotPlan:
    """Per-UE uplink and downlink pilot indices into the two books."""

    ul_book: PilotBook
    dl_book: PilotBook
    ul_index: np.ndarray
    dl_index: np.ndarray

    @property
    def num_ues(self) -> int:
        return len(self.ul_index)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.ul_index.tolist(), self.dl_index.tolist()))

    def with_indices(self, ul_index, dl_index) -> "PilotPlan":
        return replace(self, ul_index=np.asarray(ul_index), dl_index=np.asarray(dl_index))


@dataclass(frozen=True)
class PairPool:
    """Cartesian product of uplink and downlink pilot indices, in lex order."""

    tau_ul: int
    tau_dl: int
    pairs: np.ndarray  # (tau_ul * tau_dl, 2)


def make_pair_pool(tau_ul: int, tau_dl: int) -> PairPool:
    pairs = np.array(list(itertools.product(range(tau_ul), range(tau_dl))), dtype=int)
    return PairPool(tau_ul=tau_ul, tau_dl=tau_dl, pairs=pairs)


def baseline_assign(pool: PairPool, num_ues: int, rng: np.random.Generator) -> PilotPlan:
    """Uniformly draw one distinct pilot pair per UE (without replacement)."""
    if len(pool.pairs) < num_ues:
        raise ValueError(
            f"only {len(pool.pairs)} pilot pairs available for {num_ues} UEs; "
            "increase the training lengths"
        )
    chosen = pool.pairs[rng.choice(len(pool.pairs), size=num_ues, replace=False)]
    return PilotPlan(ul_book=make_book(pool.tau_ul), dl_book=make_book(pool.tau_dl),
                     ul_index=chosen[:, 0].copy(), dl_index=chosen[:, 1].copy())


def orthogonal_plan(num_ues: int) -> PilotPlan:
    """Fully orthogonal assignment: tau_ul = tau_dl = K, UE k gets pair (k, k)."""
    idx = np.arange(num_ues)
    return PilotPlan(ul_book=make_book(num_ues), dl_book=make_book(num_ues),
                     ul_index=idx.copy(), dl_index=idx.copy())


def validate_plan(plan: PilotPlan) -> bool:
    """True iff pairs are unique per UE and co-uplink-pilot UEs have
    orthogonal downlink pilots."""
    ul = np.asarray(plan.ul_index)
    dl = np.asarray(plan.dl_index)
    k = len(ul)
    if len(dl) != k:
        return False
    if np.any(ul < 0) or np.any(ul >= plan.ul_book.length):
        return False
    if np.any(dl < 0) or np.any(dl >= plan.dl_book.length):
        return False
    off = ~np.eye(k, dtype=bool)
    same_ul = ul[:, None] == ul[None, :]
    same_dl = dl[:, None] == dl[None, :]
    if np.any(same_ul & same_dl & off):
        return False
    return True


@dataclass(frozen=True)
class SnrParams:
    """Normalized SNRs needed to evaluate rates inside the greedy loops."""

    rho_d: float
    rho_up: float
    rho_dp: float

    @classmethod
    def from_config(cls, config) -> "SnrParams":
        return cls(rho_d=config.rho_dl(), rho_up=config.rho_ul_pilot(),
                   rho_dp=config.rho_dl_pilot())


def _rates_for(plan: PilotPlan, beta: np.ndarray, eta: np.ndarray, snr: SnrParams) -> np.ndarray:
    """Closed-form rates under a candidate assignment; gamma is recomputed
    because the uplink pilot overlap changes with the assignment."""
    _, gamma = estimation.mmse_uplink(beta, plan, snr.rho_up, plan.ul_book.length)
    ri = rates.RateInputs(beta=beta, gamma=gamma, eta=eta, plan=plan, rho_d=snr.rho_d,
                          rho_dp=snr.rho_dp, tau_dp=plan.dl_book.length)
    return rates.rate_cf(ri)


def _contamination_utility(khat: int, ul_index, dl_index, beta, eta, gamma) -> float:
    """Mean-square uplink + downlink pilot contamination seen by UE khat,
    summed over APs and interfering UEs."""
    same_ul = np.asarray(ul_index) == ul_index[khat]
    same_dl = np.asarray(dl_index) == dl_index[khat]
    beta_cols = beta.sum(axis=0)
    dl_terms = beta[:, khat] @ (eta * gamma)
    total = 0.0
    for kp in range(len(ul_index)):
        if kp == khat:
            continue
        if same_ul[kp]:
            total += beta_cols[kp]
        if same_dl[kp]:
            total += dl_terms[kp]
    return float(total)


def _trial_swap(ul, dl, khat, pair):
    """Apply the swap semantics: give `pair` to khat, handing khat's old pair
    to whichever UE held `pair` (if any)."""
    ul = ul.copy()
    dl = dl.copy()
    holder = np.flatnonzero((ul == pair[0]) & (dl == pair[1]))
    old = (ul[khat], dl[khat])
    if holder.size:
        h = int(holder[0])
        if h != khat:
            ul[h], dl[h] = old
    ul[khat], dl[khat] = pair
    return ul, dl


def _greedy_core(plan0: PilotPlan, beta, eta, snr: SnrParams, iters: int,
                 advanced: bool) -> PilotPlan:
    pool = make_pair_pool(plan0.ul_book.length, plan0.dl_book.length)
    rates0 = _rates_for(plan0, beta, eta, snr)
    ul = plan0.ul_index.copy()
    dl = plan0.dl_index.copy()
    for _ in range(iters):
        plan = plan0.with_indices(ul, dl)
        r = _rates_for(plan, beta, eta, snr)
        khat = int(np.argmin(r))
        _, gamma = estimation.mmse_uplink(beta, plan, snr.rho_up, plan0.ul_book.length)
        best_pair = None
        best_util = np.inf
        for pair in map(tuple, pool.pairs):
            t_ul, t_dl = _trial_swap(ul, dl, khat, pair)
            t_plan = plan0.with_indices(t_ul, t_dl)
            # A pair whose swap would break the joint constraint is skipped.
            if not validate_plan(t_plan):
                continue
            if advanced:
                util = -float(np.min(_rates_for(t_plan, beta, eta, snr)))
            else:
                util = _contamination_utility(khat, t_ul, t_dl, beta, eta, gamma)
            if util < best_util:
                best_util = util
                best_pair = pair
        if best_pair is not None:
            ul, dl = _trial_swap(ul, dl, khat, best_pair)
    plan_n = plan0.with_indices(ul, dl)
    # Terminal guard: never hand back a worse minimum rate than the input plan.
    if float(np.min(_rates_for(plan_n, beta, eta, snr))) >= float(np.min(rates0)):
        return plan_n
    return plan0


def greedy_assign(plan0: PilotPlan, state, eta: np.ndarray, gamma: np.ndarray,
                  snr: SnrParams, iters: int = 5) -> PilotPlan:
    """Reassign the worst-rate UE's pilot pair to minimize its contamination.

    At each iteration the UE with the lowest closed-form rate is found, every
    pair in the uplink x downlink product is tried (swapping with the current
    holder), and the pair with the smallest summed pilot-contamination
    mean-square wins (lex order breaks ties). The output falls back to plan0
    when the minimum rate did not improve.
    """
    del gamma  # per-iteration gamma is recomputed from the current assignment
    beta = state.beta if hasattr(state, "beta") else np.asarray(state)
    return _greedy_core(plan0, beta, np.asarray(eta), snr, iters, advanced=False)


def advanced_greedy_assign(plan0: PilotPlan, state, eta: np.ndarray, gamma: np.ndarray,
                           snr: SnrParams, iters: int = 5) -> PilotPlan:
    """Same loop as greedy_assign but the utility is the (negated) minimum
    rate over all UEs, i.e. each trial pair is judged by the network-wide
    worst rate it produces."""
    del gamma
    beta = state.beta if hasattr(state, "beta") else np.asarray(state)
    return _greedy_core(plan0, beta, np.asarray(eta), snr, iters, advanced=True)
