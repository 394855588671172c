import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfmimo import estimation, pilots, powerctl, rates
from cfmimo.harness import substream

from oracles import naive_c_gamma


SNR = pilots.SnrParams(rho_d=10.0, rho_up=5.0, rho_dp=10.0)


def random_state(rng, m, k):
    return 10 ** rng.uniform(-1.5, 0.5, size=(m, k))


def rate_min(plan, beta, eta, snr=SNR):
    _, gamma = estimation.mmse_uplink(beta, plan, snr.rho_up, plan.ul_book.length)
    ri = rates.RateInputs(beta=beta, gamma=gamma, eta=eta, plan=plan, rho_d=snr.rho_d,
                          rho_dp=snr.rho_dp, tau_dp=plan.dl_book.length)
    return float(np.min(rates.rate_cf(ri)))


class TestBook:
    def test_orthonormal_pair(self):
        book = pilots.make_book(2)
        seq = book.sequences
        assert abs(np.vdot(seq[:, 0], seq[:, 1])) == 0.0
        assert np.linalg.norm(seq[:, 0]) == pytest.approx(1.0)

    def test_degenerate_scalar(self):
        book = pilots.make_book(1)
        assert book.sequences.shape == (1, 1)
        assert abs(book.sequences[0, 0]) == pytest.approx(1.0)

    @pytest.mark.parametrize("tau", [1, 2, 5, 16])
    def test_gram_identity(self, tau):
        seq = pilots.make_book(tau).sequences
        gram = seq.conj().T @ seq
        assert np.max(np.abs(gram - np.eye(tau))) < 1e-14

    def test_invalid_length(self):
        with pytest.raises(ValueError):
            pilots.make_book(0)


class TestBaselineAssign:
    def test_full_product_used_once(self):
        pool = pilots.make_pair_pool(2, 2)
        plan = pilots.baseline_assign(pool, 4, substream(0))
        assert sorted(plan.pairs()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        # shared uplink pilot -> distinct downlink pilots, by construction
        for k in range(4):
            for kp in range(k):
                if plan.ul_index[k] == plan.ul_index[kp]:
                    assert plan.dl_index[k] != plan.dl_index[kp]

    def test_single_ue(self):
        plan = pilots.baseline_assign(pilots.make_pair_pool(3, 2), 1, substream(1))
        assert pilots.validate_plan(plan)
        assert plan.num_ues == 1

    def test_constraint_never_violated(self):
        pool = pilots.make_pair_pool(10, 10)
        for trial in range(1000):
            plan = pilots.baseline_assign(pool, 20, substream(2, trial))
            assert pilots.validate_plan(plan)

    def test_pool_too_small(self):
        with pytest.raises(ValueError, match="pilot pairs"):
            pilots.baseline_assign(pilots.make_pair_pool(2, 2), 5, substream(3))

    @given(st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_always_valid(self, seed):
        plan = pilots.baseline_assign(pilots.make_pair_pool(3, 4), 9, substream(seed))
        assert pilots.validate_plan(plan)


class TestValidatePlan:
    def test_shared_pair_invalid(self):
        plan = pilots.orthogonal_plan(3).with_indices([0, 0, 1], [1, 1, 0])
        assert not pilots.validate_plan(plan)

    def test_baseline_valid(self):
        plan = pilots.baseline_assign(pilots.make_pair_pool(2, 3), 5, substream(4))
        assert pilots.validate_plan(plan)

    def test_corrupted_copy(self):
        plan = pilots.baseline_assign(pilots.make_pair_pool(2, 3), 5, substream(5))
        dl = plan.dl_index.copy()
        # force UE 1 to copy UE 0's pair
        corrupted = plan.with_indices(
            np.r_[plan.ul_index[0], plan.ul_index[0], plan.ul_index[2:]],
            np.r_[dl[0], dl[0], dl[2:]])
        assert not pilots.validate_plan(corrupted)


class TestGreedy:
    def _setup(self, seed, m=10, k=3, tau=2):
        rng = substream(seed)
        beta = random_state(rng, m, k)
        pool = pilots.make_pair_pool(tau, tau)
        plan0 = pilots.baseline_assign(pool, k, rng)
        _, gamma0 = estimation.mmse_uplink(beta, plan0, SNR.rho_up, tau)
        eta0 = powerctl.cd_fpt(gamma0).eta
        return beta, plan0, gamma0, eta0

    def test_zero_iters_is_noop(self):
        beta, plan0, gamma0, eta0 = self._setup(0)
        out = pilots.greedy_assign(plan0, beta, eta0, gamma0, SNR, iters=0)
        assert out.pairs() == plan0.pairs()

    @pytest.mark.parametrize("assign", [pilots.greedy_assign, pilots.advanced_greedy_assign])
    def test_never_decreases_min_rate(self, assign):
        for seed in range(20):
            beta, plan0, gamma0, eta0 = self._setup(seed)
            out = assign(plan0, beta, eta0, gamma0, SNR, iters=3)
            assert pilots.validate_plan(out)
            assert rate_min(out, beta, eta0) >= rate_min(plan0, beta, eta0) - 1e-12

    def test_greedy_matches_brute_force_utility(self):
        # One iteration: the chosen pair must minimize the contamination
        # utility over the whole pool, with swap semantics, lex tie-break.
        for seed in range(10):
            beta, plan0, gamma0, eta0 = self._setup(seed)
            out = pilots.greedy_assign(plan0, beta, eta0, gamma0, SNR, iters=1)

            _, gamma = estimation.mmse_uplink(beta, plan0, SNR.rho_up, 2)
            ri = rates.RateInputs(beta=beta, gamma=gamma, eta=eta0, plan=plan0,
                                  rho_d=SNR.rho_d, rho_dp=SNR.rho_dp, tau_dp=2)
            khat = int(np.argmin(rates.rate_cf(ri)))

            best_util, best_assignment = np.inf, None
            for i in range(2):
                for j in range(2):
                    ul = plan0.ul_index.copy()
                    dl = plan0.dl_index.copy()
                    holder = [x for x in range(3) if ul[x] == i and dl[x] == j]
                    if holder and holder[0] != khat:
                        ul[holder[0]], dl[holder[0]] = ul[khat], dl[khat]
                    ul[khat], dl[khat] = i, j
                    trial = plan0.with_indices(ul, dl)
                    if not pilots.validate_plan(trial):
                        continue
                    util = 0.0
                    for kp in range(3):
                        if kp == khat:
                            continue
                        if ul[kp] == ul[khat]:
                            util += beta[:, kp].sum()
                        if dl[kp] == dl[khat]:
                            util += float(np.sum(eta0[:, kp] * beta[:, khat] * gamma[:, kp]))
                    if util < best_util - 1e-15:
                        best_util, best_assignment = util, (tuple(ul), tuple(dl))
            candidate = (tuple(out.ul_index), tuple(out.dl_index))
            fallback = (tuple(plan0.ul_index), tuple(plan0.dl_index))
            assert candidate in (best_assignment, fallback)

    def test_advanced_matches_brute_force_min_rate(self):
        # K=2: one iteration of the advanced greedy picks the pair whose swap
        # maximizes the network minimum rate.
        for seed in range(10):
            beta, plan0, gamma0, eta0 = self._setup(seed, m=8, k=2, tau=2)
            out = pilots.advanced_greedy_assign(plan0, beta, eta0, gamma0, SNR, iters=1)

            _, gamma = estimation.mmse_uplink(beta, plan0, SNR.rho_up, 2)
            ri = rates.RateInputs(beta=beta, gamma=gamma, eta=eta0, plan=plan0,
                                  rho_d=SNR.rho_d, rho_dp=SNR.rho_dp, tau_dp=2)
            khat = int(np.argmin(rates.rate_cf(ri)))

            best_val, best_assignment = -np.inf, None
            for i in range(2):
                for j in range(2):
                    ul = plan0.ul_index.copy()
                    dl = plan0.dl_index.copy()
                    holder = [x for x in range(2) if ul[x] == i and dl[x] == j]
                    if holder and holder[0] != khat:
                        ul[holder[0]], dl[holder[0]] = ul[khat], dl[khat]
                    ul[khat], dl[khat] = i, j
                    trial = plan0.with_indices(ul, dl)
                    if not pilots.validate_plan(trial):
                        continue
                    val = rate_min(trial, beta, eta0)
                    if val > best_val + 1e-15:
                        best_val, best_assignment = val, (tuple(ul), tuple(dl))
            candidate = (tuple(out.ul_index), tuple(out.dl_index))
            fallback = (tuple(plan0.ul_index), tuple(plan0.dl_index))
            assert candidate in (best_assignment, fallback)
            assert rate_min(out, beta, eta0) == pytest.approx(
                max(best_val, rate_min(plan0, beta, eta0)), rel=1e-12)

    def test_fully_orthogonal_tie_case(self):
        # tau_ul = tau_dl = K: zero contamination everywhere, utilities tie;
        # the algorithm must still return a valid plan.
        rng = substream(42)
        k = 3
        beta = random_state(rng, 9, k)
        plan0 = pilots.orthogonal_plan(k)
        _, gamma0 = estimation.mmse_uplink(beta, plan0, SNR.rho_up, k)
        eta0 = powerctl.cd_fpt(gamma0).eta
        out = pilots.greedy_assign(plan0, beta, eta0, gamma0, SNR, iters=2)
        assert pilots.validate_plan(out)

    def test_orthogonal_contamination_is_zero(self):
        rng = substream(43)
        k = 4
        beta = random_state(rng, 8, k)
        plan = pilots.orthogonal_plan(k)
        _, gamma = estimation.mmse_uplink(beta, plan, SNR.rho_up, k)
        eta = powerctl.cd_fpt(gamma).eta
        for khat in range(k):
            util = pilots._contamination_utility(khat, plan.ul_index, plan.dl_index,
                                                 beta, eta, gamma)
            assert util == 0.0

    def test_gamma_recomputed_consistently(self):
        beta, plan0, gamma0, eta0 = self._setup(3)
        _, expected = naive_c_gamma(beta, plan0.ul_index, SNR.rho_up, 2)
        _, got = estimation.mmse_uplink(beta, plan0, SNR.rho_up, 2)
        np.testing.assert_allclose(got, expected, rtol=1e-12)
