import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcount.analytic import p1_exact
from qcount.grover import GroverProblem, grover_angle, marked_count
from qcount.oracles import BitPatternOracle, ExplicitSetOracle
from qcount.simple_count import (
    CountingConfig,
    default_max_k,
    ensure_minority,
    halt_bound,
    optimal_grover_iterations,
    postprocess_arccos,
    postprocess_halfangle,
    run_simple_count,
    step_probability_one,
)


def first_m_problem(n, M):
    return GroverProblem(n, ExplicitSetOracle(n, tuple(range(M))))


def test_exact_run_large_space():
    est = run_simple_count(GroverProblem(12, BitPatternOracle(12, 0xFFF)))
    assert est.k_final == 6
    assert est.halted_on_threshold
    assert abs(est.trace[-1].p1_hat - 0.708) < 5e-4
    assert abs(est.trace[5].p1_hat - 0.230) < 5e-4
    assert abs(est.m_hat - 1.0) < 1e-6
    assert est.controlled_grover_cost == 127


def test_exact_run_eight_states():
    est = run_simple_count(first_m_problem(3, 1))
    assert est.k_final == 2
    assert abs(est.trace[-1].p1_hat - 0.984375) < 1e-12  # 63/64 up to trig rounding
    assert abs(est.m_hat - 1.0) < 1e-9
    assert est.optimal_iterations == 2
    assert abs(est.m_hat - est.N * math.sin(est.theta_hat / 2) ** 2) < 1e-12


def test_zero_marked_never_halts():
    est = run_simple_count(first_m_problem(4, 0))
    assert not est.halted_on_threshold
    assert est.m_hat == 0.0
    assert est.theta_hat == 0.0
    assert est.optimal_iterations is None
    assert len(est.trace) == default_max_k(4) + 1


def test_majority_rejected():
    with pytest.raises(ValueError):
        run_simple_count(first_m_problem(2, 2))


def test_halt_bound_examples():
    assert halt_bound(4096, 1) == 6
    assert halt_bound(4096, 64) == 3
    assert halt_bound(8, 1) == 2
    with pytest.raises(ValueError):
        halt_bound(64, 0)


def test_halt_bound_is_exact_integer_arithmetic():
    # ceil(log2(sqrt(N/M))) == smallest k with M*4^k >= N
    for n in range(1, 20):
        N = 1 << n
        for M in (1, 2, 3, 5, N // 4 + 1, N // 2 - 1, N - 1, N):
            if M < 1 or M > N:
                continue
            k = halt_bound(N, M)
            assert M << (2 * k) >= N
            assert k == 0 or M << (2 * (k - 1)) < N


def test_postprocess_arccos_examples():
    theta, m_hat = postprocess_arccos(-1.0, 0, 16)
    assert abs(theta - math.pi) < 1e-15
    assert abs(m_hat - 16.0) < 1e-12

    theta, m_hat = postprocess_arccos(-0.96875, 2, 8)
    assert abs(theta - 0.722734) < 1e-6
    assert abs(m_hat - 1.0) < 1e-9

    theta, m_hat = postprocess_arccos(1.0, 5, 8)
    assert theta == 0.0 and m_hat == 0.0


def test_postprocess_halfangle_chain():
    # p(2) = -0.96875 -> p(1) = 0.125 -> p(0) = 0.75 -> M = 8*(1-0.75)/2 = 1
    theta, m_hat = postprocess_halfangle(-0.96875, 2, 8)
    assert abs(m_hat - 1.0) < 1e-9
    assert abs(theta - math.acos(0.75)) < 1e-12

    p1 = math.sqrt((1 - 0.96875) / 2)
    assert abs(p1 - 0.125) < 1e-15
    p0 = math.sqrt((1 + p1) / 2)
    assert abs(p0 - 0.75) < 1e-15


def test_postprocess_halfangle_no_iterations():
    theta, m_hat = postprocess_halfangle(0.5, 0, 8)
    assert abs(m_hat - 8 * (1 - 0.5) / 2) < 1e-15
    assert abs(theta - math.acos(0.5)) < 1e-15


@given(
    st.floats(min_value=-1.0, max_value=0.0),
    st.integers(min_value=0, max_value=12),
    st.integers(min_value=1, max_value=16),
)
def test_postprocess_formulas_equivalent_in_halting_regime(p, k, n):
    # Every halted run has p(k) = p0 - p1 <= 0; there both routes agree fully.
    N = 1 << n
    theta_a, m_a = postprocess_arccos(p, k, N)
    theta_h, m_h = postprocess_halfangle(p, k, N)
    assert abs(theta_a - theta_h) < 1e-9
    assert abs(m_a - m_h) < 1e-9


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.integers(min_value=0, max_value=12),
    st.integers(min_value=1, max_value=16),
)
def test_postprocess_m_agrees_for_positive_p(p, k, n):
    # Near p = 1 the arccos is ill-conditioned in theta, but both routes
    # still agree on the count (which tends to zero there).
    N = 1 << n
    _, m_a = postprocess_arccos(p, k, N)
    _, m_h = postprocess_halfangle(p, k, N)
    assert abs(m_a - m_h) < 1e-9


@given(st.floats(min_value=-2.0, max_value=2.0))
def test_postprocess_clamps_out_of_range(p):
    theta, m_hat = postprocess_arccos(p, 1, 8)
    assert 0.0 <= theta <= math.pi / 2
    assert 0.0 <= m_hat <= 8.0


def test_optimal_grover_iterations_examples():
    assert optimal_grover_iterations(math.pi / 3) == 1
    assert optimal_grover_iterations(grover_angle(4, 1).theta) == 1
    assert optimal_grover_iterations(grover_angle(8, 1).theta) == 2
    assert optimal_grover_iterations(math.pi) == 0
    with pytest.raises(ValueError):
        optimal_grover_iterations(0.0)


def test_ensure_minority_examples():
    doubled = ensure_minority(first_m_problem(2, 3))
    assert doubled.n == 3 and doubled.N == 8
    assert marked_count(doubled) == 3

    problem = first_m_problem(4, 4)  # M/N = 0.25
    assert ensure_minority(problem) is problem

    # M = N needs two doublings.
    saturated = ensure_minority(GroverProblem(2, BitPatternOracle(2, 0)))
    assert saturated.n == 4 and marked_count(saturated) == 4


def test_ensure_minority_preserves_recovery():
    for n in range(1, 7):
        N = 1 << n
        for M in range(N // 2, N + 1):
            problem = ensure_minority(first_m_problem(n, M))
            assert 2 * marked_count(problem) < problem.N
            est = run_simple_count(problem)
            assert abs(est.m_hat - M) < 1e-6 * M


def test_exact_recovery_and_halt_window():
    for n in range(2, 9):
        N = 1 << n
        for M in range(1, N // 2):
            est = run_simple_count(first_m_problem(n, M))
            assert est.halted_on_threshold
            assert abs(est.m_hat - M) <= 1e-6 * M
            bound = halt_bound(N, M)
            assert est.k_final in (bound, bound - 1)
            assert est.controlled_grover_cost == (1 << (est.k_final + 1)) - 1


def test_statevector_engine_matches_analytic():
    for n, marked in ((2, (1,)), (3, (0, 5)), (4, (2, 7, 11)), (5, (3,))):
        problem = GroverProblem(n, ExplicitSetOracle(n, marked))
        exact = run_simple_count(problem, CountingConfig(engine="analytic"))
        simulated = run_simple_count(problem, CountingConfig(engine="statevector"))
        assert exact.k_final == simulated.k_final
        assert abs(exact.m_hat - simulated.m_hat) < 1e-8
        for a, b in zip(exact.trace, simulated.trace):
            assert abs(a.p1_hat - b.p1_hat) < 1e-10


def test_step_probability_matches_closed_form():
    problem = GroverProblem(3, ExplicitSetOracle(3, (7,)))
    angle = grover_angle(8, 1)
    for k in range(4):
        assert abs(step_probability_one(problem, k) - p1_exact(k, angle)) < 1e-10


def test_oracle_forms_give_identical_traces():
    mask_problem = GroverProblem(4, BitPatternOracle(4, 0b1100))
    set_problem = GroverProblem(4, ExplicitSetOracle(4, (12, 13, 14, 15)))
    for engine in ("analytic", "statevector"):
        a = run_simple_count(mask_problem, CountingConfig(engine=engine))
        b = run_simple_count(set_problem, CountingConfig(engine=engine))
        assert a.k_final == b.k_final
        assert [s.p1_hat for s in a.trace] == [s.p1_hat for s in b.trace]
        assert a.m_hat == b.m_hat


def sampled_error_band(N, M, k, shots):
    """Worst |m_hat - M| over p(k) +- 4 sigma, propagated through the arccos inversion."""
    p1 = p1_exact(k, grover_angle(N, M))
    sigma_p = 2.0 * math.sqrt(p1 * (1.0 - p1) / shots)
    band = 0.0
    for endpoint in (1.0 - 2.0 * p1 - 4.0 * sigma_p, 1.0 - 2.0 * p1 + 4.0 * sigma_p):
        _, m_hat = postprocess_arccos(endpoint, k, N)
        band = max(band, abs(m_hat - M))
    return band


@pytest.mark.parametrize("n,M,shots", [(12, 1, 1024), (12, 64, 1024), (8, 1, 1024), (10, 37, 1024)])
def test_sampled_estimate_within_propagated_band(n, M, shots):
    problem = first_m_problem(n, M)
    est = run_simple_count(problem, CountingConfig(shots=shots, seed=7))
    band = sampled_error_band(1 << n, M, est.k_final, shots)
    assert abs(est.m_hat - M) <= band


def test_sampled_runs_are_deterministic():
    problem = first_m_problem(10, 3)
    config = CountingConfig(shots=100, seed=123)
    a = run_simple_count(problem, config)
    b = run_simple_count(problem, config)
    assert [s.ones for s in a.trace] == [s.ones for s in b.trace]
    assert a.m_hat == b.m_hat


def test_relaxed_threshold_halts_earlier():
    problem = first_m_problem(12, 1)
    strict = run_simple_count(problem, CountingConfig(threshold=0.5))
    relaxed = run_simple_count(problem, CountingConfig(threshold=0.15))
    assert relaxed.k_final < strict.k_final
    assert relaxed.halted_on_threshold
    # Coarse estimate but still the right magnitude.
    assert abs(relaxed.m_hat - 1.0) < 0.5


def test_config_validation():
    with pytest.raises(ValueError):
        CountingConfig(threshold=0.0)
    with pytest.raises(ValueError):
        CountingConfig(shots=-1)
    with pytest.raises(ValueError):
        CountingConfig(engine="qasm")
    with pytest.raises(ValueError):
        CountingConfig(max_k=0)
