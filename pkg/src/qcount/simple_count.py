"""Counting by consecutive doubling of controlled-Grover iterations.

Each measurement step k prepares fresh registers, applies 2**k
controlled-Grover iterations gated by a single measurement qubit in
superposition, applies a final Hadamard to that qubit and measures it.
The loop stops at the first step whose estimated p1 reaches the halting
threshold; classical post-processing inverts that step's p(k) = p0 - p1 =
cos(2**k * theta) back to theta and M = N*sin^2(theta/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .analytic import p1_exact
from .grover import GroverProblem, controlled_grover_power, grover_angle, marked_count
from .oracles import ExplicitSetOracle, marked_indices
from .statevector import (
    Statevector,
    apply_hadamard,
    derive_seed,
    init_basis,
    probability_of_one,
    sample_bit,
)

ENGINES = ("analytic", "statevector")


@dataclass
class CountingConfig:
    """Knobs for one counting run; shots=0 uses exact probabilities."""

    threshold: float = 0.5
    shots: int = 0
    engine: str = "analytic"
    max_k: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError(f"threshold must be in (0, 1], got {self.threshold}")
        if self.shots < 0:
            raise ValueError(f"shots must be >= 0, got {self.shots}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if self.max_k is not None and self.max_k < 1:
            raise ValueError(f"max_k must be >= 1, got {self.max_k}")


@dataclass(frozen=True)
class StepOutcome:
    """One measurement step: K = 2**k controlled-Grover iterations, then p1 readout."""

    k: int
    K: int
    shots: int
    ones: int
    p0_hat: float
    p1_hat: float


@dataclass(frozen=True)
class CountEstimate:
    """Final output of a counting run, with the full step trace."""

    m_hat: float
    theta_hat: float
    k_final: int
    optimal_iterations: int | None
    halted_on_threshold: bool
    trace: tuple[StepOutcome, ...]
    N: int

    @property
    def controlled_grover_cost(self) -> int:
        """Total controlled-Grover applications across the trace (2**(k_final+1) - 1)."""
        return sum(step.K for step in self.trace)


def default_max_k(n: int) -> int:
    """Worst nonzero case is M=1 at ceil(n/2) steps; +2 absorbs sampling noise."""
    return math.ceil(n / 2) + 2


def halt_bound(N: int, M: int) -> int:
    """Latest halting step ceil(log2(sqrt(N/M))), in exact integer arithmetic."""
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    k = 0
    while (M << (2 * k)) < N:
        k += 1
    return k


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(hi, max(lo, value))


def postprocess_arccos(p_k: float, k: int, N: int) -> tuple[float, float]:
    """Invert p(k) = cos(2**k * theta) by arccos; returns (theta_hat, m_hat).

    Finite-shot estimates may fall outside [-1, 1] and are clamped.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    p = _clamp(p_k, -1.0, 1.0)
    theta = math.acos(p) / (2.0 ** k)
    return theta, N * math.sin(0.5 * theta) ** 2


def postprocess_halfangle(p_k: float, k: int, N: int) -> tuple[float, float]:
    """Invert p(k) by k half-angle steps p(j-1) = sqrt((1+p(j))/2); returns (theta_hat, m_hat)."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    p = _clamp(p_k, -1.0, 1.0)
    for _ in range(k):
        p = math.sqrt(0.5 * (1.0 + p))
    return math.acos(p), N * 0.5 * (1.0 - p)


def optimal_grover_iterations(theta: float) -> int:
    """Search-iteration count ceil((pi/theta - 1)/2) for a measured Grover angle."""
    if theta <= 0.0:
        raise ValueError(f"theta must be > 0, got {theta}")
    value = (math.pi / theta - 1.0) / 2.0
    # Snap values a rounding error away from an integer before the ceiling.
    nearest = round(value)
    if abs(value - nearest) < 1e-9:
        value = nearest
    return max(0, math.ceil(value))


def ensure_minority(problem: GroverProblem) -> GroverProblem:
    """Double the search space (add a qubit, keep the marked set) until M/N < 1/2.

    The new top-bit-1 states are unmarked, which a bit-pattern mask cannot
    express, so doubling materializes the marked set as an explicit oracle.
    M = N needs two doublings; anything else at most one.
    """
    current = problem
    while 2 * marked_count(current) >= current.N:
        indices = tuple(int(i) for i in marked_indices(current.oracle))
        current = GroverProblem(current.n + 1, ExplicitSetOracle(current.n + 1, indices))
    return current


def step_state(problem: GroverProblem, k: int) -> Statevector:
    """Pre-measurement state of measurement step k (measurement qubit is qubit n)."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    n = problem.n
    state = init_basis(n + 1, 0)
    for q in range(n + 1):
        apply_hadamard(state, q)
    controlled_grover_power(state, n, problem, list(range(n)), 1 << k)
    apply_hadamard(state, n)
    return state


def step_probability_one(problem: GroverProblem, k: int) -> float:
    """p1 of measurement step k from a full statevector simulation."""
    return probability_of_one(step_state(problem, k), problem.n)


def run_simple_count(problem: GroverProblem, config: CountingConfig | None = None) -> CountEstimate:
    """Run the consecutive-doubling measurement loop and post-process the final step.

    Requires a minority marked set (M/N < 1/2); apply ensure_minority first.
    Steps are independent circuit executions; in sampled mode each step draws
    its ones-count from a binomial with a seed derived from (seed, k). If the
    threshold is never reached by step max_k the last step is post-processed
    anyway and the estimate is flagged (covers M = 0, where m_hat = 0).
    """
    config = config or CountingConfig()
    N = problem.N
    M = marked_count(problem)
    if 2 * M >= N:
        raise ValueError(
            f"marked fraction {M}/{N} is not a minority; apply ensure_minority first"
        )
    angle = grover_angle(N, M) if config.engine == "analytic" else None
    max_k = config.max_k if config.max_k is not None else default_max_k(problem.n)

    trace: list[StepOutcome] = []
    halted = False
    for k in range(max_k + 1):
        if angle is not None:
            p1 = p1_exact(k, angle)
        else:
            p1 = step_probability_one(problem, k)
        if config.shots > 0:
            ones = sample_bit(_clamp(p1, 0.0, 1.0), config.shots, derive_seed(config.seed, k))
            p1_hat = ones / config.shots
        else:
            ones = 0
            p1_hat = p1
        trace.append(StepOutcome(k, 1 << k, config.shots, ones, 1.0 - p1_hat, p1_hat))
        if p1_hat >= config.threshold:
            halted = True
            break

    last = trace[-1]
    p_k = _clamp(last.p0_hat - last.p1_hat, -1.0, 1.0)
    theta_hat, m_hat = postprocess_arccos(p_k, last.k, N)
    iterations = optimal_grover_iterations(theta_hat) if theta_hat > 0.0 else None
    return CountEstimate(
        m_hat=m_hat,
        theta_hat=theta_hat,
        k_final=last.k,
        optimal_iterations=iterations,
        halted_on_threshold=halted,
        trace=tuple(trace),
        N=N,
    )
