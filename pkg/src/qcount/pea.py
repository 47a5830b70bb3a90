"""Phase-estimation counting baseline.

A t-qubit control register drives a ladder of controlled-Grover powers
(control qubit j gates 2**j iterations), an inverse QFT maps the
accumulated phase back to a basis state, and measuring the register yields
either j ~ phi * 2**t or its mirror (2**t - j), both encoding the same M.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analytic import pea_distribution
from .grover import GroverProblem, controlled_grover_power, grover_angle, marked_count
from .simple_count import halt_bound
from .statevector import (
    MAX_QUBITS_ENV,
    ResourceLimitError,
    Statevector,
    _check_register,
    apply_hadamard,
    init_basis,
    max_qubits,
    register_probabilities,
)

ENGINES = ("analytic", "statevector")
_MASK64 = (1 << 64) - 1


@dataclass
class PEAConfig:
    """Control-register width and sampling knobs; shots=0 keeps exact probabilities."""

    t: int
    shots: int = 0
    engine: str = "analytic"
    seed: int = 0

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if self.shots < 0:
            raise ValueError(f"shots must be >= 0, got {self.shots}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")


@dataclass(frozen=True)
class PEAResult:
    """Outcome histogram with mirror-pair aggregation and the extracted estimate.

    ``histogram`` holds probabilities (shots=0) or counts (shots>0);
    ``paired_prob`` maps each unordered outcome pair {j, 2**t - j}, keyed by
    its low member, to its summed probability fraction.
    """

    histogram: np.ndarray
    paired_prob: tuple[tuple[int, int, float], ...]
    best_pair: tuple[int, int]
    phi_hat: float
    m_hat: float
    t: int
    N: int
    shots: int

    @property
    def best_pair_probability(self) -> float:
        low = min(self.best_pair)
        for lo, _, prob in self.paired_prob:
            if lo == low:
                return prob
        raise AssertionError("best_pair missing from paired_prob")

    @property
    def controlled_grover_cost(self) -> int:
        return pea_cost(self.t)


def required_t(m: int, epsilon: float) -> int:
    """Register width ceil(m + log2(2 + 1/(2*epsilon))) for m accurate bits
    with success probability 1 - epsilon."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    return math.ceil(m + math.log2(2.0 + 1.0 / (2.0 * epsilon)))


def pea_cost(t: int) -> int:
    """Total controlled-Grover iterations of the ladder: 2**t - 1."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    return (1 << t) - 1


def pea_minimum_t(N: int, M: int) -> int:
    """Smallest register width that can resolve a nonzero M: 2 + ceil(log2(sqrt(N/M)))."""
    return 2 + halt_bound(N, M)


def inverse_qft(state: Statevector, register: Sequence[int]) -> Statevector:
    """Exact inverse discrete-Fourier action on the register subspace.

    Bit convention matches the rest of the engine (register[i] is bit i of
    the register value), so a register holding the Fourier transform of
    basis |j> maps back to |j>.
    """
    _check_register(state, register)
    n = state.num_qubits
    width = len(register)
    tensor = state.amplitudes.reshape((2,) * n)
    reg_axes = [n - 1 - q for q in reversed(register)]
    other_axes = [a for a in range(n) if a not in set(reg_axes)]
    perm = other_axes + reg_axes
    stacked = np.transpose(tensor, perm).reshape(-1, 1 << width)
    stacked = np.fft.fft(stacked, axis=1) / math.sqrt(1 << width)
    back = stacked.reshape((2,) * n)
    state.amplitudes = np.transpose(back, np.argsort(perm)).reshape(-1)
    return state


def pea_state(problem: GroverProblem, t: int) -> Statevector:
    """State of the full estimation circuit just before the register-1 measurement.

    The computation register occupies qubits 0..n-1 and the control
    register qubits n..n+t-1 (control n+j gates G**(2**j)).
    """
    n = problem.n
    width = n + t
    if width > max_qubits():
        raise ResourceLimitError(
            f"circuit needs {width} qubits ({n} computation + {t} control), "
            f"above the dense-simulation cap of {max_qubits()} "
            f"(override with {MAX_QUBITS_ENV})"
        )
    state = init_basis(width, 0)
    for q in range(width):
        apply_hadamard(state, q)
    computation = list(range(n))
    for j in range(t):
        controlled_grover_power(state, n + j, problem, computation, 1 << j)
    inverse_qft(state, [n + i for i in range(t)])
    return state


def _mirror_pairs(fractions: np.ndarray, t: int) -> tuple[tuple[int, int, float], ...]:
    size = 1 << t
    pairs = []
    for lo in range((size >> 1) + 1):
        hi = (size - lo) % size
        prob = float(fractions[lo]) if hi == lo else float(fractions[lo] + fractions[hi])
        pairs.append((lo, hi, prob))
    return tuple(pairs)


def _best_pair(pairs: tuple[tuple[int, int, float], ...]) -> tuple[int, int, float]:
    """Pair with maximal probability; exact ties go to the smaller phase."""
    best = pairs[0]
    for candidate in pairs[1:]:
        if candidate[2] > best[2]:
            best = candidate
    return best


def run_pea(problem: GroverProblem, config: PEAConfig) -> PEAResult:
    """Run the phase-estimation counting circuit and extract M from the best pair.

    Requires M/N <= 1/2 (apply ensure_minority first; exactly one half is
    the representable boundary phi = 1/4 and is accepted). The best pair is
    the unordered outcome pair with maximal summed probability, ties broken
    toward the smaller phase; m_hat = N * sin^2(pi * phi_hat).
    """
    N = problem.N
    M = marked_count(problem)
    if 2 * M > N:
        raise ValueError(
            f"marked fraction {M}/{N} is a majority; apply ensure_minority first"
        )
    if config.engine == "analytic":
        probs = pea_distribution(config.t, grover_angle(N, M))
    else:
        state = pea_state(problem, config.t)
        probs = register_probabilities(state, [problem.n + i for i in range(config.t)])

    if config.shots > 0:
        rng = np.random.default_rng(config.seed & _MASK64)
        counts = rng.multinomial(config.shots, probs / probs.sum())
        histogram = counts.astype(np.int64)
        fractions = counts / config.shots
    else:
        histogram = probs
        fractions = probs

    pairs = _mirror_pairs(fractions, config.t)
    best_lo, best_hi, _ = _best_pair(pairs)
    phi_hat = best_lo / float(1 << config.t)
    return PEAResult(
        histogram=histogram,
        paired_prob=pairs,
        best_pair=(best_lo, best_hi),
        phi_hat=phi_hat,
        m_hat=N * math.sin(math.pi * phi_hat) ** 2,
        t=config.t,
        N=N,
        shots=config.shots,
    )
