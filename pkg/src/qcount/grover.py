"""The Grover operator, its controlled powers, and its eigenstructure.

The operator G is the oracle phase flip followed by the diffusion
reflection about the uniform superposition. With M of N = 2**n basis
states marked, G rotates by the angle theta, where sin(theta/2) = sqrt(M/N),
in the plane spanned by the uniform superpositions of the unmarked and
marked states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .oracles import Oracle, marked_indices
from .statevector import Statevector, apply_diffusion, apply_phase_flip, controlled_apply

_CHUNK = 1 << 20


@dataclass(frozen=True)
class GroverProblem:
    """Search-space width and oracle for one counting problem."""

    n: int
    oracle: Oracle

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.oracle.n != self.n:
            raise ValueError(
                f"oracle is defined on {self.oracle.n} qubits, problem has {self.n}"
            )

    @property
    def N(self) -> int:
        return 1 << self.n


@dataclass(frozen=True)
class GroverAngle:
    """The (theta, phi, M, N) bundle with sin^2(theta/2) = M/N and phi = theta/(2*pi)."""

    theta: float
    phi: float
    M: int
    N: int


def grover_angle(N: int, M: int) -> GroverAngle:
    """Rotation angle of the Grover operator for M marked states out of N."""
    if N < 1 or (N & (N - 1)) != 0:
        raise ValueError(f"N must be a power of two, got {N}")
    if not 0 <= M <= N:
        raise ValueError(f"M must be in [0, {N}], got {M}")
    theta = 2.0 * math.asin(math.sqrt(M / N))
    return GroverAngle(theta=theta, phi=theta / (2.0 * math.pi), M=M, N=N)


def apply_grover(state: Statevector, problem: GroverProblem, register: Sequence[int]) -> Statevector:
    """One Grover iteration on the register: oracle phase flip, then diffusion."""
    if len(register) != problem.n:
        raise ValueError(
            f"register width {len(register)} does not match problem width {problem.n}"
        )
    apply_phase_flip(state, problem.oracle, register)
    apply_diffusion(state, register)
    return state


def controlled_grover_power(
    state: Statevector,
    control: int,
    problem: GroverProblem,
    register: Sequence[int],
    repetitions: int,
) -> Statevector:
    """Apply controlled-G ``repetitions`` times (control qubit gates every iteration)."""
    if repetitions < 0:
        raise ValueError(f"repetitions must be >= 0, got {repetitions}")

    def action(sub: Statevector, regs: list[int]) -> Statevector:
        return apply_grover(sub, problem, regs)

    for _ in range(repetitions):
        controlled_apply(state, control, register, action)
    return state


def build_eigenstate(problem: GroverProblem, sign: int) -> Statevector:
    """Eigenstate of G with eigenvalue exp(+i*theta) (sign=+1) or exp(-i*theta) (sign=-1).

    Built as (|unmarked_uniform> -/+ i|marked_uniform>)/sqrt(2); requires
    1 <= M <= N-1 so both uniform superpositions exist.
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    marked = marked_indices(problem.oracle)
    M = len(marked)
    N = problem.N
    if M == 0 or M == N:
        raise ValueError(f"eigenstate undefined for M={M} of N={N} (degenerate)")
    amps = np.full(N, 1.0 / math.sqrt(2.0 * (N - M)), dtype=np.complex128)
    amps[marked] = (-1j if sign > 0 else 1j) / math.sqrt(2.0 * M)
    return Statevector(problem.n, amps)


def marked_count(problem: GroverProblem) -> int:
    """Number of marked basis states, by exhaustive (chunked) enumeration."""
    total = 0
    for lo in range(0, problem.N, _CHUNK):
        xs = np.arange(lo, min(lo + _CHUNK, problem.N), dtype=np.int64)
        total += int(problem.oracle.select(xs).sum())
    return total
