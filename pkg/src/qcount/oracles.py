"""Marked-set oracles over computational-basis indices.

An oracle marks a subset of the ``2**n`` basis indices of an n-qubit
register; the engine turns it into a conditional phase flip. Two forms are
supported: an explicit index set, and a bit-pattern mask that marks every
index whose bits are 1 at all positions set in the mask.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Union

import numpy as np

_CHUNK = 1 << 20


def _check_index(x: int, n: int) -> None:
    if not 0 <= x < (1 << n):
        raise ValueError(f"basis index {x} out of range for {n} qubits")


@dataclass(frozen=True)
class ExplicitSetOracle:
    """Marks an explicit set of basis indices (stored sorted, deduplicated)."""

    n: int
    indices: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        idx = tuple(sorted({int(i) for i in self.indices}))
        for i in idx:
            _check_index(i, self.n)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "_array", np.asarray(idx, dtype=np.int64))

    def is_marked(self, x: int) -> bool:
        _check_index(x, self.n)
        pos = bisect_left(self.indices, x)
        return pos < len(self.indices) and self.indices[pos] == x

    def select(self, xs: np.ndarray) -> np.ndarray:
        return np.isin(xs, self._array)

    def spec_text(self) -> str:
        return "set:" + ",".join(str(i) for i in self.indices)


@dataclass(frozen=True)
class BitPatternOracle:
    """Marks every index whose bits are 1 at all positions set in ``mask``."""

    n: int
    mask: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.mask < (1 << self.n):
            raise ValueError(f"mask {self.mask:#x} does not fit in {self.n} bits")

    def is_marked(self, x: int) -> bool:
        _check_index(x, self.n)
        return (x & self.mask) == self.mask

    def select(self, xs: np.ndarray) -> np.ndarray:
        return (xs & self.mask) == self.mask

    def spec_text(self) -> str:
        return f"mask:{self.mask:#x}"


Oracle = Union[ExplicitSetOracle, BitPatternOracle]


def pattern_marked_count(n: int, mask: int) -> int:
    """Closed-form marked count of a bit-pattern oracle: 2**(n - popcount(mask))."""
    if not 0 <= mask < (1 << n):
        raise ValueError(f"mask {mask:#x} does not fit in {n} bits")
    return 1 << (n - mask.bit_count())


def marked_indices(oracle: Oracle) -> np.ndarray:
    """All marked basis indices, ascending, by chunked enumeration."""
    dim = 1 << oracle.n
    found = []
    for lo in range(0, dim, _CHUNK):
        xs = np.arange(lo, min(lo + _CHUNK, dim), dtype=np.int64)
        found.append(xs[oracle.select(xs)])
    return np.concatenate(found)


def parse_oracle(text: str, n: int) -> Oracle:
    """Parse a textual oracle spec: ``set:3,5,12`` or ``mask:0b101100`` / ``mask:0xfff``."""
    kind, sep, body = text.partition(":")
    if not sep:
        raise ValueError(f"oracle spec {text!r} missing 'set:' or 'mask:' prefix")
    if kind == "set":
        tokens = [tok.strip() for tok in body.split(",") if tok.strip()]
        return ExplicitSetOracle(n, tuple(int(tok, 0) for tok in tokens))
    if kind == "mask":
        return BitPatternOracle(n, int(body.strip(), 0))
    raise ValueError(f"unknown oracle kind {kind!r} (expected 'set' or 'mask')")
