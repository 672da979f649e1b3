"""Exact arithmetic in the cyclotomic integers Z[zeta_L].

Elements are integer coefficient vectors in the basis 1, zeta, ..., zeta^(deg-1),
reduced modulo the L-th cyclotomic polynomial.  The vectorised helpers on
:class:`CyclotomicRing` operate on numpy arrays whose last axis holds the
coefficients, which is what the group transforms use.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # Coefficients are low-degree first; den must be monic.
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1]
        out[shift] = c
        if c:
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    rem = num[: len(den) - 1]
    return out, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Return the coefficients (low degree first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic level must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


class CyclotomicRing:
    """Z[zeta_L] with precomputed reduction tables."""

    def __init__(self, level: int):
        self.level = level
        phi = cyclotomic_polynomial(level)
        self.degree = len(phi) - 1
        # powers[k] = coefficients of zeta^k, for 0 <= k < 2*level
        deg = self.degree
        powers = np.zeros((2 * level, deg), dtype=np.int64)
        cur = [0] * deg
        cur[0] = 1
        for k in range(2 * level):
            powers[k] = cur
            # multiply by zeta: shift up, fold the top coefficient back through phi
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(deg):
                    cur[i] -= top * phi[i]
        self.powers = powers[:level].copy()
        self._long_powers = powers
        # multiplication by zeta^k as a matrix acting on coefficient vectors
        mats = np.zeros((level, deg, deg), dtype=np.int64)
        for k in range(level):
            for j in range(deg):
                mats[k, :, j] = powers[k + j]
        self.shift_matrices = mats

    def __repr__(self) -> str:
        return f"CyclotomicRing({self.level})"

    def zero(self, shape=()) -> np.ndarray:
        return np.zeros(tuple(shape) + (self.degree,), dtype=np.int64)

    def from_exponent_counts(self, counts) -> np.ndarray:
        """Map counts c_k (last axis of length L) to sum_k c_k zeta^k."""
        counts = np.asarray(counts, dtype=np.int64)
        return counts @ self.powers

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        deg = self.degree
        full = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (2 * deg - 1,), dtype=np.int64)
        for i in range(deg):
            for j in range(deg):
                full[..., i + j] += a[..., i] * b[..., j]
        return full @ self._long_powers[: 2 * deg - 1]

    def conj(self, a: np.ndarray) -> np.ndarray:
        """Galois conjugate zeta -> zeta^-1, coefficientwise."""
        neg = self.powers[(-np.arange(self.degree)) % self.level]
        return a @ neg

    def is_rational(self, a: np.ndarray) -> np.ndarray:
        return ~np.any(a[..., 1:], axis=-1)


@lru_cache(maxsize=None)
def ring(level: int) -> CyclotomicRing:
    return CyclotomicRing(level)


@dataclass(frozen=True)
class CyclotomicInt:
    """A single element of Z[zeta_level] in reduced form."""

    level: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != ring(self.level).degree:
            raise ValueError(
                f"expected {ring(self.level).degree} coefficients at level {self.level}"
            )

    @classmethod
    def integer(cls, level: int, n: int) -> CyclotomicInt:
        deg = ring(level).degree
        return cls(level, (int(n),) + (0,) * (deg - 1))

    @classmethod
    def root(cls, level: int, k: int) -> CyclotomicInt:
        """zeta_level ** k."""
        r = ring(level)
        return cls(level, tuple(int(c) for c in r.powers[k % level]))

    @classmethod
    def from_array(cls, level: int, arr) -> CyclotomicInt:
        return cls(level, tuple(int(c) for c in arr))

    def _check(self, other: CyclotomicInt) -> None:
        if other.level != self.level:
            raise ValueError("cyclotomic levels differ")

    def __add__(self, other: CyclotomicInt) -> CyclotomicInt:
        self._check(other)
        return CyclotomicInt(self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: CyclotomicInt) -> CyclotomicInt:
        self._check(other)
        return CyclotomicInt(self.level, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CyclotomicInt:
        return CyclotomicInt(self.level, tuple(-a for a in self.coeffs))

    def __mul__(self, other: CyclotomicInt) -> CyclotomicInt:
        self._check(other)
        r = ring(self.level)
        out = r.mul(np.array(self.coeffs, dtype=np.int64), np.array(other.coeffs, dtype=np.int64))
        return CyclotomicInt.from_array(self.level, out)

    def __pow__(self, n: int) -> CyclotomicInt:
        if n < 0:
            raise ValueError("negative powers are not integral in general")
        result = CyclotomicInt.integer(self.level, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> CyclotomicInt:
        r = ring(self.level)
        return CyclotomicInt.from_array(self.level, r.conj(np.array(self.coeffs, dtype=np.int64)))

    def is_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_integer() and self.coeffs[0] == other
        if isinstance(other, CyclotomicInt):
            return self.level == other.level and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.level, self.coeffs))

    def __str__(self) -> str:
        if self.is_integer():
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        return f"({' + '.join(terms)})_{self.level}"
