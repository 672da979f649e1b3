"""Finite abelian groups Z_m1 x ... x Z_mt, subsets, characters and convolution.

Elements are residue tuples.  The rank of an element is its mixed-radix index
with the *last* factor varying fastest, so a dense indicator reshaped to
``factors`` is indexed by residues directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import CyclotomicInt, ring

FAST_EXPONENTS = (2, 3, 4)
MAX_ORDER = 1 << 20


class GroupMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(m) for m in self.factors))
        if not self.factors:
            raise ValueError("a group needs at least one cyclic factor")
        if any(m < 2 for m in self.factors):
            raise ValueError(f"cyclic factors must be >= 2, got {self.factors}")
        if self.order > MAX_ORDER:
            raise ValueError(f"group order {self.order} exceeds {MAX_ORDER}")

    @classmethod
    def elementary(cls, p: int, n: int) -> GroupSpec:
        return cls((p,) * n)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.factors, 1)

    @property
    def rank_count(self) -> int:
        return len(self.factors)

    def is_elementary_abelian(self) -> bool:
        return len(set(self.factors)) == 1 and _is_prime(self.factors[0])

    def __str__(self) -> str:
        return " x ".join(f"Z{m}" for m in self.factors)

    # --- ranks -------------------------------------------------------------

    @cached_property
    def strides(self) -> np.ndarray:
        out = np.ones(len(self.factors), dtype=np.int64)
        for i in range(len(self.factors) - 2, -1, -1):
            out[i] = out[i + 1] * self.factors[i + 1]
        return out

    @cached_property
    def residues(self) -> np.ndarray:
        """(order, t) array; row i is unrank(i)."""
        grid = np.indices(self.factors, dtype=np.int64)
        res = grid.reshape(len(self.factors), -1).T.copy()
        res.setflags(write=False)
        return res

    @cached_property
    def _moduli(self) -> np.ndarray:
        return np.array(self.factors, dtype=np.int64)

    def rank(self, g: Sequence[int]) -> int:
        g = tuple(g)
        if len(g) != len(self.factors):
            raise ValueError(f"element {g} has wrong length for {self}")
        for r, m in zip(g, self.factors):
            if not 0 <= r < m:
                raise ValueError(f"residue {r} out of range for Z{m}")
        return int(np.dot(g, self.strides))

    def unrank(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.order:
            raise IndexError(f"rank {i} out of range for group of order {self.order}")
        return tuple(int(r) for r in self.residues[i])

    def ranks_of(self, residues: np.ndarray) -> np.ndarray:
        return (np.asarray(residues, dtype=np.int64) % self._moduli) @ self.strides

    # --- arithmetic --------------------------------------------------------

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.factors))

    def neg(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple((-a) % m for a, m in zip(x, self.factors))

    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    def translation(self, g_rank: int) -> np.ndarray:
        """idx with idx[y] = rank(y + g) for every rank y."""
        return self.ranks_of(self.residues + self.residues[g_rank])

    @cached_property
    def _shift_tables(self) -> list[np.ndarray]:
        # tables[j][g_j, y] = ((y_j + g_j) mod m_j) * stride_j
        out = []
        for j, m in enumerate(self.factors):
            col = self.residues[:, j]
            out.append(((col[None, :] + np.arange(m)[:, None]) % m) * self.strides[j])
        return out

    @cached_property
    def negation(self) -> np.ndarray:
        """idx with idx[y] = rank(-y)."""
        idx = self.ranks_of(-self.residues)
        idx.setflags(write=False)
        return idx

    # --- characters --------------------------------------------------------

    @cached_property
    def _char_steps(self) -> np.ndarray:
        # zeta_{m_j} = zeta_L ** (L / m_j)
        L = self.exponent
        return np.array([L // m for m in self.factors], dtype=np.int64)

    def character_exponents(self, label_rank: int) -> np.ndarray:
        """k[x] with chi_label(x) = zeta_L ** k[x], for every rank x."""
        a = self.residues[label_rank] * self._char_steps
        return (self.residues @ a) % self.exponent


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _check_same(g: GroupSpec, h: GroupSpec) -> None:
    if g != h:
        raise GroupMismatchError(f"groups differ: {g} vs {h}")


@dataclass(frozen=True, eq=False)
class SubsetIndicator:
    """Dense membership table of a subset of ``group``, indexed by rank."""

    group: GroupSpec
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.shape != (self.group.order,):
            raise ValueError(f"indicator must have length {self.group.order}")
        bits = bits.copy()
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_ranks(cls, group: GroupSpec, ranks: Iterable[int]) -> SubsetIndicator:
        bits = np.zeros(group.order, dtype=bool)
        bits[np.fromiter(ranks, dtype=np.int64)] = True
        return cls(group, bits)

    @classmethod
    def from_elements(cls, group: GroupSpec, elements: Iterable[Sequence[int]]) -> SubsetIndicator:
        return cls.from_ranks(group, (group.rank(e) for e in elements))

    @classmethod
    def empty(cls, group: GroupSpec) -> SubsetIndicator:
        return cls(group, np.zeros(group.order, dtype=bool))

    @classmethod
    def everything(cls, group: GroupSpec) -> SubsetIndicator:
        return cls(group, np.ones(group.order, dtype=bool))

    def __len__(self) -> int:
        return int(self.bits.sum())

    @property
    def cardinality(self) -> int:
        return len(self)

    def __contains__(self, g) -> bool:
        return bool(self.bits[self.group.rank(g)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubsetIndicator):
            return NotImplemented
        return self.group == other.group and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.group, self.bits.tobytes()))

    def ranks(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(int(r) for r in row) for row in self.group.residues[self.bits]]

    def negated(self) -> SubsetIndicator:
        return SubsetIndicator(self.group, self.bits[self.group.negation])

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.bits, self.bits[self.group.negation]))

    def contains_identity(self) -> bool:
        return bool(self.bits[0])

    def __or__(self, other: SubsetIndicator) -> SubsetIndicator:
        _check_same(self.group, other.group)
        return SubsetIndicator(self.group, self.bits | other.bits)

    def __and__(self, other: SubsetIndicator) -> SubsetIndicator:
        _check_same(self.group, other.group)
        return SubsetIndicator(self.group, self.bits & other.bits)

    def __sub__(self, other: SubsetIndicator) -> SubsetIndicator:
        _check_same(self.group, other.group)
        return SubsetIndicator(self.group, self.bits & ~other.bits)

    def complement(self) -> SubsetIndicator:
        return SubsetIndicator(self.group, ~self.bits)

    def without_identity(self) -> SubsetIndicator:
        bits = self.bits.copy()
        bits[0] = False
        return SubsetIndicator(self.group, bits)


# --- characters ------------------------------------------------------------


def character_value(group: GroupSpec, label: Sequence[int], x: Sequence[int]) -> CyclotomicInt:
    """chi_label(x) = prod_j zeta_{m_j} ** (a_j x_j), as an element of Z[zeta_exponent]."""
    if len(label) != group.rank_count or len(x) != group.rank_count:
        raise GroupMismatchError("label and element must belong to the group")
    L = group.exponent
    k = sum((L // m) * a * b for m, a, b in zip(group.factors, label, x)) % L
    return CyclotomicInt.root(L, k)


def character_sum(S: SubsetIndicator, label: Sequence[int]) -> CyclotomicInt:
    """Sum of chi_label over S, computed directly."""
    group = S.group
    L = group.exponent
    k = group.character_exponents(group.rank(label))[S.bits]
    counts = np.bincount(k, minlength=L)
    return CyclotomicInt.from_array(L, ring(L).from_exponent_counts(counts))


class CharacterSums:
    """All character sums of a subset, indexed by label rank."""

    def __init__(self, group: GroupSpec, coeffs: np.ndarray):
        self.group = group
        self.level = group.exponent
        self.coeffs = coeffs

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    def __getitem__(self, label_rank: int) -> CyclotomicInt:
        return CyclotomicInt.from_array(self.level, self.coeffs[label_rank])

    def rational_mask(self) -> np.ndarray:
        return ring(self.level).is_rational(self.coeffs)

    def all_rational(self) -> bool:
        return bool(self.rational_mask().all())

    def integers(self) -> np.ndarray:
        """Integer values; raises if any sum is irrational."""
        if not self.all_rational():
            bad = int(np.flatnonzero(~self.rational_mask())[0])
            raise ValueError(f"character sum at label {self.group.unrank(bad)} is not an integer")
        return self.coeffs[:, 0].copy()

    def norms(self) -> np.ndarray:
        """|chi(S)|^2 for each label, exact."""
        r = ring(self.level)
        prod = r.mul(self.coeffs, r.conj(self.coeffs))
        assert r.is_rational(prod).all()
        return prod[:, 0]


def _transform(group: GroupSpec, data: np.ndarray) -> np.ndarray:
    """Exact multidimensional DFT over Z[zeta_L].

    ``data`` has shape (order, deg); returns out[a] = sum_x zeta^{a.x} data[x].
    Axis by axis, each length-m DFT is an m x m matrix of multiplications by
    powers of zeta acting on coefficient vectors.
    """
    L = group.exponent
    r = ring(L)
    deg = r.degree
    cur = data.reshape(group.factors + (deg,))
    for axis, m in enumerate(group.factors):
        step = L // m
        a = np.arange(m)
        W = r.shift_matrices[(step * np.outer(a, a)) % L]  # (m, m, deg, deg)
        moved = np.moveaxis(cur, axis, 0)
        shape = moved.shape
        flat = moved.reshape(m, -1, deg)
        out = np.einsum("axij,xrj->ari", W, flat)
        cur = np.moveaxis(out.reshape(shape), 0, axis)
    return np.ascontiguousarray(cur).reshape(group.order, deg)


def _indicator_as_cyclotomic(S: SubsetIndicator) -> np.ndarray:
    deg = ring(S.group.exponent).degree
    data = np.zeros((S.group.order, deg), dtype=np.int64)
    data[:, 0] = S.bits
    return data


def all_character_sums(S: SubsetIndicator, *, fast: bool | None = None) -> CharacterSums:
    """Character sums of S over every label.

    The fast path is an exact decimation transform and is used for group
    exponents 2, 3 and 4; other exponents use per-label summation.
    """
    group = S.group
    if fast is None:
        fast = group.exponent in FAST_EXPONENTS
    if fast:
        if group.exponent not in FAST_EXPONENTS:
            raise ValueError(f"fast transform needs exponent in {FAST_EXPONENTS}")
        coeffs = _transform(group, _indicator_as_cyclotomic(S))
    else:
        L = group.exponent
        r = ring(L)
        members = group.residues[S.bits] * group._char_steps
        # exps[label, member] = a . x scaled to level L
        exps = (group.residues @ members.T) % L
        counts = np.zeros((group.order, L), dtype=np.int64)
        for k in range(L):
            counts[:, k] = (exps == k).sum(axis=1)
        coeffs = r.from_exponent_counts(counts)
    return CharacterSums(group, coeffs)


# --- counting --------------------------------------------------------------


def _shifted_sum(group: GroupSpec, bits: np.ndarray, shifts: np.ndarray, chunk: int = 64) -> np.ndarray:
    """out[y] = sum_{g in shifts} bits[y + g]."""
    out = np.zeros(group.order, dtype=np.int64)
    res = group.residues
    tables = group._shift_tables
    for start in range(0, len(shifts), chunk):
        block = res[shifts[start : start + chunk]]
        idx = tables[0][block[:, 0]]
        for j in range(1, len(tables)):
            idx = idx + tables[j][block[:, j]]
        out += bits[idx].sum(axis=0, dtype=np.int64)
    return out


def _direct_convolve(A: SubsetIndicator, B: SubsetIndicator) -> np.ndarray:
    group = A.group
    # counts[y] = sum_{z in A} B[y - z]
    return _shifted_sum(group, B.bits, group.negation[A.ranks()])


def indicator_spectrum(S: SubsetIndicator) -> np.ndarray:
    """Raw (order, deg) coefficient array of all character sums, via the fast transform."""
    if S.group.exponent not in FAST_EXPONENTS:
        raise ValueError(f"fast transform needs exponent in {FAST_EXPONENTS}")
    return _transform(S.group, _indicator_as_cyclotomic(S))


def _transform_convolve(A: SubsetIndicator, B: SubsetIndicator) -> np.ndarray:
    group = A.group
    r = ring(group.exponent)
    fa = _transform(group, _indicator_as_cyclotomic(A))
    fb = _transform(group, _indicator_as_cyclotomic(B))
    return inverse_spectrum(group, r.mul(fa, fb))


def inverse_spectrum(group: GroupSpec, spectrum: np.ndarray) -> np.ndarray:
    """Integer function on the group whose character sums are ``spectrum``."""
    r = ring(group.exponent)
    # f(y) = (1/v) sum_a F(a) zeta^{-a.y} = (1/v) * forward(F)(-y)
    back = _transform(group, spectrum)[group.negation]
    if not r.is_rational(back).all():
        raise ArithmeticError("inverse transform left an irrational residue")
    vals = back[:, 0]
    q, rem = np.divmod(vals, group.order)
    if rem.any():
        raise ArithmeticError("inverse transform is not divisible by the group order")
    return q


def convolve(A: SubsetIndicator, B: SubsetIndicator, *, method: str = "auto") -> np.ndarray:
    """counts[y] = #{z in A : y - z in B}, for every rank y."""
    _check_same(A.group, B.group)
    if method == "auto":
        method = "transform" if A.group.exponent in FAST_EXPONENTS else "direct"
    if method == "transform":
        return _transform_convolve(A, B)
    if method == "direct":
        return _direct_convolve(A, B)
    raise ValueError(f"unknown convolution method {method!r}")


def difference_counts(S: SubsetIndicator) -> np.ndarray:
    """counts[g] = #{(d1, d2) in S x S : d1 != d2, d1 - d2 = g}.

    Brute force over the members of S; deliberately independent of the
    transform machinery.
    """
    group = S.group
    # y = d1 - d2  <=>  d1 = y + d2
    counts = _shifted_sum(group, S.bits, S.ranks())
    counts[0] -= len(S)
    return counts
