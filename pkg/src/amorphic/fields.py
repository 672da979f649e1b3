"""Finite fields F_{p^s} in a polynomial basis, with subfields and traces.

A field element is an ``int`` in ``range(q)`` whose base-p digits are the
coefficients of 1, x, ..., x^(s-1) (constant term least significant).  All
arithmetic goes through precomputed numpy tables, so whole arrays of elements
can be combined at once.
"""

from __future__ import annotations

import itertools
import math
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .groups import GroupSpec

MAX_FIELD_ORDER = 1024

# Conway polynomials, coefficients low degree first.
BUILTIN_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (3, 1): (1, 1),
    (5, 1): (3, 1),
    (7, 1): (4, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, s) with q = p**s, or raise."""
    for p in range(2, q + 1):
        if q % p == 0:
            s, rest = 0, q
            while rest % p == 0:
                rest //= p
                s += 1
            if rest != 1 or not _is_prime(p):
                break
            return p, s
    raise FieldError(f"{q} is not a prime power")


def _poly_mod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    n = len(mod) - 1
    lead_inv = pow(mod[-1], -1, p)
    for i in range(len(a) - 1, n - 1, -1):
        c = a[i] * lead_inv % p
        if c:
            for j, m in enumerate(mod):
                a[i - n + j] = (a[i - n + j] - c * m) % p
    return (a + [0] * n)[:n]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = list(poly)
    n = len(poly) - 1
    if n < 1 or poly[-1] % p == 0:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not any(_poly_mod(poly, divisor, p)):
                return False
    return True


def _smallest_irreducible(p: int, s: int) -> tuple[int, ...]:
    for tail in itertools.product(range(p), repeat=s):
        cand = tuple(reversed(tail)) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {s} over F_{p}")


class FieldSpec:
    """The field F_{p^s} = F_p[x] / (modulus)."""

    def __init__(self, p: int, s: int, modulus: Sequence[int] | None = None,
                 primitive_element: int | None = None):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if s < 1:
            raise FieldError("degree must be at least 1")
        if p**s > MAX_FIELD_ORDER:
            raise FieldError(f"field order {p**s} exceeds {MAX_FIELD_ORDER}")
        if modulus is None:
            modulus = BUILTIN_MODULI.get((p, s)) or _smallest_irreducible(p, s)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != s + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {s}")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.s = s
        self.q = p**s
        self.modulus = modulus
        self._build_tables()
        if primitive_element is None:
            primitive_element = self._find_primitive()
        elif self.multiplicative_order(primitive_element) != self.q - 1:
            raise FieldError(f"{primitive_element} is not a primitive element")
        self.primitive_element = int(primitive_element)
        g = self.primitive_element
        exp = np.empty(self.q - 1, dtype=np.int64)
        cur = 1
        for k in range(self.q - 1):
            exp[k] = cur
            cur = int(self.mul_table[cur, g])
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(self.q - 1)
        self.exp_table = exp
        self.log_table = log

    @classmethod
    @lru_cache(maxsize=None)
    def of_order(cls, q: int) -> FieldSpec:
        p, s = prime_power(q)
        return cls(p, s)

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, s={self.s}, modulus={self.modulus})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldSpec) and (self.p, self.s, self.modulus, self.primitive_element)
                == (other.p, other.s, other.modulus, other.primitive_element))

    def __hash__(self) -> int:
        return hash((self.p, self.s, self.modulus, self.primitive_element))

    # --- construction ------------------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.s):
            x, c = divmod(x, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, c: Sequence[int]) -> int:
        if len(c) != self.s:
            raise FieldError(f"expected {self.s} coefficients")
        return sum((int(ci) % self.p) * self.p**i for i, ci in enumerate(c))

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        digits = np.array([self.coeffs(x) for x in range(q)], dtype=np.int64).reshape(q, self.s)
        weights = p ** np.arange(self.s, dtype=np.int64)
        self._digits = digits
        self.add_table = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg_table = ((-digits) % p) @ weights
        # reduce[k] = coefficients of x^k modulo the modulus, k < 2s - 1
        reduce = np.array([_poly_mod([0] * k + [1], self.modulus, p) for k in range(2 * self.s - 1)],
                          dtype=np.int64).reshape(2 * self.s - 1, self.s)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            full = np.zeros((q, 2 * self.s - 1), dtype=np.int64)
            for i in range(self.s):
                full[:, i : i + self.s] += digits[a, i] * digits
            mul[a] = ((full @ reduce) % p) @ weights
        self.mul_table = mul

    def multiplicative_order(self, x: int) -> int:
        if x == 0:
            raise FieldError("zero has no multiplicative order")
        cur, k = x, 1
        while cur != 1:
            cur = int(self.mul_table[cur, x])
            k += 1
        return k

    def _find_primitive(self) -> int:
        for x in range(1, self.q):
            if self.multiplicative_order(x) == self.q - 1:
                return x
        raise FieldError("no primitive element")  # pragma: no cover

    # --- arithmetic --------------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def add(self, x, y):
        return self.add_table[x, y]

    def sub(self, x, y):
        return self.add_table[x, self.neg_table[y]]

    def neg(self, x):
        return self.neg_table[x]

    def mul(self, x, y):
        return self.mul_table[x, y]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return int(self.exp_table[(-self.log_table[x]) % (self.q - 1)])

    def pow(self, x: int, n: int) -> int:
        if x == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if n == 0 else 0
        return int(self.exp_table[(self.log_table[x] * n) % (self.q - 1)])

    def gen_pow(self, k: int) -> int:
        """g ** k for the primitive element g."""
        return int(self.exp_table[k % (self.q - 1)])

    @cached_property
    def frobenius_table(self) -> np.ndarray:
        return np.array([self.pow(x, self.p) for x in range(self.q)], dtype=np.int64)

    # --- subfields and traces ------------------------------------------------

    def _check_sub_degree(self, sub_degree: int) -> None:
        if sub_degree < 1 or self.s % sub_degree:
            raise FieldError(f"{sub_degree} does not divide the degree {self.s}")

    @lru_cache(maxsize=None)
    def trace_table(self, sub_degree: int) -> np.ndarray:
        """tr(x) = sum_{i<e} x^(q0^i) with q0 = p^sub_degree, as elements of this field."""
        self._check_sub_degree(sub_degree)
        e = self.s // sub_degree
        q0 = self.p**sub_degree
        out = np.zeros(self.q, dtype=np.int64)
        for x in range(self.q):
            acc, term = 0, x
            for _ in range(e):
                acc = int(self.add_table[acc, term])
                term = self.pow(term, q0)
            out[x] = acc
        return out

    def trace(self, x, sub_degree: int = 1):
        return self.trace_table(sub_degree)[x]

    @lru_cache(maxsize=None)
    def subfield(self, sub_degree: int) -> Subfield:
        self._check_sub_degree(sub_degree)
        return Subfield(self, sub_degree)

    def trace_to_subfield(self, x, sub_degree: int):
        """Trace down to F_{p^sub_degree}, returned as elements of that subfield's spec."""
        sub = self.subfield(sub_degree)
        return sub.restrict(self.trace_table(sub_degree)[x])

    # --- additive group ----------------------------------------------------

    def additive_group(self, n: int = 1) -> GroupSpec:
        return GroupSpec.elementary(self.p, self.s * n)

    def as_group_element(self, x: int) -> tuple[int, ...]:
        return self.coeffs(x)

    def vector_as_group_element(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(c for x in v for c in self.coeffs(x))

    def vector_from_group_element(self, g: Sequence[int]) -> tuple[int, ...]:
        s = self.s
        return tuple(self.from_coeffs(g[i : i + s]) for i in range(0, len(g), s))

    def vectors_of_group(self, n: int) -> np.ndarray:
        """(p^(s n), n) array: row r holds the field vector of group rank r."""
        group = self.additive_group(n)
        res = group.residues.reshape(group.order, n, self.s)
        weights = self.p ** np.arange(self.s, dtype=np.int64)
        return res @ weights


class Subfield:
    """F_{p^d} inside a FieldSpec, with its own compatible FieldSpec.

    The subfield spec's modulus is the minimal polynomial of
    h = g^((q-1)/(q0-1)); its primitive element is the preimage of h, so
    the embedding sends the subfield generator to h.
    """

    def __init__(self, big: FieldSpec, degree: int):
        self.big = big
        self.degree = degree
        q0 = big.p**degree
        h = big.gen_pow((big.q - 1) // (q0 - 1))
        self.generator_image = h
        p = big.p
        if degree == 1:
            spec = FieldSpec(p, 1, ((-h) % p, 1), primitive_element=h)
            embed = np.arange(p, dtype=np.int64)
        else:
            powers = [1]
            for _ in range(degree):
                powers.append(int(big.mul_table[powers[-1], h]))
            modulus = _minimal_polynomial(big, powers, degree)
            spec = FieldSpec(p, degree, modulus, primitive_element=p)
            embed = np.zeros(spec.q, dtype=np.int64)
            for y in range(spec.q):
                acc = 0
                for c, hp in zip(spec.coeffs(y), powers):
                    for _ in range(c):
                        acc = int(big.add_table[acc, hp])
                embed[y] = acc
        self.spec = spec
        self.embed_table = embed
        restrict = np.full(big.q, -1, dtype=np.int64)
        restrict[embed] = np.arange(spec.q)
        self.restrict_table = restrict
        assert len(set(embed.tolist())) == spec.q

    def embed(self, y):
        return self.embed_table[y]

    def restrict(self, x):
        out = self.restrict_table[x]
        if np.any(np.asarray(out) < 0):
            raise FieldError("element does not lie in the subfield")
        return out

    def contains(self, x) -> bool:
        return bool(self.restrict_table[x] >= 0)

    @cached_property
    def relative_basis(self) -> list[int]:
        """1, x, ..., x^(e-1): a basis of the big field over this subfield."""
        e = self.big.s // self.degree
        xgen = self.big.p if self.big.s > 1 else 1
        out = [1]
        for _ in range(e - 1):
            out.append(int(self.big.mul_table[out[-1], xgen]))
        return out

    @cached_property
    def relative_coords(self) -> np.ndarray:
        """(q, e) array: coordinates over this subfield in ``relative_basis``."""
        big = self.big
        basis = self.relative_basis
        out = np.full((big.q, len(basis)), -1, dtype=np.int64)
        for combo in itertools.product(range(self.spec.q), repeat=len(basis)):
            acc = 0
            for c, b in zip(combo, basis):
                acc = int(big.add_table[acc, big.mul_table[self.embed_table[c], b]])
            out[acc] = combo
        if (out < 0).any():
            raise FieldError("relative basis does not span the field")
        return out


def _minimal_polynomial(big: FieldSpec, powers: list[int], degree: int) -> tuple[int, ...]:
    # Find monic c_0 + c_1 h + ... + h^degree = 0 by search over F_p^degree.
    p = big.p
    for tail in itertools.product(range(p), repeat=degree):
        acc = powers[degree]
        for c, hp in zip(tail, powers):
            for _ in range(c):
                acc = int(big.add_table[acc, hp])
        if acc == 0:
            return tuple(tail) + (1,)
    raise FieldError("no minimal polynomial found")  # pragma: no cover


def trace_zero_elements(q: int) -> list[int]:
    """Kernel of tr_{q^2/q} listed by the explicit power-of-g description.

    Even q: {0} u {g^((q+1) i)}; odd q: {0} u {g^((q+1)/2 + (q+1) i)}, 0 <= i < q-1.
    """
    p, s = prime_power(q)
    big = FieldSpec.of_order(q * q)
    if p == 2:
        offset = 0
    else:
        offset = (q + 1) // 2
    return [0] + [big.gen_pow(offset + (q + 1) * i) for i in range(q - 1)]
