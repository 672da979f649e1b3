"""The Galois ring R = GR(4,2) = Z_4[xi], xi^2 + xi + 1 = 0.

Elements are pairs (a0, a1) meaning a0 + a1*xi with entries in Z_4.  The
residue field R/2R is the F_4 of :func:`field4`, whose element ``2`` is
alpha = pi(xi) and ``3`` is alpha^2 = alpha + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cyclotomic import CyclotomicInt
from .fields import FieldSpec
from .groups import GroupSpec


def field4() -> FieldSpec:
    return FieldSpec.of_order(4)


@dataclass(frozen=True)
class RingElement:
    a0: int
    a1: int

    def __post_init__(self):
        object.__setattr__(self, "a0", self.a0 % 4)
        object.__setattr__(self, "a1", self.a1 % 4)

    def __add__(self, other: RingElement) -> RingElement:
        return RingElement(self.a0 + other.a0, self.a1 + other.a1)

    def __sub__(self, other: RingElement) -> RingElement:
        return RingElement(self.a0 - other.a0, self.a1 - other.a1)

    def __neg__(self) -> RingElement:
        return RingElement(-self.a0, -self.a1)

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.a0 * other, self.a1 * other)
        a, b, c, d = self.a0, self.a1, other.a0, other.a1
        # (a + b xi)(c + d xi) = ac + (ad + bc) xi + bd xi^2,  xi^2 = -1 - xi
        return RingElement(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> RingElement:
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def is_unit(self) -> bool:
        return bool(self.a0 % 2 or self.a1 % 2)

    def in_maximal_ideal(self) -> bool:
        return not self.is_unit()

    def __str__(self) -> str:
        return f"{self.a0}+{self.a1}xi"


ZERO = RingElement(0, 0)
ONE = RingElement(1, 0)
XI = RingElement(0, 1)
TEICHMULLER = (ZERO, ONE, XI, XI * XI)


def elements() -> list[RingElement]:
    return [RingElement(a0, a1) for a0 in range(4) for a1 in range(4)]


def pi_reduction(beta: RingElement) -> int:
    """The epimorphism R -> R/2R = F_4."""
    return field4().from_coeffs((beta.a0 % 2, beta.a1 % 2))


def teichmuller_lift(x: int) -> RingElement:
    """pi_T^{-1}: the unique Teichmuller representative reducing to x."""
    for t in TEICHMULLER:
        if pi_reduction(t) == x:
            return t
    raise ValueError(f"{x} is not an element of F_4")


def two_adic_decompose(beta: RingElement) -> tuple[RingElement, RingElement]:
    """(b1, b2) in T x T with beta = b1 + 2 b2."""
    b1 = teichmuller_lift(pi_reduction(beta))
    rest = beta - b1
    assert rest.a0 % 2 == 0 and rest.a1 % 2 == 0
    b2 = teichmuller_lift(pi_reduction(RingElement(rest.a0 // 2, rest.a1 // 2)))
    return b1, b2


def frobenius(beta: RingElement) -> RingElement:
    b1, b2 = two_adic_decompose(beta)
    return b1 * b1 + 2 * (b2 * b2)


def trace_Tr(beta: RingElement) -> int:
    """Tr(beta) = beta + f(beta), an element of Z_4."""
    t = beta + frobenius(beta)
    if t.a1:
        raise ArithmeticError(f"trace of {beta} left Z_4")
    return t.a0


def ring_character(beta: RingElement, x: RingElement) -> CyclotomicInt:
    """psi_beta(x) = sqrt(-1)^Tr(beta x)."""
    return CyclotomicInt.root(4, trace_Tr(beta * x))


# --- the lift F : F_4^{2l} -> R x F_4^{2l-2} ---------------------------------


def lift_F(x: Sequence[int]) -> tuple[RingElement, tuple[int, ...]]:
    if len(x) < 2 or len(x) % 2:
        raise ValueError("lift_F needs a vector of even length >= 2")
    head = teichmuller_lift(x[0]) + 2 * teichmuller_lift(x[1])
    return head, tuple(int(c) for c in x[2:])


def unlift_F_inv(head: RingElement, tail: Sequence[int]) -> tuple[int, ...]:
    b1, b2 = two_adic_decompose(head)
    return (pi_reduction(b1), pi_reduction(b2)) + tuple(int(c) for c in tail)


# --- bridge to group_core ----------------------------------------------------


def ring_group() -> GroupSpec:
    return GroupSpec((4, 4))


def product_group(ell: int) -> GroupSpec:
    """Additive group of R x F_4^{2l-2}, i.e. Z_4^2 x Z_2^{4l-4}."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if ell == 1:
        return ring_group()
    return GroupSpec((4, 4) + (2,) * (4 * ell - 4))


def ring_to_group(beta: RingElement) -> tuple[int, int]:
    return (beta.a0, beta.a1)


def group_to_ring(g: Sequence[int]) -> RingElement:
    return RingElement(g[0], g[1])


def product_to_group(head: RingElement, tail: Sequence[int]) -> tuple[int, ...]:
    F = field4()
    return ring_to_group(head) + F.vector_as_group_element(tail)


def group_to_product(g: Sequence[int]) -> tuple[RingElement, tuple[int, ...]]:
    return group_to_ring(g[:2]), field4().vector_from_group_element(tuple(g[2:]))


def character_label(beta: RingElement, w: Sequence[int]) -> tuple[int, ...]:
    """Group label of psi_beta (x) chi_w, so that group characters agree with it.

    Tr(beta r) is Z_4-linear in r = a0 + a1 xi, and tr(w x) is F_2-linear in
    the coefficients of x, so both are dot products with these labels.
    """
    F = field4()
    head = (trace_Tr(beta), trace_Tr(beta * XI))
    tail = []
    for wi in w:
        tail += [int(F.trace(wi, 1)), int(F.trace(F.mul(wi, 2), 1))]
    return head + tuple(tail)


def product_character(beta: RingElement, w: Sequence[int], head: RingElement,
                      tail: Sequence[int]) -> CyclotomicInt:
    """(psi_beta (x) chi_w)(head, tail), evaluated through the ring and field traces."""
    F = field4()
    k = trace_Tr(beta * head)
    t = 0
    for wi, xi in zip(w, tail):
        t ^= int(F.trace(F.mul(wi, xi), 1))
    return CyclotomicInt.root(4, k + 2 * t)
