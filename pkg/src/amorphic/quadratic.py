"""Quadratic forms Q(x) = sum_{i<=j} c_ij x_i x_j over a finite field."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .fields import FieldSpec
from .groups import SubsetIndicator

ELLIPTIC = "elliptic"
HYPERBOLIC = "hyperbolic"


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class FormType:
    kind: str
    zero_count: int

    @property
    def sign(self) -> int:
        return -1 if self.kind == ELLIPTIC else 1


def expected_zero_count(q: int, dim: int, kind: str) -> int:
    """Number of nonzero zeros of a nonsingular form of the given type."""
    h = dim // 2
    if kind == ELLIPTIC:
        return (q**h + 1) * (q ** (h - 1) - 1)
    if kind == HYPERBOLIC:
        return (q**h - 1) * (q ** (h - 1) + 1)
    raise FormError(f"unknown form type {kind!r}")


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    field: FieldSpec
    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(c) for c in row) for row in self.coeffs)
        m = len(rows)
        if any(len(r) != m for r in rows):
            raise FormError("coefficient matrix must be square")
        for i in range(m):
            for j in range(i):
                if rows[i][j]:
                    raise FormError("coefficient matrix must be upper triangular")
        if any(not 0 <= c < self.field.q for r in rows for c in r):
            raise FormError("coefficients must be field elements")
        object.__setattr__(self, "coeffs", rows)

    @classmethod
    def from_terms(cls, field: FieldSpec, dim: int, terms: dict[tuple[int, int], int]) -> QuadraticForm:
        """Build from {(i, j): c} with i <= j (0-based)."""
        mat = [[0] * dim for _ in range(dim)]
        for (i, j), c in terms.items():
            if i > j:
                i, j = j, i
            mat[i][j] = int(field.add(mat[i][j], c))
        return cls(field, tuple(tuple(r) for r in mat))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticForm) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    @cached_property
    def _terms(self) -> list[tuple[int, int, int]]:
        m = self.dim
        return [(i, j, self.coeffs[i][j]) for i in range(m) for j in range(i, m) if self.coeffs[i][j]]

    def evaluate(self, v: Sequence[int]) -> int:
        if len(v) != self.dim:
            raise FormError(f"vector of length {len(v)} for a form of dimension {self.dim}")
        return int(self.evaluate_many(np.asarray(v, dtype=np.int64)[None, :])[0])

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        """Evaluate on each row of X."""
        X = np.asarray(X, dtype=np.int64)
        if X.shape[-1] != self.dim:
            raise FormError("dimension mismatch")
        F = self.field
        acc = np.zeros(X.shape[:-1], dtype=np.int64)
        for i, j, c in self._terms:
            acc = F.add_table[acc, F.mul_table[c, F.mul_table[X[..., i], X[..., j]]]]
        return acc

    def polarize(self, v1: Sequence[int], v2: Sequence[int]) -> int:
        """B(v1, v2) = Q(v1 + v2) - Q(v1) - Q(v2)."""
        if len(v1) != self.dim or len(v2) != self.dim:
            raise FormError("dimension mismatch")
        F = self.field
        s = [int(F.add(a, b)) for a, b in zip(v1, v2)]
        return int(F.sub(F.sub(self.evaluate(s), self.evaluate(v1)), self.evaluate(v2)))

    def gram_matrix(self) -> np.ndarray:
        m = self.dim
        basis = np.eye(m, dtype=np.int64)
        G = np.zeros((m, m), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                G[i, j] = self.polarize(basis[i], basis[j])
        return G

    def radical(self) -> list[tuple[int, ...]]:
        """Vectors w with B(w, .) = 0 and Q(w) = 0."""
        F = self.field
        kernel = nullspace(F, self.gram_matrix())
        out = []
        for combo in itertools.product(range(F.q), repeat=len(kernel)):
            w = np.zeros(self.dim, dtype=np.int64)
            for c, b in zip(combo, kernel):
                w = F.add_table[w, F.mul_table[c, b]]
            if self.evaluate(w) == 0:
                out.append(tuple(int(x) for x in w))
        return out

    def is_nonsingular(self) -> bool:
        return len(self.radical()) == 1

    def scalar_multiple(self, gamma: int) -> QuadraticForm:
        if gamma == 0:
            raise FormError("scalar multiple by zero")
        F = self.field
        return QuadraticForm(F, tuple(tuple(int(F.mul(gamma, c)) for c in row) for row in self.coeffs))

    # --- whole-space evaluation --------------------------------------------

    @cached_property
    def values_on_group(self) -> np.ndarray:
        """Q evaluated at every element of the additive group, indexed by rank."""
        vals = self.evaluate_many(self.field.vectors_of_group(self.dim))
        vals.setflags(write=False)
        return vals

    def group(self):
        return self.field.additive_group(self.dim)

    def level_set(self, beta: int, exclude_zero_vector: bool = False) -> SubsetIndicator:
        bits = self.values_on_group == beta
        if exclude_zero_vector:
            bits = bits.copy()
            bits[0] = False
        return SubsetIndicator(self.group(), bits)

    def nonzero_zero_count(self) -> int:
        return int((self.values_on_group == 0).sum()) - 1

    def classify_type(self) -> FormType:
        if self.dim % 2:
            raise FormError("only even-dimensional forms have a type")
        n = self.nonzero_zero_count()
        for kind in (ELLIPTIC, HYPERBOLIC):
            if n == expected_zero_count(self.field.q, self.dim, kind):
                return FormType(kind, n)
        raise FormError(f"zero count {n} matches neither elliptic nor hyperbolic")

    # --- trace composition -------------------------------------------------

    def trace_compose(self, sub_degree: int) -> QuadraticForm:
        """tr_{q/q0} o Q as a form over the subfield, on the flattened space.

        Each coordinate expands into e = s/sub_degree subfield coordinates in the
        basis 1, x, ..., x^(e-1), coordinate-major.
        """
        F = self.field
        sub = F.subfield(sub_degree)
        basis = sub.relative_basis
        e = len(basis)
        n = self.dim * e
        tr = F.trace_table(sub_degree)
        unit = []
        for i in range(self.dim):
            for b in basis:
                v = [0] * self.dim
                v[i] = b
                unit.append(v)
        terms = {}
        for u in range(n):
            terms[(u, u)] = int(sub.restrict(tr[self.evaluate(unit[u])]))
            for w in range(u + 1, n):
                terms[(u, w)] = int(sub.restrict(tr[self.polarize(unit[u], unit[w])]))
        return QuadraticForm.from_terms(sub.spec, n, terms)

    def flatten(self, v: Sequence[int], sub_degree: int) -> tuple[int, ...]:
        coords = self.field.subfield(sub_degree).relative_coords
        return tuple(int(c) for x in v for c in coords[x])


def nullspace(F: FieldSpec, M: np.ndarray) -> list[np.ndarray]:
    """Basis of {w : M w = 0} over F, by Gaussian elimination."""
    A = np.array(M, dtype=np.int64) % F.q
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = F.mul_table[F.inv(int(A[r, c])), A[r]]
        for i in range(rows):
            if i != r and A[i, c]:
                factor = F.neg_table[A[i, c]]
                A[i] = F.add_table[A[i], F.mul_table[factor, A[r]]]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        w = np.zeros(cols, dtype=np.int64)
        w[f] = 1
        for i, c in enumerate(pivots):
            w[c] = F.neg_table[A[i, f]]
        basis.append(w)
    return basis


def _binary_form_is_anisotropic(F: FieldSpec, a: int, b: int) -> bool:
    # a x^2 + x y + b y^2 has only the trivial zero
    for x in range(F.q):
        for y in range(F.q):
            if (x or y):
                val = F.add(F.add(F.mul(a, F.mul(x, x)), F.mul(x, y)), F.mul(b, F.mul(y, y)))
                if val == 0:
                    return False
    return True


def irreducible_binary_form(F: FieldSpec) -> tuple[int, int]:
    """Smallest (a, b) with a x1^2 + x1 x2 + b x2^2 anisotropic; b varies slowest."""
    for b in range(F.q):
        for a in range(F.q):
            if _binary_form_is_anisotropic(F, a, b):
                return a, b
    raise FormError("no irreducible binary quadratic form found")  # pragma: no cover


def _hyperbolic_terms(start: int, dim: int) -> dict[tuple[int, int], int]:
    return {(i, i + 1): 1 for i in range(start, dim, 2)}


def standard_elliptic(F: FieldSpec, ell: int) -> QuadraticForm:
    """a x1^2 + x1 x2 + b x2^2 + x3 x4 + ... + x_{2l-1} x_{2l}."""
    if ell < 1:
        raise FormError("ell must be >= 1")
    a, b = irreducible_binary_form(F)
    terms = {(0, 0): a, (0, 1): 1, (1, 1): b}
    terms.update(_hyperbolic_terms(2, 2 * ell))
    return QuadraticForm.from_terms(F, 2 * ell, terms)


def standard_hyperbolic(F: FieldSpec, ell: int) -> QuadraticForm:
    """x1 x2 + x3 x4 + ... + x_{2l-1} x_{2l}."""
    if ell < 1:
        raise FormError("ell must be >= 1")
    return QuadraticForm.from_terms(F, 2 * ell, _hyperbolic_terms(0, 2 * ell))


def standard_form(F: FieldSpec, ell: int, kind: str) -> QuadraticForm:
    if kind == ELLIPTIC:
        return standard_elliptic(F, ell)
    if kind == HYPERBOLIC:
        return standard_hyperbolic(F, ell)
    raise FormError(f"unknown form type {kind!r}")
