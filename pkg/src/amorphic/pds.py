"""Partial difference set verification by differences and by characters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .groups import SubsetIndicator, all_character_sums, difference_counts


class PdsPreconditionError(ValueError):
    pass


class IdentityInSetError(PdsPreconditionError):
    pass


class AsymmetricSetError(PdsPreconditionError):
    pass


class MethodDisagreement(RuntimeError):
    """The two verifiers returned different verdicts on the same subset."""


@dataclass(frozen=True)
class PdsParameters:
    v: int
    k: int
    lam: int
    mu: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)

    def satisfies_counting_identity(self) -> bool:
        return self.k * (self.k - 1) - self.lam * self.k == self.mu * (self.v - self.k - 1)

    def __str__(self) -> str:
        return f"({self.v},{self.k},{self.lam},{self.mu})"


@dataclass(frozen=True)
class LatinType:
    epsilon: int
    n: int
    r: int

    @property
    def name(self) -> str:
        return "Latin square" if self.epsilon == 1 else "negative Latin square"

    def parameters(self) -> PdsParameters:
        return latin_parameters(self.epsilon, self.n, self.r)


def latin_parameters(epsilon: int, n: int, r: int) -> PdsParameters:
    """(n^2, r(n-e), e n + r^2 - 3 e r, r^2 - e r)."""
    return PdsParameters(n * n, r * (n - epsilon), epsilon * n + r * r - 3 * epsilon * r, r * r - epsilon * r)


@dataclass
class PdsCheck:
    ok: bool
    method: str
    params: PdsParameters | None = None
    trivial: bool = False
    reason: str = ""
    witness: tuple[int, ...] | None = None
    witness_value: object = None
    spectrum: dict[int, int] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def _check_preconditions(S: SubsetIndicator) -> None:
    if S.contains_identity():
        raise IdentityInSetError("the identity lies in the subset")
    if not S.is_symmetric():
        bad = int(np.flatnonzero(S.bits & ~S.bits[S.group.negation])[0])
        raise AsymmetricSetError(f"{S.group.unrank(bad)} is in the subset but its negative is not")


def verify_pds_by_differences(S: SubsetIndicator) -> PdsCheck:
    """Count every difference d1 - d2 and check it is lambda on S and mu off S."""
    _check_preconditions(S)
    group = S.group
    v, k = group.order, len(S)
    counts = difference_counts(S)
    inside = S.bits
    outside = ~S.bits
    outside[0] = False
    lam = int(counts[inside][0]) if k else 0
    bad = np.flatnonzero(inside & (counts != lam))
    if bad.size:
        g = int(bad[0])
        return PdsCheck(False, "differences", reason=f"difference count {counts[g]} != lambda={lam} inside the set",
                        witness=group.unrank(g), witness_value=int(counts[g]))
    trivial = not outside.any() or k == 0
    mu = int(counts[outside][0]) if outside.any() else 0
    bad = np.flatnonzero(outside & (counts != mu))
    if bad.size:
        g = int(bad[0])
        return PdsCheck(False, "differences", reason=f"difference count {counts[g]} != mu={mu} outside the set",
                        witness=group.unrank(g), witness_value=int(counts[g]))
    return PdsCheck(True, "differences", PdsParameters(v, k, lam, mu), trivial=trivial)


def parameters_from_spectrum(v: int, k: int, values: list[int]) -> tuple[int, int] | None:
    """Recover (lambda, mu) from the nonprincipal character values, or None."""
    if len(values) == 2:
        t1, t2 = values
        mu = k + t1 * t2
        lam = mu + t1 + t2
    elif len(values) == 1:
        (t,) = values
        if v - k - 1 == 0:
            return k - 1, 0
        # lam k + mu (v-k-1) = k^2 - k  and  lam t - mu (t+1) = t^2 - k
        det = Fraction(-k * (t + 1) - t * (v - k - 1))
        if det == 0:
            return None
        lam_f = (Fraction(k * k - k) * (-(t + 1)) - Fraction(v - k - 1) * (t * t - k)) / det
        mu_f = (Fraction(k) * (t * t - k) - Fraction(t) * (k * k - k)) / det
        if lam_f.denominator != 1 or mu_f.denominator != 1:
            return None
        lam, mu = int(lam_f), int(mu_f)
    else:
        return None
    if lam < 0 or mu < 0:
        return None
    if k * k != k + lam * k + mu * (v - k - 1):
        return None
    return lam, mu


def verify_pds_by_characters(S: SubsetIndicator) -> PdsCheck:
    """Check that the nonprincipal character sums take at most two integer values
    consistent with some (lambda, mu)."""
    _check_preconditions(S)
    group = S.group
    v, k = group.order, len(S)
    sums = all_character_sums(S)
    rational = sums.rational_mask()
    rational[0] = True
    if not rational.all():
        bad = int(np.flatnonzero(~rational)[0])
        return PdsCheck(False, "characters", reason="non-integer character sum",
                        witness=group.unrank(bad), witness_value=str(sums[bad]))
    vals = sums.coeffs[:, 0]
    assert vals[0] == k
    nonprincipal = vals[1:]
    distinct, first_idx, counts = np.unique(nonprincipal, return_index=True, return_counts=True)
    spectrum = {int(a): int(c) for a, c in zip(distinct, counts)}
    if k == 0:
        return PdsCheck(True, "characters", PdsParameters(v, 0, 0, 0), trivial=True, spectrum=spectrum)
    if len(distinct) > 2:
        # the label whose value appears latest among the first occurrences
        order = np.argsort(first_idx)
        bad = int(first_idx[order[2]]) + 1
        return PdsCheck(False, "characters", reason="more than two nonprincipal character values",
                        witness=group.unrank(bad), witness_value=int(vals[bad]), spectrum=spectrum)
    found = parameters_from_spectrum(v, k, [int(x) for x in distinct])
    if found is None:
        bad = 1
        return PdsCheck(False, "characters", reason="character values fit no (lambda, mu)",
                        witness=group.unrank(bad), witness_value=int(vals[bad]), spectrum=spectrum)
    lam, mu = found
    return PdsCheck(True, "characters", PdsParameters(v, k, lam, mu), trivial=(v - k - 1 == 0),
                    spectrum=spectrum)


def verify_pds(S: SubsetIndicator, method: str = "differences") -> PdsCheck:
    """Run one verifier, or both with a cross-check when ``method='both'``."""
    if method == "differences":
        return verify_pds_by_differences(S)
    if method == "characters":
        return verify_pds_by_characters(S)
    if method != "both":
        raise ValueError(f"unknown method {method!r}")
    a = verify_pds_by_differences(S)
    b = verify_pds_by_characters(S)
    if a.ok != b.ok or (a.ok and a.params != b.params):
        raise MethodDisagreement(f"differences: {a.ok} {a.params}; characters: {b.ok} {b.params}")
    if a.ok:
        a.method = "both"
        a.spectrum = b.spectrum
    return a


def latin_types(params: PdsParameters) -> list[LatinType]:
    """Every (epsilon, n, r) whose Latin formulas reproduce ``params``.

    Some tuples fit both signs, e.g. (9,4,1,2) is (-1,3,1) and (+1,3,2).
    """
    n = math.isqrt(params.v)
    if n * n != params.v or params.k == 0:
        return []
    out = []
    for eps in (-1, 1):
        if params.k % (n - eps):
            continue
        r = params.k // (n - eps)
        if r > 0 and latin_parameters(eps, n, r) == params:
            out.append(LatinType(eps, n, r))
    return out


def classify_latin_type(params: PdsParameters) -> LatinType | None:
    """The negative Latin reading if it fits, else the Latin one, else None."""
    found = latin_types(params)
    return found[0] if found else None
