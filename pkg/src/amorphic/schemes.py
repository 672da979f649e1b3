"""Translation association schemes: assembly, intersection numbers, fusions, amorphy."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .cyclotomic import ring
from .groups import (
    FAST_EXPONENTS,
    GroupSpec,
    SubsetIndicator,
    convolve,
    indicator_spectrum,
    inverse_spectrum,
)
from .pds import LatinType, PdsCheck, PdsParameters, latin_types, verify_pds

log = logging.getLogger(__name__)

FUSION_CAP = 8

Partition = tuple[tuple[int, ...], ...]


class SchemeAxiomError(ValueError):
    axiom = "scheme"


class OverlapError(SchemeAxiomError):
    axiom = "disjointness"


class CoverageError(SchemeAxiomError):
    axiom = "coverage"


class AsymmetricClassError(SchemeAxiomError):
    axiom = "symmetry"


class IdentityInClassError(SchemeAxiomError):
    axiom = "identity"


class EmptyClassError(SchemeAxiomError):
    axiom = "nonempty"


@dataclass(frozen=True, eq=False)
class TranslationScheme:
    """Connection sets S_1..S_d partitioning G minus the identity.

    Construct through :func:`assemble`, which enforces the partition axioms.
    """

    group: GroupSpec
    classes: tuple[SubsetIndicator, ...]

    @property
    def d(self) -> int:
        return len(self.classes)

    def valencies(self) -> list[int]:
        return [1] + [len(c) for c in self.classes]

    def class_labels(self) -> np.ndarray:
        """label[y] = index (1-based) of the class containing y; 0 at the identity."""
        out = np.zeros(self.group.order, dtype=np.int64)
        for i, c in enumerate(self.classes, start=1):
            out[c.bits] = i
        return out

    def same_partition(self, other: TranslationScheme) -> bool:
        """Equality as unordered partitions."""
        if self.group != other.group or self.d != other.d:
            return False
        mine = {c.bits.tobytes() for c in self.classes}
        return mine == {c.bits.tobytes() for c in other.classes}

    def __eq__(self, other) -> bool:
        if not isinstance(other, TranslationScheme):
            return NotImplemented
        return self.group == other.group and self.classes == other.classes

    def __hash__(self) -> int:
        return hash((self.group, self.classes))


def assemble(group: GroupSpec, classes: Sequence[SubsetIndicator]) -> TranslationScheme:
    if not classes:
        raise CoverageError("a scheme needs at least one class")
    seen = np.zeros(group.order, dtype=bool)
    for i, c in enumerate(classes, start=1):
        if c.group != group:
            raise SchemeAxiomError(f"class {i} lives in {c.group}, not {group}")
        if not len(c):
            raise EmptyClassError(f"class {i} is empty")
        if c.contains_identity():
            raise IdentityInClassError(f"class {i} contains the identity")
        if not c.is_symmetric():
            raise AsymmetricClassError(f"class {i} is not closed under negation")
        overlap = seen & c.bits
        if overlap.any():
            g = group.unrank(int(np.flatnonzero(overlap)[0]))
            raise OverlapError(f"class {i} overlaps an earlier class at {g}")
        seen |= c.bits
    seen[0] = True
    if not seen.all():
        g = group.unrank(int(np.flatnonzero(~seen)[0]))
        raise CoverageError(f"element {g} lies in no class")
    return TranslationScheme(group, tuple(classes))


def drop_empty(classes: Sequence[SubsetIndicator], names: Sequence[str] | None = None) -> list[SubsetIndicator]:
    kept = []
    for i, c in enumerate(classes):
        if len(c):
            kept.append(c)
        else:
            label = names[i] if names else f"class {i + 1}"
            log.warning("dropping empty connection set %s", label)
    return kept


# --- intersection numbers ----------------------------------------------------


@dataclass
class IntersectionNumbers:
    """p[i][j][k] for i, j, k in 0..d (class 0 is the identity)."""

    table: np.ndarray
    valencies: list[int]

    def __getitem__(self, idx):
        return self.table[idx]

    @property
    def d(self) -> int:
        return self.table.shape[0] - 1

    def consistency_holds(self) -> bool:
        n = np.array(self.valencies)
        lhs = np.outer(n, n)
        rhs = self.table @ n
        return bool(np.array_equal(lhs, rhs))


@dataclass
class IntersectionCheck:
    ok: bool
    numbers: IntersectionNumbers | None = None
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


class _Convolver:
    """Pairwise convolutions of a fixed list of sets, sharing transforms."""

    def __init__(self, group: GroupSpec, sets: Sequence[SubsetIndicator],
                 spectra: Sequence[np.ndarray] | None = None):
        self.group = group
        self.sets = list(sets)
        self.fast = group.exponent in FAST_EXPONENTS
        if self.fast:
            if spectra is None:
                spectra = [indicator_spectrum(s) for s in self.sets]
            self.spectra = list(spectra)

    def __call__(self, i: int, j: int) -> np.ndarray:
        if self.fast:
            r = ring(self.group.exponent)
            return inverse_spectrum(self.group, r.mul(self.spectra[i], self.spectra[j]))
        return convolve(self.sets[i], self.sets[j], method="direct")


def _intersection_from_convolver(s: TranslationScheme, conv: _Convolver) -> IntersectionCheck:
    d = s.d
    labels = s.class_labels()
    sizes = np.bincount(labels, minlength=d + 1)
    table = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    for i in range(d + 1):
        table[0, i, i] = table[i, 0, i] = 1
    for i in range(1, d + 1):
        for j in range(i, d + 1):
            counts = conv(i - 1, j - 1)
            lo = np.full(d + 1, np.iinfo(np.int64).max)
            hi = np.full(d + 1, np.iinfo(np.int64).min)
            np.minimum.at(lo, labels, counts)
            np.maximum.at(hi, labels, counts)
            bad = np.flatnonzero((lo != hi) & (sizes > 0))
            if bad.size:
                k = int(bad[0])
                in_k = np.flatnonzero(labels == k)
                first = counts[in_k[0]]
                y = int(in_k[np.flatnonzero(counts[in_k] != first)[0]])
                return IntersectionCheck(False, witness={
                    "i": i, "j": j, "k": k, "y": s.group.unrank(y),
                    "count": int(counts[y]), "expected": int(first),
                })
            table[i, j] = table[j, i] = lo
    return IntersectionCheck(True, IntersectionNumbers(table, s.valencies()))


def intersection_numbers(s: TranslationScheme) -> IntersectionCheck:
    """Check axiom (3) at x = 0 for every y, by convolving pairs of classes."""
    return _intersection_from_convolver(s, _Convolver(s.group, s.classes))


def intersection_numbers_slow(s: TranslationScheme, pairs: Sequence[tuple[int, int]]) -> dict:
    """Evaluate axiom (3) literally at the given (x, y) rank pairs.

    Returns {(i, j, k): set of observed counts}; used as a cross-check of the
    translation-invariant fast path.
    """
    labels = s.class_labels()
    group = s.group
    out: dict = {}
    for x, y in pairs:
        k = int(labels[group.rank(group.add(group.unrank(x), group.neg(group.unrank(y))))])
        # relation of (x, z) is labels[x - z]; of (z, y) is labels[z - y]
        xz = labels[group.ranks_of(group.residues[x] - group.residues)]
        zy = labels[group.ranks_of(group.residues - group.residues[y])]
        for i in range(s.d + 1):
            for j in range(s.d + 1):
                c = int(np.count_nonzero((xz == i) & (zy == j)))
                out.setdefault((i, j, k), set()).add(c)
    return out


# --- fusions -----------------------------------------------------------------


def enumerate_fusions(d: int, cap: int = FUSION_CAP) -> Iterator[Partition]:
    """All set partitions of {1..d} via restricted growth strings, in lex order."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if d > cap:
        raise ValueError(f"{d} classes exceeds the fusion cap of {cap}")

    def rgs(prefix: list[int], top: int) -> Iterator[list[int]]:
        if len(prefix) == d:
            yield prefix
            return
        for b in range(top + 2):
            yield from rgs(prefix + [b], max(top, b))

    for code in rgs([0], 0):
        blocks: dict[int, list[int]] = {}
        for idx, b in enumerate(code, start=1):
            blocks.setdefault(b, []).append(idx)
        yield tuple(tuple(blocks[b]) for b in sorted(blocks))


def bell(d: int) -> int:
    row = [1]
    for _ in range(d):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _check_partition(partition: Partition, d: int) -> None:
    flat = sorted(i for block in partition for i in block)
    if flat != list(range(1, d + 1)) or any(not block for block in partition):
        raise ValueError(f"{partition} is not a partition of 1..{d}")


def fuse(s: TranslationScheme, partition: Partition) -> TranslationScheme:
    _check_partition(partition, s.d)
    classes = []
    for block in partition:
        bits = np.zeros(s.group.order, dtype=bool)
        for i in block:
            bits |= s.classes[i - 1].bits
        classes.append(SubsetIndicator(s.group, bits))
    return assemble(s.group, classes)


def format_partition(partition: Partition) -> str:
    return "|".join(",".join(str(i) for i in block) for block in partition)


def parse_partition(text: str) -> Partition:
    try:
        return tuple(tuple(int(x) for x in block.split(",")) for block in text.split("|"))
    except ValueError as exc:
        raise ValueError(f"malformed partition {text!r}; expected e.g. '1|2,3,4'") from exc


@dataclass
class FusionResult:
    partition: Partition
    ok: bool
    witness: dict | None = None


@dataclass
class AmorphyCertificate:
    d: int
    results: list[FusionResult] = field(default_factory=list)

    @property
    def amorphic(self) -> bool:
        return all(r.ok for r in self.results) and len(self.results) == bell(self.d)

    @property
    def passed(self) -> int:
        return sum(r.ok for r in self.results)

    def first_failure(self) -> FusionResult | None:
        return next((r for r in self.results if not r.ok), None)


def verify_amorphic(s: TranslationScheme, cap: int = FUSION_CAP, stop_on_failure: bool = False) -> AmorphyCertificate:
    """Check axiom (3) for every fusion of ``s`` (Bell(d) of them)."""
    cert = AmorphyCertificate(s.d)
    base_spectra = None
    if s.group.exponent in FAST_EXPONENTS:
        # the transform is linear, so a fused class's spectrum is the sum of its parts
        base_spectra = [indicator_spectrum(c) for c in s.classes]
    for partition in enumerate_fusions(s.d, cap):
        fused = fuse(s, partition)
        spectra = None
        if base_spectra is not None:
            spectra = [sum(base_spectra[i - 1] for i in block) for block in partition]
        check = _intersection_from_convolver(fused, _Convolver(s.group, fused.classes, spectra))
        cert.results.append(FusionResult(partition, check.ok, check.witness))
        if stop_on_failure and not check.ok:
            break
    return cert


# --- van Dam criterion ---------------------------------------------------------


@dataclass
class VanDamReport:
    checks: list[PdsCheck]
    types: list[LatinType | None]
    applicable: bool
    epsilon: int | None
    message: str

    @property
    def amorphic(self) -> bool:
        return self.applicable


def van_dam_check(group: GroupSpec, classes: Sequence[SubsetIndicator], method: str = "differences") -> VanDamReport:
    """Each class a PDS, all of one (negative) Latin square type => amorphic.

    Needs only the raw class list; axiom (3) is not presupposed.
    """
    assemble(group, classes)  # edge-decomposition of the complete graph
    checks = [verify_pds(c, method) for c in classes]
    for i, chk in enumerate(checks, start=1):
        if not chk.ok:
            return VanDamReport(checks, [], False, None, f"class {i} is not a PDS: {chk.reason}")
    readings = [latin_types(chk.params) for chk in checks]
    common = {-1, 1}
    for r in readings:
        common &= {t.epsilon for t in r}
    if not common:
        types = [r[0] if r else None for r in readings]
        return VanDamReport(checks, types, False, None, "criterion not applicable: types are mixed or neither")
    eps = min(common)
    types = [next(t for t in r if t.epsilon == eps) for r in readings]
    kind = "Latin square" if eps == 1 else "negative Latin square"
    return VanDamReport(checks, types, True, eps, f"all classes {kind} type")


def srg_parameters_of_class(s: TranslationScheme, i: int) -> PdsParameters:
    """(v, k, lambda, mu) read off the 2-class fusion {S_i, rest}."""
    if not 1 <= i <= s.d:
        raise IndexError(f"class index {i} out of range 1..{s.d}")
    v = s.group.order
    if s.d == 1:
        two = s
    else:
        rest = tuple(j for j in range(1, s.d + 1) if j != i)
        two = fuse(s, ((i,), rest)) if i < rest[0] else fuse(s, (rest, (i,)))
    check = intersection_numbers(two)
    if not check.ok:
        raise ArithmeticError(f"the fusion isolating class {i} is not a scheme: {check.witness}")
    p = check.numbers.table
    a = 1 if s.d == 1 or i < rest[0] else 2
    b = 3 - a
    k = s.valencies()[i]
    lam = int(p[a, a, a])
    mu = int(p[a, a, b]) if s.d > 1 else 0
    params = PdsParameters(v, k, lam, mu)
    pds = verify_pds(s.classes[i - 1])
    if not pds.ok or pds.params != params:
        raise ArithmeticError(f"scheme gives {params} but the PDS check gives {pds.params}")
    return params
