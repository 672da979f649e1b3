"""The scheme families: cyclotomic, quadric level sets, Galois-ring lifts,
subfield-trace chains and rotated traces.

Every constructor returns a :class:`Construction` bundling the assembled
scheme with the class sizes and PDS parameters it is expected to have, so the
verifiers can be pointed at it directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import galois_ring as gr
from .fields import FieldSpec, prime_power, trace_zero_elements
from .groups import GroupSpec, SubsetIndicator, character_sum
from .pds import PdsParameters, latin_parameters
from .quadratic import ELLIPTIC, HYPERBOLIC, standard_elliptic, standard_form
from .schemes import TranslationScheme, assemble, drop_empty

CONSTRUCTION_NAMES = ("cyclotomic", "four_class", "lifted_four_class", "chain", "rotation")


class ConstructionError(ValueError):
    pass


@dataclass
class Construction:
    name: str
    params: dict
    scheme: TranslationScheme
    class_names: list[str]
    expected_sizes: list[int] | None = None
    expected_params: list[PdsParameters] | None = None
    predicted_amorphic: bool | None = None
    extras: dict = field(default_factory=dict)

    @property
    def group(self) -> GroupSpec:
        return self.scheme.group

    def sizes(self) -> list[int]:
        return [len(c) for c in self.scheme.classes]


# --- cyclotomic ----------------------------------------------------------------


def minus_one_is_power(p: int, e: int) -> bool:
    """True iff -1 = p^k (mod e) for some k."""
    if e <= 2:
        return True
    seen = set()
    x = 1 % e
    while x not in seen:
        if x == e - 1:
            return True
        seen.add(x)
        x = x * p % e
    return False


def cyclotomic_scheme(p: int, s: int, e: int) -> Construction:
    """Cosets of the index-e subgroup of F_q^*, as connection sets on (F_q, +)."""
    try:
        is_prime = prime_power(p) == (p, 1)
    except ValueError:
        is_prime = False
    if not is_prime or s < 1:
        raise ConstructionError(f"need a prime p and s >= 1, got p={p}, s={s}")
    F = FieldSpec.of_order(p**s)
    q = F.q
    if e <= 1:
        raise ConstructionError("e > 1 required")
    if (q - 1) % e:
        raise ConstructionError(f"e={e} does not divide q-1={q - 1}")
    if p != 2 and ((q - 1) // e) % 2:
        raise ConstructionError("-1 is not in the index-e subgroup")
    vals = F.vectors_of_group(1)[:, 0]
    logs = F.log_table[vals]
    group = F.additive_group(1)
    classes = [SubsetIndicator(group, (vals != 0) & (logs % e == i)) for i in range(e)]
    scheme = assemble(group, classes)
    return Construction(
        "cyclotomic", {"p": p, "s": s, "e": e}, scheme,
        [f"C{i}" for i in range(e)],
        expected_sizes=[(q - 1) // e] * e,
        predicted_amorphic=minus_one_is_power(p, e),
    )


# --- the 4-class scheme over F_4 -------------------------------------------------


def _require_ell(ell: int) -> None:
    if ell < 2:
        raise ConstructionError("ℓ ≥ 2 required")


def four_class_form(ell: int):
    return standard_elliptic(FieldSpec.of_order(4), ell)


def four_class_level_sets(ell: int) -> list[SubsetIndicator]:
    """D_0 minus 0, D_1, D_alpha, D_alpha^2 for alpha x1^2 + x1 x2 + x2^2 + x3 x4 + ..."""
    Q = four_class_form(ell)
    return [Q.level_set(beta, exclude_zero_vector=(beta == 0)) for beta in range(4)]


def _four_class_expectations(ell: int) -> tuple[list[int], list[PdsParameters]]:
    n = 4**ell
    rs = [4 ** (ell - 1) - 1] + [4 ** (ell - 1)] * 3
    params = [latin_parameters(-1, n, r) for r in rs]
    return [p.k for p in params], params


BETA_NAMES = ["0", "1", "alpha", "alpha^2"]


def four_class_scheme(ell: int) -> Construction:
    _require_ell(ell)
    classes = four_class_level_sets(ell)
    group = classes[0].group
    sizes, params = _four_class_expectations(ell)
    return Construction(
        "four_class", {"ell": ell}, assemble(group, classes),
        ["D_0\\{0}", "D_1", "D_alpha", "D_alpha^2"],
        expected_sizes=sizes, expected_params=params, predicted_amorphic=True,
    )


# --- lifts to R x F_4^{2l-2} ------------------------------------------------------


@lru_cache(maxsize=None)
def lift_rank_map(ell: int) -> np.ndarray:
    """out[r] = rank in Z_4^2 x Z_2^{4l-4} of F(x), x the vector of F_4^{2l} at rank r."""
    F = gr.field4()
    vectors = F.vectors_of_group(2 * ell)
    target = gr.product_group(ell)
    out = np.empty(len(vectors), dtype=np.int64)
    for r, x in enumerate(vectors):
        head, tail = gr.lift_F(x)
        out[r] = target.rank(gr.product_to_group(head, tail))
    out.setflags(write=False)
    return out


def lift_subset(S: SubsetIndicator, ell: int) -> SubsetIndicator:
    mapping = lift_rank_map(ell)
    bits = np.zeros(len(mapping), dtype=bool)
    bits[mapping[S.bits]] = True
    return SubsetIndicator(gr.product_group(ell), bits)


def lifted_set(beta: int, ell: int) -> SubsetIndicator:
    """L_beta = F(D_beta); the zero element is excluded for beta = 0."""
    _require_ell(ell)
    return lift_subset(four_class_level_sets(ell)[beta], ell)


def lifted_four_class_scheme(ell: int) -> Construction:
    _require_ell(ell)
    classes = [lift_subset(D, ell) for D in four_class_level_sets(ell)]
    sizes, params = _four_class_expectations(ell)
    return Construction(
        "lifted_four_class", {"ell": ell}, assemble(gr.product_group(ell), classes),
        ["L_0\\{0}", "L_1", "L_alpha", "L_alpha^2"],
        expected_sizes=sizes, expected_params=params, predicted_amorphic=True,
    )


@dataclass
class LiftDiagnosticRow:
    beta1: gr.RingElement
    beta2: gr.RingElement
    w: tuple[int, ...]
    lifted_sum: int
    o0_sum: int
    rest_sum: int
    lifted_o0_sum: int
    lifted_rest_sum: int


def lifted_diagnostic(ell: int) -> list[LiftDiagnosticRow]:
    """For each order-4 character psi_{b1+2b2} (x) chi_w of R x F_4^{2l-2}: the sum
    over L_1, the field-side sums over O_0 = {x in D_1 : x1 = 0} and D_1 minus
    O_0 under chi_{(pi(b2), pi(b1), w)}, and the sums of the character itself
    over the images F(O_0) and F(D_1 minus O_0)."""
    _require_ell(ell)
    F = gr.field4()
    D1 = four_class_level_sets(ell)[1]
    field_group = D1.group
    first_coord = F.vectors_of_group(2 * ell)[:, 0]
    O0 = SubsetIndicator(field_group, D1.bits & (first_coord == 0))
    rest = D1 - O0
    L1 = lift_subset(D1, ell)
    LO0 = lift_subset(O0, ell)
    Lrest = lift_subset(rest, ell)
    rows = []
    for b1 in gr.TEICHMULLER[1:]:
        for b2 in gr.TEICHMULLER:
            for w in itertools.product(range(4), repeat=2 * ell - 2):
                beta = b1 + 2 * b2
                psi = gr.character_label(beta, w)
                lifted = character_sum(L1, psi).to_int()
                fw = (gr.pi_reduction(b2), gr.pi_reduction(b1)) + tuple(w)
                label = gr.character_label(gr.ZERO, fw)[2:]
                rows.append(LiftDiagnosticRow(
                    b1, b2, tuple(w), lifted,
                    character_sum(O0, label).to_int(),
                    character_sum(rest, label).to_int(),
                    character_sum(LO0, psi).to_int(),
                    character_sum(Lrest, psi).to_int(),
                ))
    return rows


# --- subfield trace chains ----------------------------------------------------------


def _validate_chain(m: int, chain: tuple[int, ...]) -> None:
    if not chain or chain[0] != m or chain[-1] != 1:
        raise ConstructionError(f"chain must run from m={m} down to 1, got {chain}")
    for a, b in zip(chain, chain[1:]):
        if a == b or a % b:
            raise ConstructionError(f"chain {chain} is not a strict divisor chain")


def chain_scheme(q: int, m: int, ell: int, chain: tuple[int, ...], form_type: str = ELLIPTIC) -> Construction:
    """Omega_1, Omega_2 minus Omega_1, ..., complement of Omega_d, where
    Omega_i = {x != 0 : tr_{q^m / q^{m_i}} Q(x) = 0}."""
    p, s = prime_power(q)
    chain = tuple(int(c) for c in chain)
    _validate_chain(m, chain)
    if ell < 1:
        raise ConstructionError("ℓ ≥ 1 required")
    if form_type not in (ELLIPTIC, HYPERBOLIC):
        raise ConstructionError(f"form type must be elliptic or hyperbolic, got {form_type!r}")
    F = FieldSpec.of_order(q**m)
    Q = standard_form(F, ell, form_type)
    group = Q.group()
    values = Q.values_on_group
    omegas = []
    for mi in chain:
        tr = F.trace_table(s * mi)
        bits = tr[values] == 0
        bits[0] = False
        omegas.append(SubsetIndicator(group, bits))
    for a, b in zip(omegas, omegas[1:]):
        if (a.bits & ~b.bits).any():
            raise ArithmeticError("trace level sets are not nested")
    pieces = [omegas[0]] + [b - a for a, b in zip(omegas, omegas[1:])]
    pieces.append(SubsetIndicator.everything(group).without_identity() - omegas[-1])
    names = ["Omega_1"] + [f"Omega_{i + 1}\\Omega_{i}" for i in range(1, len(chain))] + ["complement"]
    eps = -1 if form_type == ELLIPTIC else 1
    n = q ** (m * ell)
    rs = [n // q**m + eps] + [n // q**b - n // q**a for a, b in zip(chain, chain[1:])] + [n - n // q]
    expected = [latin_parameters(eps, n, r) for r in rs]
    keep = [i for i, c in enumerate(pieces) if len(c)]
    kept = drop_empty(pieces, names)
    return Construction(
        "chain", {"q": q, "m": m, "ell": ell, "chain": list(chain), "form": form_type},
        assemble(group, kept), [names[i] for i in keep],
        expected_sizes=[expected[i].k for i in keep],
        expected_params=[expected[i] for i in keep],
        predicted_amorphic=True,
        extras={"omegas": omegas, "epsilon": eps},
    )


def hamilton_fusion(construction: Construction, d: int | None = None) -> SubsetIndicator:
    """(Omega_d - Omega_{d-1}) u (Omega_{d-2} - Omega_{d-3}) u ..., ending in
    Omega_2 - Omega_1 for even d and in Omega_1 for odd d."""
    if construction.name != "chain":
        raise ConstructionError("hamilton_fusion needs a chain construction")
    omegas = construction.extras["omegas"]
    if d is not None and d != len(omegas):
        raise ConstructionError(f"the chain has d={len(omegas)} trace levels, not {d}")
    group = construction.group
    bits = np.zeros(group.order, dtype=bool)
    i = len(omegas)  # 1-based index of the top Omega
    while i >= 1:
        top = omegas[i - 1].bits
        below = omegas[i - 2].bits if i >= 2 else np.zeros_like(top)
        bits |= top & ~below
        i -= 2
    return SubsetIndicator(group, bits)


# --- rotated traces over F_{q^2} ---------------------------------------------------


def rotation_scheme(q: int, ell: int) -> Construction:
    """Omega_0 and Omega_{g^i} minus Omega_0 for 0 <= i <= q, where
    Omega_{g^i} = {x != 0 : tr_{q^2/q}(g^i Q(x)) = 0}."""
    _require_ell(ell)
    p, s = prime_power(q)
    F = FieldSpec.of_order(q * q)
    Q = standard_elliptic(F, ell)
    group = Q.group()
    values = Q.values_on_group
    tr = F.trace_table(s)
    omega0 = Q.level_set(0, exclude_zero_vector=True)
    classes = [omega0]
    for i in range(q + 1):
        gi = F.gen_pow(i)
        bits = (tr[F.mul_table[gi, values]] == 0) & (values != 0)
        classes.append(SubsetIndicator(group, bits))
    # second route to the same partition: Q(x) in g^{-i} * (trace kernel minus 0)
    kernel = [x for x in trace_zero_elements(q) if x]
    for i, cls in enumerate(classes[1:]):
        targets = [int(F.mul(F.gen_pow(-i), x)) for x in kernel]
        if not np.array_equal(cls.bits, np.isin(values, targets)):
            raise ArithmeticError(f"class for g^{i} disagrees with the trace-zero description")
    n = q ** (2 * ell)
    expected = [latin_parameters(-1, n, n // (q * q) - 1)] + [latin_parameters(-1, n, n // q - n // (q * q))] * (q + 1)
    return Construction(
        "rotation", {"q": q, "ell": ell}, assemble(group, classes),
        ["Omega_0"] + [f"Omega_g^{i}\\Omega_0" for i in range(q + 1)],
        expected_sizes=[e.k for e in expected], expected_params=expected,
        predicted_amorphic=True,
    )


def build(name: str, **params) -> Construction:
    """Dispatch by construction name; used by the CLI."""
    if name == "cyclotomic":
        return cyclotomic_scheme(params["p"], params["s"], params["e"])
    if name == "four_class":
        return four_class_scheme(params["ell"])
    if name == "lifted_four_class":
        return lifted_four_class_scheme(params["ell"])
    if name == "chain":
        return chain_scheme(params["q"], params["m"], params["ell"], tuple(params["chain"]),
                            params.get("form", ELLIPTIC))
    if name == "rotation":
        return rotation_scheme(params["q"], params["ell"])
    raise ConstructionError(f"unknown construction {name!r}; choose from {', '.join(CONSTRUCTION_NAMES)}")
