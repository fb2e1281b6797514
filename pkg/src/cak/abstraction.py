"""The induced intervention map and the abstraction hierarchy.

A state map tau induces a partial map on interventions: a low intervention
is sent to the unique high intervention whose restriction set has exactly
the same tau-image as the low restriction set, when such a high
intervention exists. The hierarchy of checks built on top of it is, from
weakest to strongest: tau-abstraction (surjective tau, a surjective
compatible context map, and matching induced intervention sets), strong
abstraction (every high intervention is induced), and constructive
abstraction (tau additionally factors over a partition of the low
variables, one cell per high variable plus an optional marginalized
remainder).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, SizeCapExceeded
from .interventions import (
    InterventionMap,
    enumerate_interventions,
    natural_leq,
    natural_lt,
)
from .maps import StateMap, materialize_state_map
from .model import Assignment, CausalModel, VariableDecl, enumerate_states
from .report import CheckReport
from .transform import find_compatible_tau_u

EMPTY = Assignment()


def rst(decls: Sequence[VariableDecl], partial: Assignment) -> list[Assignment]:
    """All total states over `decls` that agree with `partial`, in
    declaration-order lexicographic order."""
    names = [d.name for d in decls]
    unknown = [v for v in partial if v not in names]
    if unknown:
        raise InputError(f"assignment mentions variables outside the set: {unknown}")
    options = []
    for d in decls:
        if d.name in partial:
            value = partial[d.name]
            if value not in d.domain:
                raise InputError(f"{d.name}={value} is outside the declared domain")
            options.append((value,))
        else:
            options.append(d.domain)
    return [Assignment(zip(names, combo)) for combo in itertools.product(*options)]


def _tuple_space(decls: Sequence[VariableDecl]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(d.domain for d in decls)))


def _tau_tuple_table(
    m_low: CausalModel, m_high: CausalModel, tau: StateMap, cap: int | None
) -> dict[tuple[int, ...], Assignment]:
    """tau as a dict keyed by low-state value tuples in declaration order."""
    low_sig, high_sig = m_low.signature, m_high.signature
    table = materialize_state_map(tau, low_sig, high_sig, cap)
    names = low_sig.endo_names
    return {
        tuple(state[n] for n in names): image for state, image in table.items()
    }


def _rst_tuples(
    decls: Sequence[VariableDecl], partial: Assignment
) -> Iterable[tuple[int, ...]]:
    options = [
        ((partial[d.name],) if d.name in partial else d.domain) for d in decls
    ]
    return itertools.product(*options)


def derive_omega_tau(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    intervention: Assignment,
    check_all_candidates: bool = False,
    cap: int | None = None,
    _table: dict[tuple[int, ...], Assignment] | None = None,
) -> Assignment | None:
    """Image of one low intervention under the induced map, or None.

    The tau-image S of the low restriction set fixes some high coordinates;
    any valid high intervention must set exactly those (up to variables
    with one-value domains, which are dropped), so the candidate is unique
    and it remains to verify that S is exactly the candidate's restriction
    set. `check_all_candidates` re-derives the answer by brute force over
    every high intervention, guarding the shortcut.
    """
    low_sig, high_sig = m_low.signature, m_high.signature
    table = _table if _table is not None else _tau_tuple_table(m_low, m_high, tau, cap)
    images = {table[t] for t in _rst_tuples(low_sig.endogenous, intervention)}

    # A variable whose whole domain is a single value is constant in every
    # restriction set; leaving it out keeps the candidate minimal and the
    # empty intervention's image empty.
    fixed: dict[str, int] = {}
    for d in high_sig.endogenous:
        if len(d.domain) == 1:
            continue
        values = {state[d.name] for state in images}
        if len(values) == 1:
            fixed[d.name] = next(iter(values))
    candidate = Assignment(fixed)

    size = 1
    for d in high_sig.endogenous:
        if d.name not in fixed:
            size *= len(d.domain)
    result: Assignment | None = None
    if size == len(images):
        target = set(rst(high_sig.endogenous, candidate))
        if images == target:
            result = candidate

    if check_all_candidates:
        hits = [
            cand
            for cand in enumerate_interventions(high_sig, cap)
            if set(rst(high_sig.endogenous, cand)) == images
        ]
        if (result is None) != (not hits):
            raise AssertionError(
                f"constant-coordinate candidate {result!r} disagrees with brute force {hits}"
            )
        # Candidates satisfying the set equation can differ only in
        # variables whose whole domain is one value; the returned image is
        # the minimal representative.
        if hits and result not in hits:
            raise AssertionError(f"canonical image {result!r} not among {hits}")
        for hit in hits:
            extra = set(hit) - set(result)
            if set(result) - set(hit) or any(
                len(high_sig.domains[v]) > 1 for v in extra
            ):
                raise AssertionError(f"induced image is not unique: {hits}")
    return result


def compute_induced_sets(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    cap: int | None = None,
) -> tuple[tuple[Assignment, ...], tuple[Assignment, ...], InterventionMap]:
    """The set of low interventions with a defined induced image, the image
    set, and the explicit induced map, all in deterministic order."""
    table = _tau_tuple_table(m_low, m_high, tau, cap)
    defined: list[tuple[Assignment, Assignment]] = []
    image_order: dict[Assignment, None] = {}
    for i in enumerate_interventions(m_low, cap):
        img = derive_omega_tau(m_low, m_high, tau, i, cap=cap, _table=table)
        if img is not None:
            defined.append((i, img))
            image_order.setdefault(img)
    omega_tau = InterventionMap.from_pairs(defined)
    return (
        tuple(i for i, _ in defined),
        tuple(image_order),
        omega_tau,
    )


def check_tau_abstraction(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    i_low: Iterable[Assignment] | None = None,
    i_high: Iterable[Assignment] | None = None,
    cap: int | None = None,
) -> CheckReport:
    """The three-part abstraction check for the given intervention sets
    (defaulting to the models' allowed sets):

    (a) tau is surjective onto the high state space;
    (b) a surjective context map compatible with tau exists, taking the
        intervention map to be the induced one restricted to `i_low`;
    (c) `i_high` equals the induced image of `i_low` as a set.

    Every intervention in `i_low` must have a defined induced image;
    otherwise the check fails at (c) naming the offending intervention.
    The report identifies the first failing part.
    """
    low_list = _resolve(m_low, i_low, cap)
    high_list = _resolve(m_high, i_high, cap)
    table = _tau_tuple_table(m_low, m_high, tau, cap)

    pairs = []
    for i in low_list:
        img = derive_omega_tau(m_low, m_high, tau, i, cap=cap, _table=table)
        if img is None:
            return CheckReport(
                False,
                detail="(c) an allowed low intervention has no induced image",
                counterexample={"intervention": i},
            )
        pairs.append((i, img))
    omega_tau = InterventionMap.from_pairs(pairs)

    image = set(table.values())
    for state in enumerate_states(m_high, cap):
        if state not in image:
            return CheckReport(
                False,
                detail="(a) tau is not surjective",
                counterexample={"unreached_high_state": state},
            )

    inner = find_compatible_tau_u(
        m_low,
        m_high,
        tau,
        omega_tau,
        i_low=low_list,
        require_surjective=True,
        cap=cap,
    )
    if not inner.verdict:
        return CheckReport(
            False,
            detail="(b) no surjective compatible context map: " + inner.detail,
            counterexample=inner.counterexample,
        )

    induced_image = {img for _, img in pairs}
    high_set = set(high_list)
    if induced_image != high_set:
        missing = [h for h in high_list if h not in induced_image]
        extra = [h for h in induced_image if h not in high_set]
        return CheckReport(
            False,
            detail="(c) the high intervention set differs from the induced image",
            counterexample={"missing_from_image": tuple(missing), "not_allowed_high": tuple(sorted(extra))},
        )
    return CheckReport(
        True,
        detail="tau-abstraction holds",
        witness={"tau_u": inner.witness, "omega_tau": omega_tau},
    )


def _resolve(model: CausalModel, interventions, cap) -> tuple[Assignment, ...]:
    if interventions is not None:
        return tuple(interventions)
    if isinstance(model.allowed_interventions, str):
        return tuple(enumerate_interventions(model, cap))
    return model.allowed_interventions


def check_strong_abstraction(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    cap: int | None = None,
) -> CheckReport:
    """Strong abstraction: every high intervention is induced, and the
    tau-abstraction check holds between the induced sets."""
    i_low_tau, i_high_tau, _ = compute_induced_sets(m_low, m_high, tau, cap)
    all_high = enumerate_interventions(m_high, cap)
    induced = set(i_high_tau)
    missing = [h for h in all_high if h not in induced]
    if missing:
        first_single = next((h for h in missing if len(h) == 1), None)
        named = first_single if first_single is not None else missing[0]
        return CheckReport(
            False,
            detail=f"high intervention {dict(named)} is not induced by any low intervention",
            counterexample={
                "missing_high_interventions": tuple(missing),
                "first_missing_single": first_single,
            },
        )
    inner = check_tau_abstraction(m_low, m_high, tau, i_low_tau, i_high_tau, cap)
    if not inner.verdict:
        return CheckReport(
            False,
            detail="induced sets cover everything but the tau-abstraction check fails: "
            + inner.detail,
            counterexample=inner.counterexample,
        )
    return CheckReport(True, detail="strong tau-abstraction holds", witness=inner.witness)


# ---------------------------------------------------------------------------
# Constructive abstraction

@dataclass(frozen=True)
class Partition:
    """Disjoint cells of low variables, one per high variable in high
    declaration order, plus an optional marginalized remainder."""

    cells: tuple[tuple[str, tuple[str, ...]], ...]
    marginal: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "cells", tuple((h, tuple(vs)) for h, vs in self.cells)
        )
        object.__setattr__(self, "marginal", tuple(self.marginal))

    def cell_of(self, high_var: str) -> tuple[str, ...]:
        for h, vs in self.cells:
            if h == high_var:
                return vs
        raise InputError(f"partition has no cell for {high_var}")


@dataclass(frozen=True)
class ComponentMaps:
    """Per-cell value maps: for each high variable, a table from the cell's
    value tuples (in cell order) to a high value."""

    maps: tuple[tuple[str, tuple[tuple[tuple[int, ...], int], ...]], ...]

    def table(self, high_var: str) -> dict[tuple[int, ...], int]:
        for h, entries in self.maps:
            if h == high_var:
                return dict(entries)
        raise InputError(f"no component map for {high_var}")

    @staticmethod
    def from_tables(tables: dict[str, dict[tuple[int, ...], int]]) -> "ComponentMaps":
        return ComponentMaps(
            tuple(
                (h, tuple(sorted(tbl.items()))) for h, tbl in tables.items()
            )
        )


def _check_partition_shape(
    partition: Partition, m_low: CausalModel, m_high: CausalModel
) -> None:
    low_vars = set(m_low.signature.endo_names)
    high_vars = list(m_high.signature.endo_names)
    cell_highs = [h for h, _ in partition.cells]
    if sorted(cell_highs) != sorted(high_vars):
        raise InputError(
            f"partition cells must be keyed by exactly the high endogenous variables {high_vars}"
        )
    seen: set[str] = set()
    for h, vs in partition.cells:
        if not vs:
            raise InputError(f"cell for {h} is empty")
        for v in vs:
            if v not in low_vars:
                raise InputError(f"cell for {h} contains unknown low variable {v}")
            if v in seen:
                raise InputError(f"low variable {v} appears in more than one cell")
            seen.add(v)
    for v in partition.marginal:
        if v not in low_vars:
            raise InputError(f"marginal cell contains unknown low variable {v}")
        if v in seen:
            raise InputError(f"low variable {v} appears in both a cell and the marginal")
        seen.add(v)
    if seen != low_vars:
        raise InputError(
            f"partition does not cover the low variables: missing {sorted(low_vars - seen)}"
        )


def derive_component_maps(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    partition: Partition,
    cap: int | None = None,
):
    """Project tau onto each cell. Returns (ComponentMaps, None) when tau's
    component for each high variable depends only on that variable's cell,
    else (None, counterexample) with two low states exhibiting the
    dependence on a variable outside the cell."""
    low_sig = m_low.signature
    states = enumerate_states(low_sig, cap)
    tables: dict[str, dict[tuple[int, ...], int]] = {h: {} for h, _ in partition.cells}
    first_state: dict[tuple[str, tuple[int, ...]], Assignment] = {}
    for state in states:
        image = tau.apply(state)
        for high_var, cell in partition.cells:
            key = tuple(state[v] for v in cell)
            value = image[high_var]
            tbl = tables[high_var]
            if key not in tbl:
                tbl[key] = value
                first_state[(high_var, key)] = state
            elif tbl[key] != value:
                return None, {
                    "high_var": high_var,
                    "cell": cell,
                    "states": (first_state[(high_var, key)], state),
                    "values": (tbl[key], value),
                }
    return ComponentMaps.from_tables(tables), None


def check_constructive(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    partition: Partition,
    comps: ComponentMaps | None = None,
    cap: int | None = None,
) -> CheckReport:
    """Constructive abstraction: tau factors through the partition as the
    concatenation of per-cell maps, and the strong abstraction check holds.
    When `comps` is omitted the per-cell maps are derived by projection."""
    _check_partition_shape(partition, m_low, m_high)
    derived, failure = derive_component_maps(m_low, m_high, tau, partition, cap)
    if derived is None:
        return CheckReport(
            False,
            detail=f"tau does not factor through the partition (component {failure['high_var']})",
            counterexample=failure,
        )
    if comps is not None:
        for high_var, cell in partition.cells:
            given = comps.table(high_var)
            if given != derived.table(high_var):
                mismatch = next(
                    k
                    for k in set(given) | set(derived.table(high_var))
                    if given.get(k) != derived.table(high_var).get(k)
                )
                return CheckReport(
                    False,
                    detail=f"supplied component map for {high_var} disagrees with tau",
                    counterexample={"high_var": high_var, "cell_values": mismatch},
                )
    strong = check_strong_abstraction(m_low, m_high, tau, cap)
    if not strong.verdict:
        return CheckReport(
            False,
            detail="tau factors but is not a strong abstraction: " + strong.detail,
            counterexample=strong.counterexample,
        )
    return CheckReport(
        True,
        detail="constructive abstraction holds",
        witness={"partition": partition, "components": comps or derived, **strong.witness},
    )


def _semantic_supports(
    m_low: CausalModel, m_high: CausalModel, tau: StateMap, cap: int | None
) -> dict[str, set[str]]:
    """For each high variable, the low variables its tau-component actually
    reads: v is in the support when two low states differing only at v map
    to different values of that component."""
    low_sig, high_sig = m_low.signature, m_high.signature
    table = _tau_tuple_table(m_low, m_high, tau, cap)
    names = low_sig.endo_names
    supports: dict[str, set[str]] = {h: set() for h in high_sig.endo_names}
    for idx, var in enumerate(names):
        buckets: dict[tuple, list[tuple[int, ...]]] = {}
        for t in table:
            buckets.setdefault(t[:idx] + t[idx + 1 :], []).append(t)
        for group in buckets.values():
            if len(group) < 2:
                continue
            for high_var in high_sig.endo_names:
                if high_var in supports and var in supports[high_var]:
                    continue
                values = {table[t][high_var] for t in group}
                if len(values) > 1:
                    supports[high_var].add(var)
    return supports


def search_constructive_partition(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    max_low_vars: int = 10,
    cap: int | None = None,
):
    """Find a partition and component maps certifying constructiveness, or
    None.

    tau factors over disjoint cells exactly when the per-component semantic
    supports are pairwise disjoint, so the canonical candidate assigns each
    high variable its support (padded from the unused low variables when a
    component is constant, in declaration order) and marginalizes the rest.
    """
    low_names = m_low.signature.endo_names
    if len(low_names) > max_low_vars:
        raise SizeCapExceeded("low variable set", len(low_names), max_low_vars)
    supports = _semantic_supports(m_low, m_high, tau, cap)
    used: set[str] = set()
    for high_var, support in supports.items():
        if used & support:
            return None
        used |= support
    unused = [v for v in low_names if v not in used]
    cells = []
    for d in m_high.signature.endogenous:
        support = supports[d.name]
        if not support:
            if not unused:
                return None
            support = {unused.pop(0)}
        cells.append((d.name, tuple(v for v in low_names if v in support)))
    partition = Partition(tuple(cells), tuple(unused))
    comps, failure = derive_component_maps(m_low, m_high, tau, partition, cap)
    if comps is None:
        raise AssertionError(f"disjoint supports must factor, got {failure}")
    verdict = check_constructive(m_low, m_high, tau, partition, comps, cap)
    if not verdict.verdict:
        return None
    return partition, comps


def omega_tau_order_preserving(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    cap: int | None = None,
) -> CheckReport:
    """Exhaustive order preservation (monotonicity over strictly comparable
    pairs) of the induced map on its domain of definition."""
    i_low_tau, _, omega_tau = compute_induced_sets(m_low, m_high, tau, cap)
    for i1 in i_low_tau:
        for i2 in i_low_tau:
            if natural_lt(i1, i2) and not natural_leq(
                omega_tau.apply(i1), omega_tau.apply(i2)
            ):
                return CheckReport(
                    False,
                    detail="induced map breaks the strict order",
                    counterexample={"pair": (i1, i2)},
                )
    return CheckReport(True, detail="induced map preserves the strict order")
