"""Exact and distribution-free transformation checks between two models.

The distribution-free ("uniform") check is decided by a finite witness
search: a context map tau_u is *compatible* with the state map tau when
solving low and then abstracting agrees with abstracting the context and
then solving high, for every allowed low intervention. A compatible map
exists exactly when, for every low distribution, some high distribution
makes the transformation exact; the search below constructs one or
refutes all of them.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError
from .interventions import InterventionMap, check_omega
from .maps import ContextMap, StateMap, compose_intervention_maps, compose_state_maps
from .model import Assignment, CausalModel, enumerate_contexts, solve_under
from .prob import (
    RationalDist,
    check_distribution,
    context_pushforward,
    interventional_dist,
    tau_pushforward,
)
from .report import CheckReport


def _allowed(model: CausalModel, cap: int | None = None) -> tuple[Assignment, ...]:
    if isinstance(model.allowed_interventions, str):
        from .interventions import enumerate_interventions

        return tuple(enumerate_interventions(model, cap))
    return model.allowed_interventions


def check_exact(
    m_low: CausalModel,
    d_low: RationalDist,
    m_high: CausalModel,
    d_high: RationalDist,
    tau: StateMap,
    omega: InterventionMap,
    cap: int | None = None,
) -> CheckReport:
    """Whether, for every allowed low intervention i, the high
    interventional distribution under omega(i) equals the tau-pushforward
    of the low interventional distribution under i, with exact equality.

    omega must be total on the low allowed set, land in the high allowed
    set, and be surjective and order-preserving; violations are input
    errors.
    """
    i_low = _allowed(m_low, cap)
    i_high = _allowed(m_high, cap)
    check_distribution(m_low, d_low)
    check_distribution(m_high, d_high)
    gate = check_omega(omega, i_low, i_high)
    if not gate.verdict:
        raise InputError(f"omega is not admissible: {gate.detail}")
    for i in i_low:
        high_dist = interventional_dist(m_high, d_high, omega.apply(i))
        pushed = tau_pushforward(tau, interventional_dist(m_low, d_low, i))
        if high_dist != pushed:
            for state in sorted(set(high_dist.support()) | set(pushed.support())):
                a, b = high_dist.mass(state), pushed.mass(state)
                if a != b:
                    return CheckReport(
                        False,
                        detail="interventional distributions differ",
                        counterexample={
                            "intervention": i,
                            "state": state,
                            "high_mass": a,
                            "pushed_low_mass": b,
                        },
                    )
    return CheckReport(True, detail=f"exact over {len(i_low)} interventions")


def check_compatible(
    tau_u: ContextMap,
    tau: StateMap,
    omega: InterventionMap,
    m_low: CausalModel,
    m_high: CausalModel,
    i_low: Iterable[Assignment] | None = None,
    cap: int | None = None,
) -> CheckReport:
    """Whether tau(solve_low(u, i)) == solve_high(tau_u(u), omega(i)) for
    every low context u and every intervention i in `i_low`."""
    interventions = tuple(i_low) if i_low is not None else _allowed(m_low, cap)
    for u in enumerate_contexts(m_low, cap):
        for i in interventions:
            low_side = tau.apply(solve_under(m_low, u, i))
            high_side = solve_under(m_high, tau_u.apply(u), omega.apply(i))
            if low_side != high_side:
                return CheckReport(
                    False,
                    detail="abstract-then-solve disagrees with solve-then-abstract",
                    counterexample={
                        "context": u,
                        "intervention": i,
                        "abstracted_low_solution": low_side,
                        "high_solution": high_side,
                    },
                )
    return CheckReport(True, detail="compatible")


def _correspondents(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    omega: InterventionMap,
    interventions: Sequence[Assignment],
    cap: int | None,
):
    """For each low context, the high contexts with an identical abstracted
    response profile, in enumeration order."""
    low_contexts = enumerate_contexts(m_low, cap)
    high_contexts = enumerate_contexts(m_high, cap)
    high_images = [omega.apply(i) for i in interventions]

    profile_to_high: dict[tuple, list[Assignment]] = {}
    for u_h in high_contexts:
        profile = tuple(solve_under(m_high, u_h, j) for j in high_images)
        profile_to_high.setdefault(profile, []).append(u_h)

    table: dict[Assignment, list[Assignment]] = {}
    for u_l in low_contexts:
        profile = tuple(
            tau.apply(solve_under(m_low, u_l, i)) for i in interventions
        )
        table[u_l] = profile_to_high.get(profile, [])
    return low_contexts, high_contexts, table


def _conflict_diagnosis(
    m_low: CausalModel,
    tau: StateMap,
    omega: InterventionMap,
    interventions: Sequence[Assignment],
    u_l: Assignment,
):
    """For a context with no correspondent, look for two interventions with
    the same high image but different required high solutions."""
    by_image: dict[Assignment, list[tuple[Assignment, Assignment]]] = {}
    for i in interventions:
        required = tau.apply(solve_under(m_low, u_l, i))
        by_image.setdefault(omega.apply(i), []).append((i, required))
    for group in by_image.values():
        targets = {req for _, req in group}
        if len(targets) > 1:
            (i1, r1), (i2, r2) = next(
                ((a, b) for a in group for b in group if a[1] != b[1])
            )
            return {
                "interventions": (i1, i2),
                "required_high_states": (r1, r2),
            }
    return None


def find_compatible_tau_u(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    omega: InterventionMap,
    i_low: Iterable[Assignment] | None = None,
    require_surjective: bool = False,
    cap: int | None = None,
) -> CheckReport:
    """Search for a context map compatible with `tau`.

    Each low context gets the first (enumeration-order) high context whose
    response profile under the omega-images matches its own abstracted
    profile; the search succeeds when every low context has at least one.
    With `require_surjective`, the assignment is additionally completed so
    that every high context is hit, via an exhaustive bipartite matching;
    the greedy choice is kept wherever the matching imposes nothing.
    The witness is the full table.
    """
    interventions = tuple(i_low) if i_low is not None else _allowed(m_low, cap)
    low_contexts, high_contexts, cands = _correspondents(
        m_low, m_high, tau, omega, interventions, cap
    )
    for u_l in low_contexts:
        if not cands[u_l]:
            diagnosis = _conflict_diagnosis(m_low, tau, omega, interventions, u_l)
            ce = {"context": u_l}
            if diagnosis is not None:
                ce["conflict"] = diagnosis
            return CheckReport(
                False,
                detail=f"low context {dict(u_l)} has no corresponding high context",
                counterexample=ce,
            )

    chosen = {u_l: cands[u_l][0] for u_l in low_contexts}
    if require_surjective:
        matched = _match_high_side(low_contexts, high_contexts, cands)
        if matched is None:
            hit = set(chosen.values())
            unhit = [u_h for u_h in high_contexts if u_h not in hit]
            return CheckReport(
                False,
                detail="no surjective compatible context map exists",
                counterexample={"unreachable_high_contexts": tuple(unhit)},
            )
        chosen.update(matched)
    witness = ContextMap.from_table(tuple(chosen.items()))
    return CheckReport(
        True,
        detail="compatible context map found",
        witness=witness,
    )


def _match_high_side(
    low_contexts: Sequence[Assignment],
    high_contexts: Sequence[Assignment],
    cands: dict[Assignment, list[Assignment]],
):
    """Assign a distinct low context to every high context (edge when the
    high context is among the low one's correspondents). Returns the
    partial map low -> matched high, or None when no saturating matching
    exists."""
    candidates_of_high: dict[Assignment, list[Assignment]] = {
        u_h: [] for u_h in high_contexts
    }
    for u_l in low_contexts:
        for u_h in cands[u_l]:
            candidates_of_high[u_h].append(u_l)

    match_of_low: dict[Assignment, Assignment] = {}
    match_of_high: dict[Assignment, Assignment] = {}

    def try_assign(u_h: Assignment, visited: set[Assignment]) -> bool:
        for u_l in candidates_of_high[u_h]:
            if u_l in visited:
                continue
            visited.add(u_l)
            if u_l not in match_of_low or try_assign(match_of_low[u_l], visited):
                match_of_low[u_l] = u_h
                match_of_high[u_h] = u_l
                return True
        return False

    for u_h in high_contexts:
        if not try_assign(u_h, set()):
            return None
    return match_of_low


def iter_compatible_tau_u(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    omega: InterventionMap,
    i_low: Iterable[Assignment] | None = None,
    cap: int | None = None,
    limit: int = 1000,
):
    """Yield every compatible context map (up to `limit`), in lexicographic
    order of choices. Existence is certified by find_compatible_tau_u;
    this enumerates the full witness space on request."""
    interventions = tuple(i_low) if i_low is not None else _allowed(m_low, cap)
    low_contexts, _, cands = _correspondents(
        m_low, m_high, tau, omega, interventions, cap
    )
    if any(not cands[u] for u in low_contexts):
        return
    count = 0
    for combo in itertools.product(*(cands[u] for u in low_contexts)):
        yield ContextMap.from_table(tuple(zip(low_contexts, combo)))
        count += 1
        if count >= limit:
            return


def check_uniform(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    omega: InterventionMap,
    cap: int | None = None,
) -> CheckReport:
    """Distribution-free transformation check.

    Holds when for every low context distribution there is a high one
    making the transformation exact; decided by searching for a compatible
    context map (no surjectivity demanded). omega must be admissible
    between the two allowed sets.
    """
    i_low = _allowed(m_low, cap)
    i_high = _allowed(m_high, cap)
    gate = check_omega(omega, i_low, i_high)
    if not gate.verdict:
        raise InputError(f"omega is not admissible: {gate.detail}")
    return find_compatible_tau_u(
        m_low, m_high, tau, omega, i_low=i_low, require_surjective=False, cap=cap
    )


def sample_rational_dist(
    space: Sequence[Assignment],
    rng: random.Random,
    max_denominator: int = 64,
    max_support: int = 8,
) -> RationalDist:
    """A pseudo-random exact-rational distribution with small support and a
    denominator bounded by `max_denominator`."""
    size = rng.randint(1, min(max_support, len(space)))
    support = rng.sample(list(space), size)
    # Weights are kept small so the normalizing sum bounds the denominator.
    bound = max(1, max_denominator // max(1, size))
    weights = [rng.randint(1, max(1, bound)) for _ in support]
    total = sum(weights)
    return RationalDist(tuple((k, Fraction(w, total)) for k, w in zip(support, weights)))


def uniform_distribution_probe(
    m_low: CausalModel,
    m_high: CausalModel,
    tau: StateMap,
    omega: InterventionMap,
    tau_u: ContextMap,
    n_samples: int = 50,
    seed: int = 0,
    max_denominator: int = 64,
    cap: int | None = None,
) -> CheckReport:
    """Empirical cross-check of a compatible context map: for seeded
    pseudo-random low distributions, the pushforward through tau_u must
    make the transformation exact. Reports the first failure."""
    rng = random.Random(seed)
    space = enumerate_contexts(m_low, cap)
    for k in range(n_samples):
        d_low = sample_rational_dist(space, rng, max_denominator)
        d_high = context_pushforward(tau_u, d_low)
        report = check_exact(m_low, d_low, m_high, d_high, tau, omega, cap)
        if not report.verdict:
            return CheckReport(
                False,
                detail=f"sample {k} violates exactness",
                counterexample={
                    "sample_index": k,
                    "low_distribution": d_low,
                    "exact_failure": report.counterexample,
                },
            )
    return CheckReport(True, detail=f"{n_samples} sampled distributions all exact")


def compose_transformations(
    tau_low_mid: StateMap,
    omega_low_mid: InterventionMap,
    tau_mid_high: StateMap,
    omega_mid_high: InterventionMap,
    m_low: CausalModel,
    m_mid: CausalModel,
    cap: int | None = None,
) -> tuple[StateMap, InterventionMap]:
    """Compose two transformation legs into a single low-to-high pair of
    explicit tables (the low-to-mid maps are applied first)."""
    mid_domain = set(omega_mid_high.table)
    for _, dst in omega_low_mid.entries:
        if dst not in mid_domain:
            raise InputError(
                f"intervention maps do not chain: {dst!r} is not in the second leg's domain"
            )
    tau = compose_state_maps(
        tau_low_mid, tau_mid_high, m_low.signature, m_mid.signature, cap
    )
    omega = compose_intervention_maps(omega_low_mid, omega_mid_high)
    return tau, omega
