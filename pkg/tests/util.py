"""Seeded random generators for models, maps, and intervention setups.

All generators are deterministic functions of the supplied Random
instance, so failures reproduce from the seed alone.
"""

from __future__ import annotations

import itertools
import random

from cak import (
    ALL,
    Assignment,
    CausalModel,
    EMPTY,
    InterventionMap,
    Signature,
    StateMap,
    VariableDecl,
    enumerate_interventions,
    enumerate_states,
)
from cak.expr import Lit, Table


def random_model(
    rng: random.Random,
    max_endo: int = 3,
    max_exo: int = 2,
    domain: tuple[int, ...] = (0, 1),
    allowed=ALL,
) -> CausalModel:
    """A random acyclic model: every equation is a random total table over
    at most two parents drawn from the exogenous variables and the
    previously declared endogenous ones."""
    n_exo = rng.randint(1, max_exo)
    n_endo = rng.randint(1, max_endo)
    exo = tuple(VariableDecl(f"U{i}", domain) for i in range(1, n_exo + 1))
    endo = tuple(VariableDecl(f"X{i}", domain) for i in range(1, n_endo + 1))
    equations = []
    for k, decl in enumerate(endo):
        pool = [d.name for d in exo] + [d.name for d in endo[:k]]
        n_parents = rng.randint(0, min(2, len(pool)))
        parents = rng.sample(pool, n_parents)
        if not parents:
            equations.append((decl.name, Lit(rng.choice(domain))))
            continue
        entries = {
            combo: rng.choice(domain)
            for combo in itertools.product(*(domain for _ in parents))
        }
        equations.append((decl.name, Table.from_mapping(tuple(parents), entries)))
    return CausalModel(Signature(exo, endo), tuple(equations), allowed)


def random_state_map(rng: random.Random, low: CausalModel, high: CausalModel) -> StateMap:
    """A uniformly random total table from low states to high states."""
    high_states = enumerate_states(high)
    return StateMap.from_table(
        tuple((s, rng.choice(high_states)) for s in enumerate_states(low))
    )


def random_omega_setup(
    rng: random.Random, low: CausalModel, high: CausalModel
) -> tuple[tuple[Assignment, ...], tuple[Assignment, ...], InterventionMap]:
    """Random allowed-intervention sets with an admissible map between
    them: total, surjective onto the image, and monotone by construction
    (the low set is the empty intervention plus an antichain)."""
    low_fulls = [i for i in enumerate_interventions(low) if len(i) == len(low.signature.endo_names)]
    high_pool = enumerate_interventions(high)
    shape = rng.choice(("empty", "fulls", "empty+fulls", "singletons"))
    if shape == "empty":
        i_low = [EMPTY]
    elif shape == "fulls":
        i_low = rng.sample(low_fulls, rng.randint(1, min(4, len(low_fulls))))
    elif shape == "empty+fulls":
        i_low = [EMPTY] + rng.sample(low_fulls, rng.randint(1, min(3, len(low_fulls))))
    else:
        var = rng.choice(low.signature.endogenous)
        i_low = [EMPTY] + [Assignment({var.name: v}) for v in var.domain]
    pairs = []
    for i in i_low:
        if len(i) == 0:
            pairs.append((i, EMPTY))
        else:
            pairs.append((i, rng.choice(high_pool)))
    omega = InterventionMap.from_pairs(tuple(pairs))
    i_high = tuple(dict.fromkeys(img for _, img in pairs))
    return tuple(i_low), i_high, omega


def random_transformation_case(rng: random.Random, force_success: bool = False):
    """A (low model, high model, tau, omega) quadruple with admissible
    intervention structure baked into the models' allowed sets."""
    low = random_model(rng)
    if force_success:
        high = low
        tau = StateMap.identity(low.signature)
        i_low = tuple(enumerate_interventions(low))
        omega = InterventionMap.identity(i_low)
        return (
            low.with_allowed(i_low),
            high.with_allowed(i_low),
            tau,
            omega,
        )
    high = random_model(rng)
    tau = random_state_map(rng, low, high)
    i_low, i_high, omega = random_omega_setup(rng, low, high)
    return low.with_allowed(i_low), high.with_allowed(i_high), tau, omega


def random_uniform_chain(rng: random.Random, max_attempts: int = 2000):
    """Two chained transformation legs that both pass the distribution-free
    check, rejection-sampled. The mid model's allowed set is the image of
    the first leg's map, so the composite is admissible by construction.
    Returns (low, mid, high, tau1, omega1, tau2, omega2)."""
    from cak.errors import InputError
    from cak.transform import check_uniform

    for _ in range(max_attempts):
        low, mid, tau1, omega1 = random_transformation_case(rng)
        if not check_uniform(low, mid, tau1, omega1).verdict:
            continue
        high = random_model(rng)
        tau2 = random_state_map(rng, mid, high)
        high_pool = enumerate_interventions(high)
        pairs = tuple(
            (i, EMPTY if len(i) == 0 else rng.choice(high_pool))
            for i in mid.allowed_interventions
        )
        omega2 = InterventionMap.from_pairs(pairs)
        high = high.with_allowed(tuple(dict.fromkeys(img for _, img in pairs)))
        try:
            if not check_uniform(mid, high, tau2, omega2).verdict:
                continue
        except InputError:
            continue  # randomly drawn images broke monotonicity; redraw
        return low, mid, high, tau1, omega1, tau2, omega2
    raise AssertionError("could not sample a two-leg chain within the attempt budget")
