"""Exact-rational probability over contexts and endogenous states.

Distributions are finite-support with Fraction masses summing to exactly 1;
no floating point enters any check, so distribution equality is decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InputError, SizeCapExceeded, contexts_cap
from .interventions import enumerate_interventions
from .maps import ContextMap, StateMap
from .model import (
    Assignment,
    CausalModel,
    Signature,
    VariableDecl,
    check_context,
    check_intervention,
    enumerate_contexts,
    solve_under,
)
from .expr import Expr, Table, Var
from .report import CheckReport

EMPTY = Assignment()


@dataclass(frozen=True)
class RationalDist:
    """Finite-support distribution with exact rational masses.

    Keys are assignments (contexts or endogenous states). Entries with
    zero mass are permitted and ignored by equality.
    """

    entries: tuple[tuple[Assignment, Fraction], ...]

    def __post_init__(self):
        canon = []
        seen = set()
        total = Fraction(0)
        for key, p in self.entries:
            key = Assignment(key)
            p = Fraction(p)
            if p < 0:
                raise InputError(f"negative probability {p} for {key!r}")
            if key in seen:
                raise InputError(f"duplicate distribution entry for {key!r}")
            seen.add(key)
            total += p
            canon.append((key, p))
        if total != 1:
            raise InputError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "entries", tuple(sorted(canon)))

    @staticmethod
    def point(key: Assignment) -> "RationalDist":
        return RationalDist(((Assignment(key), Fraction(1)),))

    @staticmethod
    def uniform(keys: Iterable[Assignment]) -> "RationalDist":
        keys = list(keys)
        if not keys:
            raise InputError("uniform distribution needs a non-empty support")
        p = Fraction(1, len(keys))
        return RationalDist(tuple((k, p) for k in keys))

    @staticmethod
    def from_weights(weights: Mapping[Assignment, int | Fraction]) -> "RationalDist":
        total = sum(Fraction(w) for w in weights.values())
        if total <= 0:
            raise InputError("weights must have a positive sum")
        return RationalDist(tuple((k, Fraction(w) / total) for k, w in weights.items()))

    @cached_property
    def _nonzero(self) -> dict[Assignment, Fraction]:
        return {k: p for k, p in self.entries if p != 0}

    def mass(self, key: Assignment) -> Fraction:
        return self._nonzero.get(Assignment(key), Fraction(0))

    def support(self) -> tuple[Assignment, ...]:
        return tuple(self._nonzero)

    def as_dict(self) -> dict[Assignment, Fraction]:
        return dict(self._nonzero)

    def total(self) -> Fraction:
        return sum((p for _, p in self.entries), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalDist):
            return self._nonzero == other._nonzero
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._nonzero.items())))

    def mixed(self, other: "RationalDist", weight: Fraction) -> "RationalDist":
        """Convex combination: weight * self + (1 - weight) * other."""
        weight = Fraction(weight)
        if not 0 <= weight <= 1:
            raise InputError(f"mixture weight {weight} outside [0, 1]")
        out: dict[Assignment, Fraction] = {}
        for k, p in self._nonzero.items():
            out[k] = out.get(k, Fraction(0)) + weight * p
        for k, p in other._nonzero.items():
            out[k] = out.get(k, Fraction(0)) + (1 - weight) * p
        return RationalDist(tuple(out.items()))


# The two roles a RationalDist plays; the names document intent.
RationalDistribution = RationalDist
StateDistribution = RationalDist


def check_distribution(model: CausalModel, d: RationalDist) -> None:
    for context, _ in d.entries:
        check_context(model, context)


def push_to_states(model: CausalModel, d: RationalDist) -> RationalDist:
    """View a context distribution as a distribution on endogenous states:
    each state receives the exact sum of the masses of the contexts that
    solve to it."""
    return interventional_dist(model, d, EMPTY)


def interventional_dist(model: CausalModel, d: RationalDist, intervention: Assignment) -> RationalDist:
    """Distribution of the solution under the intervention, with contexts
    drawn from `d`."""
    check_intervention(model, intervention)
    out: dict[Assignment, Fraction] = {}
    for context, p in d.entries:
        if p == 0:
            continue
        state = solve_under(model, context, intervention)
        out[state] = out.get(state, Fraction(0)) + p
    return RationalDist(tuple(out.items()))


def tau_pushforward(tau: StateMap, sd: RationalDist) -> RationalDist:
    """Image of a state distribution under a state map; mass-preserving."""
    out: dict[Assignment, Fraction] = {}
    for state, p in sd.entries:
        image = tau.apply(state)
        out[image] = out.get(image, Fraction(0)) + p
    return RationalDist(tuple(out.items()))


def context_pushforward(tau_u: ContextMap, d: RationalDist) -> RationalDist:
    """Image of a context distribution under a context map."""
    out: dict[Assignment, Fraction] = {}
    for context, p in d.entries:
        image = tau_u.apply(context)
        out[image] = out.get(image, Fraction(0)) + p
    return RationalDist(tuple(out.items()))


def equivalent(
    m1: CausalModel,
    d1: RationalDist,
    m2: CausalModel,
    d2: RationalDist,
    interventions: Iterable[Assignment] | None = None,
    cap: int | None = None,
) -> CheckReport:
    """Whether the two probabilistic models give every causal formula the
    same probability, for formulas whose prefixes lie in `interventions`
    (default: the full intervention space, size-guarded).

    Decided by comparing the pushforwards of the two context distributions
    under the response-profile map u -> (solution under each listed
    intervention). Profile-distribution equality is stronger than
    per-formula equality and implies it, including for Boolean
    combinations across prefixes.
    """
    s1, s2 = m1.signature, m2.signature
    if s1.endo_names != s2.endo_names or any(
        s1.domains[n] != s2.domains[n] for n in s1.endo_names
    ):
        raise InputError("models must share endogenous variables and domains")
    if interventions is None:
        interventions = enumerate_interventions(m1, cap)
    ilist = list(interventions)

    def profile_dist(model: CausalModel, d: RationalDist) -> dict[tuple, Fraction]:
        out: dict[tuple, Fraction] = {}
        for context, p in d.entries:
            if p == 0:
                continue
            profile = tuple(solve_under(model, context, i) for i in ilist)
            out[profile] = out.get(profile, Fraction(0)) + p
        return out

    p1 = profile_dist(m1, d1)
    p2 = profile_dist(m2, d2)
    if p1 == p2:
        return CheckReport(True, detail=f"equivalent over {len(ilist)} interventions")
    for profile in sorted(set(p1) | set(p2)):
        a = p1.get(profile, Fraction(0))
        b = p2.get(profile, Fraction(0))
        if a != b:
            return CheckReport(
                False,
                detail="response-profile masses differ",
                counterexample={
                    "profile": profile,
                    "interventions": tuple(ilist),
                    "mass_left": a,
                    "mass_right": b,
                },
            )
    raise AssertionError("unreachable")


def to_uev(model: CausalModel, d: RationalDist, cap: int | None = None) -> tuple[CausalModel, RationalDist]:
    """Rewire a model so each endogenous variable reads a private exogenous
    variable, preserving every causal formula's probability.

    Each fresh exogenous variable ranges over integer codes of the
    original contexts (0..K-1 in declaration-order lexicographic context
    order). The equation for the i-th endogenous variable decodes only its
    own private variable, and the output distribution puts the original
    mass of each context on the corresponding diagonal code vector.
    """
    sig = model.signature
    contexts = enumerate_contexts(model, cap)
    k = len(contexts)
    limit = contexts_cap(cap)
    if k > limit:
        raise SizeCapExceeded("context space", k, limit)
    codes = tuple(range(k))
    code_of = {c: i for i, c in enumerate(contexts)}

    taken = set(sig.domains)
    private: dict[str, str] = {}
    for name in sig.endo_names:
        fresh = f"U_{name}"
        while fresh in taken:
            fresh += "_"
        taken.add(fresh)
        private[name] = fresh

    new_exo = tuple(VariableDecl(private[n], codes) for n in sig.endo_names)
    new_sig = Signature(new_exo, sig.endogenous)

    exo_names = set(sig.exo_names)
    new_eqs = []
    for name, expr in model.equations:
        decoder_cache: dict[str, Expr] = {}

        def decode(exo_var: str, owner: str = name) -> Expr:
            if exo_var not in decoder_cache:
                decoder_cache[exo_var] = Table.from_mapping(
                    (private[owner],),
                    {(i,): contexts[i][exo_var] for i in codes},
                )
            return decoder_cache[exo_var]

        new_eqs.append((name, _substitute_exo(expr, exo_names, decode)))

    new_model = CausalModel(new_sig, tuple(new_eqs), model.allowed_interventions)
    diag_names = [private[n] for n in sig.endo_names]
    new_entries = []
    for context, p in d.entries:
        code = code_of[context]
        new_entries.append((Assignment({v: code for v in diag_names}), p))
    return new_model, RationalDist(tuple(new_entries))


def _substitute_exo(expr: Expr, exo_names: set[str], decode) -> Expr:
    from .expr import Binary, Ite, Lit, Unary

    if isinstance(expr, Lit):
        return expr
    if isinstance(expr, Var):
        return decode(expr.name) if expr.name in exo_names else expr
    if isinstance(expr, Unary):
        return Unary(expr.op, _substitute_exo(expr.arg, exo_names, decode))
    if isinstance(expr, Binary):
        return Binary(
            expr.op,
            _substitute_exo(expr.left, exo_names, decode),
            _substitute_exo(expr.right, exo_names, decode),
        )
    if isinstance(expr, Ite):
        return Ite(
            _substitute_exo(expr.cond, exo_names, decode),
            _substitute_exo(expr.then, exo_names, decode),
            _substitute_exo(expr.other, exo_names, decode),
        )
    if isinstance(expr, Table):
        if not (set(expr.vars) & exo_names):
            return expr
        # A table may mix exogenous and endogenous inputs; rebuild it as a
        # nested conditional so each exogenous read goes through its decoder.
        return _table_to_ite(expr, exo_names, decode)
    raise TypeError(f"not an expression: {expr!r}")


def _table_to_ite(table: Table, exo_names: set[str], decode) -> Expr:
    from .expr import Binary, Ite, Lit

    def ref(var: str) -> Expr:
        return decode(var) if var in exo_names else Var(var)

    entries = list(table.entries)
    result: Expr = Lit(entries[-1][1])
    for key, out in reversed(entries[:-1]):
        cond: Expr | None = None
        for var, value in zip(table.vars, key):
            eq = Binary("==", ref(var), Lit(value))
            cond = eq if cond is None else Binary("&&", cond, eq)
        result = Ite(cond, Lit(out), result)
    return result
