"""Finite-domain recursive causal models: signatures, assignments, solving,
interventions as a semantic operator, causal formulas, and diagnostics.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to evaluate concurrently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
    CyclicModelError,
    EvaluationError,
    InputError,
    SizeCapExceeded,
    contexts_cap,
)
from .expr import Expr, compile_expr, variables
from .report import CheckReport

ALL = "all"


@dataclass(frozen=True)
class VariableDecl:
    """A named variable ranging over a non-empty ordered list of integers."""

    name: str
    domain: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.name or not self.name.replace("_", "a").isalnum() or self.name[0].isdigit():
            raise InputError(f"invalid variable name {self.name!r}")
        if len(self.domain) == 0:
            raise InputError(f"variable {self.name} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise InputError(f"variable {self.name} has duplicate domain values")


@dataclass(frozen=True)
class Signature:
    """Exogenous and endogenous variable declarations."""

    exogenous: tuple[VariableDecl, ...]
    endogenous: tuple[VariableDecl, ...]

    def __post_init__(self):
        object.__setattr__(self, "exogenous", tuple(self.exogenous))
        object.__setattr__(self, "endogenous", tuple(self.endogenous))
        names = [d.name for d in self.exogenous + self.endogenous]
        if len(set(names)) != len(names):
            raise InputError("variable names must be unique across the signature")

    @cached_property
    def domains(self) -> dict[str, tuple[int, ...]]:
        return {d.name: d.domain for d in self.exogenous + self.endogenous}

    @cached_property
    def exo_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.exogenous)

    @cached_property
    def endo_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.endogenous)


class Assignment(Mapping[str, int]):
    """Immutable variable-to-value map with a canonical (name-sorted) form.

    Used for contexts (total over exogenous), endogenous states (total over
    endogenous) and interventions (partial over endogenous); totality is
    checked by the operations that require it.
    """

    __slots__ = ("_items", "_dict", "_hash", "_keys")

    def __init__(self, mapping: Union[Mapping[str, int], Iterable[tuple[str, int]]] = (), **values: int):
        pairs = dict(mapping)
        pairs.update(values)
        items = tuple(sorted(pairs.items()))
        self._items = items
        self._dict = pairs
        self._hash = hash(items)
        self._keys = frozenset(pairs)

    @classmethod
    def _from_sorted_items(cls, items: tuple[tuple[str, int], ...]) -> "Assignment":
        # Fast path for callers that already hold name-sorted pairs.
        self = object.__new__(cls)
        self._items = items
        self._dict = dict(items)
        self._hash = hash(items)
        self._keys = frozenset(self._dict)
        return self

    @property
    def items_sorted(self) -> tuple[tuple[str, int], ...]:
        return self._items

    def __getitem__(self, name: str) -> int:
        return self._dict[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._dict)

    def __contains__(self, name) -> bool:
        return name in self._dict

    def get(self, name, default=None):
        return self._dict.get(name, default)

    def as_dict(self) -> dict[str, int]:
        return dict(self._dict)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Assignment):
            return self._items == other._items
        return NotImplemented

    def __lt__(self, other: "Assignment") -> bool:
        return self._items < other._items

    def __repr__(self) -> str:
        body = ", ".join(f"{k}={v}" for k, v in self._items)
        return f"Assignment({body})"

    def merged(self, other: "Assignment") -> "Assignment":
        out = dict(self._dict)
        out.update(other._dict)
        return Assignment(out)

    def restricted(self, names: Iterable[str]) -> "Assignment":
        keep = set(names)
        return Assignment({k: v for k, v in self._items if k in keep})


# Aliases documenting intent at call sites.
Context = Assignment
EndoState = Assignment
Intervention = Assignment

EMPTY = Assignment()


@dataclass(frozen=True)
class CausalModel:
    """A finite causal model: signature, one equation per endogenous
    variable, and a set of allowed interventions (the string ``"all"``
    meaning every partial endogenous assignment, including the empty one).
    """

    signature: Signature
    equations: tuple[tuple[str, Expr], ...]
    allowed_interventions: Union[str, tuple[Assignment, ...]] = ALL

    def __post_init__(self):
        eqs = dict(self.equations)
        endo = self.signature.endo_names
        missing = [n for n in endo if n not in eqs]
        extra = [n for n in eqs if n not in endo]
        if missing:
            raise InputError(f"missing equations for {missing}")
        if extra:
            raise InputError(f"equations given for non-endogenous variables {extra}")
        object.__setattr__(self, "equations", tuple((n, eqs[n]) for n in endo))
        if isinstance(self.allowed_interventions, str):
            if self.allowed_interventions != ALL:
                raise InputError(
                    f"allowed_interventions must be {ALL!r} or a list, got {self.allowed_interventions!r}"
                )
        else:
            object.__setattr__(
                self,
                "allowed_interventions",
                tuple(
                    i if isinstance(i, Assignment) else Assignment(i)
                    for i in self.allowed_interventions
                ),
            )

    @cached_property
    def equation_map(self) -> dict[str, Expr]:
        return dict(self.equations)

    @cached_property
    def _solvers(self) -> dict[str, object]:
        return {name: compile_expr(expr) for name, expr in self.equations}

    @cached_property
    def order(self) -> tuple[str, ...]:
        return tuple(dependency_order(self))

    @cached_property
    def _endo_sorted(self) -> tuple[str, ...]:
        return tuple(sorted(self.signature.endo_names))

    @cached_property
    def _exo_keyset(self) -> frozenset[str]:
        return frozenset(self.signature.exo_names)

    @cached_property
    def _domain_sets(self) -> dict[str, frozenset[int]]:
        return {n: frozenset(d) for n, d in self.signature.domains.items()}

    def with_allowed(self, interventions) -> "CausalModel":
        """Copy of this model with a different allowed-intervention set."""
        return CausalModel(self.signature, self.equations, interventions)


def dependency_order(model: CausalModel) -> list[str]:
    """Topological order of the endogenous variables.

    The static dependency graph has an edge Y -> X whenever Y appears in
    X's equation. Ties are broken by declaration order, so the result is
    deterministic. Raises CyclicModelError on a cycle.
    """
    endo = model.signature.endo_names
    endo_set = set(endo)
    parents = {
        name: sorted(variables(expr) & endo_set) for name, expr in model.equations
    }
    remaining = dict(parents)
    done: set[str] = set()
    order: list[str] = []
    while remaining:
        ready = [n for n in endo if n in remaining and all(p in done for p in remaining[n])]
        if not ready:
            raise CyclicModelError(_find_cycle(remaining))
        for name in ready:
            order.append(name)
            done.add(name)
            del remaining[name]
    return order


def _find_cycle(parents: dict[str, list[str]]) -> tuple[str, ...]:
    # Every node left has a parent that is also left, so walking parent
    # links must revisit a node.
    start = next(iter(parents))
    seen: list[str] = []
    node = start
    while node not in seen:
        seen.append(node)
        node = next(p for p in parents[node] if p in parents)
    cycle = seen[seen.index(node):] + [node]
    return tuple(reversed(cycle))


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # cycle | unknown-variable | out-of-domain | bad-intervention
    message: str
    subject: str = ""
    witness: Assignment | None = None


def validate(model: CausalModel) -> list[Diagnostic]:
    """All model-level invariant violations; empty list means valid.

    Checks acyclicity, that equations reference only declared variables,
    that every equation output stays inside the declared domain for every
    combination of referenced-variable values, and that each listed
    allowed intervention is well-typed.
    """
    sig = model.signature
    diags: list[Diagnostic] = []
    known = set(sig.domains)
    for name, expr in model.equations:
        for ref in sorted(variables(expr)):
            if ref not in known:
                diags.append(
                    Diagnostic(
                        "unknown-variable",
                        f"equation for {name} references undeclared variable {ref}",
                        subject=name,
                    )
                )
    if any(d.kind == "unknown-variable" for d in diags):
        return diags

    try:
        dependency_order(model)
    except CyclicModelError as exc:
        diags.append(Diagnostic("cycle", str(exc), subject=exc.path[0]))
        return diags

    for name, expr in model.equations:
        domain = set(sig.domains[name])
        refs = sorted(variables(expr))
        fn = compile_expr(expr)
        for combo in itertools.product(*(sig.domains[r] for r in refs)):
            env = dict(zip(refs, combo))
            try:
                value = fn(env)
            except EvaluationError as exc:
                diags.append(
                    Diagnostic("out-of-domain", f"equation for {name}: {exc}", name, Assignment(env))
                )
                continue
            if value not in domain:
                diags.append(
                    Diagnostic(
                        "out-of-domain",
                        f"equation for {name} yields {value} outside its domain",
                        subject=name,
                        witness=Assignment(env),
                    )
                )

    if not isinstance(model.allowed_interventions, str):
        endo = set(sig.endo_names)
        for iv in model.allowed_interventions:
            for var, value in iv.items_sorted:
                if var not in endo:
                    diags.append(
                        Diagnostic(
                            "bad-intervention",
                            f"intervention sets non-endogenous variable {var}",
                            subject=var,
                            witness=iv,
                        )
                    )
                elif value not in sig.domains[var]:
                    diags.append(
                        Diagnostic(
                            "bad-intervention",
                            f"intervention sets {var} to {value}, outside its domain",
                            subject=var,
                            witness=iv,
                        )
                    )
    return diags


def check_context(model: CausalModel, context: Assignment) -> None:
    sig = model.signature
    if set(context) != set(sig.exo_names):
        raise InputError(
            f"context must assign exactly the exogenous variables {sig.exo_names}, got {sorted(context)}"
        )
    for name, value in context.items_sorted:
        if value not in sig.domains[name]:
            raise InputError(f"context sets {name} to {value}, outside its domain")


def check_intervention(model: CausalModel, intervention: Assignment) -> None:
    sig = model.signature
    endo = set(sig.endo_names)
    for name, value in intervention.items_sorted:
        if name not in endo:
            raise InputError(f"intervention sets non-endogenous variable {name}")
        if value not in sig.domains[name]:
            raise InputError(f"intervention sets {name} to {value}, outside its domain")


def apply_intervention(model: CausalModel, intervention: Assignment) -> CausalModel:
    """Model with each intervened variable's equation replaced by the
    constant; everything else, including the allowed set, is unchanged."""
    check_intervention(model, intervention)
    if len(intervention) == 0:
        return model
    from .expr import Lit

    new_eqs = tuple(
        (name, Lit(intervention[name]) if name in intervention else expr)
        for name, expr in model.equations
    )
    return CausalModel(model.signature, new_eqs, model.allowed_interventions)


def solve(model: CausalModel, context: Assignment) -> Assignment:
    """The unique simultaneous solution of the equations in `context`."""
    return solve_under(model, context, EMPTY)


def solve_under(model: CausalModel, context: Assignment, intervention: Assignment) -> Assignment:
    """Solution after forcing the intervened variables to their constants.

    Equivalent to solve(apply_intervention(model, intervention), context)
    but without rebuilding the model. The model is assumed valid; an
    out-of-domain equation output raises EvaluationError rather than
    being clamped.
    """
    if context._keys != model._exo_keyset:
        check_context(model, context)
    env = dict(context._dict)
    solvers = model._solvers
    domains = model._domain_sets
    forced = intervention._dict
    try:
        for name in model.order:
            if name in forced:
                value = forced[name]
            else:
                value = solvers[name](env)
                if value not in domains[name]:
                    raise EvaluationError(
                        f"equation for {name} produced {value}, outside its domain"
                    )
            env[name] = value
    except KeyError:
        check_context(model, context)  # raises with a precise message
        raise
    return Assignment._from_sorted_items(
        tuple((n, env[n]) for n in model._endo_sorted)
    )


# ---------------------------------------------------------------------------
# Causal formulas

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Event(Formula):
    """Primitive event: the named endogenous variable takes the value."""

    var: str
    value: int


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class CausalFormula:
    """An intervention prefix (possibly empty) over a Boolean body."""

    prefix: Assignment
    body: Formula


def _holds(body: Formula, state: Assignment, model: CausalModel) -> bool:
    if isinstance(body, Event):
        if body.var not in set(model.signature.endo_names):
            raise InputError(f"formula references unknown endogenous variable {body.var}")
        return state[body.var] == body.value
    if isinstance(body, Not):
        return not _holds(body.arg, state, model)
    if isinstance(body, And):
        return all(_holds(a, state, model) for a in body.args)
    if isinstance(body, Or):
        return any(_holds(a, state, model) for a in body.args)
    raise TypeError(f"not a formula: {body!r}")


def eval_formula(model: CausalModel, context: Assignment, formula: CausalFormula) -> bool:
    """Truth of the formula's body in the solution under its prefix."""
    state = solve_under(model, context, formula.prefix)
    return _holds(formula.body, state, model)


# ---------------------------------------------------------------------------
# Enumeration helpers

def enumerate_contexts(model_or_sig, cap: int | None = None) -> list[Assignment]:
    """Every context, in declaration-order lexicographic order."""
    sig = getattr(model_or_sig, "signature", model_or_sig)
    return _enumerate_total(sig.exogenous, "context space", cap)


def enumerate_states(model_or_sig, cap: int | None = None) -> list[Assignment]:
    """Every total endogenous state, in declaration-order lexicographic order."""
    sig = getattr(model_or_sig, "signature", model_or_sig)
    return _enumerate_total(sig.endogenous, "endogenous state space", cap)


def _enumerate_total(decls: tuple[VariableDecl, ...], what: str, cap: int | None) -> list[Assignment]:
    size = 1
    for d in decls:
        size *= len(d.domain)
    limit = contexts_cap(cap)
    if size > limit:
        raise SizeCapExceeded(what, size, limit)
    names = [d.name for d in decls]
    out = []
    for combo in itertools.product(*(d.domain for d in decls)):
        out.append(Assignment(zip(names, combo)))
    return out


# ---------------------------------------------------------------------------
# Unique exogenous parents

def check_uev(model: CausalModel) -> CheckReport:
    """Whether each endogenous variable can be assigned a private exogenous
    input variable.

    The exogenous support of an equation is determined semantically: an
    exogenous variable counts only if changing its value, with the
    equation's other referenced variables held fixed at some combination,
    changes the equation's output. The check passes when every equation
    has at most one exogenous variable in its support, no two equations
    share the same supporting variable, and enough unused exogenous
    variables remain to serve the equations with empty support.
    """
    sig = model.signature
    exo = set(sig.exo_names)
    supports: dict[str, list[str]] = {}
    for name, expr in model.equations:
        refs = sorted(variables(expr))
        exo_refs = [r for r in refs if r in exo]
        support = []
        fn = compile_expr(expr)
        for u in exo_refs:
            others = [r for r in refs if r != u]
            dom_u = sig.domains[u]
            affected = False
            for combo in itertools.product(*(sig.domains[r] for r in others)):
                env = dict(zip(others, combo))
                seen = set()
                for value in dom_u:
                    env[u] = value
                    seen.add(fn(env))
                    if len(seen) > 1:
                        affected = True
                        break
                if affected:
                    break
            if affected:
                support.append(u)
        supports[name] = support

    for name in sig.endo_names:
        if len(supports[name]) > 1:
            return CheckReport(
                False,
                detail=f"{name} depends on multiple exogenous variables",
                counterexample={"variable": name, "exogenous": tuple(supports[name])},
            )
    forced: dict[str, str] = {}
    for name in sig.endo_names:
        if supports[name]:
            u = supports[name][0]
            if u in forced.values():
                other = next(v for v, w in forced.items() if w == u)
                return CheckReport(
                    False,
                    detail=f"{other} and {name} share exogenous variable {u}",
                    counterexample={"variables": (other, name), "shared": u},
                )
            forced[name] = u
    unforced = [n for n in sig.endo_names if n not in forced]
    spare = [u for u in sig.exo_names if u not in forced.values()]
    if len(unforced) > len(spare):
        return CheckReport(
            False,
            detail="not enough exogenous variables to assign private inputs to "
            + ", ".join(unforced),
            counterexample={"unassigned": tuple(unforced), "available": tuple(spare)},
        )
    assignment = dict(forced)
    for name, u in zip(unforced, spare):
        assignment[name] = u
    return CheckReport(True, detail="uev holds", witness=assignment)
