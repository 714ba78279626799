"""Grounding of closed formulas into propositional clause sets.

A ground atom is a (predicate, argument-label tuple) pair; equalities are
pre-evaluated during clause construction because universe elements are
distinct individuals.  The clause set is a conjunction of disjunctions of
signed atoms whose satisfying table assignments are exactly the predicate
tables making the source formula true on the fixed universes.

Instances of a top-level conjunction (for example the expansion of a
universal quantifier) are emitted clause-for-clause without cross-instance
simplification; inside a disjunction, distribution prunes tautologies,
merges duplicate literals and drops subsumed clauses to keep products small.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .logic import (FALSE, TRUE, And, Eq, EvaluationError, Exists,
                    FiniteModel, ForAll, Formula, Iff, Implies, LogicError,
                    Not, Or, Pred, Sort, TrueF, FalseF, Var, mentions_world)

Atom = tuple[str, tuple[str, ...]]
Clause = frozenset[int]

DEFAULT_CLAUSE_LIMIT = 500_000


class GroundingError(LogicError):
    """Grounding failed (clause explosion or an empty quantified universe)."""


@dataclass(frozen=True)
class GroundConstraintSet:
    """Propositional clauses over ground atoms for a fixed pair of universes.

    Literals are 1-based signed atom indices; an empty clause marks an
    unsatisfiable set.
    """

    things: tuple[str, ...]
    worlds: tuple[str, ...]
    atoms: tuple[Atom, ...]
    clauses: tuple[Clause, ...]

    @property
    def unsatisfiable(self) -> bool:
        return any(not clause for clause in self.clauses)

    def atom_index(self, atom: Atom) -> int:
        return self.atoms.index(atom)

    def satisfied_by(self, model: FiniteModel) -> bool:
        values = [model.truth(pred, args) for pred, args in self.atoms]
        for clause in self.clauses:
            if not any(values[abs(lit) - 1] == (lit > 0) for lit in clause):
                return False
        return True


# ---------------------------------------------------------------------------
# Negation normal form
# ---------------------------------------------------------------------------

def nnf(formula: Formula, positive: bool = True) -> Formula:
    """Push negations to atoms and eliminate Implies/Iff."""
    if isinstance(formula, TrueF):
        return TRUE if positive else FALSE
    if isinstance(formula, FalseF):
        return FALSE if positive else TRUE
    if isinstance(formula, (Pred, Eq)):
        return formula if positive else Not(formula)
    if isinstance(formula, Not):
        return nnf(formula.body, not positive)
    if isinstance(formula, And):
        items = tuple(nnf(item, positive) for item in formula.items)
        return And(items) if positive else Or(items)
    if isinstance(formula, Or):
        items = tuple(nnf(item, positive) for item in formula.items)
        return Or(items) if positive else And(items)
    if isinstance(formula, Implies):
        if positive:
            return Or((nnf(formula.left, False), nnf(formula.right, True)))
        return And((nnf(formula.left, True), nnf(formula.right, False)))
    if isinstance(formula, Iff):
        left, right = formula.left, formula.right
        if positive:
            return And((Or((nnf(left, False), nnf(right, True))),
                        Or((nnf(right, False), nnf(left, True)))))
        return Or((And((nnf(left, True), nnf(right, False))),
                   And((nnf(right, True), nnf(left, False)))))
    if isinstance(formula, ForAll):
        if positive:
            return ForAll(formula.var, formula.sort, nnf(formula.body, True))
        return Exists(formula.var, formula.sort, nnf(formula.body, False))
    if isinstance(formula, Exists):
        if positive:
            return Exists(formula.var, formula.sort, nnf(formula.body, True))
        return ForAll(formula.var, formula.sort, nnf(formula.body, False))
    raise TypeError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# Atom space
# ---------------------------------------------------------------------------

def _predicate_profiles(formula: Formula, env: dict[str, Sort],
                        out: dict[str, tuple[Sort, ...]]) -> None:
    """Infer each predicate's argument sorts from a well-sorted formula."""
    if isinstance(formula, Pred):
        sorts = tuple(env[t.name] if isinstance(t, Var) else t.sort for t in formula.args)
        out.setdefault(formula.name, sorts)
    elif isinstance(formula, Not):
        _predicate_profiles(formula.body, env, out)
    elif isinstance(formula, (And, Or)):
        for item in formula.items:
            _predicate_profiles(item, env, out)
    elif isinstance(formula, (Implies, Iff)):
        _predicate_profiles(formula.left, env, out)
        _predicate_profiles(formula.right, env, out)
    elif isinstance(formula, (ForAll, Exists)):
        env[formula.var] = formula.sort
        _predicate_profiles(formula.body, env, out)
        del env[formula.var]


def atom_space(formulas: Sequence[Formula], things: Sequence[str],
               worlds: Sequence[str],
               support: Optional[Iterable[str]] = None) -> tuple[Atom, ...]:
    """All ground atoms for the predicates occurring in the formulas.

    Atoms are ordered by predicate name, then by argument tuple in universe
    order; this ordering is the canonical table-bit encoding used throughout
    the search engine.  An explicit ``support`` restricts the atom space to
    those predicates (the rest are frozen everywhere-false at grounding time).
    """
    profiles: dict[str, tuple[Sort, ...]] = {}
    for formula in formulas:
        _predicate_profiles(formula, {}, profiles)
    if support is not None:
        allowed = set(support)
        profiles = {name: sorts for name, sorts in profiles.items() if name in allowed}
    atoms: list[Atom] = []
    for name in sorted(profiles):
        universes = [tuple(things) if s is Sort.THING else tuple(worlds)
                     for s in profiles[name]]
        for combo in itertools.product(*universes):
            atoms.append((name, combo))
    return tuple(atoms)


# ---------------------------------------------------------------------------
# CNF construction
# ---------------------------------------------------------------------------

_TRIVIALLY_TRUE: list[Clause] = []
_TRIVIALLY_FALSE: list[Clause] = [frozenset()]


class _CnfBuilder:
    def __init__(self, things, worlds, atom_index, clause_limit):
        self.things = tuple(things)
        self.worlds = tuple(worlds)
        self.atom_index = atom_index
        self.clause_limit = clause_limit
        self._free_cache: dict[int, frozenset[str]] = {}
        self._cnf_cache: dict = {}
        self._simplified_cache: dict[int, tuple] = {}

    def universe(self, sort: Sort) -> tuple[str, ...]:
        return self.things if sort is Sort.THING else self.worlds

    def _free_vars(self, f: Formula) -> frozenset[str]:
        cached = self._free_cache.get(id(f))
        if cached is None:
            from .logic import free_vars
            cached = self._free_cache[id(f)] = free_vars(f)
        return cached

    def build(self, f: Formula, positive: bool, env: dict) -> list[Clause]:
        # Sub-CNFs depend only on the bindings of the node's free variables;
        # memoizing on those makes repeated quantifier bodies cheap.  Nodes
        # stay alive through the root formula, so id() keys are stable here.
        if isinstance(f, (Not, And, Or, Implies, Iff, ForAll, Exists)):
            bindings = tuple(sorted(
                (name, env[name]) for name in self._free_vars(f)))
            key = (id(f), positive, bindings)
            cached = self._cnf_cache.get(key)
            if cached is None:
                cached = self._cnf_cache[key] = self._build(f, positive, env)
            return cached
        return self._build(f, positive, env)

    def _build(self, f: Formula, positive: bool, env: dict) -> list[Clause]:
        if isinstance(f, TrueF):
            return _TRIVIALLY_TRUE if positive else _TRIVIALLY_FALSE
        if isinstance(f, FalseF):
            return _TRIVIALLY_FALSE if positive else _TRIVIALLY_TRUE
        if isinstance(f, Pred):
            labels = tuple(env[t.name] if isinstance(t, Var) else t.label for t in f.args)
            index = self.atom_index.get((f.name, labels))
            if index is None:
                # Predicate outside the atom space: frozen everywhere-false.
                return _TRIVIALLY_FALSE if positive else _TRIVIALLY_TRUE
            lit = index + 1 if positive else -(index + 1)
            return [frozenset((lit,))]
        if isinstance(f, Eq):
            left = env[f.left.name] if isinstance(f.left, Var) else f.left.label
            right = env[f.right.name] if isinstance(f.right, Var) else f.right.label
            holds = left == right
            if positive:
                return _TRIVIALLY_TRUE if holds else _TRIVIALLY_FALSE
            return _TRIVIALLY_FALSE if holds else _TRIVIALLY_TRUE
        if isinstance(f, Not):
            return self.build(f.body, not positive, env)
        if isinstance(f, And):
            if positive:
                return self.conjoin(self.build(item, True, env) for item in f.items)
            return self.disjoin([self.build(item, False, env) for item in f.items])
        if isinstance(f, Or):
            if positive:
                return self.disjoin([self.build(item, True, env) for item in f.items])
            return self.conjoin(self.build(item, False, env) for item in f.items)
        if isinstance(f, Implies):
            if positive:
                return self.disjoin([self.build(f.left, False, env),
                                     self.build(f.right, True, env)])
            return self.conjoin((self.build(f.left, True, env),
                                 self.build(f.right, False, env)))
        if isinstance(f, Iff):
            if positive:
                return self.conjoin((
                    self.disjoin([self.build(f.left, False, env),
                                  self.build(f.right, True, env)]),
                    self.disjoin([self.build(f.right, False, env),
                                  self.build(f.left, True, env)])))
            return self.disjoin([
                self.conjoin((self.build(f.left, True, env),
                              self.build(f.right, False, env))),
                self.conjoin((self.build(f.right, True, env),
                              self.build(f.left, False, env)))])
        if isinstance(f, (ForAll, Exists)):
            universe = self.universe(f.sort)
            if not universe:
                raise GroundingError(
                    "quantification over World on universes with no worlds")
            expand_as_and = isinstance(f, ForAll) == positive
            parts = []
            saved = env.get(f.var)
            had = f.var in env
            try:
                for label in universe:
                    env[f.var] = label
                    parts.append(self.build(f.body, positive, env))
            finally:
                if had:
                    env[f.var] = saved
                elif f.var in env:
                    del env[f.var]
            return self.conjoin(parts) if expand_as_and else self.disjoin(parts)
        raise TypeError(f"not a formula: {f!r}")

    def conjoin(self, parts: Iterable[list[Clause]]) -> list[Clause]:
        out: list[Clause] = []
        for clauses in parts:
            out.extend(clauses)
        return out

    def disjoin(self, parts: list[list[Clause]]) -> list[Clause]:
        # Distribute pairwise; prune tautologies and subsumed clauses as the
        # product grows.  An empty part ([] = true) makes the whole thing true.
        simplified = []
        for clauses in parts:
            if not clauses:
                return _TRIVIALLY_TRUE
            simplified.append(self._simplify_part(clauses))
        simplified.sort(key=len)
        acc: list[Clause] = [frozenset()]
        for clauses in simplified:
            multi = len(acc) > 1 and len(clauses) > 1
            seen = set()
            product: list[Clause] = []
            for base in acc:
                for clause in clauses:
                    merged = base | clause
                    if merged in seen or _tautology(merged):
                        continue
                    seen.add(merged)
                    product.append(merged)
            if len(product) > self.clause_limit:
                raise GroundingError(
                    f"clause product exceeded {self.clause_limit} clauses")
            # Subsumption only pays off when both sides multiply; a
            # single-clause side adds the same literals to every clause.
            acc = _drop_subsumed(product) if multi else product
        return acc

    def _simplify_part(self, clauses: list[Clause]) -> list[Clause]:
        # The cache entry retains the keyed list so its id cannot be reused.
        cached = self._simplified_cache.get(id(clauses))
        if cached is None or cached[0] is not clauses:
            cached = self._simplified_cache[id(clauses)] = (
                clauses, _simplify_conjunction(clauses))
        return cached[1]


def _tautology(clause: Clause) -> bool:
    return any(-lit in clause for lit in clause)


def _simplify_conjunction(clauses: list[Clause]) -> list[Clause]:
    """Equivalence-preserving cleanup of one sub-CNF before distribution:
    unit propagation, duplicate removal, subsumption."""
    working = set(clauses)
    while True:
        units = {next(iter(c)) for c in working if len(c) == 1}
        if any(-lit in units for lit in units):
            return list(_TRIVIALLY_FALSE)
        if not units:
            break
        changed = False
        out = set()
        for clause in working:
            if len(clause) == 1:
                out.add(clause)
                continue
            if clause & units:
                changed = True
                continue
            reduced = frozenset(lit for lit in clause if -lit not in units)
            if not reduced:
                return list(_TRIVIALLY_FALSE)
            if reduced != clause:
                changed = True
            out.add(reduced)
        working = out
        if not changed:
            break
    return _drop_subsumed(list(working))


def _drop_subsumed(clauses: list[Clause]) -> list[Clause]:
    # Only strictly shorter clauses can subsume (equal length + subset means
    # equal, which the set() dedupe already removed), and a subsuming clause
    # must contain its own minimum literal, which then occurs in the longer
    # clause; so index kept clauses by minimum literal and probe per literal.
    ordered = sorted(set(clauses), key=lambda c: (len(c), sorted(c)))
    if not ordered:
        return []
    if not ordered[0]:
        return [frozenset()]
    kept: list[Clause] = []
    shorter_by_min_lit: dict[int, list[Clause]] = {}
    boundary = 0
    current_len = len(ordered[0])
    for clause in ordered:
        if len(clause) > current_len:
            for prior in kept[boundary:]:
                shorter_by_min_lit.setdefault(min(prior), []).append(prior)
            boundary = len(kept)
            current_len = len(clause)
        subsumed = False
        for lit in clause:
            for prior in shorter_by_min_lit.get(lit, ()):
                if prior <= clause:
                    subsumed = True
                    break
            if subsumed:
                break
        if not subsumed:
            kept.append(clause)
    return kept


def ground(formula: Formula, things: Sequence[str], worlds: Sequence[str] = (),
           support: Optional[Iterable[str]] = None,
           clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> GroundConstraintSet:
    """Ground a closed well-sorted formula over fixed universes."""
    atoms = atom_space([formula], things, worlds, support)
    index = {atom: i for i, atom in enumerate(atoms)}
    builder = _CnfBuilder(things, worlds, index, clause_limit)
    clauses = builder.build(formula, True, {})
    return GroundConstraintSet(tuple(things), tuple(worlds), atoms, tuple(clauses))


def evaluate_via_grounding(formula: Formula, model: FiniteModel) -> bool:
    """Ground on the model's universes, substitute its tables, read off truth.

    Agrees with ``logic.evaluate`` on every input, including the error cases:
    formulas mentioning World are rejected on models without worlds.
    """
    if mentions_world(formula) and not model.worlds:
        raise EvaluationError(
            "quantification over World on a model with no world universe")
    constraints = ground(formula, model.things, model.worlds)
    return constraints.satisfied_by(model)
