"""Bounded counter-model search and bounded semantic entailment.

The engine looks for a finite model satisfying the premises while falsifying
the target, ascending through thing-universe sizes.  Within a size the
premises are grounded once; the negated target's existential prefix is split
into instantiation branches (orbit representatives under canonical pruning),
and each branch is decided by a backtracking assignment of table bits with
watched-literal unit propagation.

Determinism contract: within a branch the solver enumerates assignments in
lexicographic order of the canonical table-bit encoding (ascending atom
index, false before true), so it returns the branch's least solution; the
reported model is the least canonical relabeling among branch solutions.
The result is identical across runs and worker counts.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .grounding import Clause, _CnfBuilder, atom_space, nnf
from .logic import (Exists, FiniteModel, Formula, LogicError, Not, Sort,
                    collect_predicates, evaluate, mentions_world)
from .registry import Selector, axiom_set

DEFAULT_NODE_BUDGET = 100_000_000


class SearchError(LogicError):
    """The search request is malformed (for example a modal premise with a
    zero world bound)."""


class ResourceLimitExceeded(LogicError):
    """The node budget ran out before a size was exhausted; this is reported
    distinctly from exhaustion and never becomes a silent no-counterexample."""

    def __init__(self, thing_size: int, world_size: int, budget: int):
        super().__init__(
            f"node budget of {budget} exceeded at size "
            f"(things={thing_size}, worlds={world_size})")
        self.thing_size = thing_size
        self.world_size = world_size
        self.budget = budget


@dataclass(frozen=True)
class SearchConfig:
    max_thing_size: int = 4
    #: None resolves to 0, or to 2 when any premise or the target mentions
    #: World; an explicit value below 1 is an error for modal formulas.
    max_world_size: Optional[int] = None
    support_predicates: Optional[tuple[str, ...]] = None
    pruning: str = "canonical"  # "canonical" | "none"
    workers: int = 1
    node_budget: int = DEFAULT_NODE_BUDGET

    def __post_init__(self):
        if self.max_thing_size < 1:
            raise SearchError("max_thing_size must be >= 1")
        if self.pruning not in ("canonical", "none"):
            raise SearchError(f"unknown pruning mode {self.pruning!r}")
        if self.workers < 1:
            raise SearchError("workers must be >= 1")


@dataclass
class SearchStats:
    support: tuple[str, ...] = ()
    candidates_visited: int = 0
    propagations: int = 0
    conflicts: int = 0
    pruned_subtrees: int = 0
    branches_total: int = 0
    sizes_exhausted: tuple[tuple[int, int], ...] = ()
    elapsed_seconds: float = 0.0

    def to_json_dict(self) -> dict:
        # elapsed_seconds is deliberately omitted: reports must be
        # byte-identical across runs.
        return {
            "support": list(self.support),
            "candidates_visited": self.candidates_visited,
            "propagations": self.propagations,
            "conflicts": self.conflicts,
            "pruned_subtrees": self.pruned_subtrees,
            "branches_total": self.branches_total,
            "sizes_exhausted": [list(size) for size in self.sizes_exhausted],
        }


@dataclass(frozen=True)
class Refuted:
    model: FiniteModel
    thing_size: int
    world_size: int
    stats: SearchStats

    @property
    def is_refuted(self) -> bool:
        return True

    def describe(self) -> str:
        if self.world_size:
            return f"Refuted(size={self.thing_size}; worlds={self.world_size})"
        return f"Refuted(size={self.thing_size})"


@dataclass(frozen=True)
class NoCounterexampleUpTo:
    thing_bound: int
    world_bound: int
    stats: SearchStats

    @property
    def is_refuted(self) -> bool:
        return False

    def describe(self) -> str:
        if self.world_bound:
            return (f"NoCounterexampleUpTo({self.thing_bound}; "
                    f"worlds {self.world_bound})")
        return f"NoCounterexampleUpTo({self.thing_bound})"


EntailmentVerdict = Union[Refuted, NoCounterexampleUpTo]


# ---------------------------------------------------------------------------
# Backtracking solver over table bits
# ---------------------------------------------------------------------------

class _BudgetExceeded(Exception):
    pass


class _BranchCounters:
    __slots__ = ("decisions", "propagations", "conflicts", "pruned")

    def __init__(self):
        self.decisions = 0
        self.propagations = 0
        self.conflicts = 0
        self.pruned = 0


class _Solver:
    """DPLL over a fixed clause list; returns the lexicographically least
    satisfying assignment (ascending variable index, false before true)."""

    def __init__(self, nvars: int, clauses: Sequence[tuple[int, ...]],
                 budget: int, perms: Sequence[Sequence[int]] = ()):
        self.nvars = nvars
        self.clauses = clauses
        self.budget = budget
        self.perms = perms
        self.counters = _BranchCounters()
        self.values = [-1] * nvars
        self.trail: list[int] = []
        self.steps = 0
        self.watch: dict[int, list[int]] = {}
        self.w1: list[int] = []
        self.w2: list[int] = []
        self.unsat = False
        self.initial_units: list[int] = []
        for ci, clause in enumerate(clauses):
            if not clause:
                self.unsat = True
                self.w1.append(0)
                self.w2.append(0)
            elif len(clause) == 1:
                self.initial_units.append(clause[0])
                self.w1.append(clause[0])
                self.w2.append(clause[0])
            else:
                self.w1.append(clause[0])
                self.w2.append(clause[1])
                self.watch.setdefault(clause[0], []).append(ci)
                self.watch.setdefault(clause[1], []).append(ci)

    def _value(self, lit: int) -> int:
        v = self.values[abs(lit) - 1]
        if v == -1:
            return -1
        return v if lit > 0 else 1 - v

    def _assign(self, lit: int) -> None:
        var = abs(lit) - 1
        self.values[var] = 1 if lit > 0 else 0
        self.trail.append(var)
        self.steps += 1
        self.counters.propagations += 1
        if self.steps > self.budget:
            raise _BudgetExceeded()

    def _propagate(self, pending: deque) -> bool:
        while pending:
            lit = pending.popleft()
            neg = -lit
            watchers = self.watch.get(neg)
            if not watchers:
                continue
            kept: list[int] = []
            conflict_at = -1
            for pos, ci in enumerate(watchers):
                other = self.w1[ci] if self.w2[ci] == neg else self.w2[ci]
                v_other = self._value(other)
                if v_other == 1:
                    kept.append(ci)
                    continue
                moved = False
                for cand in self.clauses[ci]:
                    if cand == other or cand == neg:
                        continue
                    if self._value(cand) != 0:
                        self.w1[ci] = other
                        self.w2[ci] = cand
                        self.watch.setdefault(cand, []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                self.w1[ci] = other
                self.w2[ci] = neg
                if v_other == 0:
                    conflict_at = pos
                    break
                self._assign(other)
                pending.append(other)
            if conflict_at >= 0:
                kept.extend(watchers[conflict_at + 1:])
                self.watch[neg] = kept
                self.counters.conflicts += 1
                return False
            self.watch[neg] = kept
        return True

    def _assign_and_propagate(self, lit: int) -> bool:
        v = self._value(lit)
        if v == 0:
            self.counters.conflicts += 1
            return False
        if v == 1:
            return True
        self._assign(lit)
        return self._propagate(deque((lit,)))

    def _next_unassigned(self) -> Optional[int]:
        for var, value in enumerate(self.values):
            if value == -1:
                return var
        return None

    def _symmetry_pruned(self) -> bool:
        # Prune when the partial assignment is already lexicographically
        # greater than one of its images under a stabilizer permutation:
        # every completion then has a smaller sibling in the same branch.
        values = self.values
        for perm in self.perms:
            for i, j in enumerate(perm):
                a = values[i]
                b = values[j]
                if a == -1 or b == -1 or a < b:
                    break
                if a > b:
                    self.counters.pruned += 1
                    return True
        return False

    def _backtrack(self, decisions: list) -> bool:
        while decisions:
            trail_len, var, tried_true = decisions.pop()
            while len(self.trail) > trail_len:
                self.values[self.trail.pop()] = -1
            if not tried_true:
                decisions.append((trail_len, var, True))
                self.counters.decisions += 1
                if self._assign_and_propagate(var + 1):
                    return True
        return False

    def solve(self) -> Optional[list[int]]:
        if self.unsat:
            return None
        pending = deque()
        for lit in self.initial_units:
            v = self._value(lit)
            if v == 0:
                self.counters.conflicts += 1
                return None
            if v == -1:
                self._assign(lit)
                pending.append(lit)
        if not self._propagate(pending):
            return None
        decisions: list = []
        while True:
            if self.perms and self._symmetry_pruned():
                if not self._backtrack(decisions):
                    return None
                continue
            var = self._next_unassigned()
            if var is None:
                return list(self.values)
            decisions.append((len(self.trail), var, False))
            self.counters.decisions += 1
            if not self._assign_and_propagate(-(var + 1)):
                if not self._backtrack(decisions):
                    return None


# ---------------------------------------------------------------------------
# Branch generation
# ---------------------------------------------------------------------------

def _existential_prefix(formula: Formula) -> tuple[list[tuple[str, Sort]], Formula]:
    prefix: list[tuple[str, Sort]] = []
    while isinstance(formula, Exists):
        prefix.append((formula.var, formula.sort))
        formula = formula.body
    return prefix, formula


def _is_orbit_representative(combo: Sequence[int], sorts: Sequence[Sort]) -> bool:
    # A tuple represents its orbit under universe relabeling when, per sort,
    # elements appear in first-use order 0, 1, 2, ...
    for wanted in (Sort.THING, Sort.WORLD):
        frontier = 0
        for value, sort in zip(combo, sorts):
            if sort is not wanted:
                continue
            if value > frontier:
                return False
            if value == frontier:
                frontier += 1
    return True


def _stabilizer_perms(used_things: set[int], n_things: int,
                      used_worlds: set[int], n_worlds: int,
                      atoms, atom_index) -> list[tuple[int, ...]]:
    """Atom-index permutations induced by relabelings that fix the branch's
    witness elements pointwise."""
    free_things = [i for i in range(n_things) if i not in used_things]
    free_worlds = [i for i in range(n_worlds) if i not in used_worlds]

    def perms_of(free, total):
        out = []
        for image in itertools.permutations(free):
            mapping = list(range(total))
            for src, dst in zip(free, image):
                mapping[src] = dst
            out.append(tuple(mapping))
        return out

    result = []
    for tp in perms_of(free_things, n_things):
        for wp in perms_of(free_worlds, max(n_worlds, 0)):
            if all(i == v for i, v in enumerate(tp)) and \
               all(i == v for i, v in enumerate(wp)):
                continue
            result.append((tp, wp))

    thing_labels = [f"t{i}" for i in range(n_things)]
    world_labels = [f"w{i}" for i in range(n_worlds)]
    thing_pos = {label: i for i, label in enumerate(thing_labels)}
    world_pos = {label: i for i, label in enumerate(world_labels)}

    atom_perms = []
    for tp, wp in result:
        mapped = []
        for pred, labels in atoms:
            image = tuple(
                thing_labels[tp[thing_pos[lab]]] if lab in thing_pos
                else world_labels[wp[world_pos[lab]]]
                for lab in labels)
            mapped.append(atom_index[(pred, image)])
        atom_perms.append(tuple(mapped))
    return atom_perms


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------

def _column_sorts(model: FiniteModel, pred: str, table) -> tuple[Sort, ...]:
    row = next(iter(table))
    world_set = set(model.worlds)
    thing_set = set(model.things)
    sorts = []
    for label in row:
        if label in thing_set:
            sorts.append(Sort.THING)
        elif label in world_set:
            sorts.append(Sort.WORLD)
        else:
            raise LogicError(f"{pred}: element {label!r} is in neither universe")
    return tuple(sorts)


def canonical_form(model: FiniteModel) -> FiniteModel:
    """Relabel to the lexicographically least model among all sort-respecting
    permutations of each universe; idempotent, and equal on isomorphic models
    presented over the same universe lists."""
    preds = sorted(model.tables)
    layouts = []
    for pred in preds:
        sorts = _column_sorts(model, pred, model.tables[pred])
        universes = [model.things if s is Sort.THING else model.worlds for s in sorts]
        slots = list(itertools.product(*(range(len(u)) for u in universes)))
        layouts.append((pred, sorts, universes, slots))

    index_tables = {}
    for pred, sorts, universes, slots in layouts:
        rows = set()
        for row in model.tables[pred]:
            rows.add(tuple(universes[i].index(label) for i, label in enumerate(row)))
        index_tables[pred] = rows

    best_key = None
    n_things, n_worlds = len(model.things), len(model.worlds)
    world_perms = list(itertools.permutations(range(n_worlds))) or [()]
    for tp in itertools.permutations(range(n_things)):
        for wp in world_perms:
            key = []
            for pred, sorts, universes, slots in layouts:
                rows = index_tables[pred]
                for slot in slots:
                    image = tuple(
                        tp[v] if sorts[i] is Sort.THING else wp[v]
                        for i, v in enumerate(slot))
                    key.append(1 if image in rows else 0)
            key = tuple(key)
            if best_key is None or key < best_key:
                best_key = key
    tables: dict[str, set] = {}
    pos = 0
    for pred, sorts, universes, slots in layouts:
        rows = set()
        for slot in slots:
            if best_key[pos]:
                rows.add(tuple(universes[i][v] for i, v in enumerate(slot)))
            pos += 1
        tables[pred] = rows
    return FiniteModel(model.name, model.things, model.worlds, tables)


# ---------------------------------------------------------------------------
# The bounded search
# ---------------------------------------------------------------------------

def _branch_task(args):
    nvars, clauses, budget, perms = args
    solver = _Solver(nvars, clauses, budget, perms)
    try:
        solution = solver.solve()
    except _BudgetExceeded:
        return ("budget", None, solver.counters)
    return ("sat" if solution is not None else "unsat", solution, solver.counters)


def _canonical_solution_key(values, atoms, atom_index, things, worlds):
    """Least bit encoding of the solution over all sort-respecting
    relabelings, with the model it denotes."""
    thing_pos = {label: i for i, label in enumerate(things)}
    world_pos = {label: i for i, label in enumerate(worlds)}
    world_perms = list(itertools.permutations(range(len(worlds)))) or [()]
    best = None
    for tp in itertools.permutations(range(len(things))):
        for wp in world_perms:
            key = []
            for pred, labels in atoms:
                image = tuple(
                    things[tp[thing_pos[lab]]] if lab in thing_pos
                    else worlds[wp[world_pos[lab]]]
                    for lab in labels)
                key.append(values[atom_index[(pred, image)]])
            key = tuple(key)
            if best is None or key < best:
                best = key
    tables: dict[str, set] = {}
    for bit, (pred, labels) in zip(best, atoms):
        if bit:
            tables.setdefault(pred, set()).add(labels)
    return best, tables


def _search(premises: Selector, target: str, config: SearchConfig) -> EntailmentVerdict:
    start = time.monotonic()
    premise_entries = axiom_set(premises)
    target_entry = axiom_set([target])[0]
    premise_formulas = [entry.formula for entry in premise_entries]
    all_formulas = premise_formulas + [target_entry.formula]

    modal = any(mentions_world(f) for f in all_formulas)
    if config.max_world_size is None:
        world_bound = 2 if modal else 0
    else:
        world_bound = config.max_world_size
    if modal and world_bound < 1:
        raise SearchError("the axioms mention World; max_world_size must be >= 1")
    world_range = list(range(1, world_bound + 1)) if modal else [0]

    occurring = frozenset()
    for formula in all_formulas:
        occurring |= collect_predicates(formula)
    if config.support_predicates is not None:
        support = tuple(sorted(set(config.support_predicates) & occurring))
    else:
        support = tuple(sorted(occurring))

    stats = SearchStats(support=support)
    exhausted: list[tuple[int, int]] = []
    neg_target = nnf(Not(target_entry.formula))
    prefix, matrix = _existential_prefix(neg_target)
    prefix_sorts = [sort for _, sort in prefix]

    for n_things in range(1, config.max_thing_size + 1):
        for n_worlds in world_range:
            things = tuple(f"t{i}" for i in range(n_things))
            worlds = tuple(f"w{i}" for i in range(n_worlds))
            atoms = atom_space(all_formulas, things, worlds, support)
            atom_index = {atom: i for i, atom in enumerate(atoms)}
            builder = _CnfBuilder(things, worlds, atom_index,
                                  clause_limit=500_000)
            sigma: list[Clause] = []
            for formula in premise_formulas:
                sigma.extend(builder.build(formula, True, {}))
            sigma_tuples = [tuple(sorted(clause)) for clause in sigma]

            tasks = []
            universe_sizes = [n_things if s is Sort.THING else n_worlds
                              for s in prefix_sorts]
            for combo in itertools.product(*(range(n) for n in universe_sizes)):
                if config.pruning == "canonical" and \
                        not _is_orbit_representative(combo, prefix_sorts):
                    stats.pruned_subtrees += 1
                    continue
                env = {}
                used_things, used_worlds = set(), set()
                for (var, sort), value in zip(prefix, combo):
                    if sort is Sort.THING:
                        env[var] = things[value]
                        used_things.add(value)
                    else:
                        env[var] = worlds[value]
                        used_worlds.add(value)
                branch = builder.build(matrix, True, env)
                clauses = sigma_tuples + [tuple(sorted(c)) for c in branch]
                perms: Sequence[Sequence[int]] = ()
                if config.pruning == "canonical":
                    perms = _stabilizer_perms(used_things, n_things,
                                              used_worlds, n_worlds,
                                              atoms, atom_index)
                tasks.append((len(atoms), clauses, config.node_budget, perms))

            stats.branches_total += len(tasks)
            if config.workers > 1 and len(tasks) > 1:
                with ThreadPoolExecutor(max_workers=config.workers) as pool:
                    outcomes = list(pool.map(_branch_task, tasks))
            else:
                outcomes = [_branch_task(task) for task in tasks]

            best = None
            budget_hit = False
            for branch_index, (kind, solution, counters) in enumerate(outcomes):
                stats.candidates_visited += counters.decisions
                stats.propagations += counters.propagations
                stats.conflicts += counters.conflicts
                stats.pruned_subtrees += counters.pruned
                if kind == "budget":
                    budget_hit = True
                elif kind == "sat":
                    key, tables = _canonical_solution_key(
                        solution, atoms, atom_index, things, worlds)
                    if best is None or (key, branch_index) < (best[0], best[1]):
                        best = (key, branch_index, tables)
            if best is not None:
                model = FiniteModel("countermodel", things, worlds, best[2])
                stats.sizes_exhausted = tuple(exhausted)
                stats.elapsed_seconds = time.monotonic() - start
                _recheck(model, premise_entries, target_entry)
                return Refuted(model, n_things, n_worlds, stats)
            if budget_hit:
                raise ResourceLimitExceeded(n_things, n_worlds, config.node_budget)
            exhausted.append((n_things, n_worlds))

    stats.sizes_exhausted = tuple(exhausted)
    stats.elapsed_seconds = time.monotonic() - start
    return NoCounterexampleUpTo(config.max_thing_size, world_bound, stats)


def _recheck(model: FiniteModel, premise_entries, target_entry) -> None:
    # Soundness gate: every returned refutation is re-checked by the
    # evaluator, independently of the clause machinery.
    for entry in premise_entries:
        if not evaluate(entry.formula, model):
            raise RuntimeError(
                f"internal error: returned model fails premise {entry.id}")
    if evaluate(target_entry.formula, model):
        raise RuntimeError(
            f"internal error: returned model satisfies target {target_entry.id}")


def find_countermodel(premises: Selector, target: str,
                      config: Optional[SearchConfig] = None
                      ) -> Optional[tuple[FiniteModel, int]]:
    """First counter-model in canonical enumeration order, with its thing
    size, or None when every size up to the bound exhausts."""
    verdict = _search(premises, target, config or SearchConfig())
    if isinstance(verdict, Refuted):
        return verdict.model, verdict.thing_size
    return None


def entails_bounded(premises: Selector, target: str,
                    config: Optional[SearchConfig] = None) -> EntailmentVerdict:
    """Refuted(model) when a counter-model exists up to the bound, otherwise
    NoCounterexampleUpTo(bound); never a claim of unbounded validity."""
    return _search(premises, target, config or SearchConfig())


# ---------------------------------------------------------------------------
# The one second-order check
# ---------------------------------------------------------------------------

def check_naive_psr(model: FiniteModel) -> tuple[bool, tuple[tuple[str, str, tuple[str, ...]], ...]]:
    """Naive thoroughgoing-distinguishability: for every ordered pair of
    distinct things there is a property (a subset of the thing universe)
    holding of the first but not the second.

    The singleton {x} always separates x from y, so this second-order claim
    is trivially true on every model; the witness list names the separating
    subset per pair.  Vacuously true on one-element models.
    """
    witnesses = tuple(
        (x, y, (x,))
        for x in model.things for y in model.things if x != y)
    return True, witnesses
