"""Two-sorted first-order logic over finite models.

Formulas are immutable trees over predicate signatures with the sorts Thing
and World; models are finite labelled universes with explicit truth tables.
Evaluation is classical, with quantifiers ranging over the finite universe of
the quantified sort.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Union


class Sort(Enum):
    THING = "Thing"
    WORLD = "World"

    def __str__(self) -> str:
        return self.value


class LogicError(Exception):
    """Base class for logic-level failures."""


class SortError(LogicError):
    """A formula is ill-sorted against a signature."""


class EvaluationError(LogicError):
    """A formula cannot be evaluated on the given model and assignment."""


class ModelError(LogicError):
    """A finite model violates a structural invariant."""


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Elem:
    """A universe-element constant."""

    sort: Sort
    label: str

    def __str__(self) -> str:
        return self.label


Term = Union[Var, Elem]


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrueF:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class FalseF:
    def __str__(self) -> str:
        return "false"


TRUE = TrueF()
FALSE = FalseF()


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple[Term, ...]

    def __init__(self, name: str, args: Sequence[Term]):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    items: tuple["Formula", ...]

    def __init__(self, items: Sequence["Formula"]):
        object.__setattr__(self, "items", tuple(items))


@dataclass(frozen=True)
class Or:
    items: tuple["Formula", ...]

    def __init__(self, items: Sequence["Formula"]):
        object.__setattr__(self, "items", tuple(items))


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: str
    sort: Sort
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: Sort
    body: "Formula"


Formula = Union[TrueF, FalseF, Pred, Eq, Not, And, Or, Implies, Iff, ForAll, Exists]

_QUANTIFIERS = (ForAll, Exists)


def forall(names: Sequence[str], sort: Sort, body: Formula) -> Formula:
    """Nest a block of same-sort universal quantifiers, outermost first."""
    for name in reversed(names):
        body = ForAll(name, sort, body)
    return body


def exists(names: Sequence[str], sort: Sort, body: Formula) -> Formula:
    for name in reversed(names):
        body = Exists(name, sort, body)
    return body


def free_vars(formula: Formula) -> frozenset[str]:
    def walk(f, bound):
        if isinstance(f, Pred):
            return frozenset(t.name for t in f.args if isinstance(t, Var) and t.name not in bound)
        if isinstance(f, Eq):
            return frozenset(t.name for t in (f.left, f.right)
                             if isinstance(t, Var) and t.name not in bound)
        if isinstance(f, Not):
            return walk(f.body, bound)
        if isinstance(f, (And, Or)):
            out = frozenset()
            for item in f.items:
                out |= walk(item, bound)
            return out
        if isinstance(f, (Implies, Iff)):
            return walk(f.left, bound) | walk(f.right, bound)
        if isinstance(f, _QUANTIFIERS):
            return walk(f.body, bound | {f.var})
        return frozenset()

    return walk(formula, frozenset())


def mentions_world(formula: Formula) -> bool:
    """True when the formula quantifies over World or names a world element."""
    if isinstance(formula, _QUANTIFIERS):
        return formula.sort is Sort.WORLD or mentions_world(formula.body)
    if isinstance(formula, Not):
        return mentions_world(formula.body)
    if isinstance(formula, (And, Or)):
        return any(mentions_world(item) for item in formula.items)
    if isinstance(formula, (Implies, Iff)):
        return mentions_world(formula.left) or mentions_world(formula.right)
    if isinstance(formula, Pred):
        return any(isinstance(t, Elem) and t.sort is Sort.WORLD for t in formula.args)
    if isinstance(formula, Eq):
        return any(isinstance(t, Elem) and t.sort is Sort.WORLD
                   for t in (formula.left, formula.right))
    return False


def collect_predicates(formula: Formula) -> frozenset[str]:
    """Predicate names occurring in the formula."""
    if isinstance(formula, Pred):
        return frozenset((formula.name,))
    if isinstance(formula, Not):
        return collect_predicates(formula.body)
    if isinstance(formula, (And, Or)):
        out = frozenset()
        for item in formula.items:
            out |= collect_predicates(item)
        return out
    if isinstance(formula, (Implies, Iff)):
        return collect_predicates(formula.left) | collect_predicates(formula.right)
    if isinstance(formula, _QUANTIFIERS):
        return collect_predicates(formula.body)
    return frozenset()


def pretty(formula: Formula) -> str:
    if isinstance(formula, TrueF):
        return "true"
    if isinstance(formula, FalseF):
        return "false"
    if isinstance(formula, Pred):
        return f"{formula.name}({', '.join(str(t) for t in formula.args)})"
    if isinstance(formula, Eq):
        return f"{formula.left} = {formula.right}"
    if isinstance(formula, Not):
        if isinstance(formula.body, Eq):
            return f"{formula.body.left} ≠ {formula.body.right}"
        return f"¬{_wrap(formula.body)}"
    if isinstance(formula, And):
        return " ∧ ".join(_wrap(item) for item in formula.items)
    if isinstance(formula, Or):
        return " ∨ ".join(_wrap(item) for item in formula.items)
    if isinstance(formula, Implies):
        return f"{_wrap(formula.left)} → {_wrap(formula.right)}"
    if isinstance(formula, Iff):
        return f"{_wrap(formula.left)} ↔ {_wrap(formula.right)}"
    if isinstance(formula, ForAll):
        return f"∀{formula.var}:{formula.sort}. {pretty(formula.body)}"
    if isinstance(formula, Exists):
        return f"∃{formula.var}:{formula.sort}. {pretty(formula.body)}"
    raise TypeError(f"not a formula: {formula!r}")


def _wrap(formula: Formula) -> str:
    if isinstance(formula, (Pred, TrueF, FalseF)):
        return pretty(formula)
    if isinstance(formula, Not) and isinstance(formula.body, Pred):
        return f"¬{pretty(formula.body)}"
    return f"({pretty(formula)})"


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PredicateDecl:
    name: str
    argument_sorts: tuple[Sort, ...]

    def __init__(self, name: str, argument_sorts: Sequence[Sort]):
        sorts = tuple(argument_sorts)
        if not 1 <= len(sorts) <= 3:
            raise ValueError(f"predicate {name!r}: arity must be 1..3, got {len(sorts)}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "argument_sorts", sorts)

    @property
    def arity(self) -> int:
        return len(self.argument_sorts)


class Signature:
    """An immutable set of predicate declarations with unique names."""

    def __init__(self, predicates: Iterable[PredicateDecl]):
        decls: dict[str, PredicateDecl] = {}
        for decl in predicates:
            if decl.name in decls:
                raise ValueError(f"duplicate predicate {decl.name!r}")
            decls[decl.name] = decl
        self._decls = decls

    def declaration(self, name: str) -> PredicateDecl:
        try:
            return self._decls[name]
        except KeyError:
            raise SortError(f"unknown predicate {name!r}") from None

    def extended(self, predicates: Iterable[PredicateDecl]) -> "Signature":
        """A new signature with extra predicates; existing ones cannot be re-typed."""
        added = list(predicates)
        for decl in added:
            if decl.name in self._decls:
                raise ValueError(f"predicate {decl.name!r} already declared")
        return Signature(list(self._decls.values()) + added)

    def __contains__(self, name: str) -> bool:
        return name in self._decls

    def __iter__(self):
        return iter(self._decls.values())

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._decls)


# ---------------------------------------------------------------------------
# Finite models
# ---------------------------------------------------------------------------

Row = tuple[str, ...]


def _normalize_tables(tables: Mapping[str, Iterable]) -> dict[str, frozenset[Row]]:
    out: dict[str, frozenset[Row]] = {}
    for name, rows in tables.items():
        norm = set()
        for row in rows:
            norm.add((row,) if isinstance(row, str) else tuple(row))
        if norm:
            out[name] = frozenset(norm)
    return out


@dataclass(frozen=True)
class FiniteModel:
    """A finite two-sorted structure.

    Predicates absent from ``tables`` are everywhere-false; empty tables are
    dropped at construction so that equality respects that convention.
    """

    name: str
    things: tuple[str, ...]
    worlds: tuple[str, ...] = ()
    tables: Mapping[str, frozenset[Row]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "things", tuple(self.things))
        object.__setattr__(self, "worlds", tuple(self.worlds))
        object.__setattr__(self, "tables", _normalize_tables(self.tables))
        if not self.things:
            raise ModelError("thing universe must be non-empty")
        if len(set(self.things)) != len(self.things):
            raise ModelError("duplicate thing label")
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelError("duplicate world label")
        shared = set(self.things) & set(self.worlds)
        if shared:
            raise ModelError(
                f"label used in both universes: {sorted(shared)[0]!r}")

    def universe(self, sort: Sort) -> tuple[str, ...]:
        return self.things if sort is Sort.THING else self.worlds

    def truth(self, pred: str, args: Sequence[str]) -> bool:
        table = self.tables.get(pred)
        return table is not None and tuple(args) in table

    def check_against(self, signature: Signature) -> None:
        """Raise ModelError unless every table fits the signature and universes."""
        for pred, table in self.tables.items():
            decl = signature.declaration(pred) if pred in signature else None
            if decl is None:
                raise ModelError(f"table for undeclared predicate {pred!r}")
            for row in table:
                if len(row) != decl.arity:
                    raise ModelError(
                        f"{pred}: row {row} has arity {len(row)}, expected {decl.arity}")
                for label, sort in zip(row, decl.argument_sorts):
                    if label not in self.universe(sort):
                        raise ModelError(
                            f"{pred}: element {label!r} is not in the {sort} universe")


# ---------------------------------------------------------------------------
# Sort checking
# ---------------------------------------------------------------------------

def check_sorted(formula: Formula, signature: Signature) -> None:
    """Raise SortError unless the closed formula is well-sorted.

    Every variable must be bound exactly once on each path; predicate
    applications must match their declaration's arity and sorts; equality
    compares same-sort terms.
    """
    _check(formula, signature, {})


def _term_sort(term: Term, env: Mapping[str, Sort]) -> Sort:
    if isinstance(term, Var):
        try:
            return env[term.name]
        except KeyError:
            raise SortError(f"unbound variable {term.name!r}") from None
    return term.sort


def _check(f: Formula, sig: Signature, env: dict[str, Sort]) -> None:
    if isinstance(f, (TrueF, FalseF)):
        return
    if isinstance(f, Pred):
        decl = sig.declaration(f.name)
        if len(f.args) != decl.arity:
            plural = "argument" if decl.arity == 1 else "arguments"
            raise SortError(f"{f.name} expects {decl.arity} {plural}, got {len(f.args)}")
        actual = tuple(_term_sort(t, env) for t in f.args)
        if actual != decl.argument_sorts:
            expected = ", ".join(str(s) for s in decl.argument_sorts)
            raise SortError(f"{f.name} expects ({expected}), "
                            f"got ({', '.join(str(s) for s in actual)})")
        return
    if isinstance(f, Eq):
        left, right = _term_sort(f.left, env), _term_sort(f.right, env)
        if left is not right:
            raise SortError(f"equality compares {left} with {right}")
        return
    if isinstance(f, Not):
        _check(f.body, sig, env)
        return
    if isinstance(f, (And, Or)):
        for item in f.items:
            _check(item, sig, env)
        return
    if isinstance(f, (Implies, Iff)):
        _check(f.left, sig, env)
        _check(f.right, sig, env)
        return
    if isinstance(f, _QUANTIFIERS):
        if f.var in env:
            raise SortError(f"variable {f.var!r} bound twice on one path")
        env[f.var] = f.sort
        try:
            _check(f.body, sig, env)
        finally:
            del env[f.var]
        return
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

Assignment = Mapping[str, tuple[Sort, str]]


def evaluate(formula: Formula, model: FiniteModel,
             assignment: Optional[Assignment] = None) -> bool:
    """Classical truth value of the formula on the model.

    Quantification over World on a model with no world universe is an error,
    not vacuous truth.
    """
    return _eval(formula, model, dict(assignment) if assignment else {})


def _term_value(term: Term, env: dict) -> tuple[Sort, str]:
    if isinstance(term, Var):
        try:
            return env[term.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {term.name!r}") from None
    return (term.sort, term.label)


def _eval(f: Formula, m: FiniteModel, env: dict) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Pred):
        labels = tuple(_term_value(t, env)[1] for t in f.args)
        return m.truth(f.name, labels)
    if isinstance(f, Eq):
        lsort, llabel = _term_value(f.left, env)
        rsort, rlabel = _term_value(f.right, env)
        if lsort is not rsort:
            raise EvaluationError(f"equality compares {lsort} with {rsort}")
        return llabel == rlabel
    if isinstance(f, Not):
        return not _eval(f.body, m, env)
    if isinstance(f, And):
        return all(_eval(item, m, env) for item in f.items)
    if isinstance(f, Or):
        return any(_eval(item, m, env) for item in f.items)
    if isinstance(f, Implies):
        return (not _eval(f.left, m, env)) or _eval(f.right, m, env)
    if isinstance(f, Iff):
        return _eval(f.left, m, env) == _eval(f.right, m, env)
    if isinstance(f, _QUANTIFIERS):
        universe = m.universe(f.sort)
        if not universe:
            raise EvaluationError(
                "quantification over World on a model with no world universe")
        saved = env.get(f.var)
        had = f.var in env
        try:
            results = []
            for label in universe:
                env[f.var] = (f.sort, label)
                results.append(_eval(f.body, m, env))
                if isinstance(f, ForAll) and not results[-1]:
                    return False
                if isinstance(f, Exists) and results[-1]:
                    return True
            return isinstance(f, ForAll)
        finally:
            if had:
                env[f.var] = saved
            elif f.var in env:
                del env[f.var]
    raise TypeError(f"not a formula: {f!r}")
