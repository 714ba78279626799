"""The catalogued counter-models and the model-against-axioms verifier.

Both corpus models carry two deliberate fidelity caveats, surfaced as flags
in every report: the eternal-essence table is uniformly true (F1), and the
three-category ontology of substance/attribute/mode is collapsed into a
substance vs non-substance split (F2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from .logic import EvaluationError, FiniteModel, ForAll, Formula, Sort, evaluate
from .registry import Selector, axiom_set

FIDELITY_UNIFORM_ETERNAL_ESSENCE = "F1-uniform-eternal-essence"
FIDELITY_TWO_CATEGORY_COLLAPSE = "F2-two-category-collapse"


@dataclass(frozen=True)
class CorpusModel:
    name: str
    model: FiniteModel
    provenance: str
    fidelity_flags: tuple[str, ...]


def a12_counter_model() -> CorpusModel:
    """Four elements: two substances sharing one attribute, plus a
    discriminator attribute held by the first substance only.

    Satisfies substance distinguishability (A22) while falsifying the
    substance-identity-by-shared-attribute axiom (A12).
    """
    substances = {"s1", "s2"}
    attributes = {"a_shared", "a_only_s1"}
    things = ("s1", "s2", "a_shared", "a_only_s1")
    model = FiniteModel(
        name="A12CounterModel",
        things=things,
        tables={
            "inItself": substances,
            "perSeConceived": substances,
            "involvesExistence": substances,
            "natureRequiresExistence": substances,
            "absolutelyInfinite": substances,
            "inAnother": attributes,
            "conceivedThroughAnother": attributes,
            "intellectPerceivesAsEssence": {
                ("s1", "s1"), ("s1", "a_shared"), ("s1", "a_only_s1"),
                ("s2", "s2"), ("s2", "a_shared"),
            },
            "expressesEternalEssence": set(itertools.product(things, things)),
        },
    )
    return CorpusModel(
        name="A12CounterModel",
        model=model,
        provenance="four-element counter-model: the shared attribute defeats "
                   "A12 while a_only_s1 discriminates the substance pair for A22",
        fidelity_flags=(FIDELITY_UNIFORM_ETERNAL_ESSENCE,
                        FIDELITY_TWO_CATEGORY_COLLAPSE),
    )


def a15_counter_model() -> CorpusModel:
    """Three elements: two gods, one of which holds an extra attribute.

    Satisfies plenitude (A25) while falsifying the attribute-universality
    axiom (A15); hosting two gods, it falsifies god uniqueness (A26).
    """
    substances = {"g1", "g2"}
    things = ("g1", "g2", "attr_g2")
    model = FiniteModel(
        name="A15CounterModel",
        things=things,
        tables={
            "inItself": substances,
            "perSeConceived": substances,
            "involvesExistence": substances,
            "natureRequiresExistence": substances,
            "absolutelyInfinite": substances,
            "inAnother": {"attr_g2"},
            "conceivedThroughAnother": {"attr_g2"},
            "intellectPerceivesAsEssence": {
                ("g1", "g1"), ("g2", "g2"), ("g2", "attr_g2"),
            },
            "expressesEternalEssence": set(itertools.product(things, things)),
        },
    )
    return CorpusModel(
        name="A15CounterModel",
        model=model,
        provenance="three-element counter-model: both g1 and g2 are gods and "
                   "attr_g2 belongs to g2 only, defeating A15 under plenitude",
        fidelity_flags=(FIDELITY_UNIFORM_ETERNAL_ESSENCE,
                        FIDELITY_TWO_CATEGORY_COLLAPSE),
    )


_CORPUS = {
    "A12CounterModel": a12_counter_model,
    "A15CounterModel": a15_counter_model,
}


def corpus_names() -> tuple[str, ...]:
    return tuple(_CORPUS)


def corpus_model(name: str) -> CorpusModel:
    try:
        return _CORPUS[name]()
    except KeyError:
        raise LookupError(f"unknown corpus model {name!r}; "
                          f"known: {', '.join(_CORPUS)}") from None


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

VERDICT_CONFIRMED = "confirmed"
VERDICT_TARGET_NOT_FALSIFIED = "target-not-falsified"


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking a model against a premise set and a falsification
    target: every premise must hold and the target must fail, with explicit
    witness tuples for the target's outermost universal block."""

    model_name: str
    premise_values: tuple[tuple[str, bool], ...]
    target_id: str
    target_value: bool
    witnesses: tuple[tuple[str, ...], ...]
    fidelity_flags: tuple[str, ...]
    verdict: str
    failing_premise: Optional[str] = None

    @property
    def confirmed(self) -> bool:
        return self.verdict == VERDICT_CONFIRMED

    def to_json_dict(self) -> dict:
        return {
            "model": self.model_name,
            "premises": {axiom_id: value for axiom_id, value in self.premise_values},
            "target": self.target_id,
            "target_value": self.target_value,
            "witnesses": [list(w) for w in self.witnesses],
            "fidelity_flags": list(self.fidelity_flags),
            "verdict": self.verdict,
        }


def outer_universal_block(formula: Formula) -> tuple[list[tuple[str, Sort]], Formula]:
    """Split off the outermost block of universal quantifiers."""
    block: list[tuple[str, Sort]] = []
    while isinstance(formula, ForAll):
        block.append((formula.var, formula.sort))
        formula = formula.body
    return block, formula


def falsifying_witnesses(formula: Formula, model: FiniteModel) -> tuple[tuple[str, ...], ...]:
    """All tuples for the outermost universal block whose matrix evaluates
    false, in universe order."""
    block, matrix = outer_universal_block(formula)
    universes = []
    for _, sort in block:
        universe = model.universe(sort)
        if not universe:
            raise EvaluationError(
                "quantification over World on a model with no world universe")
        universes.append(universe)
    found = []
    for combo in itertools.product(*universes):
        env = {var: (sort, label)
               for (var, sort), label in zip(block, combo)}
        if not evaluate(matrix, model, env):
            found.append(combo)
    return tuple(found)


def verify(model: Union[FiniteModel, CorpusModel], premises: Selector,
           target: str) -> VerificationReport:
    """Check that the model satisfies every premise and falsifies the target.

    Evaluation errors (for example a World-sorted premise against a model
    without worlds) propagate to the caller.
    """
    flags: tuple[str, ...] = ()
    if isinstance(model, CorpusModel):
        flags = model.fidelity_flags
        model = model.model

    premise_entries = axiom_set(premises)
    target_entry = axiom_set([target])[0]

    premise_values = tuple(
        (entry.id, evaluate(entry.formula, model)) for entry in premise_entries)
    target_value = evaluate(target_entry.formula, model)
    witnesses = () if target_value else falsifying_witnesses(target_entry.formula, model)

    failing = next((axiom_id for axiom_id, value in premise_values if not value), None)
    if failing is not None:
        verdict = f"premise-failure({failing})"
    elif target_value or not witnesses:
        verdict = VERDICT_TARGET_NOT_FALSIFIED
    else:
        verdict = VERDICT_CONFIRMED
    return VerificationReport(
        model_name=model.name,
        premise_values=premise_values,
        target_id=target_entry.id,
        target_value=target_value,
        witnesses=witnesses,
        fidelity_flags=flags,
        verdict=verdict,
        failing_premise=failing,
    )
