"""Named demote experiments and the five-way outcome taxonomy.

A demote experiment asks whether a catalogued target axiom follows, up to a
finite bound, from a weaker premise family.  Outcomes are classified purely
from verdict evidence; rendered labels always carry their tested-premises
and bound qualifier so that bounded claims are never read as unbounded ones.
Non-derivability is only ever reported with a concrete refuting model
attached; there is no declared-irreducible result kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .corpus import VerificationReport, corpus_model, verify
from .logic import FiniteModel
from .registry import Selector, resolve_selector
from .search import (EntailmentVerdict, NoCounterexampleUpTo, Refuted,
                     SearchConfig, SearchStats, entails_bounded)


class InsufficientEvidenceError(Exception):
    """The verdict bundle does not determine an outcome class."""


class OutcomeClass(Enum):
    FULL_REDUCTION = "FullReduction"
    EQUAL_STRENGTH_TRANSLATION = "EqualStrengthTranslation"
    PARTIAL_REDUCTION = "PartialReduction"
    DECOMPOSITION_ONLY = "DecompositionOnly"
    FULL_IRREDUCIBILITY = "FullIrreducibility"

    def __str__(self) -> str:
        return self.value


OUTCOME_LABELS = {
    OutcomeClass.FULL_REDUCTION: "Full reduction",
    OutcomeClass.EQUAL_STRENGTH_TRANSLATION: "Equal-strength translation",
    OutcomeClass.PARTIAL_REDUCTION: "Partial reduction; full irreducible",
    OutcomeClass.DECOMPOSITION_ONLY: "Decomposition only",
    OutcomeClass.FULL_IRREDUCIBILITY: "Full irreducibility",
}


def classify_outcome(forward: EntailmentVerdict,
                     backward: Optional[EntailmentVerdict] = None,
                     restricted_form: Optional[EntailmentVerdict] = None,
                     subset_verdicts: Sequence[EntailmentVerdict] = (),
                     converse_open: bool = False) -> OutcomeClass:
    """Assign an outcome class from verdict evidence.

    Rules: a refuted forward with a surviving restricted form is a partial
    reduction, without one it is full irreducibility against the tested
    premises.  A surviving forward is an equal-strength translation when the
    backward direction also survives (or is explicitly recorded as an open
    question), a full reduction when the backward direction is refuted, and
    decomposition-only when some proper premise subset is refuted.
    """
    if forward.is_refuted:
        if restricted_form is not None and not restricted_form.is_refuted:
            return OutcomeClass.PARTIAL_REDUCTION
        return OutcomeClass.FULL_IRREDUCIBILITY
    if backward is not None:
        if backward.is_refuted:
            return OutcomeClass.FULL_REDUCTION
        return OutcomeClass.EQUAL_STRENGTH_TRANSLATION
    if any(verdict.is_refuted for verdict in subset_verdicts):
        return OutcomeClass.DECOMPOSITION_ONLY
    if converse_open:
        return OutcomeClass.EQUAL_STRENGTH_TRANSLATION
    raise InsufficientEvidenceError(
        "forward survived but no backward, subset, or open-converse evidence "
        "is available")


# ---------------------------------------------------------------------------
# Experiment fixtures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Direction:
    premises: Selector
    target: str

    @property
    def premise_ids(self) -> tuple[str, ...]:
        return resolve_selector(self.premises)


@dataclass(frozen=True)
class CorpusCheck:
    corpus_name: str
    premises: Selector
    target: str


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    forward: Direction
    config: SearchConfig
    backward: Optional[Direction] = None
    restricted_form: Optional[Direction] = None
    subsets: tuple[Direction, ...] = ()
    corpus_check: Optional[CorpusCheck] = None
    converse_open: bool = False
    expectation: Optional[dict] = None  # verdict-key -> "refuted"|"no_counterexample"
    extra_caveats: tuple[str, ...] = ()


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    verdicts: dict
    outcome: OutcomeClass
    caveats: tuple[str, ...]
    fidelity_flags: tuple[str, ...]
    corpus_report: Optional[VerificationReport]
    expectation_failures: tuple[str, ...]

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def expectation_ok(self) -> bool:
        return not self.expectation_failures

    @property
    def outcome_label(self) -> str:
        return OUTCOME_LABELS[self.outcome]

    def to_json_dict(self) -> dict:
        forward = self.verdicts["forward"]
        auxiliary = {
            key: direction_json(self._direction_for(key), verdict, self.spec.config)
            for key, verdict in self.verdicts.items()
            if key not in ("forward", "backward")}
        doc = {
            "name": self.spec.name,
            "forward": direction_json(self.spec.forward, forward, self.spec.config),
            "outcome": self.outcome.value,
            "caveats": list(self.caveats),
            "fidelity_flags": list(self.fidelity_flags),
            "stats": _combined_stats(self.verdicts.values()),
            "expectation_failures": list(self.expectation_failures),
        }
        if "backward" in self.verdicts:
            doc["backward"] = direction_json(
                self.spec.backward, self.verdicts["backward"], self.spec.config)
        if auxiliary:
            doc["auxiliary"] = auxiliary
        if self.corpus_report is not None:
            doc["corpus_check"] = self.corpus_report.to_json_dict()
        return doc

    def _direction_for(self, key: str) -> Direction:
        if key == "restricted_form":
            return self.spec.restricted_form
        label = key.split(":", 1)[1]
        for direction in self.spec.subsets:
            if ",".join(direction.premise_ids) == label:
                return direction
        raise KeyError(key)


def _verdict_kind(verdict: EntailmentVerdict) -> str:
    return "refuted" if verdict.is_refuted else "no_counterexample"


def _model_json(model: FiniteModel) -> dict:
    return {
        "name": model.name,
        "things": list(model.things),
        "worlds": list(model.worlds),
        "tables": {pred: sorted(list(row) for row in table)
                   for pred, table in sorted(model.tables.items())},
    }


def direction_json(direction: Direction, verdict: EntailmentVerdict,
                   config: SearchConfig) -> dict:
    if isinstance(verdict, NoCounterexampleUpTo):
        bound = {"things": verdict.thing_bound, "worlds": verdict.world_bound}
    else:
        bound = {"things": config.max_thing_size,
                 "worlds": verdict.world_size}
    doc = {
        "premises": list(direction.premise_ids),
        "target": direction.target,
        "verdict": _verdict_kind(verdict),
        "bound": bound,
    }
    if isinstance(verdict, Refuted):
        doc["size"] = {"things": verdict.thing_size, "worlds": verdict.world_size}
        doc["model"] = _model_json(verdict.model)
    return doc


def _combined_stats(verdicts) -> dict:
    total = SearchStats()
    for verdict in verdicts:
        stats = verdict.stats
        total.candidates_visited += stats.candidates_visited
        total.propagations += stats.propagations
        total.conflicts += stats.conflicts
        total.pruned_subtrees += stats.pruned_subtrees
        total.branches_total += stats.branches_total
    return {
        "candidates_visited": total.candidates_visited,
        "propagations": total.propagations,
        "conflicts": total.conflicts,
        "pruned_subtrees": total.pruned_subtrees,
        "branches_total": total.branches_total,
    }


def bundled_experiments(workers: Optional[int] = None) -> dict[str, ExperimentSpec]:
    """The immutable experiment fixtures, keyed by name."""
    w = workers if workers is not None else 1

    def config(things, worlds=None):
        return SearchConfig(max_thing_size=things, max_world_size=worlds, workers=w)

    specs = [
        ExperimentSpec(
            name="A12_demote",
            forward=Direction("PSRSubstance", "A12"),
            restricted_form=Direction("PSRSubstance", "PropV_allshared"),
            corpus_check=CorpusCheck("A12CounterModel", "PSRSubstance", "A12"),
            config=config(4),
            expectation={"forward": "refuted",
                         "restricted_form": "no_counterexample"},
        ),
        ExperimentSpec(
            name="A13_demote",
            forward=Direction(("A23", "A18", "A3m"), "A13"),
            converse_open=True,
            config=config(3, 2),
            expectation={"forward": "no_counterexample"},
            extra_caveats=("bridge set {A18, A3m} decided here; converse open",),
        ),
        ExperimentSpec(
            # The open converse of A13_demote; no expected verdict is
            # attached, the search reports whatever it finds.
            name="A13_converse",
            forward=Direction(("A13", "A18", "A3m"), "A23"),
            config=config(3, 2),
            extra_caveats=("open converse direction of A13_demote; "
                           "no expected verdict",),
        ),
        ExperimentSpec(
            name="A14_demote",
            forward=Direction("PSREssencePerception", "A14"),
            backward=Direction(("A14",), "A24"),
            config=config(4),
            expectation={"forward": "no_counterexample",
                         "backward": "no_counterexample"},
            extra_caveats=("trivial redescription: the candidate restates the "
                           "target with Attribute unfolded",),
        ),
        ExperimentSpec(
            name="A15_demote",
            forward=Direction("PSRPlenitude", "A15"),
            subsets=(Direction(("A25",), "A15"),),
            corpus_check=CorpusCheck("A15CounterModel", ("A25",), "A15"),
            config=config(3),
            expectation={"forward": "no_counterexample", "subset:A25": "refuted"},
        ),
        ExperimentSpec(
            name="A15_plenitude_only",
            forward=Direction(("A25",), "A15"),
            corpus_check=CorpusCheck("A15CounterModel", ("A25",), "A15"),
            config=config(3),
            expectation={"forward": "refuted"},
            extra_caveats=("component experiment: this refutation is the "
                           "subset evidence inside A15_demote",),
        ),
        ExperimentSpec(
            name="A22_from_A12_A14",
            forward=Direction(("A12", "A14"), "A22"),
            subsets=(Direction(("A12",), "A22"),),
            config=config(4),
            expectation={"forward": "no_counterexample", "subset:A12": "refuted"},
        ),
    ]
    return {spec.name: spec for spec in specs}


# ---------------------------------------------------------------------------
# Running experiments
# ---------------------------------------------------------------------------

_ENTAIL_CACHE: dict = {}


def _config_key(config: SearchConfig):
    return (config.max_thing_size, config.max_world_size,
            config.support_predicates, config.pruning, config.workers,
            config.node_budget)


def _entail_cached(direction: Direction, config: SearchConfig) -> EntailmentVerdict:
    key = (direction.premise_ids, direction.target, _config_key(config))
    if key not in _ENTAIL_CACHE:
        _ENTAIL_CACHE[key] = entails_bounded(
            direction.premises, direction.target, config)
    return _ENTAIL_CACHE[key]


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Execute every direction of the experiment, classify, and flag any
    regression-expectation mismatch (flagged, never hidden)."""
    verdicts: dict = {"forward": _entail_cached(spec.forward, spec.config)}
    if spec.backward is not None:
        verdicts["backward"] = _entail_cached(spec.backward, spec.config)
    if spec.restricted_form is not None:
        verdicts["restricted_form"] = _entail_cached(spec.restricted_form, spec.config)
    subset_verdicts = []
    for direction in spec.subsets:
        key = "subset:" + ",".join(direction.premise_ids)
        verdicts[key] = _entail_cached(direction, spec.config)
        subset_verdicts.append(verdicts[key])

    corpus_report = None
    fidelity_flags: tuple[str, ...] = ()
    if spec.corpus_check is not None:
        member = corpus_model(spec.corpus_check.corpus_name)
        corpus_report = verify(member, spec.corpus_check.premises,
                               spec.corpus_check.target)
        fidelity_flags = member.fidelity_flags

    outcome = classify_outcome(
        forward=verdicts["forward"],
        backward=verdicts.get("backward"),
        restricted_form=verdicts.get("restricted_form"),
        subset_verdicts=subset_verdicts,
        converse_open=spec.converse_open,
    )

    failures = []
    for key, expected in (spec.expectation or {}).items():
        actual = _verdict_kind(verdicts[key])
        if actual != expected:
            failures.append(f"{key}: expected {expected}, got {actual}")
    if corpus_report is not None and not corpus_report.confirmed:
        failures.append(f"corpus check: {corpus_report.verdict}")

    caveats = (_bound_caveat(spec, verdicts["forward"]),) + spec.extra_caveats
    return ExperimentResult(
        spec=spec,
        verdicts=verdicts,
        outcome=outcome,
        caveats=caveats,
        fidelity_flags=fidelity_flags,
        corpus_report=corpus_report,
        expectation_failures=tuple(failures),
    )


def _bound_caveat(spec: ExperimentSpec, forward: EntailmentVerdict) -> str:
    ids = ", ".join(spec.forward.premise_ids)
    caveat = f"within tested premises {{{ids}}} and bound things <= " \
             f"{spec.config.max_thing_size}"
    worlds = forward.world_bound if isinstance(forward, NoCounterexampleUpTo) \
        else forward.world_size
    if worlds:
        caveat += f", worlds <= {worlds}"
    return caveat


def describe_experiment(result: ExperimentResult, strict_claims: bool = False) -> str:
    """Human-readable report; with strict_claims only verdicts are printed."""
    lines = [f"experiment {result.name}"]
    for key in result.verdicts:
        direction = (result.spec.forward if key == "forward"
                     else result.spec.backward if key == "backward"
                     else result._direction_for(key))
        verdict = result.verdicts[key]
        ids = ", ".join(direction.premise_ids)
        lines.append(f"  {key}: {{{ids}}} |= {direction.target} ? "
                     f"{verdict.describe()}")
    if result.corpus_report is not None:
        lines.append(f"  corpus check {result.corpus_report.model_name}: "
                     f"{result.corpus_report.verdict}")
    if not strict_claims:
        lines.append(f"  outcome: {result.outcome.value} [{result.outcome_label}]")
        for caveat in result.caveats:
            lines.append(f"  caveat: {caveat}")
        if result.fidelity_flags:
            lines.append("  fidelity flags: " + ", ".join(result.fidelity_flags))
    if result.expectation_failures:
        for failure in result.expectation_failures:
            lines.append(f"  EXPECTATION MISMATCH {failure}")
    else:
        lines.append("  expectations: ok" if result.spec.expectation
                     else "  expectations: none attached")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# The reducibility table
# ---------------------------------------------------------------------------

_TABLE_ROWS = (
    ("A12", "A12_demote", "PSRSubstance (A22)"),
    ("A13", "A13_demote", "PSRSelfCause (A23) + bridges {A18, A3m}"),
    ("A14", "A14_demote", "PSREssencePerception (A24)"),
    ("A15", "A15_demote", "PSRPlenitude (A25 + A26)"),
)


@dataclass(frozen=True)
class ReducibilityTable:
    results: tuple[ExperimentResult, ...]

    @property
    def all_expectations_ok(self) -> bool:
        return all(result.expectation_ok for result in self.results)

    def markdown(self, strict_claims: bool = False) -> str:
        lines = ["| Axiom | Demote premises | Outcome |",
                 "| --- | --- | --- |"]
        for (axiom_id, _, premises), result in zip(_TABLE_ROWS, self.results):
            if strict_claims:
                cell = result.verdicts["forward"].describe()
            else:
                cell = f"{result.outcome_label} ({'; '.join(result.caveats)})"
            lines.append(f"| {axiom_id} | {premises} | {cell} |")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "rows": [
                {
                    "axiom": axiom_id,
                    "premises": premises,
                    "outcome": result.outcome_label,
                    "outcome_class": result.outcome.value,
                    "experiment": result.to_json_dict(),
                }
                for (axiom_id, _, premises), result in zip(_TABLE_ROWS, self.results)
            ]
        }


def reducibility_table(workers: Optional[int] = None) -> ReducibilityTable:
    """Run the four bundled demote experiments and assemble the table.

    Any experiment error aborts the assembly; the raised error names the
    rows already completed.
    """
    specs = bundled_experiments(workers)
    results = []
    for axiom_id, spec_name, _ in _TABLE_ROWS:
        try:
            results.append(run_experiment(specs[spec_name]))
        except Exception as err:
            done = ", ".join(r.name for r in results) or "none"
            raise RuntimeError(
                f"table aborted at {spec_name} (completed: {done}): {err}") from err
    return ReducibilityTable(tuple(results))


# ---------------------------------------------------------------------------
# The full-register conjecture probe
# ---------------------------------------------------------------------------

PROBE_PREMISES = ("A1", "A1e", "A8", "A9", "A10", "A11", "A22")


def conjecture_probe_full_register(config: Optional[SearchConfig] = None
                                   ) -> EntailmentVerdict:
    """Search for a counter-model to A12 under the full Section I bridge set
    plus substance distinguishability.  No expected verdict is attached:
    the question is open, and the report states whatever the search finds.
    """
    return entails_bounded(list(PROBE_PREMISES), "A12",
                           config or SearchConfig(max_thing_size=3))


# ---------------------------------------------------------------------------
# JSON report schema
# ---------------------------------------------------------------------------

_DIRECTION_SCHEMA = {
    "type": "object",
    "required": ["premises", "target", "verdict", "bound"],
    "additionalProperties": False,
    "properties": {
        "premises": {"type": "array", "items": {"type": "string"}},
        "target": {"type": "string"},
        "verdict": {"enum": ["refuted", "no_counterexample"]},
        "bound": {
            "type": "object",
            "required": ["things", "worlds"],
            "properties": {"things": {"type": "integer"},
                           "worlds": {"type": "integer"}},
        },
        "size": {"type": "object"},
        "model": {
            "type": "object",
            "required": ["name", "things", "worlds", "tables"],
            "properties": {
                "name": {"type": "string"},
                "things": {"type": "array", "items": {"type": "string"}},
                "worlds": {"type": "array", "items": {"type": "string"}},
                "tables": {"type": "object"},
            },
        },
    },
}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["name", "forward", "outcome", "caveats", "fidelity_flags", "stats"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "forward": _DIRECTION_SCHEMA,
        "backward": _DIRECTION_SCHEMA,
        "auxiliary": {"type": "object", "additionalProperties": _DIRECTION_SCHEMA},
        "outcome": {"enum": [outcome.value for outcome in OutcomeClass]},
        "caveats": {"type": "array", "items": {"type": "string"}},
        "fidelity_flags": {"type": "array", "items": {"type": "string"}},
        "corpus_check": {"type": "object"},
        "expectation_failures": {"type": "array", "items": {"type": "string"}},
        "stats": {"type": "object"},
    },
}
