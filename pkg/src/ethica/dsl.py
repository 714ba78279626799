"""Line-oriented text format for finite models.

Grammar, one statement per line:

    model <name>
    things <label> <label> ...
    worlds <label> ...                    (optional)
    pred <name>: <tuple> <tuple> ...      (zero or more)

A tuple is a bare label for unary predicates or ``(a,b)`` / ``(a,b,c)`` for
higher arities; the single token ``*`` denotes the full table.  ``#`` starts
a comment, blank lines are ignored, labels match ``[A-Za-z_][A-Za-z0-9_]*``.
Undeclared predicates are everywhere-false.
"""

from __future__ import annotations

import itertools
import re
from typing import Optional

from .logic import FiniteModel, LogicError, Signature, Sort
from .registry import ETHICA_SIGNATURE

_LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TUPLE = re.compile(r"\(([A-Za-z_][A-Za-z0-9_]*(?:,[A-Za-z_][A-Za-z0-9_]*){0,2})\)\Z")


class ModelParseError(LogicError):
    """A model file is malformed; the message names the offending line."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def _full_table(decl, things, worlds):
    universes = [things if s is Sort.THING else worlds for s in decl.argument_sorts]
    return set(itertools.product(*universes))


def parse_model(text: str, signature: Optional[Signature] = None) -> FiniteModel:
    """Parse model DSL text into a FiniteModel validated against the signature."""
    sig = signature if signature is not None else ETHICA_SIGNATURE
    name: Optional[str] = None
    things: Optional[tuple[str, ...]] = None
    worlds: tuple[str, ...] = ()
    tables: dict[str, set] = {}
    saw_pred = False
    saw_worlds = False

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")

        if keyword == "model":
            if name is not None:
                raise ModelParseError(line_number, "duplicate model line")
            token = rest.strip()
            if not _LABEL.match(token):
                raise ModelParseError(line_number, f"bad model name {token!r}")
            name = token
            continue
        if name is None:
            raise ModelParseError(line_number, "expected 'model <name>' first")

        if keyword == "things":
            if things is not None:
                raise ModelParseError(line_number, "duplicate things line")
            things = _parse_labels(line_number, rest, "thing")
            continue
        if things is None:
            raise ModelParseError(line_number, "expected 'things ...' before this line")

        if keyword == "worlds":
            if saw_worlds:
                raise ModelParseError(line_number, "duplicate worlds line")
            if saw_pred:
                raise ModelParseError(line_number, "worlds must precede pred lines")
            worlds = _parse_labels(line_number, rest, "world")
            saw_worlds = True
            continue

        if keyword == "pred":
            saw_pred = True
            head, colon, body = rest.partition(":")
            pred = head.strip()
            if not colon:
                raise ModelParseError(line_number, "expected 'pred <name>: ...'")
            if pred not in sig:
                raise ModelParseError(line_number, f"unknown predicate {pred!r}")
            if pred in tables:
                raise ModelParseError(line_number, f"duplicate table for {pred!r}")
            decl = sig.declaration(pred)
            tokens = body.split()
            if not tokens:
                raise ModelParseError(line_number, f"empty table for {pred!r}")
            if tokens == ["*"]:
                tables[pred] = _full_table(decl, things, worlds)
                continue
            rows = set()
            for token in tokens:
                rows.add(_parse_row(line_number, token, decl, things, worlds))
            tables[pred] = rows
            continue

        raise ModelParseError(line_number, f"unrecognised statement {keyword!r}")

    if name is None:
        raise ModelParseError(1, "expected 'model <name>' first")
    if things is None:
        raise ModelParseError(1, "missing required 'things' line")
    try:
        return FiniteModel(name, things, worlds, tables)
    except LogicError as err:
        raise ModelParseError(1, str(err)) from err


def _parse_labels(line_number, rest, kind):
    labels = rest.split()
    if not labels:
        raise ModelParseError(line_number, f"empty {kind} universe")
    for label in labels:
        if not _LABEL.match(label):
            raise ModelParseError(line_number, f"bad label {label!r}")
    if len(set(labels)) != len(labels):
        raise ModelParseError(line_number, f"duplicate {kind} label")
    return tuple(labels)


def _parse_row(line_number, token, decl, things, worlds):
    if token == "*":
        raise ModelParseError(line_number, "'*' must be the only table token")
    if _LABEL.match(token):
        labels = (token,)
    else:
        match = _TUPLE.match(token)
        if not match:
            raise ModelParseError(line_number, f"bad tuple {token!r}")
        labels = tuple(match.group(1).split(","))
    if len(labels) != decl.arity:
        raise ModelParseError(
            line_number,
            f"{decl.name} expects arity {decl.arity}, got tuple of {len(labels)}")
    for label, sort in zip(labels, decl.argument_sorts):
        universe = things if sort is Sort.THING else worlds
        if label not in universe:
            raise ModelParseError(
                line_number, f"element {label!r} is not in the {sort} universe")
    return labels


def serialize_model(model: FiniteModel, signature: Optional[Signature] = None) -> str:
    """Canonical DSL text; parse_model(serialize_model(m)) == m.

    Predicates appear in signature declaration order, rows in universe order;
    a full table serialises as ``*`` and empty tables are omitted.
    """
    sig = signature if signature is not None else ETHICA_SIGNATURE
    model.check_against(sig)
    lines = [f"model {model.name}", "things " + " ".join(model.things)]
    if model.worlds:
        lines.append("worlds " + " ".join(model.worlds))
    for decl in sig:
        table = model.tables.get(decl.name)
        if not table:
            continue
        if table == frozenset(_full_table(decl, model.things, model.worlds)):
            lines.append(f"pred {decl.name}: *")
            continue
        universes = [model.things if s is Sort.THING else model.worlds
                     for s in decl.argument_sorts]
        ordered = sorted(table, key=lambda row: tuple(
            universes[i].index(label) for i, label in enumerate(row)))
        rendered = " ".join(
            row[0] if len(row) == 1 else "(" + ",".join(row) + ")" for row in ordered)
        lines.append(f"pred {decl.name}: {rendered}")
    return "\n".join(lines) + "\n"
