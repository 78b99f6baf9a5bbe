"""Core representation of two-party, two-setting, two-outcome behaviors.

A *behavior* (also called a box) is the table of sixteen joint probabilities
produced when two separated parties, A and B, each choose one of two
measurement settings (a1/a2 for A, b1/b2 for B) and each obtain a dichotomic
outcome +1 or -1.

The sixteen cells are numbered 1..16 in a fixed convention used everywhere
in this package:

    cell  1..4    settings (a1, b1), outcomes (+,+), (+,-), (-,+), (-,-)
    cell  5..8    settings (a1, b2), same outcome order
    cell  9..12   settings (a2, b1), same outcome order
    cell 13..16   settings (a2, b2), same outcome order

so ``index = 4*(2*(settingA-1) + (settingB-1)) + offset`` with offset 1..4
running over (+,+), (+,-), (-,+), (-,-).  All public functions that accept a
cell index use this 1-based numbering; the underlying tuple is 0-based as
usual.

Nothing in this module assumes the probabilities are normalized or
non-negative: diagnostic predicates (`is_valid`, `is_normalized`,
`is_no_signaling`) report on those properties instead of enforcing them, so
that deliberately broken tables can be analyzed too.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Literal

Outcome = Literal[1, -1]

#: Fixed outcome order within each setting block.
OUTCOME_ORDER: tuple[tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))

#: Default numeric tolerance for normalization / no-signaling predicates.
DEFAULT_TOL = 1e-9


class Party(enum.Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class SettingId:
    """One of the four measurement settings: a1, a2, b1, b2."""

    party: Party
    index: int

    def __post_init__(self) -> None:
        if self.index not in (1, 2):
            raise ValueError(f"setting index must be 1 or 2, got {self.index!r}")

    def __str__(self) -> str:
        return f"{self.party.value.lower()}{self.index}"


A1 = SettingId(Party.A, 1)
A2 = SettingId(Party.A, 2)
B1 = SettingId(Party.B, 1)
B2 = SettingId(Party.B, 2)
SETTING_IDS = (A1, A2, B1, B2)


def index_of(setting_a: int, setting_b: int, outcome_a: int, outcome_b: int) -> int:
    """Map (setting pair, outcome pair) to the 1-based cell index.

    ``setting_a`` and ``setting_b`` are 1 or 2; outcomes are +1 or -1.

    >>> index_of(1, 1, 1, 1)
    1
    >>> index_of(1, 2, -1, 1)
    7
    >>> index_of(2, 2, -1, -1)
    16
    """
    if setting_a not in (1, 2) or setting_b not in (1, 2):
        raise ValueError(f"settings must be 1 or 2, got ({setting_a!r}, {setting_b!r})")
    try:
        offset = OUTCOME_ORDER.index((outcome_a, outcome_b))
    except ValueError:
        raise ValueError(
            f"outcomes must be +1 or -1, got ({outcome_a!r}, {outcome_b!r})"
        ) from None
    return 4 * (2 * (setting_a - 1) + (setting_b - 1)) + offset + 1


def cell_of(index: int) -> tuple[int, int, int, int]:
    """Inverse of `index_of`: cell index -> (settingA, settingB, outcomeA, outcomeB)."""
    if not 1 <= index <= 16:
        raise ValueError(f"cell index must be in 1..16, got {index!r}")
    block, offset = divmod(index - 1, 4)
    outcome_a, outcome_b = OUTCOME_ORDER[offset]
    return block // 2 + 1, block % 2 + 1, outcome_a, outcome_b


@dataclass(frozen=True)
class Behavior:
    """Immutable table of the sixteen joint probabilities.

    Entries may be any finite reals; use the predicates below to test for
    validity, normalization and no-signaling.
    """

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(x) for x in self.probs)
        if len(probs) != 16:
            raise ValueError(f"behavior needs 16 probabilities, got {len(probs)}")
        if not all(math.isfinite(x) for x in probs):
            raise ValueError("behavior entries must be finite")
        object.__setattr__(self, "probs", probs)

    def p(self, index: int) -> float:
        """Probability of cell ``index`` (1-based, see module docstring)."""
        if not 1 <= index <= 16:
            raise ValueError(f"cell index must be in 1..16, got {index!r}")
        return self.probs[index - 1]

    def prob(self, setting_a: int, setting_b: int, outcome_a: int, outcome_b: int) -> float:
        return self.probs[index_of(setting_a, setting_b, outcome_a, outcome_b) - 1]

    def block(self, setting_a: int, setting_b: int) -> tuple[float, float, float, float]:
        """The four cells of one setting pair, in outcome order."""
        base = 4 * (2 * (setting_a - 1) + (setting_b - 1))
        return self.probs[base : base + 4]  # type: ignore[return-value]


def uniform_behavior() -> Behavior:
    """The fully mixed box: every cell 1/4."""
    return Behavior((0.25,) * 16)


def is_valid(b: Behavior) -> bool:
    """True when every entry lies in [0, 1] (exact comparison)."""
    return all(0.0 <= x <= 1.0 for x in b.probs)


def block_sums(b: Behavior) -> tuple[float, float, float, float]:
    return tuple(sum(b.block(j, k)) for j in (1, 2) for k in (1, 2))  # type: ignore[return-value]


def is_normalized(b: Behavior, tol: float = DEFAULT_TOL) -> bool:
    """True when each of the four setting blocks sums to 1 within ``tol``."""
    return all(abs(s - 1.0) <= tol for s in block_sums(b))


@dataclass(frozen=True)
class Marginals:
    """One-party marginal probabilities of outcome +1, per remote setting.

    ``p_a[j-1][k-1]`` is P(a_j = +1) computed from the block where B measured
    b_k; ``p_b[k-1][j-1]`` is P(b_k = +1) computed from the block where A
    measured a_j.  For a no-signaling box the two entries of each inner pair
    coincide.
    """

    p_a: tuple[tuple[float, float], tuple[float, float]]
    p_b: tuple[tuple[float, float], tuple[float, float]]


def marginals(b: Behavior) -> Marginals:
    """All eight one-party marginal sums for outcome +1 (both remote variants)."""
    p_a = tuple(
        tuple(b.prob(j, k, 1, 1) + b.prob(j, k, 1, -1) for k in (1, 2)) for j in (1, 2)
    )
    p_b = tuple(
        tuple(b.prob(j, k, 1, 1) + b.prob(j, k, -1, 1) for j in (1, 2)) for k in (1, 2)
    )
    return Marginals(p_a, p_b)  # type: ignore[arg-type]


def is_no_signaling(b: Behavior, tol: float = DEFAULT_TOL) -> bool:
    """True when every one-party marginal is independent of the remote setting.

    Checks all eight (party, setting, outcome) marginal pairs, so the result
    does not rely on the box being normalized.
    """
    pairs = (
        (b.prob(1, 1, 1, 1) + b.prob(1, 1, 1, -1), b.prob(1, 2, 1, 1) + b.prob(1, 2, 1, -1)),
        (b.prob(1, 1, -1, 1) + b.prob(1, 1, -1, -1), b.prob(1, 2, -1, 1) + b.prob(1, 2, -1, -1)),
        (b.prob(2, 1, 1, 1) + b.prob(2, 1, 1, -1), b.prob(2, 2, 1, 1) + b.prob(2, 2, 1, -1)),
        (b.prob(2, 1, -1, 1) + b.prob(2, 1, -1, -1), b.prob(2, 2, -1, 1) + b.prob(2, 2, -1, -1)),
        (b.prob(1, 1, 1, 1) + b.prob(1, 1, -1, 1), b.prob(2, 1, 1, 1) + b.prob(2, 1, -1, 1)),
        (b.prob(1, 1, 1, -1) + b.prob(1, 1, -1, -1), b.prob(2, 1, 1, -1) + b.prob(2, 1, -1, -1)),
        (b.prob(1, 2, 1, 1) + b.prob(1, 2, -1, 1), b.prob(2, 2, 1, 1) + b.prob(2, 2, -1, 1)),
        (b.prob(1, 2, 1, -1) + b.prob(1, 2, -1, -1), b.prob(2, 2, 1, -1) + b.prob(2, 2, -1, -1)),
    )
    return all(abs(x - y) <= tol for x, y in pairs)


def correlation(b: Behavior, setting_a: int, setting_b: int) -> float:
    """Correlation coefficient c(a_j, b_k) = p(++) + p(--) - p(+-) - p(-+)."""
    pp, pm, mp, mm = b.block(setting_a, setting_b)
    return pp + mm - pm - mp


@dataclass(frozen=True)
class CorrelationVector:
    c11: float
    c12: float
    c21: float
    c22: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.c11, self.c12, self.c21, self.c22)


def correlation_vector(b: Behavior) -> CorrelationVector:
    return CorrelationVector(
        correlation(b, 1, 1),
        correlation(b, 1, 2),
        correlation(b, 2, 1),
        correlation(b, 2, 2),
    )


class SchemaError(ValueError):
    """A JSON document does not match the behavior schema."""

    def __init__(self, message: str, field_name: str):
        super().__init__(message)
        self.field_name = field_name


def behavior_to_json_dict(b: Behavior, label: str | None = None) -> dict:
    doc: dict = {"probs": list(b.probs)}
    if label is not None:
        doc["label"] = label
    return doc


def behavior_from_json_dict(doc: object) -> tuple[Behavior, str | None]:
    """Parse ``{"probs": [16 numbers], "label": optional str}``.

    Raises `SchemaError` naming the offending field on any mismatch.
    """
    if not isinstance(doc, dict):
        raise SchemaError("behavior document must be a JSON object", field_name="$")
    if "probs" not in doc:
        raise SchemaError("missing required field 'probs'", field_name="probs")
    probs = doc["probs"]
    if not isinstance(probs, list) or len(probs) != 16:
        raise SchemaError("'probs' must be an array of 16 numbers", field_name="probs")
    for i, x in enumerate(probs):
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            raise SchemaError(
                f"'probs[{i}]' must be a finite number, got {x!r}", field_name=f"probs[{i}]"
            )
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise SchemaError("'label' must be a string when present", field_name="label")
    unknown = set(doc) - {"probs", "label"}
    if unknown:
        name = sorted(unknown)[0]
        raise SchemaError(f"unknown field {name!r}", field_name=name)
    return Behavior(tuple(probs)), label


def load_behavior(path: str | Path) -> tuple[Behavior, str | None]:
    """Read a behavior JSON file; `SchemaError` on malformed content."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", field_name="$") from exc
    return behavior_from_json_dict(doc)


def save_behavior(b: Behavior, path: str | Path, label: str | None = None) -> None:
    Path(path).write_text(
        json.dumps(behavior_to_json_dict(b, label), indent=2) + "\n", encoding="utf-8"
    )
