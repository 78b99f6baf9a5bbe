"""Linear structure of normalization and no-signaling constraints.

Normalization of the four setting blocks plus independence of each party's
marginals from the remote setting give twelve linear equations on the sixteen
cells of a behavior.  The system has rank eight, so eight well-chosen cells
determine the remaining eight in closed form.  This module carries:

* the twelve-row constraint system (`constraint_matrix`, `constraint_residuals`),
* the eight closed-form completions (`FreeSetId`, `complete_from_free_set`),
  one per choice of free set; the free sets are exactly the supports of the
  four probability sums used by the CHSH analysis and their complements,
* the derived bound 2*pj - 1 <= pk + pl + pm on any no-signaling box
  (`ns_bound_check`) and a few auxiliary nonnegativity consequences
  (`nonneg_side_checks`).

Each completion is hard-coded as a sign table and cross-validated in the test
suite against a generic linear solve of the twelve-row system.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence

import numpy as np

from .behavior import DEFAULT_TOL, Behavior

_NORMALIZATION_ROWS: tuple[tuple[int, ...], ...] = (
    (1, 2, 3, 4),
    (5, 6, 7, 8),
    (9, 10, 11, 12),
    (13, 14, 15, 16),
)

# (positive cells, negative cells); each row asserts equal marginal sums for
# one (party, setting, outcome) triple under the two remote settings.
_SIGNALING_ROWS: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
    ((1, 2), (5, 6)),
    ((3, 4), (7, 8)),
    ((9, 10), (13, 14)),
    ((11, 12), (15, 16)),
    ((1, 3), (9, 11)),
    ((2, 4), (10, 12)),
    ((5, 7), (13, 15)),
    ((6, 8), (14, 16)),
)


def _build_matrix() -> tuple[np.ndarray, np.ndarray]:
    m = np.zeros((12, 16))
    rhs = np.zeros(12)
    for r, cells in enumerate(_NORMALIZATION_ROWS):
        for c in cells:
            m[r, c - 1] = 1.0
        rhs[r] = 1.0
    for r, (plus, minus) in enumerate(_SIGNALING_ROWS, start=4):
        for c in plus:
            m[r, c - 1] = 1.0
        for c in minus:
            m[r, c - 1] = -1.0
    return m, rhs


_MATRIX, _RHS = _build_matrix()


def constraint_matrix() -> np.ndarray:
    """The 12x16 coefficient matrix (rows: 4 normalization, 8 no-signaling)."""
    return _MATRIX.copy()


def constraint_rhs() -> np.ndarray:
    return _RHS.copy()


def system_rank() -> int:
    """Rank of the twelve-row constraint system (eight)."""
    return int(np.linalg.matrix_rank(_MATRIX))


@dataclass(frozen=True)
class ConstraintResiduals:
    """Row residuals of the constraint system evaluated on a behavior."""

    normalization: tuple[float, float, float, float]
    signaling: tuple[float, ...]

    def as_vector(self) -> tuple[float, ...]:
        return self.normalization + self.signaling

    def max_abs(self) -> float:
        return max(abs(x) for x in self.as_vector())


def constraint_residuals(b: Behavior) -> ConstraintResiduals:
    res = _MATRIX @ np.asarray(b.probs) - _RHS
    return ConstraintResiduals(tuple(res[:4]), tuple(res[4:]))


class FreeSetId(enum.Enum):
    """Which eight cells act as free parameters in a closed-form completion.

    The names follow the probability sum whose support is the free set: S1
    means the free cells are the eight cells entering the first CHSH
    probability sum, S1P its complement, and so on.  Inverse pairs (S1, S1P),
    (S2, S2P), (S3, S3P), (S4, S4P) undo each other.
    """

    S1 = "s1"
    S1P = "s1p"
    S2 = "s2"
    S2P = "s2p"
    S3 = "s3"
    S3P = "s3p"
    S4 = "s4"
    S4P = "s4p"

    @property
    def free_cells(self) -> tuple[int, ...]:
        return _FREE_CELLS[self]

    @property
    def solved_cells(self) -> tuple[int, ...]:
        return tuple(sorted(_COMPLETIONS[self]))

    @property
    def inverse(self) -> "FreeSetId":
        return _INVERSE[self]

    @property
    def sigma_index(self) -> int:
        """Index 1..4 of the probability sum supported on the free set."""
        return {"s1": 1, "s1p": 1, "s2": 2, "s2p": 2, "s3": 3, "s3p": 3, "s4": 4, "s4p": 4}[
            self.value
        ]

    @property
    def primed(self) -> bool:
        return self.value.endswith("p")


_FREE_CELLS: dict[FreeSetId, tuple[int, ...]] = {
    FreeSetId.S1: (1, 4, 5, 8, 9, 12, 14, 15),
    FreeSetId.S1P: (2, 3, 6, 7, 10, 11, 13, 16),
    FreeSetId.S2: (1, 4, 5, 8, 10, 11, 13, 16),
    FreeSetId.S2P: (2, 3, 6, 7, 9, 12, 14, 15),
    FreeSetId.S3: (1, 4, 6, 7, 9, 12, 13, 16),
    FreeSetId.S3P: (2, 3, 5, 8, 10, 11, 14, 15),
    FreeSetId.S4: (2, 3, 5, 8, 9, 12, 13, 16),
    FreeSetId.S4P: (1, 4, 6, 7, 10, 11, 14, 15),
}

_INVERSE: dict[FreeSetId, FreeSetId] = {
    FreeSetId.S1: FreeSetId.S1P,
    FreeSetId.S1P: FreeSetId.S1,
    FreeSetId.S2: FreeSetId.S2P,
    FreeSetId.S2P: FreeSetId.S2,
    FreeSetId.S3: FreeSetId.S3P,
    FreeSetId.S3P: FreeSetId.S3,
    FreeSetId.S4: FreeSetId.S4P,
    FreeSetId.S4P: FreeSetId.S4,
}

# Completion sign tables.  For variant v, solved cell s takes the value
#   p_s = (1 + sum_i sign_i * p_free[i]) / 2
# with p_free in the order given by _FREE_CELLS[v].  Transcribed by hand;
# the test suite re-derives every coefficient from the constraint matrix.
_COMPLETIONS: dict[FreeSetId, dict[int, tuple[int, ...]]] = {
    FreeSetId.S1: {
        # free order: p1, p4, p5, p8, p9, p12, p14, p15
        2: (-1, -1, +1, -1, -1, +1, +1, -1),
        3: (-1, -1, -1, +1, +1, -1, -1, +1),
        6: (+1, -1, -1, -1, -1, +1, +1, -1),
        7: (-1, +1, -1, -1, +1, -1, -1, +1),
        10: (-1, +1, +1, -1, -1, -1, +1, -1),
        11: (+1, -1, -1, +1, -1, -1, -1, +1),
        13: (-1, +1, +1, -1, +1, -1, -1, -1),
        16: (+1, -1, -1, +1, -1, +1, -1, -1),
    },
    FreeSetId.S1P: {
        # free order: p2, p3, p6, p7, p10, p11, p13, p16
        1: (-1, -1, +1, -1, -1, +1, +1, -1),
        4: (-1, -1, -1, +1, +1, -1, -1, +1),
        5: (+1, -1, -1, -1, -1, +1, +1, -1),
        8: (-1, +1, -1, -1, +1, -1, -1, +1),
        9: (-1, +1, +1, -1, -1, -1, +1, -1),
        12: (+1, -1, -1, +1, -1, -1, -1, +1),
        14: (-1, +1, +1, -1, +1, -1, -1, -1),
        15: (+1, -1, -1, +1, -1, +1, -1, -1),
    },
    FreeSetId.S2: {
        # free order: p1, p4, p5, p8, p10, p11, p13, p16
        2: (-1, -1, +1, -1, +1, -1, -1, +1),
        3: (-1, -1, -1, +1, -1, +1, +1, -1),
        6: (+1, -1, -1, -1, +1, -1, -1, +1),
        7: (-1, +1, -1, -1, -1, +1, +1, -1),
        9: (+1, -1, -1, +1, -1, -1, +1, -1),
        12: (-1, +1, +1, -1, -1, -1, -1, +1),
        14: (+1, -1, -1, +1, +1, -1, -1, -1),
        15: (-1, +1, +1, -1, -1, +1, -1, -1),
    },
    FreeSetId.S2P: {
        # free order: p2, p3, p6, p7, p9, p12, p14, p15
        1: (-1, -1, +1, -1, +1, -1, -1, +1),
        4: (-1, -1, -1, +1, -1, +1, +1, -1),
        5: (+1, -1, -1, -1, +1, -1, -1, +1),
        8: (-1, +1, -1, -1, -1, +1, +1, -1),
        10: (+1, -1, -1, +1, -1, -1, +1, -1),
        11: (-1, +1, +1, -1, -1, -1, -1, +1),
        13: (+1, -1, -1, +1, +1, -1, -1, -1),
        16: (-1, +1, +1, -1, -1, +1, -1, -1),
    },
    FreeSetId.S3: {
        # free order: p1, p4, p6, p7, p9, p12, p13, p16
        2: (-1, -1, +1, -1, -1, +1, +1, -1),
        3: (-1, -1, -1, +1, +1, -1, -1, +1),
        5: (+1, -1, -1, -1, -1, +1, +1, -1),
        8: (-1, +1, -1, -1, +1, -1, -1, +1),
        10: (-1, +1, +1, -1, -1, -1, +1, -1),
        11: (+1, -1, -1, +1, -1, -1, -1, +1),
        14: (-1, +1, +1, -1, +1, -1, -1, -1),
        15: (+1, -1, -1, +1, -1, +1, -1, -1),
    },
    FreeSetId.S3P: {
        # free order: p2, p3, p5, p8, p10, p11, p14, p15
        1: (-1, -1, +1, -1, -1, +1, +1, -1),
        4: (-1, -1, -1, +1, +1, -1, -1, +1),
        6: (+1, -1, -1, -1, -1, +1, +1, -1),
        7: (-1, +1, -1, -1, +1, -1, -1, +1),
        9: (-1, +1, +1, -1, -1, -1, +1, -1),
        12: (+1, -1, -1, +1, -1, -1, -1, +1),
        13: (-1, +1, +1, -1, +1, -1, -1, -1),
        16: (+1, -1, -1, +1, -1, +1, -1, -1),
    },
    FreeSetId.S4: {
        # free order: p2, p3, p5, p8, p9, p12, p13, p16
        1: (-1, -1, +1, -1, +1, -1, -1, +1),
        4: (-1, -1, -1, +1, -1, +1, +1, -1),
        6: (+1, -1, -1, -1, +1, -1, -1, +1),
        7: (-1, +1, -1, -1, -1, +1, +1, -1),
        10: (+1, -1, -1, +1, -1, -1, +1, -1),
        11: (-1, +1, +1, -1, -1, -1, -1, +1),
        14: (+1, -1, -1, +1, +1, -1, -1, -1),
        15: (-1, +1, +1, -1, -1, +1, -1, -1),
    },
    FreeSetId.S4P: {
        # free order: p1, p4, p6, p7, p10, p11, p14, p15
        2: (-1, -1, +1, -1, +1, -1, -1, +1),
        3: (-1, -1, -1, +1, -1, +1, +1, -1),
        5: (+1, -1, -1, -1, +1, -1, -1, +1),
        8: (-1, +1, -1, -1, -1, +1, +1, -1),
        9: (+1, -1, -1, +1, -1, -1, +1, -1),
        12: (-1, +1, +1, -1, -1, -1, -1, +1),
        13: (+1, -1, -1, +1, +1, -1, -1, -1),
        16: (-1, +1, +1, -1, -1, +1, -1, -1),
    },
}


def completion_signs(variant: FreeSetId) -> dict[int, tuple[int, ...]]:
    """Sign table of one completion (solved cell -> signs over the free cells)."""
    return {k: v for k, v in _COMPLETIONS[variant].items()}


def complete_from_free_set(free_values: Sequence[float], variant: FreeSetId) -> Behavior:
    """Build the unique constraint-satisfying behavior from eight free cells.

    ``free_values`` are the cells listed by ``variant.free_cells`` in
    ascending cell order.  Free values may be arbitrary reals; the result
    always satisfies the twelve constraints exactly up to rounding, but is a
    probability table only if all sixteen entries land in [0, 1].
    """
    free_values = tuple(float(x) for x in free_values)
    if len(free_values) != 8:
        raise ValueError(f"need 8 free values, got {len(free_values)}")
    cells = [0.0] * 16
    for cell, value in zip(variant.free_cells, free_values):
        cells[cell - 1] = value
    for cell, signs in _COMPLETIONS[variant].items():
        acc = 1.0
        for sign, value in zip(signs, free_values):
            acc += sign * value
        cells[cell - 1] = acc / 2.0
    return Behavior(tuple(cells))


def free_values_of(b: Behavior, variant: FreeSetId) -> tuple[float, ...]:
    """Extract the free cells of ``variant`` from a behavior, ascending order."""
    return tuple(b.p(c) for c in variant.free_cells)


def completion_roundtrip(b: Behavior, variant: FreeSetId, tol: float = DEFAULT_TOL) -> Behavior:
    """Complete from ``variant``'s free cells, then back through its inverse.

    For a behavior satisfying the constraints this is the identity (up to
    rounding).  Raises ValueError reporting the worst residual when the input
    violates the constraint system beyond ``tol``.
    """
    residual = constraint_residuals(b).max_abs()
    if residual > tol:
        raise ValueError(
            f"behavior violates the constraint system (max residual {residual:.3e} > {tol:.1e})"
        )
    once = complete_from_free_set(free_values_of(b, variant), variant)
    return complete_from_free_set(free_values_of(once, variant.inverse), variant.inverse)


class _QuadrupleLike(Protocol):
    j: int
    k: int
    l: int
    m: int


@dataclass(frozen=True)
class NsBoundTriple:
    """Cells entering the no-signaling bound 2*pj - 1 <= pk + pl + pm."""

    j: int
    k: int
    l: int
    m: int

    def __post_init__(self) -> None:
        cells = (self.j, self.k, self.l, self.m)
        if len(set(cells)) != 4 or not all(1 <= c <= 16 for c in cells):
            raise ValueError(f"need four distinct cells in 1..16, got {cells}")


@dataclass(frozen=True)
class NsBoundResult:
    lhs: float
    rhs: float
    satisfied: bool

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def ns_bound_check(b: Behavior, triple: _QuadrupleLike, tol: float = DEFAULT_TOL) -> NsBoundResult:
    """Evaluate 2*pj - 1 <= pk + pl + pm on a behavior.

    Valid for every no-signaling box when (j; k, l, m) is one of the 64 cell
    quadruples enumerated in `hardybox.bell`; ``triple`` may be an
    `NsBoundTriple` or a quadruple from that module.
    """
    lhs = 2.0 * b.p(triple.j) - 1.0
    rhs = b.p(triple.k) + b.p(triple.l) + b.p(triple.m)
    return NsBoundResult(lhs=lhs, rhs=rhs, satisfied=lhs <= rhs + tol)


@dataclass(frozen=True)
class SideCheck:
    name: str
    slack: float
    satisfied: bool


def nonneg_side_checks(b: Behavior, tol: float = DEFAULT_TOL) -> tuple[SideCheck, ...]:
    """Three auxiliary inequalities implied by nonnegativity plus no-signaling.

    * ``entry_nonneg``: 1 + p4 + p5 + p9 >= p1 + p8 + p12 + p14 + p15,
      from requiring one completed cell to be nonnegative;
    * ``pair_nonneg``: p9 + p15 <= 1, from a completed pair of cells;
    * ``octet_cap``: p1 + p4 + p5 + p8 + p9 + p12 + p14 + p15 <= 4, from a
      completed set of eight cells.

    Slack is (bound minus attained value); nonnegative slack means satisfied.
    """
    p = b.p
    entry = (1.0 + p(4) + p(5) + p(9)) - (p(1) + p(8) + p(12) + p(14) + p(15))
    pair = 1.0 - (p(9) + p(15))
    octet = 4.0 - (p(1) + p(4) + p(5) + p(8) + p(9) + p(12) + p(14) + p(15))
    return (
        SideCheck("entry_nonneg", entry, entry >= -tol),
        SideCheck("pair_nonneg", pair, pair >= -tol),
        SideCheck("octet_cap", octet, octet >= -tol),
    )


def random_no_signaling_behavior(
    rng: np.random.Generator,
    variant: FreeSetId = FreeSetId.S1,
    max_tries: int = 100000,
) -> Behavior:
    """Rejection-sample a valid normalized no-signaling behavior.

    Draws the eight free cells uniformly from [0, 1] and keeps the completion
    when all sixteen entries are probabilities.
    """
    for _ in range(max_tries):
        candidate = complete_from_free_set(rng.uniform(0.0, 1.0, size=8), variant)
        if all(0.0 <= x <= 1.0 for x in candidate.probs):
            return candidate
    raise RuntimeError(f"no valid completion found in {max_tries} draws")
