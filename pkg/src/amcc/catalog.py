"""Canonical fixture models, generated from their closed-form definitions.

Only the asymmetric strongly-contextual table is a verbatim transcription
(it has no closed form); everything else is produced from its defining
parity/uniformity condition so the code documents the construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .empirical import EmpiricalModel, make_model
from .errors import IndexOutOfRange
from .scenario import bell_scenario, section_values

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)
EIGHTH = Fraction(1, 8)
ZERO = Fraction(0)


def _parity_row(width: int, parity: int, weight: Fraction) -> tuple[Fraction, ...]:
    """Uniform weight on the sections whose outcome XOR equals ``parity``."""
    return tuple(
        weight if sum(section_values(idx, width)) % 2 == parity else ZERO
        for idx in range(1 << width)
    )


def pr_box(alpha: int, beta: int, gamma: int) -> EmpiricalModel:
    """The (2,2,2) box with p = 1/2 iff x1 + x2 = X1*X2 + alpha*X1 + beta*X2 + gamma (mod 2).

    The eight bit choices give the eight extremal boxes; all have uniform
    single-observable marginals.
    """
    for bit in (alpha, beta, gamma):
        if bit not in (0, 1):
            raise IndexOutOfRange(f"pr_box flags must be bits, got {bit!r}")
    s = bell_scenario(2, 2)
    rows = []
    for a in (0, 1):
        for b in (0, 1):
            parity = (a * b) ^ (alpha * a) ^ (beta * b) ^ gamma
            rows.append(_parity_row(2, parity, HALF))
    return make_model(s, rows)


def ghz_model() -> EmpiricalModel:
    """The (3,2,2) correlation of the three-qubit GHZ state under X/Y measurements.

    Contexts with an even number of primed settings put weight 1/4 on the
    sections with x1+x2+x3 = 1 + X1X2X3 + X1X2 + X2X3 + X3X1 (mod 2); the
    remaining four contexts are uniformly 1/8.
    """
    s = bell_scenario(3, 2)
    rows = []
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                if (a + b + c) % 2 == 0:
                    parity = (1 + a * b * c + a * b + b * c + c * a) % 2
                    rows.append(_parity_row(3, parity, QUARTER))
                else:
                    rows.append((EIGHTH,) * 8)
    return make_model(s, rows)


def three_way_box() -> EmpiricalModel:
    """The (3,2,2) box with p = 1/4 iff x1 + x2 + x3 = X1*X2*X3 (mod 2)."""
    s = bell_scenario(3, 2)
    rows = []
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                rows.append(_parity_row(3, a * b * c, QUARTER))
    return make_model(s, rows)


def _q(entries: Iterable[int]) -> tuple[Fraction, ...]:
    """Row given in quarters: 0, 1, 2 mean 0, 1/4, 1/2."""
    return tuple(Fraction(e, 4) for e in entries)


#: Verbatim transcription of the asymmetric strongly-contextual (3,2,2) table
#: (rows in context order (0,0,0)..(1,1,1), entries in quarters).
_ASYMMETRIC_ROWS = (
    _q((0, 1, 2, 0, 1, 0, 0, 0)),
    _q((1, 0, 0, 2, 0, 1, 0, 0)),
    _q((1, 0, 1, 1, 1, 0, 0, 0)),
    _q((1, 0, 0, 2, 0, 1, 0, 0)),
    _q((0, 1, 2, 0, 1, 0, 0, 0)),
    _q((1, 0, 0, 2, 0, 1, 0, 0)),
    _q((2, 0, 0, 1, 0, 0, 1, 0)),
    _q((1, 1, 0, 1, 0, 0, 0, 1)),
)


def asymmetric_scc_model() -> EmpiricalModel:
    """A strongly contextual (3,2,2) model whose marginals are not uniform.

    Unlike the parity-generated boxes this table is asymmetric (rows carry
    weights 1/2 and 1/4), so it is maximally contextual without having
    maximal marginals.
    """
    return make_model(bell_scenario(3, 2), _ASYMMETRIC_ROWS)


#: CLI registry: name -> (constructor, accepts pr-box bits?).
CATALOG = {
    "pr-box": (pr_box, True),
    "ghz": (ghz_model, False),
    "three-way-box": (three_way_box, False),
    "asymmetric-scc": (asymmetric_scc_model, False),
}
