"""Contextuality decisions for no-signaling empirical models.

Two independent decision routes are implemented and cross-checked:

* an exact linear program over the incidence matrix (does a global
  distribution reproduce all context rows? what is the largest
  noncontextual weight?), and
* an exhaustive scan of global assignments against the support pattern
  (is there an assignment compatible with every context's support?).

``classify`` runs both and raises ``InternalConsistencyError`` if they ever
disagree, rather than returning a silently wrong verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .empirical import (
    EmpiricalModel,
    PossibilisticModel,
    format_rational,
    is_maximal_marginal,
    is_no_signaling,
    possibilistic_collapse,
)
from .errors import InternalConsistencyError, SignalingInput, TooLarge
from .ratlp import LinearProgram, LpStatus, maximize, solve_feasibility
from .scenario import (
    ENUMERATION_LIMIT,
    GlobalAssignment,
    MeasurementScenario,
    section_values,
)

ONE = Fraction(1)


@lru_cache(maxsize=None)
def _context_positions(s: MeasurementScenario) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(s.observables.index(x) for x in ctx) for ctx in s.contexts
    )


@lru_cache(maxsize=None)
def restriction_table(s: MeasurementScenario) -> tuple[tuple[int, ...], ...]:
    """``table[c][g]`` = canonical section index of global assignment ``g`` in context ``c``.

    Global assignments are indexed by their outcome tuple read as a
    big-endian binary number, matching ``enumerate_global_assignments``.
    """
    n = len(s.observables)
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"{n} observables exceed the 2**{ENUMERATION_LIMIT} guard")
    table = []
    for positions in _context_positions(s):
        shifts = [n - 1 - p for p in positions]
        row = []
        for g in range(1 << n):
            idx = 0
            for sh in shifts:
                idx = (idx << 1) | ((g >> sh) & 1)
            row.append(idx)
        table.append(tuple(row))
    return tuple(table)


@lru_cache(maxsize=None)
def global_masks(s: MeasurementScenario) -> tuple[tuple[int, ...], ...]:
    """``masks[c][sec]`` = bitmask over global assignments restricting to ``sec``."""
    table = restriction_table(s)
    out = []
    for c in range(s.n_contexts):
        masks = [0] * s.n_sections(c)
        for g, sec in enumerate(table[c]):
            masks[sec] |= 1 << g
        out.append(tuple(masks))
    return tuple(out)


@dataclass(frozen=True)
class IncidenceMatrix:
    """0/1 matrix with (context, section) rows and global-assignment columns.

    ``entries[r][g] == 1`` iff assignment ``g`` restricts to row ``r``'s
    section; every column therefore has exactly one 1 per context.
    """

    scenario: MeasurementScenario
    row_index: tuple[tuple[int, int], ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def n_columns(self) -> int:
        return len(self.entries[0]) if self.entries else 0


@lru_cache(maxsize=None)
def incidence_matrix(s: MeasurementScenario) -> IncidenceMatrix:
    """The incidence matrix in canonical row/column order (cached per scenario)."""
    table = restriction_table(s)
    n_globals = 1 << len(s.observables)
    row_index = []
    entries = []
    for c in range(s.n_contexts):
        for sec in range(s.n_sections(c)):
            row_index.append((c, sec))
            entries.append(
                tuple(1 if table[c][g] == sec else 0 for g in range(n_globals))
            )
    return IncidenceMatrix(
        scenario=s, row_index=tuple(row_index), entries=tuple(entries)
    )


def _assignment_vector(m: EmpiricalModel) -> list[Fraction]:
    v = []
    for row in m.tables:
        v.extend(row)
    return v


def _require_no_signaling(m: EmpiricalModel) -> None:
    ok, witness = is_no_signaling(m)
    if not ok:
        raise SignalingInput(witness.describe())


def support_mask(p: PossibilisticModel) -> int:
    """Bitmask of global assignments compatible with every context's support."""
    s = p.scenario
    masks = global_masks(s)
    acc = (1 << (1 << len(s.observables))) - 1
    for c in range(s.n_contexts):
        allowed = 0
        for sec in p.support_indices(c):
            allowed |= masks[c][sec]
        acc &= allowed
        if acc == 0:
            break
    return acc


def _assignment_from_index(s: MeasurementScenario, g: int) -> GlobalAssignment:
    return GlobalAssignment(
        s.observables, section_values(g, len(s.observables))
    )


def is_contextual(m: EmpiricalModel):
    """LP route: noncontextual iff M d = v has a nonnegative solution.

    Returns ``(True, None)`` when contextual, else ``(False, d)`` where ``d``
    maps assignment bit-tuples to weights of a reproducing global distribution.
    """
    _require_no_signaling(m)
    inc = incidence_matrix(m.scenario)
    out = solve_feasibility(inc.entries, _assignment_vector(m))
    if out.status is LpStatus.INFEASIBLE:
        return True, None
    dist = {
        section_values(g, len(m.scenario.observables)): w
        for g, w in enumerate(out.solution)
        if w != 0
    }
    return False, dist


def contextual_fraction(m: EmpiricalModel) -> Fraction:
    """CF = 1 - max{ sum(d) : M d <= v, d >= 0 }, exactly."""
    cf, _ = _contextual_fraction_with_witness(m)
    return cf


def _contextual_fraction_with_witness(m: EmpiricalModel):
    _require_no_signaling(m)
    inc = incidence_matrix(m.scenario)
    n = inc.n_columns
    lp = LinearProgram(
        objective=(1,) * n, a_le=inc.entries, b_le=tuple(_assignment_vector(m))
    )
    out = maximize(lp)
    if out.status is not LpStatus.OPTIMAL:
        raise InternalConsistencyError(
            f"noncontextual-fraction LP ended {out.status}, expected an optimum"
        )
    return ONE - out.value, out.solution


def is_strongly_contextual(m: Union[EmpiricalModel, PossibilisticModel]):
    """Exhaustive route: true iff no global assignment is compatible with all supports.

    Returns ``(True, None)`` or ``(False, witness)`` with the first compatible
    assignment in canonical order.
    """
    p = possibilistic_collapse(m) if isinstance(m, EmpiricalModel) else m
    mask = support_mask(p)
    if mask == 0:
        return True, None
    g = (mask & -mask).bit_length() - 1
    return False, _assignment_from_index(p.scenario, g)


@dataclass(frozen=True)
class AvnCertificate:
    """One violated zero constraint per global assignment.

    ``entries[g]`` is the first (context, section) pair, in canonical order,
    whose probability is zero and whose section is the restriction of global
    assignment ``g``.  Existence for every ``g`` proves that no assignment is
    compatible with the model's support.
    """

    scenario: MeasurementScenario
    entries: tuple[tuple[int, int], ...]

    def to_jsonable(self) -> list[dict]:
        s = self.scenario
        n = len(s.observables)
        out = []
        for g, (c, sec) in enumerate(self.entries):
            out.append(
                {
                    "assignment": "".join(map(str, section_values(g, n))),
                    "context": list(s.contexts[c]),
                    "section": "".join(map(str, section_values(sec, len(s.contexts[c])))),
                }
            )
        return out


def avn_certificate(m: EmpiricalModel):
    """Map every global assignment to a zero constraint it violates.

    Returns ``(True, certificate)`` when the model is strongly contextual and
    ``(False, witness)`` with a compatible assignment otherwise.
    """
    s = m.scenario
    table = restriction_table(s)
    entries = []
    for g in range(1 << len(s.observables)):
        hit = None
        for c in range(s.n_contexts):
            sec = table[c][g]
            if m.tables[c][sec] == 0:
                hit = (c, sec)
                break
        if hit is None:
            return False, _assignment_from_index(s, g)
        entries.append(hit)
    return True, AvnCertificate(scenario=s, entries=tuple(entries))


@dataclass(frozen=True)
class ClassificationReport:
    """Joint verdict: contextual fraction, strong contextuality, marginals, AMCC."""

    cf: Fraction
    ncf: Fraction
    strongly_contextual: bool
    maximal_marginal: bool
    amcc: bool
    witness: dict

    def to_dict(self, include_avn: bool = True) -> dict:
        witness = dict(self.witness)
        if not include_avn:
            witness.pop("avn", None)
        return {
            "cf": format_rational(self.cf),
            "ncf": format_rational(self.ncf),
            "strongly_contextual": self.strongly_contextual,
            "maximal_marginal": self.maximal_marginal,
            "amcc": self.amcc,
            "witness": witness,
        }


def classify(m: EmpiricalModel) -> ClassificationReport:
    """Full classification with the LP and the exhaustive scan cross-asserted.

    A model is AMCC exactly when it is maximally contextual (CF = 1, which
    coincides with strong contextuality) and all its proper within-context
    marginals are uniform.
    """
    _require_no_signaling(m)
    cf, lp_solution = _contextual_fraction_with_witness(m)
    strong, strong_witness = is_strongly_contextual(m)
    if strong != (cf == 1):
        raise InternalConsistencyError(
            f"LP reports CF={format_rational(cf)} but the exhaustive scan "
            f"reports strongly_contextual={strong}"
        )
    maxmarg, marg_witness = is_maximal_marginal(m)

    witness: dict = {}
    if lp_solution is not None and cf != 1:
        n = len(m.scenario.observables)
        witness["noncontextual_part"] = {
            "".join(map(str, section_values(g, n))): format_rational(w)
            for g, w in enumerate(lp_solution)
            if w != 0
        }
    if marg_witness is not None:
        witness["failing_marginal"] = {
            "context": list(m.scenario.contexts[marg_witness.context]),
            "subset": list(marg_witness.subset),
            "marginal": [format_rational(x) for x in marg_witness.marginal],
        }
    if strong:
        ok, cert = avn_certificate(m)
        if not ok:
            raise InternalConsistencyError(
                "strongly contextual model has no zero-constraint certificate"
            )
        witness["avn"] = cert.to_jsonable()
    elif strong_witness is not None:
        witness["compatible_assignment"] = "".join(
            map(str, strong_witness.values)
        )

    report = ClassificationReport(
        cf=cf,
        ncf=ONE - cf,
        strongly_contextual=strong,
        maximal_marginal=maxmarg,
        amcc=strong and maxmarg,
        witness=witness,
    )
    if report.cf + report.ncf != 1 or report.amcc != (
        report.strongly_contextual and report.maximal_marginal
    ):
        raise InternalConsistencyError("classification report violates its invariants")
    return report


__all__ = [
    "AvnCertificate",
    "ClassificationReport",
    "IncidenceMatrix",
    "avn_certificate",
    "classify",
    "contextual_fraction",
    "global_masks",
    "incidence_matrix",
    "is_contextual",
    "is_strongly_contextual",
    "restriction_table",
    "support_mask",
]
