"""Empirical models: one exact-rational distribution per measurement context.

All probability arithmetic is done with ``fractions.Fraction``; there is no
floating point anywhere in the model layer, so normalization, no-signaling
and uniformity checks are exact equalities rather than tolerance tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import (
    EmptySupport,
    NegativeEntry,
    NotASubset,
    RowNotNormalized,
    ScenarioMismatch,
    SignalingDetected,
)
from .scenario import (
    MeasurementScenario,
    scenario_from_dict,
    scenario_to_dict,
    section_index,
)

ONE = Fraction(1)
ZERO = Fraction(0)


def format_rational(q: Fraction) -> str:
    """Serialize exactly: integers as "k", other rationals as "num/den"."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational` (accepts "3/4", "1", "0")."""
    return Fraction(str(text))


@dataclass(frozen=True)
class SignalingWitness:
    """Two contexts whose marginals differ on their intersection."""

    context_a: int
    context_b: int
    overlap: tuple[str, ...]
    marginal_a: tuple[Fraction, ...]
    marginal_b: tuple[Fraction, ...]

    def describe(self) -> str:
        return (
            f"contexts {self.context_a} and {self.context_b} disagree on "
            f"{self.overlap}: {tuple(map(format_rational, self.marginal_a))} vs "
            f"{tuple(map(format_rational, self.marginal_b))}"
        )


@dataclass(frozen=True)
class MarginalWitness:
    """A within-context marginal that is not uniform."""

    context: int
    subset: tuple[str, ...]
    marginal: tuple[Fraction, ...]

    def describe(self) -> str:
        return (
            f"context {self.context}, subset {self.subset} has marginal "
            f"{tuple(map(format_rational, self.marginal))}"
        )


@dataclass(frozen=True)
class EmpiricalModel:
    """A family of context distributions in canonical section order."""

    scenario: MeasurementScenario
    tables: tuple[tuple[Fraction, ...], ...]

    def row(self, c: int) -> tuple[Fraction, ...]:
        self.scenario.context(c)
        return self.tables[c]


@dataclass(frozen=True)
class PossibilisticModel:
    """Per-context Boolean support tables (the 0/1 collapse of a model).

    Doubles as a Boolean constraint-satisfaction instance: a global
    assignment satisfies the model when its restriction to every context is
    a supported section.
    """

    scenario: MeasurementScenario
    supports: tuple[tuple[bool, ...], ...]

    def support_indices(self, c: int) -> tuple[int, ...]:
        return tuple(i for i, bit in enumerate(self.supports[c]) if bit)

    def support_mask(self, c: int) -> int:
        mask = 0
        for i, bit in enumerate(self.supports[c]):
            if bit:
                mask |= 1 << i
        return mask


def make_model(
    s: MeasurementScenario,
    tables: Sequence[Sequence[Union[Fraction, int, str]]],
    check_ns: bool = True,
) -> EmpiricalModel:
    """Validate a probability table family and wrap it as a model.

    Every row must be nonnegative and sum to exactly 1; with ``check_ns`` the
    generalized no-signaling condition is verified and a
    :class:`SignalingDetected` carrying a witness is raised on failure.
    """
    if len(tables) != s.n_contexts:
        raise RowNotNormalized(
            f"expected {s.n_contexts} rows, got {len(tables)}"
        )
    rows: list[tuple[Fraction, ...]] = []
    for c, raw in enumerate(tables):
        width = s.n_sections(c)
        if len(raw) != width:
            raise RowNotNormalized(
                f"context {c} needs {width} entries, got {len(raw)}"
            )
        row = tuple(Fraction(x) for x in raw)
        for i, x in enumerate(row):
            if x < 0:
                raise NegativeEntry(
                    f"context {c}, section {i}: negative entry {format_rational(x)}"
                )
        total = sum(row)
        if total != 1:
            raise RowNotNormalized(
                f"context {c} sums to {format_rational(total)}, not 1"
            )
        rows.append(row)
    model = EmpiricalModel(scenario=s, tables=tuple(rows))
    if check_ns:
        ok, witness = is_no_signaling(model)
        if not ok:
            raise SignalingDetected(witness.describe(), witness=witness)
    return model


def _positions(context: tuple[str, ...], subset: Sequence[str]) -> list[int]:
    lookup = {label: i for i, label in enumerate(context)}
    positions = []
    for label in subset:
        if label not in lookup:
            raise NotASubset(f"{label!r} is not in context {context}")
        positions.append(lookup[label])
    return positions


def marginal(
    m: EmpiricalModel, c: int, subset: Sequence[str]
) -> tuple[Fraction, ...]:
    """Marginal of context ``c`` on ``subset``, in lexicographic section order.

    Entry ``k`` is the total probability of the subset-section with canonical
    index ``k``; the output always sums to exactly 1.
    """
    context = m.scenario.context(c)
    positions = _positions(context, subset)
    width = len(context)
    out = [ZERO] * (1 << len(positions))
    for full_idx, p in enumerate(m.tables[c]):
        if p == 0:
            continue
        sub_idx = 0
        for pos in positions:
            sub_idx = (sub_idx << 1) | ((full_idx >> (width - 1 - pos)) & 1)
        out[sub_idx] += p
    return tuple(out)


def _canonical_overlap(
    s: MeasurementScenario, a: int, b: int
) -> tuple[str, ...]:
    inter = set(s.contexts[a]) & set(s.contexts[b])
    return tuple(x for x in s.observables if x in inter)


def is_no_signaling(m: EmpiricalModel):
    """Exact marginal agreement on every context intersection.

    Returns ``(True, None)`` or ``(False, witness)`` with the first failing
    pair in canonical order.
    """
    s = m.scenario
    for a in range(s.n_contexts):
        for b in range(a + 1, s.n_contexts):
            overlap = _canonical_overlap(s, a, b)
            if not overlap:
                continue
            ma = marginal(m, a, overlap)
            mb = marginal(m, b, overlap)
            if ma != mb:
                return False, SignalingWitness(a, b, overlap, ma, mb)
    return True, None


def possibilistic_collapse(m: EmpiricalModel) -> PossibilisticModel:
    """The support pattern of a model: entry true iff the probability is nonzero."""
    return PossibilisticModel(
        scenario=m.scenario,
        supports=tuple(tuple(p > 0 for p in row) for row in m.tables),
    )


def proper_subsets(context: tuple[str, ...]):
    """Proper nonempty subsets of a context, in canonical (bitmask) order.

    Mask bit ``k`` selects the context's ``k``-th observable; masks run from
    1 to 2**|C| - 2 so the full context and the empty set are excluded.
    """
    k = len(context)
    for mask in range(1, (1 << k) - 1):
        yield tuple(context[i] for i in range(k) if (mask >> i) & 1)


def is_maximal_marginal(m: EmpiricalModel):
    """True iff every proper within-context marginal of size k is uniform 1/2**k.

    Returns ``(True, None)`` or ``(False, witness)`` with the first failure in
    canonical order.
    """
    for c in range(m.scenario.n_contexts):
        context = m.scenario.context(c)
        for subset in proper_subsets(context):
            expected = Fraction(1, 1 << len(subset))
            marg = marginal(m, c, subset)
            if any(p != expected for p in marg):
                return False, MarginalWitness(c, subset, marg)
    return True, None


def lift_uniform(
    p: PossibilisticModel, check_ns: bool = True
) -> EmpiricalModel:
    """Spread each row's mass uniformly over its supported sections.

    A Boolean-no-signaling support pattern can still fail probabilistic
    no-signaling after the uniform lift (a sign the pattern is asymmetric);
    with ``check_ns`` that raises :class:`SignalingDetected`.
    """
    rows = []
    for c, support in enumerate(p.supports):
        count = sum(support)
        if count == 0:
            raise EmptySupport(f"context {c} has empty support")
        weight = Fraction(1, count)
        rows.append(tuple(weight if bit else ZERO for bit in support))
    return make_model(p.scenario, rows, check_ns=check_ns)


def mix(
    models: Sequence[EmpiricalModel],
    weights: Sequence[Union[Fraction, int]],
    check_ns: bool = True,
) -> EmpiricalModel:
    """Convex combination of models on the same scenario."""
    if len(models) != len(weights) or not models:
        raise ScenarioMismatch("need one weight per model")
    weights = [Fraction(w) for w in weights]
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise RowNotNormalized("mixture weights must be nonnegative and sum to 1")
    s = models[0].scenario
    if any(m.scenario != s for m in models):
        raise ScenarioMismatch("models live on different scenarios")
    rows = []
    for c in range(s.n_contexts):
        width = s.n_sections(c)
        rows.append(
            tuple(
                sum(w * m.tables[c][i] for w, m in zip(weights, models))
                for i in range(width)
            )
        )
    return make_model(s, rows, check_ns=check_ns)


def from_global_distribution(
    s: MeasurementScenario,
    weights: Mapping[tuple[int, ...], Union[Fraction, int]],
) -> EmpiricalModel:
    """The (noncontextual) model whose rows are marginals of one global distribution.

    ``weights`` maps full outcome tuples (scenario observable order) to
    probabilities; they must be nonnegative and sum to 1.
    """
    total = sum(Fraction(w) for w in weights.values())
    if total != 1:
        raise RowNotNormalized(f"global weights sum to {format_rational(total)}")
    n = len(s.observables)
    rows = []
    for c in range(s.n_contexts):
        context = s.context(c)
        positions = [s.observables.index(x) for x in context]
        row = [ZERO] * s.n_sections(c)
        for values, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise NegativeEntry("negative global weight")
            if len(values) != n:
                raise NotASubset(f"assignment {values} has wrong length")
            idx = section_index([values[pos] for pos in positions])
            row[idx] += w
        rows.append(tuple(row))
    return make_model(s, rows, check_ns=True)


def deterministic_model(
    s: MeasurementScenario, values: Sequence[int]
) -> EmpiricalModel:
    """Point-mass model of a single global assignment."""
    return from_global_distribution(s, {tuple(values): ONE})


# --- JSON ------------------------------------------------------------------

def _context_key(context: tuple[str, ...]) -> str:
    return "|".join(context)


def model_to_dict(m: EmpiricalModel) -> dict:
    """JSON form: scenario plus one rational-string row per context key."""
    return {
        "scenario": scenario_to_dict(m.scenario),
        "tables": {
            _context_key(m.scenario.contexts[c]): [
                format_rational(x) for x in m.tables[c]
            ]
            for c in range(m.scenario.n_contexts)
        },
    }


def model_from_dict(data: dict, check_ns: bool = True) -> EmpiricalModel:
    """Parse and re-validate the JSON form produced by :func:`model_to_dict`."""
    s = scenario_from_dict(data["scenario"])
    tables = data["tables"]
    rows = []
    for c in range(s.n_contexts):
        key = _context_key(s.contexts[c])
        if key not in tables:
            raise RowNotNormalized(f"missing table row for context {key!r}")
        rows.append([parse_rational(x) for x in tables[key]])
    extra = set(tables) - {_context_key(ctx) for ctx in s.contexts}
    if extra:
        raise RowNotNormalized(f"table rows for unknown contexts: {sorted(extra)}")
    return make_model(s, rows, check_ns=check_ns)


def possibilistic_to_dict(p: PossibilisticModel) -> dict:
    """Same shape as the model JSON, with rows replaced by 0/1 arrays."""
    return {
        "scenario": scenario_to_dict(p.scenario),
        "tables": {
            _context_key(p.scenario.contexts[c]): [
                int(bit) for bit in p.supports[c]
            ]
            for c in range(p.scenario.n_contexts)
        },
    }


def possibilistic_from_dict(data: dict) -> PossibilisticModel:
    s = scenario_from_dict(data["scenario"])
    tables = data["tables"]
    rows = []
    for c in range(s.n_contexts):
        key = _context_key(s.contexts[c])
        if key not in tables:
            raise EmptySupport(f"missing support row for context {key!r}")
        row = tuple(bool(bit) for bit in tables[key])
        if len(row) != s.n_sections(c) or not any(row):
            raise EmptySupport(f"context {key!r} support row is invalid")
        rows.append(row)
    return PossibilisticModel(scenario=s, supports=tuple(rows))
