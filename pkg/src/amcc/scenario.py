"""Measurement scenarios: observables, contexts, sections, global assignments.

A scenario is a triple of observables, a cover of jointly-measurable contexts,
and a (binary) outcome alphabet.  All orderings are part of the contract:
observables keep their input order, contexts keep their input order, and the
sections of a context are enumerated lexicographically with the leftmost
observable most significant.  Incidence matrices and the JSON formats rely on
these orderings being bit-stable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import (
    ChainViolation,
    CoverViolation,
    DuplicateLabel,
    IndexOutOfRange,
    NotASubset,
    TooLarge,
    UnknownLabel,
)

#: Hard cap on exhaustive enumeration of global assignments (2**24 cases).
ENUMERATION_LIMIT = 24


@dataclass(frozen=True)
class MeasurementScenario:
    """A set of observables together with a cover of measurement contexts.

    ``observables`` is the full ordered list of measurement labels,
    ``contexts`` the ordered cover (each context an ordered label tuple), and
    ``outcomes`` the per-observable outcome arity.  Only dichotomic scenarios
    (``outcomes == 2``) are supported; the field is kept for format stability.
    """

    observables: tuple[str, ...]
    contexts: tuple[tuple[str, ...], ...]
    outcomes: int = 2

    @property
    def n_contexts(self) -> int:
        return len(self.contexts)

    def context(self, c: int) -> tuple[str, ...]:
        """The labels of context ``c``; raises IndexOutOfRange when invalid."""
        if not 0 <= c < len(self.contexts):
            raise IndexOutOfRange(f"context index {c} not in 0..{len(self.contexts) - 1}")
        return self.contexts[c]

    def n_sections(self, c: int) -> int:
        """Number of sections of context ``c`` (2**|C|)."""
        return 1 << len(self.context(c))


@dataclass(frozen=True)
class Section:
    """An outcome assignment on an ordered subset of observables."""

    domain: tuple[str, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.domain) != len(self.values):
            raise NotASubset(
                f"section has {len(self.domain)} observables but {len(self.values)} values"
            )
        for v in self.values:
            if v not in (0, 1):
                raise NotASubset(f"outcome {v!r} is not a bit")


@dataclass(frozen=True)
class GlobalAssignment:
    """An outcome for every observable, in scenario observable order."""

    observables: tuple[str, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.observables) != len(self.values):
            raise NotASubset(
                f"assignment has {len(self.observables)} observables "
                f"but {len(self.values)} values"
            )

    def as_section(self) -> Section:
        return Section(self.observables, self.values)


def make_scenario(
    observables: Sequence[str], contexts: Iterable[Sequence[str]]
) -> MeasurementScenario:
    """Validate and build a measurement scenario.

    Enforces the cover conditions: every observable occurs in at least one
    context, no context is contained in another (antichain), and every context
    is a nonempty duplicate-free tuple of known labels.
    """
    obs = tuple(observables)
    if len(set(obs)) != len(obs):
        raise DuplicateLabel(f"duplicate observable label in {obs}")
    known = set(obs)

    ctxs: list[tuple[str, ...]] = []
    for raw in contexts:
        ctx = tuple(raw)
        if not ctx:
            raise ChainViolation("empty context")
        if len(set(ctx)) != len(ctx):
            raise DuplicateLabel(f"duplicate label inside context {ctx}")
        for label in ctx:
            if label not in known:
                raise UnknownLabel(f"context {ctx} references unknown observable {label!r}")
        ctxs.append(ctx)

    sets = [frozenset(c) for c in ctxs]
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if i != j and a <= b:
                raise ChainViolation(
                    f"context {ctxs[i]} is contained in context {ctxs[j]}"
                )

    covered = set().union(*sets) if sets else set()
    missing = [x for x in obs if x not in covered]
    if missing:
        raise CoverViolation(f"observables {missing} occur in no context")

    return MeasurementScenario(observables=obs, contexts=tuple(ctxs))


def party_label(party: int, setting: int) -> str:
    """Label of 1-based ``party``'s measurement ``setting`` (0-based).

    Setting 0 is the unprimed observable ("X1"), each further setting adds a
    prime, rendered as a "p" suffix ("X1p", "X1pp", ...).
    """
    return f"X{party}" + "p" * setting


def bell_scenario(n_parties: int, settings: int) -> MeasurementScenario:
    """The (n, m, 2) scenario: one observable per party-setting pair.

    Contexts pick one setting per party and are ordered lexicographically by
    the setting tuple, so for (3, 2) the context order is
    (0,0,0), (0,0,1), ..., (1,1,1).
    """
    if n_parties < 1 or settings < 1:
        raise IndexOutOfRange("need at least one party and one setting")
    observables = tuple(
        party_label(i, j) for i in range(1, n_parties + 1) for j in range(settings)
    )
    contexts = [
        tuple(party_label(i + 1, choice[i]) for i in range(n_parties))
        for choice in itertools.product(range(settings), repeat=n_parties)
    ]
    return make_scenario(observables, contexts)


def context_setting_bits(
    s: MeasurementScenario, c: int
) -> Union[tuple[int, ...], None]:
    """Per-party setting choices of context ``c`` for Bell-product scenarios.

    Returns None when the context's labels do not follow the
    :func:`party_label` convention (general covers have no setting tuple).
    """
    bits = []
    for party, label in enumerate(s.context(c), start=1):
        base = f"X{party}"
        if not label.startswith(base) or set(label[len(base):]) - {"p"}:
            return None
        bits.append(len(label) - len(base))
    return tuple(bits)


def enumerate_sections(s: MeasurementScenario, c: int) -> list[Section]:
    """All sections of context ``c`` in lexicographic outcome order."""
    ctx = s.context(c)
    return [
        Section(ctx, values)
        for values in itertools.product((0, 1), repeat=len(ctx))
    ]


def enumerate_global_assignments(s: MeasurementScenario) -> list[GlobalAssignment]:
    """All 2**|X| global assignments in lexicographic order."""
    n = len(s.observables)
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"{n} observables exceed the 2**{ENUMERATION_LIMIT} enumeration guard")
    return [
        GlobalAssignment(s.observables, values)
        for values in itertools.product((0, 1), repeat=n)
    ]


def restrict(
    x: Union[Section, GlobalAssignment], target: Sequence[str]
) -> Section:
    """Project an assignment onto ``target``, copying values in target order."""
    domain = x.observables if isinstance(x, GlobalAssignment) else x.domain
    lookup = {label: i for i, label in enumerate(domain)}
    values = []
    for label in target:
        if label not in lookup:
            raise NotASubset(f"{label!r} is not in the domain {domain}")
        values.append(x.values[lookup[label]])
    return Section(tuple(target), tuple(values))


def section_index(values: Sequence[int]) -> int:
    """Canonical index of a section: its values read as a big-endian binary number."""
    idx = 0
    for v in values:
        idx = (idx << 1) | v
    return idx


def section_values(idx: int, width: int) -> tuple[int, ...]:
    """Inverse of :func:`section_index` for a context of ``width`` observables."""
    return tuple((idx >> (width - 1 - k)) & 1 for k in range(width))


def polytope_dimension(
    settings_per_party: Sequence[int],
    outcomes_per_setting: Sequence[Sequence[int]],
) -> int:
    """Dimension of the no-signaling polytope of an (n, m, o) box scenario.

    ``settings_per_party[i]`` is the number of settings of party ``i`` and
    ``outcomes_per_setting[i][j]`` the outcome count of that party's setting
    ``j``.  The value is  prod_i (sum_j (o_ij - 1) + 1) - 1.
    """
    if len(settings_per_party) != len(outcomes_per_setting):
        raise IndexOutOfRange(
            f"settings list covers {len(settings_per_party)} parties but the "
            f"outcomes matrix has {len(outcomes_per_setting)} rows"
        )
    dim = 1
    for m_i, outcomes in zip(settings_per_party, outcomes_per_setting):
        if m_i < 1:
            raise IndexOutOfRange(f"party needs at least one setting, got {m_i}")
        if len(outcomes) != m_i:
            raise IndexOutOfRange(
                f"party declares {m_i} settings but {len(outcomes)} outcome counts"
            )
        acc = 1
        for o in outcomes:
            if o < 1:
                raise IndexOutOfRange(f"setting needs at least one outcome, got {o}")
            acc += o - 1
        dim *= acc
    return dim - 1


def parse_bell_token(token: str) -> MeasurementScenario:
    """Parse "bell-<parties>-<settings>[-<outcomes>]" into a Bell scenario.

    The trailing outcome count is optional and must be 2 when present.
    """
    parts = token.split("-")
    if parts[0] != "bell" or len(parts) not in (3, 4):
        raise UnknownLabel(f"not a bell scenario token: {token!r}")
    try:
        numbers = [int(p) for p in parts[1:]]
    except ValueError:
        raise UnknownLabel(f"not a bell scenario token: {token!r}") from None
    if len(numbers) == 3 and numbers[2] != 2:
        raise TooLarge(f"only 2-outcome scenarios are supported, got {token!r}")
    return bell_scenario(numbers[0], numbers[1])


def bell_token(s: MeasurementScenario) -> Union[str, None]:
    """Inverse of :func:`parse_bell_token`; None when ``s`` is not Bell-shaped."""
    if not s.contexts:
        return None
    n = len(s.contexts[0])
    if n == 0 or len(s.observables) % n:
        return None
    m = len(s.observables) // n
    candidate = bell_scenario(n, m) if m >= 1 else None
    return f"bell-{n}-{m}-2" if candidate == s else None


# --- JSON ------------------------------------------------------------------

def scenario_to_dict(s: MeasurementScenario) -> dict:
    """JSON form: {"observables": [...], "contexts": [[...], ...], "outcomes": 2}."""
    return {
        "observables": list(s.observables),
        "contexts": [list(c) for c in s.contexts],
        "outcomes": s.outcomes,
    }


def scenario_from_dict(data: dict) -> MeasurementScenario:
    """Parse and re-validate the JSON form produced by :func:`scenario_to_dict`."""
    outcomes = data.get("outcomes", 2)
    if outcomes != 2:
        raise TooLarge(f"only dichotomic scenarios are supported, got outcomes={outcomes}")
    return make_scenario(data["observables"], data["contexts"])
