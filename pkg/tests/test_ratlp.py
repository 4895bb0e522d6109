from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amcc.analysis import incidence_matrix
from amcc.catalog import pr_box
from amcc.empirical import deterministic_model
from amcc.errors import ShapeMismatch
from amcc.ratlp import LinearProgram, LpStatus, maximize, solve_feasibility
from amcc.scenario import bell_scenario

from _oracles import feasible_bruteforce, maximize_bruteforce

F = Fraction
H = F(1, 2)


def flatten(model):
    v = []
    for row in model.tables:
        v.extend(row)
    return v


def test_feasibility_identity_system():
    out = solve_feasibility(((1, 0), (0, 1)), (H, H))
    assert out.status is LpStatus.FEASIBLE
    assert out.solution == (H, H)


def test_feasibility_contradictory_rows():
    out = solve_feasibility(((1,), (1,)), (F(1), F(0)))
    assert out.status is LpStatus.INFEASIBLE


def test_feasibility_pr_incidence_infeasible():
    inc = incidence_matrix(bell_scenario(2, 2))
    out = solve_feasibility(inc.entries, flatten(pr_box(0, 0, 0)))
    assert out.status is LpStatus.INFEASIBLE


def test_feasibility_solution_satisfies_system_exactly():
    a = ((1, 1, 0), (0, 1, 2))
    b = (F(3, 4), F(1, 2))
    out = solve_feasibility(a, b)
    assert out.status is LpStatus.FEASIBLE
    for row, target in zip(a, b):
        assert sum(F(x) * v for x, v in zip(row, out.solution)) == target
    assert all(v >= 0 for v in out.solution)


def test_maximize_simple_bound():
    out = maximize(LinearProgram(objective=(F(1),), a_le=((F(1),),), b_le=(F(3, 4),)))
    assert out.status is LpStatus.OPTIMAL
    assert out.value == F(3, 4)


def test_maximize_pr_box_mass_zero():
    inc = incidence_matrix(bell_scenario(2, 2))
    lp = LinearProgram(
        objective=(1,) * inc.n_columns, a_le=inc.entries, b_le=tuple(flatten(pr_box(0, 0, 0)))
    )
    out = maximize(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == 0


def test_maximize_deterministic_mass_one():
    s = bell_scenario(2, 2)
    inc = incidence_matrix(s)
    model = deterministic_model(s, (0, 1, 1, 0))
    lp = LinearProgram(
        objective=(1,) * inc.n_columns, a_le=inc.entries, b_le=tuple(flatten(model))
    )
    out = maximize(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == 1
    # The optimum is the point mass on the generating assignment's column.
    assert sum(1 for v in out.solution if v != 0) == 1


def test_maximize_unbounded():
    out = maximize(LinearProgram(objective=(F(1), F(1))))
    assert out.status is LpStatus.UNBOUNDED


def test_maximize_with_equality_rows():
    # max x + y  s.t.  x + y + z = 1, x <= 1/4
    lp = LinearProgram(
        objective=(1, 1, 0),
        a_eq=((1, 1, 1),),
        b_eq=(F(1),),
        a_le=((1, 0, 0),),
        b_le=(F(1, 4),),
    )
    out = maximize(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == 1


def test_maximize_infeasible():
    lp = LinearProgram(objective=(1,), a_eq=((1,), (1,)), b_eq=(F(1), F(2)))
    assert maximize(lp).status is LpStatus.INFEASIBLE


def test_redundant_equality_rows_are_harmless():
    # Duplicated and linearly dependent equality rows leave degenerate
    # artificials that must be driven out or dropped.
    lp = LinearProgram(
        objective=(1, 1),
        a_eq=((1, 1), (1, 1), (2, 2)),
        b_eq=(F(1), F(1), F(2)),
    )
    out = maximize(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == 1
    assert sum(out.solution) == 1


def test_negative_rhs_rows_handled():
    # x >= 2 written as -x <= -2; minimize x via maximize -x.
    lp = LinearProgram(objective=(F(-1),), a_le=((F(-1),),), b_le=(F(-2),))
    out = maximize(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == -2
    assert out.solution == (F(2),)


def test_shape_mismatch_raised():
    with pytest.raises(ShapeMismatch):
        LinearProgram(objective=(1, 1), a_le=((1,),), b_le=(F(1),))
    with pytest.raises(ShapeMismatch):
        solve_feasibility(((1, 0),), (F(1), F(1)))


def test_degenerate_cycling_instance_terminates():
    # Classic stalling setup (Beale-like): heavy degeneracy at the origin.
    lp = LinearProgram(
        objective=(F(3, 4), F(-150), F(1, 50), F(-6)),
        a_le=(
            (F(1, 4), F(-60), F(-1, 25), F(9)),
            (F(1, 2), F(-90), F(-1, 50), F(3)),
            (F(0), F(0), F(1), F(0)),
        ),
        b_le=(F(0), F(0), F(1)),
    )
    out = maximize(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == F(1, 20)


def test_determinism_identical_runs():
    inc = incidence_matrix(bell_scenario(2, 2))
    b = tuple(flatten(pr_box(1, 0, 1)))
    lp = LinearProgram(objective=(1,) * inc.n_columns, a_le=inc.entries, b_le=b)
    first = maximize(lp)
    second = maximize(lp)
    assert first == second


small_fracs = st.integers(-3, 3).map(lambda n: F(n, 2))
nonneg_fracs = st.integers(0, 6).map(lambda n: F(n, 3))


@settings(max_examples=500, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 4),
    st.data(),
)
def test_feasibility_matches_bruteforce_oracle(m, n, data):
    a = [
        [data.draw(small_fracs) for _ in range(n)]
        for _ in range(m)
    ]
    b = [data.draw(small_fracs) for _ in range(m)]
    out = solve_feasibility(a, b)
    witness = feasible_bruteforce(a, b)
    assert (out.status is LpStatus.FEASIBLE) == (witness is not None)
    if out.status is LpStatus.FEASIBLE:
        for row, target in zip(a, b):
            assert sum(x * v for x, v in zip(row, out.solution)) == target
        assert all(v >= 0 for v in out.solution)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 3), st.integers(1, 2), st.data())
def test_maximize_matches_vertex_enumeration(n, m, data):
    a = [[data.draw(small_fracs) for _ in range(n)] for _ in range(m)]
    b = [data.draw(nonneg_fracs) for _ in range(m)]
    # A box row keeps the region bounded so the oracle is valid.
    a.append([F(1)] * n)
    b.append(F(4))
    c = [data.draw(small_fracs) for _ in range(n)]
    out = maximize(LinearProgram(objective=tuple(c), a_le=tuple(map(tuple, a)), b_le=tuple(b)))
    expected = maximize_bruteforce(c, a, b)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == expected


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 3), st.data())
def test_maximize_with_equalities_matches_split_oracle(n, data):
    # One equality row (possibly negative RHS, exercising the flip and
    # phase-one artificial paths) plus a bounding box; the oracle sees the
    # equality as a pair of opposing inequalities.
    eq_row = [data.draw(small_fracs) for _ in range(n)]
    eq_b = data.draw(small_fracs)
    c = [data.draw(small_fracs) for _ in range(n)]
    box_row = [F(1)] * n
    box_b = F(4)
    lp = LinearProgram(
        objective=tuple(c),
        a_eq=(tuple(eq_row),),
        b_eq=(eq_b,),
        a_le=(tuple(box_row),),
        b_le=(box_b,),
    )
    out = maximize(lp)
    a_split = [eq_row, [-x for x in eq_row], box_row]
    b_split = [eq_b, -eq_b, box_b]
    if feasible_bruteforce_le(a_split, b_split):
        expected = maximize_bruteforce(c, a_split, b_split)
        assert out.status is LpStatus.OPTIMAL
        assert out.value == expected
    else:
        assert out.status is LpStatus.INFEASIBLE


def feasible_bruteforce_le(a, b):
    """Feasibility of A x <= b, x >= 0 via the equality oracle on slacks."""
    m = len(a)
    ext = [list(row) + [F(1) if i == j else F(0) for j in range(m)]
           for i, row in enumerate(a)]
    return feasible_bruteforce(ext, b) is not None
