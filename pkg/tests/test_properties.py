"""Pytest entry points for the generated-case property suites."""

from property_suites import (
    check_cf_convexity,
    check_cf_one_iff_strongly_contextual,
    check_marginal_agreement_on_overlaps,
    check_parity_consistency_matches_satisfiability,
    check_polytope_dimension_formula,
    check_possibilistic_roundtrip,
)

test_cf_one_iff_strongly_contextual = check_cf_one_iff_strongly_contextual
test_parity_consistency_matches_satisfiability = (
    check_parity_consistency_matches_satisfiability
)
test_marginal_agreement_on_overlaps = check_marginal_agreement_on_overlaps
test_cf_convexity = check_cf_convexity
test_possibilistic_roundtrip = check_possibilistic_roundtrip
test_polytope_dimension_formula = check_polytope_dimension_formula
