import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from finalg import catalog
from finalg.core import (
    Apply,
    BudgetError,
    Constant,
    FiniteAlgebra,
    DenseTable,
    Identity,
    Signature,
    Variable,
    eval_term,
    table_from_fn,
)
from finalg.identities import (
    check_2assoc_functional,
    check_identity,
    check_strict_equivalence,
    check_suite,
    first_failure,
    identities_1assoc,
    identities_malcev,
    identities_strict,
    identity_2assoc,
    identity_malcev_assoc,
    identity_unit_expansion,
    identity_unit_law,
    resolve_suite,
    suite_ok,
    suite_protomodular,
    suite_semiabelian,
    unit_constants,
)

from conftest import brute_first_counterexample, random_algebra


# --- suites on known algebras -------------------------------------------

def test_protomodular_suite_passes_on_boolean(bool2):
    reports = check_suite(bool2, suite_protomodular(2, ("e1", "e2")))
    assert all(r.ok for r in reports)
    assert all(r.verdict == "pass" for r in reports)


def test_semiabelian_fails_on_boolean_distinct_units(bool2):
    reports = check_suite(bool2, suite_semiabelian(2, ("e1", "e2")))
    bad = first_failure(reports)
    assert bad is not None
    assert "units-equal" in bad.name


def test_group_is_semiabelian(z4_group):
    assert suite_ok(check_suite(z4_group, suite_semiabelian(1, ("e",))))


def test_corrupted_alpha_fails_retraction(z4_group):
    tables = dict(z4_group.tables)
    entries = list(tables["alpha1"].entries)
    entries[1] ^= 1
    tables["alpha1"] = DenseTable(2, tuple(entries))
    broken = FiniteAlgebra("broken", z4_group.signature, 4, tables,
                           dict(z4_group.constants))
    reports = check_suite(broken, suite_protomodular(1, ("e",)))
    bad = first_failure(reports)
    assert bad is not None
    # counterexample must actually violate the law it reports
    ident = next(i for i in suite_protomodular(1, ("e",)).identities
                 if i.name == bad.name)
    env = bad.counterexample
    assert eval_term(broken, ident.lhs, env) != eval_term(broken, ident.rhs, env)


def test_trivial_carrier_satisfies_everything():
    one = catalog.build_semigroup_algebra(catalog.cyclic_group(1), 2, 1)
    assert suite_ok(check_suite(one, suite_semiabelian(2, ("e", "e"))))
    assert check_identity(one, identity_2assoc(2)).ok
    assert all(check_identity(one, i).ok for i in identities_1assoc(2))
    assert all(check_identity(one, i).ok for i in identities_strict(2))


# --- 2-associativity and 1-associativity --------------------------------

def test_2assoc_on_lattice_theta(chain2_theta):
    rep = check_identity(chain2_theta, identity_2assoc(2))
    assert rep.ok
    assert rep.tuples_checked == 2 ** 5


def test_1assoc_fails_on_lattice_theta_with_frozen_counterexample(chain2_theta):
    idents = identities_1assoc(2)
    assert len(idents) == 2
    failed = [check_identity(chain2_theta, i) for i in idents]
    assert any(not r.ok for r in failed)
    for ident, rep in zip(idents, failed):
        expected = brute_first_counterexample(chain2_theta, ident)
        if expected is None:
            assert rep.ok
        else:
            assert not rep.ok
            assert rep.counterexample == expected


def test_chain2_1assoc_first_counterexample_value(chain2_theta):
    # frozen from the direct interpreter oracle: the earliest violating
    # assignment in lexicographic variable order
    idents = identities_1assoc(2)
    rep = next(r for r in (check_identity(chain2_theta, i) for i in idents)
               if not r.ok)
    assert rep.counterexample == {"a1": 0, "a2": 0, "b1": 0, "b2": 1, "c": 1}


def test_n1_associativity_is_plain_associativity():
    two = identity_2assoc(1)
    (one,) = identities_1assoc(1)
    assert (two.lhs, two.rhs) == (one.lhs, one.rhs)
    nonassoc = catalog.build_strict_semiloop(3, twisted=True)
    assert not check_identity(nonassoc, one).ok
    group = catalog.build_strict_semiloop(3, twisted=False)
    assert check_identity(group, one).ok


def test_semigroup_word_operation_is_1assoc():
    # theta(a1, a2, a3, b) = a1 + a2 + a3 + b on Z/2 is fully associative
    sig = catalog.build_semigroup_algebra(catalog.cyclic_group(2), 3, 1).signature
    theta = table_from_fn(4, 2, lambda a1, a2, a3, b: (a1 + a2 + a3 + b) % 2)
    alg = catalog.build_semigroup_algebra(catalog.cyclic_group(2), 3, 1)
    word = FiniteAlgebra("word", sig, 2,
                         {**alg.tables, "theta": theta}, alg.constants)
    assert all(check_identity(word, i).ok for i in identities_1assoc(3))
    assert check_identity(word, identity_2assoc(3)).ok


def test_bounded_monoid_is_1assoc_and_2assoc():
    alg = catalog.build_bounded_monoid_algebra(catalog.cyclic_monoid(2), 3)
    assert all(check_identity(alg, i).ok for i in identities_1assoc(3))
    assert check_identity(alg, identity_2assoc(3)).ok


def test_unit_law_and_expansion_follow_from_axioms(z3_n2, z4_group):
    for alg, n in ((z3_n2, 2), (z4_group, 1)):
        units = unit_constants(alg, n)
        assert check_identity(alg, identity_unit_law(n, units)).ok
        assert check_identity(alg, identity_unit_expansion(n, units)).ok


# --- functional characterization ----------------------------------------

def test_functional_check_agrees_on_catalog(bool2, z3_n2, chain2_theta):
    for alg, n in ((bool2, 2), (z3_n2, 2), (chain2_theta, 2)):
        direct = check_identity(alg, identity_2assoc(n)).ok
        assert check_2assoc_functional(alg, n).ok == direct


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(2, 3), st.integers(1, 2))
def test_functional_check_agrees_on_random_tables(seed, m, n):
    alg = random_algebra(random.Random(seed), m, n)
    direct = check_identity(alg, identity_2assoc(n)).ok
    assert check_2assoc_functional(alg, n).ok == direct


# --- strictness ----------------------------------------------------------

def test_strictness_identities(z4_group, bool2):
    assert all(check_identity(z4_group, i).ok for i in identities_strict(1))
    assert not all(check_identity(bool2, i).ok for i in identities_strict(2))


def test_strictness_four_way_agreement(z4_group, bool2):
    rep = check_strict_equivalence(z4_group, 1)
    assert rep.agree and rep.strict
    rep = check_strict_equivalence(bool2, 2)
    assert rep.agree and not rep.strict


def test_strict_semiloop_is_strict_even_when_not_associative():
    twisted = catalog.build_strict_semiloop(4, twisted=True)
    rep = check_strict_equivalence(twisted, 1)
    assert rep.agree and rep.strict
    assert not check_identity(twisted, identity_2assoc(1)).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(2, 3), st.integers(1, 2))
def test_strictness_implications_on_arbitrary_tables(seed, m, n):
    # full four-way agreement needs the retraction axioms; on arbitrary
    # tables only these implications are unconditional
    alg = random_algebra(random.Random(seed), m, n)
    rep = check_strict_equivalence(alg, n)
    assert rep.sections_bijective == rep.unique_preimage
    if rep.identity_holds:
        assert rep.sections_bijective


# --- engine behavior ------------------------------------------------------

def test_report_line_format(chain2_theta):
    rep = check_identity(chain2_theta, identity_2assoc(2))
    line = rep.line()
    assert line.startswith("IDENTITY ")
    assert "PASS" in line and "tuples=32" in line
    bad = next(r for r in (check_identity(chain2_theta, i)
                           for i in identities_1assoc(2)) if not r.ok)
    assert "FAIL" in bad.line() and "counterexample" in bad.line()


def test_exhaustive_counterexample_is_lex_first(bool2):
    for ident in identities_strict(2):
        rep = check_identity(bool2, ident)
        if not rep.ok:
            expected = brute_first_counterexample(bool2, ident)
            assert rep.counterexample == expected


def test_numpy_and_python_paths_agree():
    # Map(A^2, A) on a 2-element base: 16 elements, 16^5 tuples goes
    # through the vectorized path; force the scalar path via a LazyTable
    # view of the same algebra.
    from finalg.core import LazyTable

    alg = catalog.build_map_composition_algebra(2, 2)
    ident = identity_2assoc(2)
    fast = check_identity(alg, ident)
    lazy_tables = {
        name: LazyTable(t.arity, (lambda tt: lambda *a: tt.lookup(a, alg.size))(t))
        for name, t in alg.tables.items()
    }
    slow_alg = FiniteAlgebra(alg.name, alg.signature, alg.size, lazy_tables,
                             alg.constants)
    slow = check_identity(slow_alg, ident)
    assert fast.verdict == slow.verdict == "pass"
    assert fast.tuples_checked == slow.tuples_checked


def test_budget_refusal_and_sampled_fallback(z3_n2):
    ident = identity_2assoc(2)
    with pytest.raises(BudgetError):
        check_identity(z3_n2, ident, budget=10)
    rep = check_identity(z3_n2, ident, mode="sampled", samples=500, seed=7)
    assert rep.verdict == "sampled-pass"
    assert rep.seed == 7
    assert rep.tuples_checked == 500


def test_sampled_mode_is_reproducible_and_sound(chain2_theta):
    (ident, _) = identities_1assoc(2)
    r1 = check_identity(chain2_theta, ident, mode="sampled", samples=2000,
                        seed=123)
    r2 = check_identity(chain2_theta, ident, mode="sampled", samples=2000,
                        seed=123)
    assert r1.verdict == r2.verdict
    assert r1.counterexample == r2.counterexample
    if not r1.ok:
        env = r1.counterexample
        assert eval_term(chain2_theta, ident.lhs, env) != eval_term(
            chain2_theta, ident.rhs, env)


def test_zero_variable_identity(bool2):
    ident = Identity("units-differ", (), Constant("e1"), Constant("e2"))
    rep = check_identity(bool2, ident)
    assert not rep.ok
    assert rep.counterexample == {}


def test_resolve_suite_names(z3_n2):
    units = unit_constants(z3_n2, 2)
    for name in ("protomodular:2", "semiabelian:2", "2assoc:2", "1assoc:2",
                 "strict:2", "unit-law:2", "unit-expansion:2"):
        suite = resolve_suite(name, units)
        assert suite.identities
    with pytest.raises(KeyError):
        resolve_suite("nonsense:2", units)


def test_malcev_identity_builders():
    z4 = catalog.cyclic_group(4)
    mu = table_from_fn(3, 4, lambda a, b, c: (a - b + c) % 4)
    sig = Signature((("mu", 3),), ())
    alg = FiniteAlgebra("mu4", sig, 4, {"mu": mu}, {})
    assert all(check_identity(alg, i).ok for i in identities_malcev())
    assert check_identity(alg, identity_malcev_assoc()).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(2, 3), st.integers(1, 2))
def test_failure_reports_are_sound(seed, m, n):
    alg = random_algebra(random.Random(seed), m, n)
    for ident in suite_semiabelian(n).identities:
        rep = check_identity(alg, ident)
        if rep.counterexample is not None:
            env = rep.counterexample
            assert eval_term(alg, ident.lhs, env) != eval_term(alg, ident.rhs, env)
