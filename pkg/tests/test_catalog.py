import itertools

import pytest

from finalg import catalog
from finalg.core import AlgebraError, BudgetError, LazyTable, validate_algebra
from finalg.identities import (
    check_identity,
    check_strict_equivalence,
    check_suite,
    identities_1assoc,
    identity_2assoc,
    suite_ok,
    suite_protomodular,
    suite_semiabelian,
    unit_constants,
)


def _passes_2assoc(alg, n, **kw):
    return check_identity(alg, identity_2assoc(n), **kw).ok


# --- specs (monoids, groups, lattices) ------------------------------------

def test_group_spec_laws_enforced():
    from finalg.core import DenseTable

    g = catalog.cyclic_group(4)
    assert g.mul(3, 2) == 1 and g.inv(3) == 1 and g.div(0, 3) == 1
    assert g.is_commutative()
    with pytest.raises(AlgebraError):
        catalog.GroupSpec(2, DenseTable(2, (0, 0, 0, 0)), 0)


def test_monoid_spec_laws_enforced():
    from finalg.core import DenseTable

    mo = catalog.cyclic_monoid(3)
    assert mo.mul(2, 2) == 1
    with pytest.raises(AlgebraError):
        catalog.MonoidSpec(2, DenseTable(2, (1, 0, 0, 1)), 0)  # unit wrong


def test_lattice_specs():
    c3 = catalog.chain_lattice(3)
    assert c3.is_distributive()
    sq = catalog.product_lattice(catalog.chain_lattice(2),
                                 catalog.chain_lattice(2))
    assert sq.size == 4 and sq.is_distributive()


def _diamond_m3():
    # 0 < a, b, c < 1 with the three atoms pairwise incomparable
    size = 5
    bot, a, b, c, top = range(5)
    atoms = {a, b, c}

    def join(x, y):
        if x == y:
            return x
        if bot in (x, y):
            return x if y == bot else y
        return top

    def meet(x, y):
        if x == y:
            return x
        if top in (x, y):
            return x if y == top else y
        return bot

    from finalg.core import table_from_fn

    return catalog.LatticeSpec(
        size, table_from_fn(2, size, join), table_from_fn(2, size, meet)
    )


def test_nondistributive_lattice_detected_and_rejected():
    m3 = _diamond_m3()
    assert not m3.is_distributive()
    with pytest.raises(AlgebraError):
        catalog.build_lattice_theta(m3, "meet-middle")


# --- projection / semigroup / product -------------------------------------

def test_projection_operation_is_2assoc():
    for m, n, i in ((2, 2, 1), (3, 2, 2), (2, 3, 4), (1, 2, 1)):
        alg = catalog.build_projection_algebra(m, n, i)
        assert validate_algebra(alg).ok
        assert _passes_2assoc(alg, n)
    with pytest.raises(AlgebraError):
        catalog.build_projection_algebra(2, 2, 5)


def test_semigroup_operation_is_2assoc_and_semiabelian():
    for k, n, i in ((3, 2, 1), (3, 2, 2), (2, 1, 1), (5, 1, 1)):
        alg = catalog.build_semigroup_algebra(catalog.cyclic_group(k), n, i)
        units = unit_constants(alg, n)
        assert suite_ok(check_suite(alg, suite_semiabelian(n, units)))
        assert _passes_2assoc(alg, n)


def test_group_product_componentwise():
    groups = (catalog.cyclic_group(2), catalog.cyclic_group(3))
    alg = catalog.build_group_product_algebra(groups, (1, 2), 2)
    assert alg.size == 6
    units = unit_constants(alg, 2)
    assert suite_ok(check_suite(alg, suite_semiabelian(2, units)))
    assert _passes_2assoc(alg, 2)
    # frozen spot check: mixed-radix encoding is (z2, z3) -> 3*z2 + z3;
    # theta((1,1),(0,2),(1,0)) acts as (1+1, 2+0) = (0, 2) -> 2
    theta = alg.op("theta")
    assert theta.lookup((4, 2, 3), 6) == 2


# --- matrix rows -----------------------------------------------------------

def test_matrix_row_operation_exhaustive_small():
    alg = catalog.build_matrix_row_algebra(2, 1)
    assert alg.size == 2 ** 4
    assert _passes_2assoc(alg, 1)


def test_matrix_row_operation_sampled_large():
    alg = catalog.build_matrix_row_algebra(2, 2)
    assert alg.size == 2 ** 9
    assert isinstance(alg.tables["theta"], LazyTable)
    rep = check_identity(alg, identity_2assoc(2), mode="sampled",
                         samples=2000, seed=99)
    assert rep.verdict == "sampled-pass"
    with pytest.raises(BudgetError):
        check_identity(alg, identity_2assoc(2))


def test_matrix_row_assembly_oracle():
    # elements are 2x2 matrices over a 2-element entry set, encoded by
    # row-major base-2 digits; theta(A, B) keeps row 0 of A and row 1 of B.
    # oracle: direct digit surgery.
    alg = catalog.build_matrix_row_algebra(2, 1)
    theta = alg.op("theta")
    for a, b in itertools.product(range(16), repeat=2):
        expect = (a & 0b1100) | (b & 0b0011)
        assert theta.lookup((a, b), 16) == expect


# --- bounded monoid --------------------------------------------------------

def test_bounded_monoid_requires_order_condition():
    alg = catalog.build_bounded_monoid_algebra(catalog.cyclic_monoid(2), 3)
    assert _passes_2assoc(alg, 3)
    with pytest.raises(AlgebraError):
        catalog.build_bounded_monoid_algebra(catalog.cyclic_monoid(2), 2)
    alg = catalog.build_bounded_monoid_algebra(catalog.cyclic_monoid(3), 4)
    assert _passes_2assoc(alg, 4)


def test_bounded_monoid_rejects_noncommutative():
    from finalg.core import table_from_fn

    # left-zero semigroup with adjoined unit 0: not commutative
    def mul(a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        return a

    mo = catalog.MonoidSpec(3, table_from_fn(2, 3, mul), 0)
    with pytest.raises(AlgebraError):
        catalog.build_bounded_monoid_algebra(mo, 3)


# --- lattices ---------------------------------------------------------------

@pytest.mark.parametrize("variant", ["meet-last", "meet-middle"])
@pytest.mark.parametrize("shape", ["chain2", "chain3", "square"])
def test_lattice_theta_2assoc_but_not_1assoc(variant, shape):
    lat = {
        "chain2": catalog.chain_lattice(2),
        "chain3": catalog.chain_lattice(3),
        "square": catalog.product_lattice(catalog.chain_lattice(2),
                                          catalog.chain_lattice(2)),
    }[shape]
    alg = catalog.build_lattice_theta(lat, variant)
    assert _passes_2assoc(alg, 2)
    reports = [check_identity(alg, i) for i in identities_1assoc(2)]
    assert any(not r.ok for r in reports)
    bad = next(r for r in reports if not r.ok)
    assert bad.counterexample is not None


def test_trivial_lattice_is_1assoc():
    alg = catalog.build_lattice_theta(catalog.chain_lattice(1), "meet-middle")
    assert all(check_identity(alg, i).ok for i in identities_1assoc(2))


def test_lattice_with_alphas_is_protomodular():
    lat = catalog.product_lattice(catalog.chain_lattice(2),
                                  catalog.chain_lattice(2))
    alg = catalog.build_lattice_v2_algebra(lat)
    units = unit_constants(alg, 2)
    assert suite_ok(check_suite(alg, suite_protomodular(2, units)))
    assert _passes_2assoc(alg, 2)


# --- boolean protomodular ----------------------------------------------------

def test_boolean_protomodular_tables(bool2):
    # theta(x, y, z) = (x | z) & y on bitmasks; oracle by direct bit ops
    theta = bool2.op("theta")
    for x, y, z in itertools.product(range(4), repeat=3):
        assert theta.lookup((x, y, z), 4) == (x | z) & y
    assert bool2.constants == {"e1": 0, "e2": 3}


def test_boolean_protomodular_suites():
    for k in (1, 2, 3):
        alg = catalog.build_boolean_protomodular(k)
        units = unit_constants(alg, 2)
        assert suite_ok(check_suite(alg, suite_protomodular(2, units)))
        assert _passes_2assoc(alg, 2)
        assert not suite_ok(check_suite(alg, suite_semiabelian(2, units)))
    with pytest.raises(AlgebraError):
        catalog.build_boolean_protomodular(4)


# --- map composition and diagonal retractions --------------------------------

def test_map_composition_2assoc():
    for m, n in ((2, 1), (3, 1), (2, 2)):
        alg = catalog.build_map_composition_algebra(m, n)
        assert alg.size == m ** (m ** n)
        assert _passes_2assoc(alg, n)


def test_diagonal_retraction_protomodular():
    alg = catalog.build_diagonal_retraction_algebra(2, 2)
    units = unit_constants(alg, 2)
    assert suite_ok(check_suite(alg, suite_protomodular(2, units)))
    assert _passes_2assoc(alg, 2)


# --- alpha builder -----------------------------------------------------------

def test_alpha_builder_from_translation_group(z3_n2):
    built = catalog.build_alphas_from_surjectivity(
        catalog.build_semigroup_algebra(catalog.cyclic_group(3), 2, 1),
        units=(0, 0),
    )
    units = unit_constants(built, 2)
    assert suite_ok(check_suite(built, suite_semiabelian(2, units)))


def test_alpha_builder_on_lattice_theta():
    # both sections of the 2-chain operation are surjective, so alphas
    # can be attached and the retraction axioms then hold
    alg = catalog.build_lattice_theta(catalog.chain_lattice(2), "meet-middle")
    built = catalog.build_alphas_from_surjectivity(alg, units=(0, 1))
    units = unit_constants(built, 2)
    assert suite_ok(check_suite(built, suite_protomodular(2, units)))


def test_alpha_builder_rejects_bad_inputs():
    # unit tuple is not a left identity for a projection operation
    proj = catalog.build_projection_algebra(2, 2, 1)
    with pytest.raises(AlgebraError) as ei:
        catalog.build_alphas_from_surjectivity(proj, units=(0, 0))
    assert "b = 1" in str(ei.value)

    # a section misses an element: theta = a1 & a2 & b on the 2-chain
    from finalg.core import Signature, FiniteAlgebra, table_from_fn

    sig = Signature((("theta", 3),), ())
    meet3 = FiniteAlgebra(
        "Meet3", sig, 2,
        {"theta": table_from_fn(3, 2, lambda a1, a2, b: a1 & a2 & b)}, {},
    )
    with pytest.raises(AlgebraError) as ei:
        catalog.build_alphas_from_surjectivity(meet3, units=(1, 1))
    assert "not surjective" in str(ei.value)


# --- strict semiloops ---------------------------------------------------------

def test_strict_semiloops_strict_for_all_small_sizes():
    for m in (1, 2, 3, 4, 5):
        alg = catalog.build_strict_semiloop(m)
        rep = check_strict_equivalence(alg, 1)
        assert rep.agree and rep.strict


def test_twisted_semiloop_not_2assoc_but_strict():
    alg = catalog.build_strict_semiloop(3, twisted=True)
    rep = check_strict_equivalence(alg, 1)
    assert rep.agree and rep.strict
    assert not _passes_2assoc(alg, 1)
    units = unit_constants(alg, 1)
    assert suite_ok(check_suite(alg, suite_semiabelian(1, units)))
