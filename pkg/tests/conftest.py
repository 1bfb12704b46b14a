import itertools
import random

import pytest

from finalg import catalog
from finalg.core import DenseTable, FiniteAlgebra, Signature, standard_signature


@pytest.fixture
def bool2():
    """The 4-element Boolean protomodular algebra with two distinct units."""
    return catalog.build_boolean_protomodular(2)


@pytest.fixture
def z3_n2():
    """theta(a1,a2,b) = a1 + b on Z/3 with a shared unit."""
    return catalog.build_semigroup_algebra(catalog.cyclic_group(3), 2, 1)


@pytest.fixture
def z4_group():
    """theta(a,b) = a + b on Z/4 (n = 1)."""
    return catalog.build_semigroup_algebra(catalog.cyclic_group(4), 1, 1)


@pytest.fixture
def chain2_theta():
    """(a1 v b) ^ a2 on the 2-chain: 2-associative but not 1-associative."""
    return catalog.build_lattice_theta(catalog.chain_lattice(2), "meet-middle")


def random_algebra(rng, m, n, shared_unit=False):
    """A random algebra over the standard signature: arbitrary tables,
    no laws expected to hold."""
    sig = standard_signature(n, shared_unit=shared_unit)
    tables = {
        name: DenseTable(
            arity, tuple(rng.randrange(m) for _ in range(m ** arity))
        )
        for name, arity in sig.ops
    }
    consts = {c: rng.randrange(m) for c in sig.constants}
    return FiniteAlgebra(f"rand{m}x{n}", sig, m, tables, consts)


def brute_first_counterexample(alg, ident):
    """Independent oracle: evaluate both sides of an identity by direct
    recursive interpretation over all assignments in lexicographic order."""
    from finalg.core import eval_term

    names = list(ident.variables)
    for combo in itertools.product(range(alg.size), repeat=len(names)):
        env = dict(zip(names, combo))
        if eval_term(alg, ident.lhs, env) != eval_term(alg, ident.rhs, env):
            return env
    return None
