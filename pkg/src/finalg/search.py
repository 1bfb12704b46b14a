"""Finite model search: enumerate operation tables on a small carrier
satisfying an identity set, by backtracking over table cells with
constraint propagation.

A partially filled table evaluates an identity instance only when every
cell the instance touches is decided; a decided mismatch prunes the whole
subtree.  Cell order is theta's table first (row-major), then the other
ops, then constants, so the most-constrained symbol fails fastest.
find-first returns the lexicographically smallest witness under that
ordering.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import (
    AlgebraError,
    Apply,
    BudgetError,
    Constant,
    DenseTable,
    FiniteAlgebra,
    Signature,
    Variable,
    check_term,
    standard_signature,
)
from . import dsl
from .identities import check_identity, identity_2assoc, resolve_suite

SEARCH_BUDGET = 10 ** 9


@dataclass
class SearchSpec:
    """What to search for: carrier size, signature, optional pinned
    tables/constants, the required identities, and the mode."""

    name: str
    size: int
    signature: Signature
    identities: tuple
    pinned_tables: dict = field(default_factory=dict)
    pinned_constants: dict = field(default_factory=dict)
    mode: str = "find-first"  # find-first | count-all | prove-none

    def free_cells(self):
        cells = []
        ops = sorted(
            self.signature.ops, key=lambda na: (na[0] != "theta",)
        )
        for name, arity in ops:
            if name in self.pinned_tables:
                continue
            for idx in range(self.size ** arity):
                cells.append((name, idx))
        for cname in self.signature.constants:
            if cname not in self.pinned_constants:
                cells.append((cname, None))
        return cells

    @property
    def space_size(self) -> int:
        return self.size ** len(self.free_cells())


@dataclass
class SearchResult:
    outcome: str  # "witness" | "none-exists" | "count"
    witness: FiniteAlgebra | None = None
    count: int = 0
    space_size: int = 0
    nodes: int = 0

    def summary(self) -> str:
        if self.outcome == "witness":
            return f"witness found (space {self.space_size}, nodes {self.nodes})"
        if self.outcome == "none-exists":
            return (
                f"no model exists (space {self.space_size}, "
                f"nodes examined {self.nodes})"
            )
        return f"count = {self.count} (space {self.space_size}, nodes {self.nodes})"


class _State:
    def __init__(self, spec: SearchSpec):
        self.m = spec.size
        self.tables = {}
        for name, arity in spec.signature.ops:
            pinned = spec.pinned_tables.get(name)
            if pinned is not None:
                self.tables[name] = list(pinned.entries)
            else:
                self.tables[name] = [None] * (spec.size ** arity)
        self.constants = {
            c: spec.pinned_constants.get(c) for c in spec.signature.constants
        }

    def eval(self, t, env):
        """Evaluate a term over the partial tables; None = not yet known."""
        if isinstance(t, Variable):
            return env[t.name]
        if isinstance(t, Constant):
            return self.constants[t.name]
        idx = 0
        for a in t.args:
            v = self.eval(a, env)
            if v is None:
                return None
            idx = idx * self.m + v
        return self.tables[t.op][idx]


def _violated(state: _State, identities, variables_cache) -> bool:
    m = state.m
    for ident in identities:
        for tup in itertools.product(range(m), repeat=len(ident.variables)):
            env = dict(zip(ident.variables, tup))
            lhs = state.eval(ident.lhs, env)
            if lhs is None:
                continue
            rhs = state.eval(ident.rhs, env)
            if rhs is None:
                continue
            if lhs != rhs:
                return True
    return False


def _witness_algebra(spec: SearchSpec, state: _State) -> FiniteAlgebra:
    tables = {
        name: DenseTable(arity, state.tables[name])
        for name, arity in spec.signature.ops
    }
    return FiniteAlgebra(
        f"{spec.name}-witness", spec.signature, spec.size, tables,
        dict(state.constants),
    )


def search(spec: SearchSpec, budget: int = SEARCH_BUDGET) -> SearchResult:
    """Complete backtracking search in the requested mode.

    prove-none results are exhaustive: the traversal visits or prunes
    every candidate, and pruning happens only on a decided identity
    violation.  Witnesses are re-verified exhaustively before return.
    """
    cells = spec.free_cells()
    space = spec.size ** len(cells)
    if space > budget:
        raise BudgetError(
            f"search space {spec.size}^{len(cells)} = {space} exceeds "
            f"budget {budget}"
        )
    for name, tbl in spec.pinned_tables.items():
        if not spec.signature.has_op(name):
            raise AlgebraError(f"pinned table {name!r} not in signature")
        if tbl.arity != spec.signature.arity(name):
            raise AlgebraError(f"pinned table {name!r} has wrong arity")
    state = _State(spec)
    if _violated(state, spec.identities, None):
        # pins alone already falsify an identity
        return SearchResult("none-exists", space_size=space, nodes=1)
    m = spec.size
    nodes = 0
    count = 0
    witness = None

    def assign(depth):
        nonlocal nodes, count, witness
        if depth == len(cells):
            if spec.mode == "count-all":
                count += 1
                return False
            witness = _witness_algebra(spec, state)
            return spec.mode == "find-first"
        sym, idx = cells[depth]
        for v in range(m):
            nodes += 1
            if idx is None:
                state.constants[sym] = v
            else:
                state.tables[sym][idx] = v
            if not _violated(state, spec.identities, None):
                if assign(depth + 1):
                    return True
            if idx is None:
                state.constants[sym] = None
            else:
                state.tables[sym][idx] = None
        return False

    found = assign(0)
    if spec.mode == "count-all":
        return SearchResult("count", count=count, space_size=space, nodes=nodes)
    if witness is None:
        return SearchResult("none-exists", space_size=space, nodes=nodes)
    for ident in spec.identities:
        rep = check_identity(witness, ident)
        if not rep.ok:
            raise AlgebraError(
                f"internal error: emitted witness fails {ident.name!r}"
            )
    return SearchResult("witness", witness=witness, space_size=space, nodes=nodes)


# alias for contexts where the bare name would shadow this module
search_models = search


def prove_no_strict_2assoc(m: int, n: int) -> SearchResult:
    """Certify that no strict 2-associative structure exists on a carrier
    of size m >= 2 for n >= 2.

    Strictness forces every section theta_b to take each of the m values
    exactly once across its m^n cells, so a repeated value inside one
    section prunes.  The search enumerates fillings of the first section
    under that constraint; with m^n > m every branch dies by depth m+1,
    and exhausting the pruned tree certifies that no full theta table
    (hence no full structure) can be strict.
    """
    if m == 1:
        spec = SearchSpec(
            "trivial-strict", 1, standard_signature(n, shared_unit=True),
            tuple(resolve_suite(f"semiabelian:{n}", ("e",) * n).identities)
            + (identity_2assoc(n),),
        )
        return search(spec)
    if n < 2 or m < 2:
        raise AlgebraError("requires n >= 2 and m >= 2 (or m = 1)")
    section = m ** n
    nodes = 0
    seen = []

    def extend():
        nonlocal nodes
        if len(seen) == section:
            return True  # a full section with all-distinct values: impossible
        for v in range(m):
            nodes += 1
            if v in seen:
                continue  # unique-preimage constraint violated
            seen.append(v)
            if extend():
                return True
            seen.pop()
        return False

    if extend():  # pragma: no cover - unreachable for m >= 2, n >= 2
        raise AlgebraError("unexpected strict candidate found")
    theta_space = m ** (m ** (n + 1))
    return SearchResult("none-exists", space_size=theta_space, nodes=nodes)


def count_2assoc_semiabelian(
    m: int, n: int, budget: int = SEARCH_BUDGET
) -> SearchResult:
    """Count all (theta, alpha*, e) assignments on {0..m-1} satisfying the
    semi-abelian axioms plus 2-associativity."""
    sig = standard_signature(n, shared_unit=True)
    identities = tuple(
        resolve_suite(f"semiabelian:{n}", ("e",) * n).identities
    ) + (identity_2assoc(n),)
    spec = SearchSpec(
        f"count-2assoc-semiabelian-m{m}-n{n}", m, sig, identities,
        mode="count-all",
    )
    return search(spec, budget=budget)


def parse_search_spec(text: str, mode: str = "find-first") -> SearchSpec:
    """Build a SearchSpec from DSL text: an algebra block where free
    tables are marked 'free' and required suites are listed via
    'require <name>[:<n>] ...'."""
    raws, identities = dsl.parse_raw_blocks(text)
    if len(raws) != 1:
        raise dsl.DslError("search spec needs exactly one algebra block")
    raw = raws[0]
    if raw.carrier is None:
        raise dsl.DslError(f"algebra {raw.name!r}: missing carrier")
    sig = Signature(
        tuple((nm, a) for nm, a, _ in raw.ops), tuple(raw.const_order)
    )
    pinned_tables = {}
    for nm, arity, entries in raw.ops:
        if entries is not None:
            if len(entries) != raw.carrier ** arity:
                raise dsl.DslError(
                    f"op {nm!r} has {len(entries)} entries, expected "
                    f"{raw.carrier ** arity}"
                )
            pinned_tables[nm] = DenseTable(arity, entries)
    required = list(identities)
    units = tuple(raw.const_order) or None
    for req in raw.requires:
        required.extend(resolve_suite(req, units).identities)
    for ident in required:
        for side in (ident.lhs, ident.rhs):
            try:
                check_term(sig, side, ident.variables)
            except AlgebraError as e:
                raise dsl.DslError(
                    f"identity {ident.name!r} does not fit the "
                    f"signature of {raw.name!r}: {e}"
                )
    return SearchSpec(
        raw.name, raw.carrier, sig, tuple(required),
        pinned_tables=pinned_tables,
        pinned_constants=dict(raw.consts),
        mode=mode,
    )
