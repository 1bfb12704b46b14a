"""Checking universally quantified identities over finite algebras, plus
prebuilt identity suites for the protomodular / semi-abelian axioms,
higher-arity associativity, and strictness.

Exhaustive checks enumerate assignment tuples in lexicographic order over
the declared variable list, so a reported counterexample is always the
lexicographically first one.  Sampled mode draws tuples from a Mersenne
Twister (random.Random) seeded with a caller-supplied 64-bit seed, which
is recorded in the report for reproducibility.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .core import (
    Apply,
    BudgetError,
    CheckReport,
    Constant,
    DenseTable,
    FiniteAlgebra,
    Identity,
    SymbolError,
    Variable,
    check_term,
    compile_term,
    eval_term,
)

EXHAUSTIVE_BUDGET = 10 ** 8
_NUMPY_THRESHOLD = 1 << 14
_CHUNK = 1 << 20


@dataclass(frozen=True)
class IdentitySuite:
    """A named bundle of identities sharing the arity parameter n."""

    name: str
    n: int
    identities: tuple


def check_identity(
    alg: FiniteAlgebra,
    ident: Identity,
    mode: str = "exhaustive",
    samples: int = 10000,
    seed: int = 0,
    budget: int = EXHAUSTIVE_BUDGET,
) -> CheckReport:
    """Check one identity over all (or sampled) assignments.

    Exhaustive mode refuses when m^k exceeds the budget (BudgetError);
    callers then switch to mode="sampled".
    """
    check_term(alg.signature, ident.lhs, set(ident.variables))
    check_term(alg.signature, ident.rhs, set(ident.variables))
    variables = ident.variables
    m = alg.size
    k = len(variables)
    if mode == "sampled":
        return _check_sampled(alg, ident, samples, seed)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    total = m ** k
    if total > budget:
        raise BudgetError(
            f"identity {ident.name!r}: {m}^{k} = {total} assignments exceed "
            f"budget {budget}; use sampled mode"
        )
    dense = all(
        isinstance(alg.tables.get(s), DenseTable) for s in _op_symbols(ident)
    )
    if dense and total > _NUMPY_THRESHOLD and k > 0:
        return _check_exhaustive_np(alg, ident, total)
    return _check_exhaustive_py(alg, ident, total)


def _op_symbols(ident):
    out = set()

    def walk(t):
        if isinstance(t, Apply):
            out.add(t.op)
            for a in t.args:
                walk(a)

    walk(ident.lhs)
    walk(ident.rhs)
    return out


def _check_exhaustive_py(alg, ident, total):
    var_pos = {v: i for i, v in enumerate(ident.variables)}
    lhs = compile_term(alg, ident.lhs, var_pos)
    rhs = compile_term(alg, ident.rhs, var_pos)
    checked = 0
    for tup in itertools.product(range(alg.size), repeat=len(ident.variables)):
        checked += 1
        if lhs(tup) != rhs(tup):
            return CheckReport(
                "fail", ident.name,
                counterexample=dict(zip(ident.variables, tup)),
                tuples_checked=checked,
            )
    return CheckReport("pass", ident.name, tuples_checked=total)


def _check_exhaustive_np(alg, ident, total):
    import numpy as np

    m = alg.size
    variables = ident.variables
    k = len(variables)
    # vectorize a suffix of the variables, loop the prefix
    inner = k
    while m ** inner > _CHUNK:
        inner -= 1
    outer = k - inner
    grid = np.indices((m,) * inner).reshape(inner, -1)
    tables = {
        s: np.asarray(alg.tables[s].entries, dtype=np.int64)
        for s in _op_symbols(ident)
    }

    def ev(t, env):
        if isinstance(t, Variable):
            return env[t.name]
        if isinstance(t, Constant):
            return alg.constant(t.name)
        flat = None
        for a in t.args:
            v = ev(a, env)
            flat = v if flat is None else flat * m + v
        return tables[t.op][flat]

    checked = 0
    for prefix in itertools.product(range(m), repeat=outer):
        env = dict(zip(variables[:outer], prefix))
        for i, v in enumerate(variables[outer:]):
            env[v] = grid[i]
        bad = ev(ident.lhs, env) != ev(ident.rhs, env)
        if np.any(bad):
            j = int(np.argmax(bad))
            suffix = np.unravel_index(j, (m,) * inner)
            tup = prefix + tuple(int(x) for x in suffix)
            return CheckReport(
                "fail", ident.name,
                counterexample=dict(zip(variables, tup)),
                tuples_checked=checked + j + 1,
            )
        checked += m ** inner
    return CheckReport("pass", ident.name, tuples_checked=total)


def _check_sampled(alg, ident, samples, seed):
    var_pos = {v: i for i, v in enumerate(ident.variables)}
    lhs = compile_term(alg, ident.lhs, var_pos)
    rhs = compile_term(alg, ident.rhs, var_pos)
    rng = random.Random(seed)  # MT19937
    m = alg.size
    k = len(ident.variables)
    for i in range(samples):
        tup = tuple(rng.randrange(m) for _ in range(k))
        if lhs(tup) != rhs(tup):
            return CheckReport(
                "fail", ident.name,
                counterexample=dict(zip(ident.variables, tup)),
                tuples_checked=i + 1, seed=seed,
            )
    return CheckReport("sampled-pass", ident.name,
                       tuples_checked=samples, seed=seed)


def check_suite(alg, suite: IdentitySuite, **kw):
    """Check every identity of a suite; returns the list of reports."""
    return [check_identity(alg, ident, **kw) for ident in suite.identities]


def suite_ok(reports) -> bool:
    return all(r.ok for r in reports)


def first_failure(reports):
    for r in reports:
        if not r.ok:
            return r
    return None


# ---------------------------------------------------------------------------
# identity builders over the standard signature

def _theta(*args):
    return Apply("theta", *args)


def _avars(n, stem):
    return [Variable(f"{stem}{i}") for i in range(1, n + 1)]


def default_units(n):
    return tuple(f"e{i}" for i in range(1, n + 1))


def unit_constants(alg: FiniteAlgebra, n: int):
    """The n unit-constant names of alg: e1..en, or n copies of 'e'."""
    sig = alg.signature
    if all(sig.has_constant(f"e{i}") for i in range(1, n + 1)):
        return default_units(n)
    if sig.has_constant("e"):
        return ("e",) * n
    raise SymbolError(
        f"{alg.name!r} declares neither e1..e{n} nor a shared constant e"
    )


def suite_protomodular(n: int, units=None) -> IdentitySuite:
    """alpha_i(a,a) = e_i for each i, and theta(alpha*(a,b), b) = a."""
    units = default_units(n) if units is None else tuple(units)
    a, b = Variable("a"), Variable("b")
    ids = [
        Identity(
            f"alpha{i}-unit", ("a",),
            Apply(f"alpha{i}", a, a), Constant(units[i - 1]),
        )
        for i in range(1, n + 1)
    ]
    ids.append(Identity(
        "retraction", ("a", "b"),
        _theta(*[Apply(f"alpha{i}", a, b) for i in range(1, n + 1)], b),
        a,
    ))
    return IdentitySuite(f"protomodular:{n}", n, tuple(ids))


def suite_semiabelian(n: int, units=None) -> IdentitySuite:
    """The protomodular suite plus unit coincidence e_1 = ... = e_n,
    expressed as zero-variable identities."""
    units = default_units(n) if units is None else tuple(units)
    ids = list(suite_protomodular(n, units).identities)
    for i in range(1, n):
        if units[i - 1] != units[i]:
            ids.append(Identity(
                f"units-equal-{i}", (),
                Constant(units[i - 1]), Constant(units[i]),
            ))
    return IdentitySuite(f"semiabelian:{n}", n, tuple(ids))


def identity_2assoc(n: int, name=None, op: str = "theta") -> Identity:
    """theta(a*, theta(b*, c)) = theta(theta(a*,b1), ..., theta(a*,bn), c)."""
    avs = _avars(n, "a")
    bvs = _avars(n, "b")
    c = Variable("c")
    lhs = Apply(op, *avs, Apply(op, *bvs, c))
    rhs = Apply(op, *[Apply(op, *avs, b) for b in bvs], c)
    variables = tuple(v.name for v in avs + bvs) + ("c",)
    return Identity(name or f"2assoc:{n}", variables, lhs, rhs)


def _grouped(leaves, j, n):
    # inner application groups leaves j-1 .. j+n-1 (n+1 consecutive leaves)
    inner = _theta(*leaves[j - 1:j + n])
    return _theta(*leaves[:j - 1], inner, *leaves[j + n:])


def identities_1assoc(n: int) -> list:
    """Parenthesis-moving associativity: the canonical nesting (inner
    application in the last slot) equals the nesting with the inner
    application moved to each of the other n slots.

    For n=1 this is exactly ordinary associativity, term-for-term the same
    equation as identity_2assoc(1).
    """
    leaves = _avars(n, "a") + _avars(n, "b") + [Variable("c")]
    variables = tuple(t.name for t in leaves)
    base = _grouped(leaves, n + 1, n)
    return [
        Identity(f"1assoc:{n}:pos{j}", variables, base, _grouped(leaves, j, n))
        for j in range(1, n + 1)
    ]


def suite_1assoc(n: int) -> IdentitySuite:
    return IdentitySuite(f"1assoc:{n}", n, tuple(identities_1assoc(n)))


def suite_2assoc(n: int) -> IdentitySuite:
    return IdentitySuite(f"2assoc:{n}", n, (identity_2assoc(n),))


def identities_strict(n: int) -> list:
    """alpha_i(theta(a1..an, b), b) = a_i for each i."""
    avs = _avars(n, "a")
    b = Variable("b")
    variables = tuple(v.name for v in avs) + ("b",)
    return [
        Identity(
            f"strict:{n}:alpha{i}", variables,
            Apply(f"alpha{i}", _theta(*avs, b), b), avs[i - 1],
        )
        for i in range(1, n + 1)
    ]


def suite_strict(n: int) -> IdentitySuite:
    return IdentitySuite(f"strict:{n}", n, tuple(identities_strict(n)))


def identity_unit_law(n: int, units=None) -> Identity:
    """theta(e1, ..., en, a) = a (a consequence of the protomodular axioms)."""
    units = default_units(n) if units is None else tuple(units)
    a = Variable("a")
    return Identity(
        f"unit-law:{n}", ("a",),
        _theta(*[Constant(u) for u in units], a), a,
    )


def identity_unit_expansion(n: int, units=None) -> Identity:
    """theta(a*, b) = theta(theta(a*,e1), ..., theta(a*,en), b);
    holds in every 2-associative algebra with the protomodular units."""
    units = default_units(n) if units is None else tuple(units)
    avs = _avars(n, "a")
    b = Variable("b")
    lhs = _theta(*avs, b)
    rhs = _theta(*[_theta(*avs, Constant(u)) for u in units], b)
    return Identity(
        f"unit-expansion:{n}", tuple(v.name for v in avs) + ("b",), lhs, rhs,
    )


def identities_malcev(op: str = "mu") -> list:
    """mu(a,b,b) = a and mu(a,a,b) = b."""
    a, b = Variable("a"), Variable("b")
    return [
        Identity("malcev-right", ("a", "b"), Apply(op, a, b, b), a),
        Identity("malcev-left", ("a", "b"), Apply(op, a, a, b), b),
    ]


def suite_malcev(op: str = "mu") -> IdentitySuite:
    return IdentitySuite("malcev", 1, tuple(identities_malcev(op)))


def identity_malcev_assoc(op: str = "mu") -> Identity:
    """mu(a,b,mu(c,d,x)) = mu(mu(a,b,c),d,x)."""
    a, b, c, d, x = (Variable(v) for v in "abcdx")
    return Identity(
        "malcev-assoc", ("a", "b", "c", "d", "x"),
        Apply(op, a, b, Apply(op, c, d, x)),
        Apply(op, Apply(op, a, b, c), d, x),
    )


def identity_malcev_assoc_expanded(n: int) -> Identity:
    """The malcev-assoc equation with mu expanded through theta/alpha:
    mu(a,b,c) = theta(alpha1(a,b), ..., alphan(a,b), c)."""
    def mu(a, b, c):
        return _theta(*[Apply(f"alpha{i}", a, b) for i in range(1, n + 1)], c)

    a1, a2, b1, b2, c = (Variable(v) for v in ("a1", "a2", "b1", "b2", "c"))
    return Identity(
        f"malcev-assoc-expanded:{n}", ("a1", "a2", "b1", "b2", "c"),
        mu(a1, a2, mu(b1, b2, c)),
        mu(mu(a1, a2, b1), b2, c),
    )


# ---------------------------------------------------------------------------
# functional characterization of 2-associativity

def theta_section(alg: FiniteAlgebra, b: int, op: str = "theta"):
    """The n-ary section theta(-,...,-,b) as a flat tuple over A^n."""
    tbl = alg.op(op)
    n = tbl.arity - 1
    m = alg.size
    return tuple(
        tbl.lookup(xs + (b,), m)
        for xs in itertools.product(range(m), repeat=n)
    )


def check_2assoc_functional(
    alg: FiniteAlgebra, n: int, budget: int = EXHAUSTIVE_BUDGET
) -> CheckReport:
    """Decide 2-associativity through the map algebra on A^n -> A.

    Materializes every section theta_b, composes sections inside
    Map(A^n, A), and compares with the section of theta(b1,...,bn,c)
    pointwise.  Always agrees with the direct identity check.
    """
    m = alg.size
    tbl = alg.op("theta")
    if tbl.arity != n + 1:
        raise BudgetError(f"theta has arity {tbl.arity}, expected {n + 1}")
    if m ** n * m ** (n + 1) > budget:
        raise BudgetError(
            f"functional 2-assoc check needs {m}^{n} x {m}^{n + 1} "
            "section points, over budget"
        )
    sections = [theta_section(alg, b) for b in range(m)]
    points = list(itertools.product(range(m), repeat=n))
    flat = {xs: i for i, xs in enumerate(points)}
    checked = 0
    for bs in itertools.product(range(m), repeat=n):
        for c in range(m):
            target = sections[tbl.lookup(bs + (c,), m)]
            g = sections[c]
            fs = [sections[b] for b in bs]
            for i, xs in enumerate(points):
                checked += 1
                composed = g[flat[tuple(f[i] for f in fs)]]
                if composed != target[i]:
                    cx = {f"b{j + 1}": b for j, b in enumerate(bs)}
                    cx["c"] = c
                    cx.update({f"x{j + 1}": x for j, x in enumerate(xs)})
                    return CheckReport(
                        "fail", f"2assoc-functional:{n}",
                        counterexample=cx, tuples_checked=checked,
                        detail="section composition disagrees with "
                               "the section of the composite",
                    )
    return CheckReport("pass", f"2assoc-functional:{n}", tuples_checked=checked)


# ---------------------------------------------------------------------------
# strictness: four equivalent conditions, decided independently

@dataclass
class StrictnessReport:
    """The four strictness conditions, each decided by direct table scan
    or identity check, plus whether they agree."""

    sections_bijective: bool
    unique_preimage: bool
    alpha_system_solvable: bool
    identity_holds: bool
    identity_report: CheckReport | None = None

    @property
    def agree(self) -> bool:
        vals = {
            self.sections_bijective,
            self.unique_preimage,
            self.alpha_system_solvable,
            self.identity_holds,
        }
        return len(vals) == 1

    @property
    def strict(self) -> bool:
        return self.sections_bijective

    def to_dict(self):
        return {
            "sections_bijective": self.sections_bijective,
            "unique_preimage": self.unique_preimage,
            "alpha_system_solvable": self.alpha_system_solvable,
            "identity_holds": self.identity_holds,
            "agree": self.agree,
        }


def check_strict_equivalence(alg: FiniteAlgebra, n: int) -> StrictnessReport:
    """Decide strictness four independent ways:

    (i)   every section theta_b is a bijection A^n -> A;
    (ii)  theta(x*, b) = a has exactly one solution for each (a, b);
    (iii) the system alpha_i(x, b) = a_i has a solution for each (b, a*);
    (iv)  the identity alpha_i(theta(a*, b), b) = a_i holds for all i.
    """
    m = alg.size
    sections = [theta_section(alg, b) for b in range(m)]

    # (i) bijectivity: needs |A^n| == |A| and each section a permutation
    bij = all(
        len(sec) == m and len(set(sec)) == m for sec in sections
    )

    # (ii) unique preimage per (a, b)
    unique = True
    for sec in sections:
        counts = [0] * m
        for v in sec:
            counts[v] += 1
        if any(c != 1 for c in counts):
            unique = False
            break

    # (iii) solvability of the alpha system
    solvable = True
    alphas = [alg.op(f"alpha{i}") for i in range(1, n + 1)]
    for b in range(m):
        images = {
            tuple(a.lookup((x, b), m) for a in alphas) for x in range(m)
        }
        if len(images) != m ** n:
            solvable = False
            break

    reports = [check_identity(alg, ident) for ident in identities_strict(n)]
    identity_holds = all(r.ok for r in reports)
    bad = first_failure(reports)
    return StrictnessReport(bij, unique, solvable, identity_holds,
                            identity_report=bad or reports[0])


# ---------------------------------------------------------------------------
# suite lookup by "name:n" strings (CLI address space)

def resolve_suite(spec: str, units=None) -> IdentitySuite:
    """Resolve a 'name' or 'name:n' string to an IdentitySuite."""
    name, _, ns = spec.partition(":")
    n = int(ns) if ns else 1
    if units is not None and len(units) == 1 and n > 1:
        units = tuple(units) * n
    builders = {
        "protomodular": lambda: suite_protomodular(n, units),
        "semiabelian": lambda: suite_semiabelian(n, units),
        "2assoc": lambda: suite_2assoc(n),
        "1assoc": lambda: suite_1assoc(n),
        "strict": lambda: suite_strict(n),
        "malcev": lambda: suite_malcev(),
        "malcev-assoc": lambda: IdentitySuite(
            "malcev-assoc", 1, (identity_malcev_assoc(),)
        ),
        "unit-law": lambda: IdentitySuite(
            f"unit-law:{n}", n, (identity_unit_law(n, units),)
        ),
        "unit-expansion": lambda: IdentitySuite(
            f"unit-expansion:{n}", n, (identity_unit_expansion(n, units),)
        ),
    }
    if name not in builders:
        raise KeyError(f"unknown suite {name!r}")
    return builders[name]()
