"""Concrete algebra constructions: projections, semigroup translations,
matrix row selection, bounded commutative monoids, distributive-lattice
ternary operations, the Boolean protomodular structure, map-composition
algebras, the alpha-builder for surjective sections, and strict semiloops.

All constructions produce validated FiniteAlgebra values ready for the
identity engine.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    AlgebraError,
    BudgetError,
    DenseTable,
    FiniteAlgebra,
    LazyTable,
    Signature,
    table_from_fn,
)

MATRIX_CARRIER_CAP = 10 ** 6
MAP_CARRIER_CAP = 10 ** 4
DENSE_TABLE_CAP = 1 << 22


# ---------------------------------------------------------------------------
# input structures, table-checked at construction

@dataclass(frozen=True)
class MonoidSpec:
    """A monoid given by its Cayley table; associativity and the unit laws
    are verified eagerly."""

    size: int
    table: DenseTable
    unit: int

    def __post_init__(self):
        m, t = self.size, self.table
        if t.arity != 2 or len(t.entries) != m * m:
            raise AlgebraError("monoid table must be binary over the carrier")
        for a in range(m):
            if t.lookup((self.unit, a), m) != a or t.lookup((a, self.unit), m) != a:
                raise AlgebraError(f"unit law fails at {a}")
        for a, b, c in itertools.product(range(m), repeat=3):
            ab = t.lookup((a, b), m)
            bc = t.lookup((b, c), m)
            if t.lookup((ab, c), m) != t.lookup((a, bc), m):
                raise AlgebraError(f"associativity fails at ({a},{b},{c})")

    def mul(self, a, b):
        return self.table.lookup((a, b), self.size)

    def is_commutative(self) -> bool:
        return all(
            self.mul(a, b) == self.mul(b, a)
            for a in range(self.size) for b in range(self.size)
        )


@dataclass(frozen=True)
class GroupSpec(MonoidSpec):
    """A group: a monoid plus an inverse table, verified eagerly."""

    inverse: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        if len(self.inverse) != self.size:
            raise AlgebraError("inverse table must cover the carrier")
        for a in range(self.size):
            if (
                self.mul(a, self.inverse[a]) != self.unit
                or self.mul(self.inverse[a], a) != self.unit
            ):
                raise AlgebraError(f"inverse law fails at {a}")

    def inv(self, a):
        return self.inverse[a]

    def div(self, a, b):
        return self.mul(a, self.inverse[b])


def cyclic_group(k: int) -> GroupSpec:
    """The additive group of integers mod k."""
    tbl = table_from_fn(2, k, lambda a, b: (a + b) % k)
    return GroupSpec(k, tbl, 0, tuple((-a) % k for a in range(k)))


def cyclic_monoid(k: int) -> MonoidSpec:
    return MonoidSpec(k, table_from_fn(2, k, lambda a, b: (a + b) % k), 0)


def product_group(g: GroupSpec, h: GroupSpec) -> GroupSpec:
    """Direct product, elements encoded as a*|h| + b."""
    m = g.size * h.size

    def enc(a, b):
        return a * h.size + b

    def dec(x):
        return divmod(x, h.size)

    def mul(x, y):
        (a1, b1), (a2, b2) = dec(x), dec(y)
        return enc(g.mul(a1, a2), h.mul(b1, b2))

    inv = tuple(enc(g.inv(a), h.inv(b)) for a, b in (dec(x) for x in range(m)))
    return GroupSpec(m, table_from_fn(2, m, mul), enc(g.unit, h.unit), inv)


@dataclass(frozen=True)
class LatticeSpec:
    """A lattice given by join/meet tables; the lattice laws are verified,
    distributivity on demand."""

    size: int
    join: DenseTable
    meet: DenseTable
    bottom: int | None = None
    top: int | None = None

    def __post_init__(self):
        m = self.size
        for name, t in (("join", self.join), ("meet", self.meet)):
            if t.arity != 2 or len(t.entries) != m * m:
                raise AlgebraError(f"{name} table must be binary")
        j, w = self._j, self._m
        for a, b in itertools.product(range(m), repeat=2):
            if j(a, b) != j(b, a) or w(a, b) != w(b, a):
                raise AlgebraError(f"commutativity fails at ({a},{b})")
            if j(a, w(a, b)) != a or w(a, j(a, b)) != a:
                raise AlgebraError(f"absorption fails at ({a},{b})")
        for a, b, c in itertools.product(range(m), repeat=3):
            if j(j(a, b), c) != j(a, j(b, c)) or w(w(a, b), c) != w(a, w(b, c)):
                raise AlgebraError(f"associativity fails at ({a},{b},{c})")
        if self.bottom is not None and any(
            j(self.bottom, a) != a for a in range(m)
        ):
            raise AlgebraError("bottom is not neutral for join")
        if self.top is not None and any(
            w(self.top, a) != a for a in range(m)
        ):
            raise AlgebraError("top is not neutral for meet")

    def _j(self, a, b):
        return self.join.lookup((a, b), self.size)

    def _m(self, a, b):
        return self.meet.lookup((a, b), self.size)

    def is_distributive(self) -> bool:
        j, w = self._j, self._m
        return all(
            w(a, j(b, c)) == j(w(a, b), w(a, c))
            for a, b, c in itertools.product(range(self.size), repeat=3)
        )


def chain_lattice(k: int) -> LatticeSpec:
    """The k-element chain 0 < 1 < ... < k-1."""
    return LatticeSpec(
        k,
        table_from_fn(2, k, max),
        table_from_fn(2, k, min),
        bottom=0,
        top=k - 1,
    )


def product_lattice(p: LatticeSpec, q: LatticeSpec) -> LatticeSpec:
    """Componentwise product, elements encoded as a*|q| + b."""
    m = p.size * q.size

    def lift(f, g):
        def h(x, y):
            a1, b1 = divmod(x, q.size)
            a2, b2 = divmod(y, q.size)
            return f(a1, a2) * q.size + g(b1, b2)

        return h

    bottom = top = None
    if p.bottom is not None and q.bottom is not None:
        bottom = p.bottom * q.size + q.bottom
    if p.top is not None and q.top is not None:
        top = p.top * q.size + q.top
    return LatticeSpec(
        m,
        table_from_fn(2, m, lift(p._j, q._j)),
        table_from_fn(2, m, lift(p._m, q._m)),
        bottom=bottom,
        top=top,
    )


# ---------------------------------------------------------------------------
# constructions

def _theta_only(name, m, n, fn, dense_cap=DENSE_TABLE_CAP):
    sig = Signature((("theta", n + 1),))
    if m ** (n + 1) <= dense_cap:
        tbl = table_from_fn(n + 1, m, fn)
    else:
        tbl = LazyTable(n + 1, fn, note=name)
    return FiniteAlgebra(name, sig, m, {"theta": tbl})


def build_projection_algebra(m: int, n: int, i: int) -> FiniteAlgebra:
    """theta(a1,...,an,a_{n+1}) = a_i; 2-associative for every i."""
    if not 1 <= i <= n + 1:
        raise AlgebraError(f"projection index {i} out of range 1..{n + 1}")
    if m < 1:
        raise AlgebraError("carrier must be nonempty")
    return _theta_only(f"Proj{m}n{n}i{i}", m, n, lambda *a: a[i - 1])


def build_semigroup_algebra(sg: MonoidSpec, n: int, i: int) -> FiniteAlgebra:
    """theta(a1,...,an,b) = a_i * b on a semigroup/monoid.

    When sg is a group, the unit e and alpha_j(a,b) = a * b^-1 are
    attached, giving a 2-associative semi-abelian algebra.
    """
    if not 1 <= i <= n:
        raise AlgebraError(f"translation index {i} out of range 1..{n}")
    m = sg.size

    def theta(*args):
        return sg.mul(args[i - 1], args[-1])

    if not isinstance(sg, GroupSpec):
        return _theta_only(f"Sgrp{m}n{n}i{i}", m, n, theta)
    ops = [("theta", n + 1)] + [(f"alpha{j}", 2) for j in range(1, n + 1)]
    sig = Signature(tuple(ops), ("e",))
    tables = {"theta": table_from_fn(n + 1, m, theta)}
    alpha = table_from_fn(2, m, sg.div)
    for j in range(1, n + 1):
        tables[f"alpha{j}"] = alpha
    return FiniteAlgebra(
        f"Grp{m}n{n}i{i}", sig, m, tables, {"e": sg.unit}
    )


def build_group_product_algebra(groups, indices, n: int) -> FiniteAlgebra:
    """Componentwise translation algebra: component j of the carrier comes
    from groups[j] and uses the indices[j]-th tuple entry, so
    theta(a1,...,an,b)_j = (a_{indices[j]})_j * b_j."""
    if len(groups) != len(indices):
        raise AlgebraError("need one index per group factor")
    for idx in indices:
        if not 1 <= idx <= n:
            raise AlgebraError(f"index {idx} out of range 1..{n}")
    sizes = [g.size for g in groups]
    m = 1
    for s in sizes:
        m *= s

    def dec(x):
        out = []
        for s in reversed(sizes):
            x, r = divmod(x, s)
            out.append(r)
        return list(reversed(out))

    def enc(parts):
        x = 0
        for s, p in zip(sizes, parts):
            x = x * s + p
        return x

    def theta(*args):
        tuples = [dec(a) for a in args]
        return enc([
            g.mul(tuples[idx - 1][j], tuples[-1][j])
            for j, (g, idx) in enumerate(zip(groups, indices))
        ])

    def alpha(a, b):
        ta, tb = dec(a), dec(b)
        return enc([g.div(x, y) for g, x, y in zip(groups, ta, tb)])

    ops = [("theta", n + 1)] + [(f"alpha{j}", 2) for j in range(1, n + 1)]
    sig = Signature(tuple(ops), ("e",))
    tables = {"theta": table_from_fn(n + 1, m, theta)}
    atbl = table_from_fn(2, m, alpha)
    for j in range(1, n + 1):
        tables[f"alpha{j}"] = atbl
    unit = enc([g.unit for g in groups])
    label = "x".join(str(s) for s in sizes)
    return FiniteAlgebra(f"GrpProd{label}n{n}", sig, m, tables, {"e": unit})


def build_matrix_row_algebra(q: int, n: int) -> FiniteAlgebra:
    """Carrier: all (n+1)x(n+1) matrices over a q-element entry set,
    encoded by row-major base-q digits.  theta assembles the matrix whose
    i-th row is the i-th row of the i-th argument."""
    if q < 1:
        raise AlgebraError("entry set must be nonempty")
    d = n + 1
    m = q ** (d * d)
    if m > MATRIX_CARRIER_CAP:
        raise BudgetError(
            f"matrix carrier {q}^{d * d} = {m} exceeds cap {MATRIX_CARRIER_CAP}"
        )

    row_weight = q ** d  # one row spans d base-q digits
    shifts = [row_weight ** (d - 1 - i) for i in range(d)]

    def theta(*mats):
        out = 0
        for i in range(d):
            # row i sits at digit offset i*d from the most significant end
            out = out * row_weight + (mats[i] // shifts[i]) % row_weight
        return out

    return _theta_only(f"MatRows-q{q}-n{n}", q ** (d * d), n, theta)


def build_bounded_monoid_algebra(mo: MonoidSpec, n: int) -> FiniteAlgebra:
    """theta(a1,...,an,b) = a1 + ... + an + b on a commutative monoid in
    which every element's order divides n-1."""
    if not mo.is_commutative():
        raise AlgebraError("monoid must be commutative")
    m = mo.size
    if n >= 2:
        for a in range(m):
            acc = mo.unit
            for _ in range(n - 1):
                acc = mo.mul(acc, a)
            if acc != mo.unit:
                raise AlgebraError(
                    f"element {a}: order does not divide n-1 = {n - 1}"
                )

    def theta(*args):
        acc = args[0]
        for x in args[1:]:
            acc = mo.mul(acc, x)
        return acc

    return _theta_only(f"BddMonoid{m}n{n}", m, n, theta)


def build_lattice_theta(lat: LatticeSpec, variant: str) -> FiniteAlgebra:
    """Ternary operation on a distributive lattice:

    variant "meet-last":   theta(a,b,c) = (a v b) ^ c
    variant "meet-middle": theta(a,b,c) = (a v c) ^ b

    Both are 2-associative on every distributive lattice; neither is
    1-associative unless the lattice is trivial.
    """
    if not lat.is_distributive():
        raise AlgebraError("lattice is not distributive")
    if variant == "meet-last":
        fn = lambda a, b, c: lat._m(lat._j(a, b), c)
    elif variant == "meet-middle":
        fn = lambda a, b, c: lat._m(lat._j(a, c), b)
    else:
        raise AlgebraError(f"unknown variant {variant!r}")
    return _theta_only(f"Lat{lat.size}-{variant}", lat.size, 2, fn)


def build_lattice_v2_algebra(lat: LatticeSpec) -> FiniteAlgebra:
    """The meet-middle lattice operation with units e1 = bottom,
    e2 = top and alphas attached through the surjective-section builder,
    giving a 2-associative protomodular algebra."""
    if lat.bottom is None or lat.top is None:
        raise AlgebraError("lattice needs bottom and top")
    base = build_lattice_theta(lat, "meet-middle")
    return build_alphas_from_surjectivity(base, (lat.bottom, lat.top))


def build_boolean_protomodular(k: int) -> FiniteAlgebra:
    """The power set of a k-element set as a protomodular algebra (n = 2):
    theta(x,y,z) = (x v z) ^ y, alpha1(x,y) = x ^ ~y, alpha2(x,y) = x v ~y,
    e1 = empty set, e2 = whole set.  Elements are bitmasks."""
    if not 1 <= k <= 3:
        raise BudgetError(f"k = {k} out of the supported range 1..3")
    m = 1 << k
    full = m - 1
    sig = Signature(
        (("theta", 3), ("alpha1", 2), ("alpha2", 2)), ("e1", "e2")
    )
    tables = {
        "theta": table_from_fn(3, m, lambda x, y, z: (x | z) & y),
        "alpha1": table_from_fn(2, m, lambda x, y: x & (full ^ y)),
        "alpha2": table_from_fn(2, m, lambda x, y: x | (full ^ y)),
    }
    return FiniteAlgebra(
        f"Bool{m}", sig, m, tables, {"e1": 0, "e2": full}
    )


def build_map_composition_algebra(m: int, n: int) -> FiniteAlgebra:
    """Carrier: all maps A^n -> A for |A| = m, encoded by their value
    tables as base-m digits; theta(f1,...,fn,g) = g o (f1,...,fn)."""
    points = m ** n
    size = m ** points
    if size > MAP_CARRIER_CAP:
        raise BudgetError(
            f"map carrier {m}^{points} = {size} exceeds cap {MAP_CARRIER_CAP}"
        )
    tuples = list(itertools.product(range(m), repeat=n))
    index = {t: i for i, t in enumerate(tuples)}

    def decode(code):
        digits = []
        for _ in range(points):
            code, r = divmod(code, m)
            digits.append(r)
        return list(reversed(digits))

    def encode(values):
        code = 0
        for v in values:
            code = code * m + v
        return code

    def theta(*codes):
        fs = [decode(c) for c in codes[:-1]]
        g = decode(codes[-1])
        return encode([
            g[index[tuple(f[i] for f in fs)]] for i in range(points)
        ])

    return _theta_only(f"Maps-m{m}-n{n}", size, n, theta)


def build_diagonal_retraction_algebra(m: int, n: int) -> FiniteAlgebra:
    """The maps g: A^n -> A with g(a,...,a) = a, under composition-with-
    tupling, with e_i = i-th projection and alphas attached by the
    surjective-section builder.  A 2-associative protomodular algebra."""
    points = m ** n
    tuples = list(itertools.product(range(m), repeat=n))
    index = {t: i for i, t in enumerate(tuples)}
    retractions = [
        vals
        for vals in itertools.product(range(m), repeat=points)
        if all(vals[index[(a,) * n]] == a for a in range(m))
    ]
    size = len(retractions)
    if size > MAP_CARRIER_CAP:
        raise BudgetError(f"retraction carrier {size} exceeds cap")
    code = {vals: i for i, vals in enumerate(retractions)}

    def theta(*args):
        fs = [retractions[a] for a in args[:-1]]
        g = retractions[args[-1]]
        return code[tuple(
            g[index[tuple(f[i] for f in fs)]] for i in range(points)
        )]

    base = _theta_only(f"Retr-m{m}-n{n}", size, n, theta)
    units = [
        code[tuple(t[i] for t in tuples)] for i in range(n)
    ]
    return build_alphas_from_surjectivity(base, units)


def build_alphas_from_surjectivity(
    alg: FiniteAlgebra, units, shared_unit: bool | None = None
) -> FiniteAlgebra:
    """Given a theta-only algebra whose sections theta_b are all surjective
    and which satisfies theta(e1,...,en,b) = b, attach alpha tables so the
    protomodular axioms hold.

    alpha_i(a,b) is the i-th component of a chosen theta_b-preimage of a:
    the unit tuple itself when theta_b(e*) = a (forced by the diagonal
    axiom), otherwise the lexicographically smallest preimage.
    """
    tbl = alg.op("theta")
    n = tbl.arity - 1
    units = tuple(units)
    if len(units) != n:
        raise AlgebraError(f"need {n} unit elements, got {len(units)}")
    m = alg.size
    for b in range(m):
        if tbl.lookup(units + (b,), m) != b:
            raise AlgebraError(
                f"theta(e*, b) = b fails at b = {b}"
            )
    # preimage[b][a]: chosen tuple with theta(tuple, b) = a
    preimage = [[None] * m for _ in range(m)]
    for b in range(m):
        for xs in itertools.product(range(m), repeat=n):
            a = tbl.lookup(xs + (b,), m)
            if preimage[b][a] is None:
                preimage[b][a] = xs
        missing = [a for a in range(m) if preimage[b][a] is None]
        if missing:
            raise AlgebraError(
                f"section at b = {b} is not surjective (misses {missing[0]})"
            )
        preimage[b][tbl.lookup(units + (b,), m)] = units
    if shared_unit is None:
        shared_unit = len(set(units)) == 1
    if shared_unit and len(set(units)) != 1:
        raise AlgebraError("shared unit requested but unit elements differ")
    ops = [("theta", n + 1)] + [(f"alpha{i}", 2) for i in range(1, n + 1)]
    consts = ("e",) if shared_unit else tuple(f"e{i}" for i in range(1, n + 1))
    sig = Signature(tuple(ops), consts)
    tables = {"theta": tbl}
    for i in range(1, n + 1):
        tables[f"alpha{i}"] = table_from_fn(
            2, m, lambda a, b, i=i: preimage[b][a][i - 1]
        )
    cvals = (
        {"e": units[0]} if shared_unit
        else {f"e{i}": units[i - 1] for i in range(1, n + 1)}
    )
    return FiniteAlgebra(alg.name + "-alphas", sig, m, tables, cvals)


def build_strict_semiloop(m: int, twisted: bool = False) -> FiniteAlgebra:
    """A strict n=1 algebra: each section theta_b is a permutation with
    theta(e, b) = b, and alpha1(a, b) inverts it.

    Untwisted, theta(a,b) = a+b mod m (a cyclic group).  Twisted (m >= 3),
    the section at b = m-1 composes with the transposition (1 2), which
    yields a left semiloop that is not associative.
    """
    if m < 1:
        raise AlgebraError("carrier must be nonempty")
    if twisted and m < 3:
        raise AlgebraError("twisted semiloop needs m >= 3")

    def sigma(b, a):
        if twisted and b == m - 1 and a in (1, 2):
            return 3 - a
        return a

    def theta(a, b):
        return (sigma(b, a) + b) % m

    def alpha(a, b):
        return sigma(b, (a - b) % m)

    sig = Signature((("theta", 2), ("alpha1", 2)), ("e",))
    tables = {
        "theta": table_from_fn(2, m, theta),
        "alpha1": table_from_fn(2, m, alpha),
    }
    label = "Semiloop" if twisted else "Cyclic"
    return FiniteAlgebra(f"{label}{m}", sig, m, tables, {"e": 0})
