"""Integral lattices given by Gram matrices.

Root lattices are negative definite (diagonal ``-2``), matching the
intersection form on exceptional curves.  Determinants keep their sign.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import lcm
from typing import Iterable, Iterator, Sequence

from . import linalg
from .hjcf import HJString, tau, tridiagonal_gram
from .padic import DiagonalForm
from .singularity import Dihedral, gram_of, parse_singularity

__all__ = [
    "GramLattice",
    "ExtendedLattice",
    "DiscriminantGroup",
    "named",
    "direct_sum",
    "det",
    "signature",
    "diagonalize",
    "extend_by_K",
    "tau_gram",
    "tau_diagonal",
    "tau_last_entry_closed",
    "disc_group",
    "isotropic_subgroups",
    "orthogonal_complement",
    "is_cyclic_quotient",
    "overlattice",
    "parse_lattice",
    "DiscriminantCapExceeded",
]

DISC_CAP = 1 << 16


class DiscriminantCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class GramLattice:
    gram: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return linalg.det_int(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def signature(self) -> tuple[int, int]:
        entries = linalg.symmetric_diagonalize(self.gram)
        return sum(1 for x in entries if x > 0), sum(1 for x in entries if x < 0)

    @property
    def is_negative_definite(self) -> bool:
        return self.signature == (0, self.rank)

    def self_intersections(self) -> list[int]:
        return [self.gram[i][i] for i in range(self.rank)]

    def __str__(self) -> str:
        return self.name or f"lattice(rank={self.rank})"


def _lat(rows, name) -> GramLattice:
    return GramLattice(tuple(tuple(r) for r in rows), name)


def _graph(weights: Sequence[int], edges: Iterable[tuple[int, int]], name: str) -> GramLattice:
    n = len(weights)
    g = [[0] * n for _ in range(n)]
    for i, w in enumerate(weights):
        g[i][i] = w
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return _lat(g, name)


def _exceptional(n: int) -> GramLattice:
    # chain e_1..e_{n-1} with e_n attached to the branch vertex (arms 1, 2, n-4 from it)
    branch = n - 4
    edges = [(i, i + 1) for i in range(n - 2)] + [(branch, n - 1)]
    return _graph([-2] * n, edges, f"E{n}")


def named(ctor: str) -> GramLattice:
    t = ctor.strip().replace(" ", "")
    if m := re.fullmatch(r"A(\d+)", t):
        n = int(m.group(1))
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        return _lat(tridiagonal_gram([2] * n), t)
    if m := re.fullmatch(r"D(\d+)", t):
        n = int(m.group(1))
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        return _lat(gram_of(Dihedral(2, HJString((2,) * (n - 3)))), t)
    if t in ("E6", "E7", "E8"):
        return _exceptional(int(t[1]))
    if t == "H":
        return _lat([[0, 1], [1, 0]], "H")
    if m := re.fullmatch(r"I\(1,(\d+)\)", t):
        k = int(m.group(1))
        rows = [[0] * (k + 1) for _ in range(k + 1)]
        rows[0][0] = 1
        for i in range(1, k + 1):
            rows[i][i] = -1
        return _lat(rows, t)
    if m := re.fullmatch(r"II\(1,(\d+)\)", t):
        k = int(m.group(1))
        if k % 8 != 1:
            raise ValueError("II_{1,n} needs n = 1 mod 8")
        return direct_sum(named("H"), *[named("E8")] * (k // 8), name=t)
    if m := re.fullmatch(r"diag\((-?\d+)\)", t):
        return _lat([[int(m.group(1))]], t)
    if t.startswith("HJ["):
        s = HJString.parse(t[2:])
        return _lat(tridiagonal_gram(s.entries), f"HJ{s}")
    try:
        sing = parse_singularity(t)
    except ValueError:
        raise ValueError(f"unknown lattice name {ctor!r}") from None
    return _lat(gram_of(sing), sing.label())


def direct_sum(*lattices: GramLattice, name: str | None = None) -> GramLattice:
    n = sum(L.rank for L in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            g[off + i][off : off + L.rank] = row
        off += L.rank
    if name is None:
        name = "+".join(L.name for L in lattices if L.name)
    return _lat(g, name)


def det(L: GramLattice) -> int:
    return L.det


def signature(L: GramLattice) -> tuple[int, int]:
    return L.signature


def diagonalize(L: GramLattice) -> DiagonalForm:
    entries = linalg.symmetric_diagonalize(L.gram)
    if any(x == 0 for x in entries):
        raise ValueError(f"{L} is degenerate")
    return DiagonalForm(tuple(entries))


@dataclass(frozen=True)
class ExtendedLattice:
    """``R + <K>`` for a formal canonical class with ``K.K = k_sq`` and ``K.E_i = k_dot[i]``."""

    base: GramLattice
    k_sq: Fraction
    k_dot: tuple[int, ...]
    dp2_total: Fraction  # (sum of D_p)^2
    ks2: Fraction  # k_sq - dp2_total
    lattice: GramLattice | None  # None when K lies in R tensor Q

    @property
    def numerically_trivial(self) -> bool:
        return self.lattice is None

    @property
    def det(self) -> int:
        if self.lattice is None:
            raise ValueError("numerically trivial extension has no nondegenerate lattice")
        return self.lattice.det


def extend_by_K(R: GramLattice, k_sq=None, k_dot: Sequence[int] | None = None) -> ExtendedLattice:
    """Adjoin a formal canonical class to the lattice spanned by exceptional curves.

    Defaults: ``K.K = 9 - rank(R)`` and ``K.E_i = -2 - E_i^2``.
    """
    if not R.is_negative_definite:
        raise ValueError(f"{R} is not negative definite")
    k_sq = Fraction(9 - R.rank if k_sq is None else k_sq)
    if k_dot is None:
        k_dot = [-2 - e for e in R.self_intersections()]
    k_dot = tuple(int(x) for x in k_dot)
    a = linalg.solve(R.gram, [-k for k in k_dot])
    dp2 = -sum(ai * ki for ai, ki in zip(a, k_dot))
    ks2 = k_sq - dp2
    if ks2 == 0:
        return ExtendedLattice(R, k_sq, k_dot, dp2, ks2, None)
    if k_sq.denominator != 1:
        raise ValueError("K^2 must be an integer to form a Gram matrix")
    rows = [list(row) + [k] for row, k in zip(R.gram, k_dot)]
    rows.append(list(k_dot) + [int(k_sq)])
    return ExtendedLattice(R, k_sq, k_dot, dp2, ks2, _lat(rows, f"{R.name}+K" if R.name else ""))


def tau_gram(s) -> GramLattice:
    """Gram matrix of tau(s) in the basis (e_1..e_l, e_{l+1}) where e_{l+1} is the new (-2)-curve."""
    s = s if isinstance(s, HJString) else HJString(tuple(s))
    e = list(s.entries)
    e[-1] += 1
    l = len(e)
    g = [list(row) + [0] for row in tridiagonal_gram(e)]
    g.append([0] * (l + 1))
    g[l][l] = -2
    g[0][l] = g[l][0] = 1
    return _lat(g, f"HJ{tau(s)}")


def tau_diagonal(s) -> DiagonalForm:
    """Closed-form orthogonal diagonal of tau(s): ``c_1..c_{l-1}, c_l - 1, d_{l+1}``."""
    s = s if isinstance(s, HJString) else HJString(tuple(s))
    if len(s) < 2:
        raise ValueError("tau_diagonal needs a string of length >= 2")
    ys = s.prefix_dets()
    c = [Fraction(-ys[i], ys[i - 1]) for i in range(1, len(ys))]
    c[-1] -= 1
    last = -2 + Fraction(s.q1 + s.q1l, s.q + s.ql)
    return DiagonalForm(tuple(c) + (last,))


def tau_last_entry_closed(d: int, n: int, a: int) -> Fraction:
    """``d_{l+1}`` for a T_d string with witness (n, a): ``-d (n+b)^2 / (d n^2 + d n b - 1)``, ``b = n - a``."""
    b = n - a
    return Fraction(-d * (n + b) ** 2, d * n * n + d * n * b - 1)


def _mod2(x: Fraction) -> Fraction:
    """Representative of x in Q/2Z lying in (-2, 0]."""
    r = x - 2 * (x.numerator // (2 * x.denominator))  # r in [0, 2)
    return r - 2 if r > 0 else r


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True, eq=False)
class DiscriminantGroup:
    """``L*/L`` in Smith coordinates: an element is a tuple ``c`` with ``0 <= c_i < d_i``."""

    lattice: GramLattice
    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    _u_rows: tuple[tuple[int, ...], ...]
    _gram_inv: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def min_generators(self) -> int:
        return len(self.invariant_factors)

    @property
    def q_values(self) -> tuple[Fraction, ...] | None:
        if not self.lattice.is_even:
            return None
        return tuple(self.q(self.unit(i)) for i in range(self.min_generators))

    def unit(self, i: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(self.min_generators))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.min_generators

    def elements(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(d) for d in self.invariant_factors))

    def reduce(self, c: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % d for x, d in zip(c, self.invariant_factors))

    def add(self, c1, c2) -> tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(c1, c2)])

    def scale(self, k: int, c) -> tuple[int, ...]:
        return self.reduce([k * x for x in c])

    def vector(self, c: Sequence[int]) -> tuple[Fraction, ...]:
        """A dual-lattice representative (coordinates in the lattice basis)."""
        n = self.lattice.rank
        v = [Fraction(0)] * n
        for k, g in zip(c, self.generators):
            if k:
                v = [x + k * y for x, y in zip(v, g)]
        return tuple(v)

    def coords_of(self, x: Sequence) -> tuple[int, ...]:
        """Class of a dual vector ``x`` (lattice-basis coordinates)."""
        g = self.lattice.gram
        y = [sum(Fraction(g[i][j]) * Fraction(x[j]) for j in range(len(x))) for i in range(len(x))]
        if any(v.denominator != 1 for v in y):
            raise ValueError("vector is not in the dual lattice")
        z = [sum(u * int(v) for u, v in zip(row, y)) for row in self._u_rows]
        return self.reduce(z)

    def norm(self, c) -> Fraction:
        v = self.vector(c)
        g = self.lattice.gram
        return sum(v[i] * g[i][j] * v[j] for i in range(len(v)) for j in range(len(v)) if v[i] and v[j])

    def q(self, c) -> Fraction:
        if not self.lattice.is_even:
            raise ValueError("discriminant quadratic form is only defined here for even lattices")
        return _mod2(self.norm(c))

    def b(self, c1, c2) -> Fraction:
        v1, v2 = self.vector(c1), self.vector(c2)
        g = self.lattice.gram
        val = sum(v1[i] * g[i][j] * v2[j] for i in range(len(v1)) for j in range(len(v2)) if v1[i] and v2[j])
        return _mod1(val)

    def element_order(self, c) -> int:
        k = 1
        for x, d in zip(c, self.invariant_factors):
            if x:
                k = lcm(k, d // _gcd(x, d))
        return k


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def disc_group(L: GramLattice) -> DiscriminantGroup:
    if L.det == 0:
        raise ValueError(f"{L} is degenerate")
    d, U, _ = linalg.smith_normal_form(L.gram)
    keep = [i for i, x in enumerate(d) if abs(x) > 1]
    u_inv = linalg.inverse(U)
    g_inv = linalg.inverse(L.gram)
    gens = []
    for i in keep:
        col = [u_inv[r][i] for r in range(L.rank)]
        gens.append(tuple(sum(g_inv[r][k] * col[k] for k in range(L.rank)) for r in range(L.rank)))
    return DiscriminantGroup(
        L,
        tuple(abs(d[i]) for i in keep),
        tuple(gens),
        tuple(tuple(U[i]) for i in keep),
        tuple(tuple(row) for row in g_inv),
    )


def _span(D: DiscriminantGroup, base: frozenset, x) -> frozenset:
    out = set(base)
    mult = x
    while mult not in base:
        out.update(D.add(s, mult) for s in base)
        mult = D.add(mult, x)
    return frozenset(out)


def isotropic_subgroups(D: DiscriminantGroup, order: int) -> list[frozenset]:
    """Every subgroup of the given order on which ``q`` vanishes (brute force)."""
    if D.order > DISC_CAP:
        raise DiscriminantCapExceeded(f"|disc| = {D.order} exceeds the enumeration cap {DISC_CAP}")
    if D.order % order:
        return []
    iso = [c for c in D.elements() if D.q(c) == 0 and any(c)]
    start = frozenset([D.zero()])
    seen = {start}
    queue = deque([start])
    found = set()
    while queue:
        S = queue.popleft()
        if len(S) == order:
            found.add(S)
            continue
        for x in iso:
            if x in S or any(D.b(x, s) != 0 for s in S):
                continue
            T = _span(D, S, x)
            if len(T) <= order and order % len(T) == 0 and T not in seen:
                seen.add(T)
                queue.append(T)
    return sorted(found, key=lambda S: sorted(S))


def orthogonal_complement(D: DiscriminantGroup, A: Iterable) -> frozenset:
    A = list(A)
    return frozenset(c for c in D.elements() if all(D.b(c, a) == 0 for a in A))


def is_cyclic_quotient(D: DiscriminantGroup, big: frozenset, small: frozenset) -> bool:
    """Whether ``big / small`` is cyclic (``small`` a subgroup of ``big``)."""
    n = len(big) // len(small)
    for x in big:
        k, mult = 1, x
        while mult not in small:
            mult = D.add(mult, x)
            k += 1
        if k == n:
            return True
    return n == 1


def overlattice(L: GramLattice, A: Iterable) -> GramLattice:
    """The overlattice ``L + A`` inside ``L*`` for an isotropic subgroup ``A`` of ``disc(L)``."""
    D = disc_group(L)
    A = list(A)
    if not L.is_even:
        raise ValueError("overlattice construction is implemented for even lattices")
    if any(D.q(a) != 0 for a in A):
        raise ValueError("subgroup is not isotropic")
    vecs = [tuple(Fraction(int(i == j)) for j in range(L.rank)) for i in range(L.rank)]
    vecs += [D.vector(a) for a in A if any(a)]
    den = lcm(*(x.denominator for v in vecs for x in v))
    basis = linalg.hermite_rows([[int(x * den) for x in v] for v in vecs])
    B = [[Fraction(x, den) for x in row] for row in basis]
    g = linalg.matmul(linalg.matmul(B, L.gram), linalg.transpose(B))
    if any(x.denominator != 1 for row in g for x in row):
        raise ValueError("overlattice is not integral")
    return _lat([[int(x) for x in row] for row in g], f"{L.name}+A" if L.name else "")


_TERM = re.compile(r"^(\d*)(.+)$")


def _split_terms(spec: str) -> list[str]:
    terms, depth, cur = [], 0, []
    for ch in spec.replace(" ", ""):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "+" and depth == 0:
            terms.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    terms.append("".join(cur))
    return [t for t in terms if t]


def parse_lattice(spec: str) -> tuple[GramLattice, bool]:
    """Parse ``"3A1+2A3"``-style specs; returns ``(lattice, with_K)`` for an optional ``+K`` suffix."""
    terms = _split_terms(spec)
    with_k = bool(terms) and terms[-1] == "K"
    if with_k:
        terms = terms[:-1]
    if not terms:
        raise ValueError(f"empty lattice spec {spec!r}")
    parts = []
    for term in terms:
        m = _TERM.match(term)
        mult = int(m.group(1)) if m.group(1) else 1
        base = named(m.group(2))
        parts.extend([base] * mult)
    name = "+".join(terms)
    return direct_sum(*parts, name=name), with_k
