"""Hirzebruch-Jung continued fractions.

A string ``[n_1, ..., n_l]`` (all ``n_i >= 2``) encodes a chain of rational
curves with self-intersections ``-n_i``.  Everything here is exact integer
or :class:`fractions.Fraction` arithmetic.

Index conventions follow the usual determinant notation: ``q`` is the
absolute determinant of the tridiagonal intersection matrix, ``q1`` the
determinant with the first row/column removed, ``ql`` with the last removed
and ``q1l`` with both ends removed.  For a single entry ``q1 = ql = 1``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt
from typing import Iterable, Iterator, Sequence

__all__ = [
    "HJString",
    "TdWitness",
    "Classification",
    "chain_det",
    "hj_det",
    "hj_value",
    "hj_expand",
    "tau",
    "reverse",
    "t_invariant",
    "classify",
    "generate_Td",
    "td_seed",
    "discrepancies",
    "dp_squared_cyclic",
    "tridiagonal_gram",
]


def chain_det(entries: Iterable[int]) -> int:
    """|det| of the chain matrix with diagonal ``-n_i``; 1 for an empty chain."""
    prev, cur = 0, 1
    for n in entries:
        prev, cur = cur, n * cur - prev
    return cur


@dataclass(frozen=True)
class HJString:
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(n) for n in self.entries)
        if not entries:
            raise ValueError("a Hirzebruch-Jung string needs at least one entry")
        if any(n < 2 for n in entries):
            raise ValueError(f"entries must be >= 2, got {list(entries)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text: str) -> "HJString":
        text = text.strip().strip("[]")
        return cls(tuple(int(tok) for tok in text.split(",") if tok.strip()))

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __lt__(self, other: "HJString") -> bool:
        return (len(self), self.entries) < (len(other), other.entries)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.entries)) + "]"

    @property
    def length(self) -> int:
        return len(self.entries)

    @cached_property
    def q(self) -> int:
        return chain_det(self.entries)

    @cached_property
    def q1(self) -> int:
        return chain_det(self.entries[1:])

    @cached_property
    def ql(self) -> int:
        return chain_det(self.entries[:-1])

    @cached_property
    def q1l(self) -> int:
        if len(self.entries) == 1:
            return 1
        return chain_det(self.entries[1:-1])

    def prefix_dets(self) -> list[int]:
        """``[y_0, ..., y_l]`` with ``y_j`` the determinant of the first j entries."""
        ys = [1]
        prev = 0
        for n in self.entries:
            ys.append(n * ys[-1] - prev)
            prev = ys[-2]
        return ys


@dataclass(frozen=True)
class TdWitness:
    """Parameters with ``q = d n^2`` and ``q1 = d n a - 1``; ``b_comp = n - a``."""

    d: int
    n: int
    a: int

    @property
    def b_comp(self) -> int:
        return self.n - self.a


@dataclass(frozen=True)
class Classification:
    kind: str  # "RDP", "T" or "Other"
    witness: TdWitness | None = None
    rdp_rank: int | None = None

    def __str__(self) -> str:
        if self.kind == "RDP":
            return f"RDP(A{self.rdp_rank})"
        if self.kind == "T":
            w = self.witness
            return f"T({w.d}, n={w.n}, a={w.a})"
        return "Other"


def _as_hj(s) -> HJString:
    return s if isinstance(s, HJString) else HJString(tuple(s))


def hj_det(s, deleted: Iterable[int] = ()) -> int:
    """|det| of the intersection matrix with the given 1-based rows/columns removed.

    Deleting vertices splits the chain into independent runs, so the
    determinant is the product of the run determinants.
    """
    s = _as_hj(s)
    deleted = set(deleted)
    if any(i < 1 or i > len(s) for i in deleted):
        raise ValueError(f"deleted indices must lie in 1..{len(s)}")
    result, run = 1, []
    for i, n in enumerate(s.entries, start=1):
        if i in deleted:
            result *= chain_det(run)
            run = []
        else:
            run.append(n)
    return result * chain_det(run)


def hj_value(s) -> Fraction:
    s = _as_hj(s)
    return Fraction(s.q, s.q1)


def hj_expand(q: int, q1: int) -> HJString:
    """Inverse of :func:`hj_value`: the string with value ``q/q1``."""
    if not (q > q1 >= 1) or gcd(q, q1) != 1:
        raise ValueError(f"need q > q1 >= 1 with gcd 1, got q={q}, q1={q1}")
    out = []
    while q1:
        n = -(-q // q1)
        out.append(n)
        q, q1 = q1, n * q1 - q
    return HJString(tuple(out))


def tau(s) -> HJString:
    s = _as_hj(s)
    e = s.entries
    return HJString((2,) + e[:-1] + (e[-1] + 1,))


def reverse(s) -> HJString:
    return HJString(tuple(reversed(_as_hj(s).entries)))


def t_invariant(s) -> int:
    """``q1 + ql - q``, invariant under tau and reversal."""
    s = _as_hj(s)
    return s.q1 + s.ql - s.q


def classify(s) -> Classification:
    s = _as_hj(s)
    q, q1, ql = s.q, s.q1, s.ql
    if q1 + ql + 2 == 2 * q:
        return Classification("RDP", rdp_rank=len(s))
    if q1 + ql + 2 == q:
        d = 3 * len(s) + 2 - sum(s.entries)
        if d <= 0 or q % d:
            raise ArithmeticError(f"{s}: T-type identity holds but d={d} gives no witness")
        n = isqrt(q // d)
        if d * n * n != q or (q1 + 1) % (d * n):
            raise ArithmeticError(f"{s}: no integer (n, a) with q = d n^2, q1 = d n a - 1")
        a = (q1 + 1) // (d * n)
        if not (n > a > 0) or gcd(n, a) != 1:
            raise ArithmeticError(f"{s}: witness n={n}, a={a} violates n > a > 0, gcd 1")
        return Classification("T", witness=TdWitness(d, n, a))
    return Classification("Other")


def td_seed(d: int) -> HJString:
    if d < 1:
        raise ValueError("d must be positive")
    if d == 1:
        return HJString((4,))
    if d == 2:
        return HJString((3, 3))
    return HJString((3,) + (2,) * (d - 2) + (3,))


def generate_Td(d: int, max_len: int, max_q: int | None = None) -> list[HJString]:
    """All T_d strings of length <= max_len, both orientations, sorted by (length, entries).

    ``max_q`` also bounds the order; tau raises q and reverse keeps it, so pruning is exact.
    """
    seed = td_seed(d)
    if max_len < len(seed):
        raise ValueError(f"max_len={max_len} is shorter than the T_{d} seed {seed}")
    seen = {seed}
    queue = deque([seed])
    while queue:
        s = queue.popleft()
        for t in (reverse(s), tau(s)):
            if len(t) <= max_len and (max_q is None or t.q <= max_q) and t not in seen:
                seen.add(t)
                queue.append(t)
    return sorted(seen)


def discrepancies(s, u: Fraction | int = 0, v: Fraction | int = 0) -> list[Fraction]:
    """Closed-form solution ``a_1..a_l`` of ``M a = -(n - 2 + boundary terms)``.

    ``u`` enters the first equation and ``v`` the last; cyclic quotient
    singularities use ``u = v = 0``.
    """
    s = _as_hj(s)
    e = s.entries
    q = s.q
    if q == 0:
        raise ZeroDivisionError("degenerate chain (q = 0)")
    u, v = Fraction(u), Fraction(v)
    l = len(e)
    # tails[i] = det of entries i+1..l (1-based), heads[i] = det of entries 1..i-1
    tails = [chain_det(e[i:]) for i in range(1, l + 1)]
    heads = [chain_det(e[: i - 1]) for i in range(1, l + 1)]
    return [1 - (1 - u) * Fraction(t, q) - (1 - v) * Fraction(h, q) for t, h in zip(tails, heads)]


def dp_squared_cyclic(s) -> Fraction:
    s = _as_hj(s)
    if len(s) == 1:
        n = s.entries[0]
        return Fraction(-((n - 2) ** 2), n)
    l = len(s)
    return 2 * l - sum(s.entries) + 2 - Fraction(s.q1 + s.ql + 2, s.q)


def tridiagonal_gram(entries: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    l = len(entries)
    rows = []
    for i in range(l):
        row = [0] * l
        row[i] = -entries[i]
        if i:
            row[i - 1] = 1
        if i + 1 < l:
            row[i + 1] = 1
        rows.append(tuple(row))
    return tuple(rows)
