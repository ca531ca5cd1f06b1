"""Quotient surface singularities: cyclic, dihedral and polyhedral (star-shaped) graphs.

The non-cyclic types are described by Brieskorn's table: a central curve of
self-intersection ``-b`` with three Hirzebruch-Jung arms ``<s, t>``.  An arm
``<s, t>`` is the string ``hj_expand(s, t)`` whose *first* entry meets the
central curve.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Union

from . import linalg
from .hjcf import HJString, discrepancies, dp_squared_cyclic, hj_expand, reverse

__all__ = [
    "StarRow",
    "STAR_ROWS",
    "STAR_KS2",
    "Cyclic",
    "Dihedral",
    "Polyhedral",
    "QuotientSingularity",
    "SingularityInvariants",
    "star_row",
    "group_order",
    "gram_of",
    "det_R_dihedral",
    "dihedral_closed_form",
    "generic_discrepancies",
    "discrepancy_and_dp2",
    "invariants",
    "ks2_star",
    "ks2_pipeline",
    "star_bounds_hold",
    "enumerate_cyclic_of_order",
    "enumerate_noncyclic_of_order",
    "m_matches_graph",
    "parse_singularity",
]


@dataclass(frozen=True)
class StarRow:
    kind: str  # "T", "O" or "I"
    row: int  # 1-based position within the kind
    arms: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]
    m_coef: int  # m = m_coef * (b - 2) + m_const
    m_const: int
    order_factor: int  # |G| = order_factor * m

    @property
    def row_id(self) -> str:
        return f"{self.kind}{self.row}"

    def m(self, b: int) -> int:
        return self.m_coef * (b - 2) + self.m_const

    def graph_label(self) -> str:
        return "<b;" + ";".join(f"{s},{t}" for s, t in self.arms) + ">"


def _rows(kind, factor, coef, data):
    return [StarRow(kind, i, ((2, 1),) + arms, coef, const, factor) for i, (arms, const) in enumerate(data, 1)]


STAR_ROWS: tuple[StarRow, ...] = tuple(
    _rows("T", 24, 6, [(((3, 2), (3, 2)), 1), (((3, 1), (3, 1)), 5), (((3, 1), (3, 2)), 3)])
    + _rows(
        "O",
        48,
        12,
        [(((3, 2), (4, 3)), 1), (((3, 1), (4, 3)), 5), (((3, 2), (4, 1)), 7), (((3, 1), (4, 1)), 11)],
    )
    + _rows(
        "I",
        120,
        30,
        [
            (((3, 2), (5, 4)), 1),
            (((3, 2), (5, 3)), 7),
            (((3, 1), (5, 4)), 11),
            (((3, 2), (5, 2)), 13),
            (((3, 1), (5, 3)), 17),
            (((3, 2), (5, 1)), 19),
            (((3, 1), (5, 2)), 23),
            (((3, 1), (5, 1)), 29),
        ],
    )
)

# K_S^2 for 4A_1 + (star row), as (numerator coefficients in b, denominator coefficients)
# plus the threshold bounds for each closed form: (b_lo, b_hi or None, relation, value)
STAR_KS2: dict[str, dict] = {
    "T1": {"num": (6, -30, 35), "den": (6, -11), "claims": [(2, 3, "<=", Fraction(-1, 7)), (4, None, ">=", Fraction(11, 13))]},
    "T2": {"num": (6, -6, -1), "den": (6, -7), "claims": [(2, None, ">=", Fraction(11, 5))]},
    "T3": {"num": (18, -54, 41), "den": (18, -27), "claims": [(2, None, ">=", Fraction(5, 9))]},
    "O1": {"num": (12, -72, 94), "den": (12, -23), "claims": [(2, 4, "<=", Fraction(-2, 25)), (5, None, ">=", Fraction(34, 37))]},
    "O2": {"num": (12, -48, 46), "den": (12, -19), "claims": [(2, 2, "==", Fraction(-2, 5)), (3, None, ">=", Fraction(10, 17))]},
    "O3": {"num": (12, -24, 10), "den": (12, -17), "claims": [(2, None, ">=", Fraction(10, 7))]},
    "O4": {"num": (12, 0, -14), "den": (12, -13), "claims": [(2, None, ">=", Fraction(34, 11))]},
    "I1": {"num": (30, -210, 297), "den": (30, -59), "claims": [(2, 5, "<=", Fraction(-3, 91)), (6, None, ">=", Fraction(117, 121))]},
    "I2": {"num": (30, -126, 129), "den": (30, -53), "claims": [(2, 2, "==", Fraction(-3, 7)), (3, None, ">=", Fraction(21, 37))]},
    "I3": {"num": (30, -150, 165), "den": (30, -49), "claims": [(2, 3, "<=", Fraction(-15, 41)), (4, None, ">=", Fraction(45, 71))]},
    "I4": {"num": (30, -114, 105), "den": (30, -47), "claims": [(2, 2, "==", Fraction(-3, 13)), (3, None, ">=", Fraction(33, 43))]},
    "I5": {"num": (30, -66, 33), "den": (30, -43), "claims": [(2, None, ">=", Fraction(21, 17))]},
    "I6": {"num": (30, -30, -15), "den": (30, -41), "claims": [(2, None, ">=", Fraction(45, 19))]},
    "I7": {"num": (30, -54, 21), "den": (30, -37), "claims": [(2, None, ">=", Fraction(33, 23))]},
    "I8": {"num": (30, 30, -63), "den": (30, -31), "claims": [(2, None, ">=", Fraction(117, 29))]},
}


def star_row(kind: str, row: int) -> StarRow:
    for r in STAR_ROWS:
        if r.kind == kind and r.row == row:
            return r
    raise ValueError(f"no star row {kind}{row}")


def _chain_gram(edges: list[tuple[int, int]], weights: list[int]):
    n = len(weights)
    g = [[0] * n for _ in range(n)]
    for i, w in enumerate(weights):
        g[i][i] = -w
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return tuple(tuple(row) for row in g)


def _star_gram(b: int, arms: Sequence[HJString]):
    """Vertices: arm 1 and arm 2 from tip to centre, the centre, then arm 3 outward."""
    weights: list[int] = []
    edges: list[tuple[int, int]] = []
    attach = []
    for arm in arms[:2]:
        start = len(weights)
        weights.extend(reversed(arm.entries))
        edges.extend((k, k + 1) for k in range(start, len(weights) - 1))
        attach.append(len(weights) - 1)
    centre = len(weights)
    weights.append(b)
    edges.extend((a, centre) for a in attach)
    prev = centre
    for n in arms[2].entries:
        weights.append(n)
        edges.append((prev, len(weights) - 1))
        prev = len(weights) - 1
    return _chain_gram(edges, weights)


@dataclass(frozen=True)
class Cyclic:
    q: int
    q1: int

    def __post_init__(self):
        if not (self.q > self.q1 >= 1) or gcd(self.q, self.q1) != 1:
            raise ValueError(f"cyclic type needs q > q1 >= 1 coprime, got ({self.q}, {self.q1})")

    @classmethod
    def from_string(cls, s) -> "Cyclic":
        s = s if isinstance(s, HJString) else HJString(tuple(s))
        return cls(s.q, s.q1)

    @property
    def string(self) -> HJString:
        return hj_expand(self.q, self.q1)

    @property
    def is_rdp(self) -> bool:
        return all(n == 2 for n in self.string)

    def label(self) -> str:
        s = self.string
        if all(n == 2 for n in s):
            return f"A{len(s)}"
        if len(s) == 1:
            return f"diag(-{s[0]})"
        return f"HJ{s}"


@dataclass(frozen=True)
class Dihedral:
    b: int
    arm: HJString

    def __post_init__(self):
        arm = self.arm if isinstance(self.arm, HJString) else HJString(tuple(self.arm))
        object.__setattr__(self, "arm", arm)
        if self.b < 2:
            raise ValueError("central curve needs b >= 2")
        if self.m < 1:
            raise ValueError("m = (b-1)q - q1 must be positive")

    @property
    def m(self) -> int:
        return (self.b - 1) * self.arm.q - self.arm.q1

    @property
    def is_rdp(self) -> bool:
        return self.b == 2 and all(n == 2 for n in self.arm)

    def label(self) -> str:
        if self.is_rdp:
            return f"D{len(self.arm) + 3}"
        return f"D(b={self.b};{self.arm})"


@dataclass(frozen=True)
class Polyhedral:
    kind: str
    b: int
    row: int

    def __post_init__(self):
        if self.b < 2:
            raise ValueError("central curve needs b >= 2")
        star_row(self.kind, self.row)

    @property
    def star_row(self) -> StarRow:
        return star_row(self.kind, self.row)

    @property
    def arms(self) -> tuple[HJString, HJString, HJString]:
        return tuple(hj_expand(s, t) for s, t in self.star_row.arms)

    @property
    def m(self) -> int:
        return self.star_row.m(self.b)

    @property
    def is_rdp(self) -> bool:
        return self.b == 2 and self.m == 1

    def label(self) -> str:
        if self.is_rdp:
            return {"T": "E6", "O": "E7", "I": "E8"}[self.kind]
        return f"Star(kind={self.kind};b={self.b};row={self.row})"


QuotientSingularity = Union[Cyclic, Dihedral, Polyhedral]


@dataclass(frozen=True)
class SingularityInvariants:
    group_order: int
    rank: int
    det_R: int
    discrepancy: tuple[Fraction, ...]
    dp2: Fraction


def group_order(s: QuotientSingularity) -> int:
    if isinstance(s, Cyclic):
        return s.q
    if isinstance(s, Dihedral):
        return 4 * s.m * s.arm.q
    if isinstance(s, Polyhedral):
        row = s.star_row
        return row.order_factor * row.m(s.b)
    raise TypeError(f"not a quotient singularity: {s!r}")


def gram_of(s: QuotientSingularity):
    if isinstance(s, Cyclic):
        e = s.string.entries
        return _chain_gram([(i, i + 1) for i in range(len(e) - 1)], list(e))
    if isinstance(s, Dihedral):
        return _star_gram(s.b, [HJString((2,)), HJString((2,)), s.arm])
    if isinstance(s, Polyhedral):
        return _star_gram(s.b, s.arms)
    raise TypeError(f"not a quotient singularity: {s!r}")


def det_R_dihedral(b: int, arm) -> int:
    arm = arm if isinstance(arm, HJString) else HJString(tuple(arm))
    return (-1) ** (len(arm) + 3) * 4 * ((b - 1) * arm.q - arm.q1)


def dihedral_closed_form(b: int, arm) -> tuple[Fraction, Fraction]:
    """``(a_l, D_p^2)`` for a dihedral point; requires an arm of length >= 2."""
    arm = arm if isinstance(arm, HJString) else HJString(tuple(arm))
    l = len(arm)
    if l < 2:
        raise ValueError("closed form needs an arm of length >= 2")
    a_l = 1 - Fraction((b - 1) * arm.ql - arm.q1l, (b - 1) * arm.q - arm.q1)
    return a_l, 2 * l - sum(arm.entries) + a_l - (b - 2)


def generic_discrepancies(gram) -> tuple[list[Fraction], Fraction]:
    """Solve ``G a = -(n_i - 2)`` (adjunction) and return ``(a, D^2)``."""
    k = [-gram[i][i] - 2 for i in range(len(gram))]
    a = linalg.solve(gram, [-x for x in k])
    return a, -sum(ai * ki for ai, ki in zip(a, k))


def discrepancy_and_dp2(s: QuotientSingularity) -> tuple[list[Fraction], Fraction]:
    if isinstance(s, Cyclic):
        return discrepancies(s.string, 0, 0), dp_squared_cyclic(s.string)
    return generic_discrepancies(gram_of(s))


def invariants(s: QuotientSingularity) -> SingularityInvariants:
    a, dp2 = discrepancy_and_dp2(s)
    gram = gram_of(s)
    if isinstance(s, Cyclic):
        det = (-1) ** len(gram) * s.q
    elif isinstance(s, Dihedral):
        det = det_R_dihedral(s.b, s.arm)
    else:
        det = linalg.det_int(gram)
    return SingularityInvariants(group_order(s), len(gram), det, tuple(a), dp2)


def _poly(coefs: Sequence[int], b: int) -> int:
    out = 0
    for c in coefs:
        out = out * b + c
    return out


def ks2_star(kind: str, row: int | str, b: int) -> Fraction:
    """Closed-form K_S^2 of 4A_1 + (star point) from the tabulated rational functions."""
    row_id = row if isinstance(row, str) else f"{kind}{row}"
    if row_id not in STAR_KS2 or not row_id.startswith(kind):
        raise ValueError(f"unknown star row {row_id!r} for kind {kind}")
    if b < 2:
        raise ValueError("b must be >= 2")
    entry = STAR_KS2[row_id]
    return Fraction(_poly(entry["num"], b), _poly(entry["den"], b))


def ks2_pipeline(kind: str, row: int, b: int) -> Fraction:
    """Same quantity from the graph: 5 - rank(R_p) - D_p^2."""
    s = Polyhedral(kind, b, row)
    _, dp2 = discrepancy_and_dp2(s)
    return 5 - len(gram_of(s)) - dp2


def star_bounds_hold(row_id: str, b: int) -> bool:
    value = ks2_star(row_id[0], row_id, b)
    for lo, hi, rel, bound in STAR_KS2[row_id]["claims"]:
        if b < lo or (hi is not None and b > hi):
            continue
        ok = {"<=": value <= bound, ">=": value >= bound, "==": value == bound}[rel]
        if not ok:
            return False
    return True


def _canonical(s: HJString) -> HJString:
    r = reverse(s)
    return max(s, r, key=lambda x: x.entries)


def enumerate_cyclic_of_order(q: int, max_len: int | None = None) -> list[HJString]:
    """One string per {string, reverse} pair of order ``q``; the lexicographically larger is kept."""
    if q < 2:
        raise ValueError("order must be >= 2")
    out = set()
    for q1 in range(1, q):
        if gcd(q, q1) != 1:
            continue
        s = hj_expand(q, q1)
        if max_len is not None and len(s) > max_len:
            continue
        out.add(_canonical(s))
    return sorted(out)


def enumerate_noncyclic_of_order(h: int, max_len: int | None = None) -> list[QuotientSingularity]:
    """Every dihedral and polyhedral type whose group has order ``h``.

    Dihedral arms are taken up to nothing (arm orientation matters); arms
    longer than ``max_len`` are skipped.
    """
    out: list[QuotientSingularity] = []
    if h % 4 == 0:
        for q in range(2, h // 4 + 1):
            if (h // 4) % q:
                continue
            m = h // (4 * q)
            # q1 = (b-1) q - m must lie in [1, q-1]
            bm1 = -(-(m + 1) // q)
            q1 = bm1 * q - m
            if not (1 <= q1 <= q - 1) or gcd(q, q1) != 1:
                continue
            arm = hj_expand(q, q1)
            if max_len is not None and len(arm) > max_len:
                continue
            out.append(Dihedral(bm1 + 1, arm))
    for row in STAR_ROWS:
        if h % row.order_factor:
            continue
        m = h // row.order_factor
        if m < row.m_const or (m - row.m_const) % row.m_coef:
            continue
        out.append(Polyhedral(row.kind, (m - row.m_const) // row.m_coef + 2, row.row))
    return out


def m_matches_graph(row: StarRow, b: int) -> bool:
    """m equals lcm(s_i) * (b - sum t_i/s_i), the star-graph determinant formula."""
    s = [a for a, _ in row.arms]
    e = b - sum(Fraction(t, a) for a, t in row.arms)
    return lcm(*s) * e == row.m(b)


def parse_singularity(text: str) -> QuotientSingularity:
    """Parse ``A(q,q1)``, ``HJ[n1,...]``, ``D(b=B;[arm])`` or ``Star(kind=K;b=B;row=R)``."""
    t = text.strip().replace(" ", "")
    if t.startswith("HJ[") and t.endswith("]"):
        return Cyclic.from_string(HJString.parse(t[2:]))
    if t.startswith("A(") and t.endswith(")"):
        q, q1 = (int(x) for x in t[2:-1].split(","))
        return Cyclic(q, q1)
    if t.startswith("D(") and t.endswith(")"):
        fields = dict(part.split("=", 1) if "=" in part else ("arm", part) for part in t[2:-1].split(";"))
        return Dihedral(int(fields["b"]), HJString.parse(fields["arm"]))
    if t.startswith("Star(") and t.endswith(")"):
        fields = dict(part.split("=", 1) for part in t[5:-1].split(";"))
        return Polyhedral(fields["kind"], int(fields["b"]), int(fields["row"]))
    raise ValueError(f"unrecognised singularity spec {text!r}")
