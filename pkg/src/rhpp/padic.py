"""Local invariants of rational diagonal quadratic forms.

Places are primes ``p`` (ints) or the string ``"inf"`` for the reals.
Square classes are canonical tuples, so equality of classes is structural:

* odd ``p``: (valuation parity, Legendre symbol of the unit part)
* ``p = 2``: (valuation parity, unit part mod 8)
* ``inf``: (0, sign)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import isqrt
from typing import Iterable, Sequence, Union

__all__ = [
    "INF",
    "DiagonalForm",
    "SquareClass",
    "LocalInvariants",
    "valuation",
    "unit_part",
    "legendre",
    "square_class",
    "hilbert",
    "d_p",
    "epsilon_p",
    "local_invariants",
    "locally_equivalent",
    "rationally_equivalent",
    "relevant_places",
    "prime_factors",
]

INF = "inf"
Place = Union[int, str]


@dataclass(frozen=True)
class DiagonalForm:
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a diagonal form needs at least one coefficient")
        if any(c == 0 for c in coeffs):
            raise ValueError("diagonal coefficients must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def parse(cls, text: str) -> "DiagonalForm":
        return cls(tuple(Fraction(tok.strip()) for tok in text.split(",") if tok.strip()))

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def det(self) -> Fraction:
        out = Fraction(1)
        for c in self.coefficients:
            out *= c
        return out

    def signature(self) -> tuple[int, int]:
        pos = sum(1 for c in self.coefficients if c > 0)
        return pos, self.rank - pos

    def __add__(self, other: "DiagonalForm") -> "DiagonalForm":
        return DiagonalForm(self.coefficients + other.coefficients)

    def __str__(self) -> str:
        return "<" + ", ".join(str(c) for c in self.coefficients) + ">"


def _as_form(f) -> DiagonalForm:
    return f if isinstance(f, DiagonalForm) else DiagonalForm(tuple(f))


@lru_cache(maxsize=None)
def _check_place(p: Place) -> None:
    if p == INF:
        return
    if not isinstance(p, int) or p < 2 or any(p % k == 0 for k in range(2, isqrt(p) + 1)):
        raise ValueError(f"not a place: {p!r}")


def _vint(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def valuation(x, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    return _vint(x.numerator, p)[0] - _vint(x.denominator, p)[0]


def unit_part(x, p: int) -> tuple[int, int]:
    """``(numerator, denominator)`` of ``x / p^v(x)``, both prime to p."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("unit part of zero")
    return _vint(x.numerator, p)[1], _vint(x.denominator, p)[1]


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class SquareClass:
    place: Place
    parity: int
    unit: int

    def label(self) -> str:
        """Human-readable class, e.g. ``2·3^odd`` for unit class 2 and odd valuation."""
        if self.place == INF:
            return "+" if self.unit > 0 else "-"
        if self.place == 2:
            rep = f"{self.unit}"
        elif self.unit == 1:
            rep = "1"
        else:
            p = self.place
            rep = str(next(x for x in range(2, p) if legendre(x, p) == -1))
        exp = "odd" if self.parity else "even"
        return f"{rep}·{self.place}^{exp}"

    def as_dict(self) -> dict:
        return {"place": self.place, "parity": self.parity, "unit": self.unit, "label": self.label()}


def square_class(x, p: Place) -> SquareClass:
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    _check_place(p)
    if p == INF:
        return SquareClass(INF, 0, 1 if x > 0 else -1)
    parity = valuation(x, p) & 1
    num, den = unit_part(x, p)
    if p == 2:
        # den is odd, so den^2 = 1 mod 8 and num/den = num*den mod 8
        return SquareClass(2, parity, (num * den) % 8)
    return SquareClass(p, parity, legendre(num, p) * legendre(den, p))


def _eps2(u: int) -> int:
    return ((u - 1) // 2) & 1


def _omega2(u: int) -> int:
    return ((u * u - 1) // 8) & 1


def hilbert(a, b, p: Place) -> int:
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    _check_place(p)
    if p == INF:
        return -1 if (a < 0 and b < 0) else 1
    ca, cb = square_class(a, p), square_class(b, p)
    alpha, beta = ca.parity, cb.parity
    if p == 2:
        u, v = ca.unit, cb.unit
        e = _eps2(u) * _eps2(v) + alpha * _omega2(v) + beta * _omega2(u)
        return -1 if e & 1 else 1
    rho = ((p - 1) // 2) & 1
    sign = -1 if (alpha * beta * rho) & 1 else 1
    if beta:
        sign *= ca.unit
    if alpha:
        sign *= cb.unit
    return sign


def d_p(f, p: Place) -> SquareClass:
    return square_class(_as_form(f).det(), p)


def epsilon_p(f, p: Place) -> int:
    coeffs = _as_form(f).coefficients
    out = 1
    for a, b in combinations(coeffs, 2):
        out *= hilbert(a, b, p)
    return out


@dataclass(frozen=True)
class LocalInvariants:
    place: Place
    rank: int
    d_class: SquareClass
    epsilon: int
    signature: tuple[int, int] | None = None

    def as_dict(self) -> dict:
        out = {
            "place": self.place,
            "rank": self.rank,
            "d_class": self.d_class.as_dict(),
            "epsilon": self.epsilon,
        }
        if self.signature is not None:
            out["signature"] = list(self.signature)
        return out


def local_invariants(f, p: Place) -> LocalInvariants:
    f = _as_form(f)
    sig = f.signature() if p == INF else None
    return LocalInvariants(p, f.rank, d_p(f, p), epsilon_p(f, p), sig)


def locally_equivalent(f, g, p: Place) -> bool:
    a, b = local_invariants(f, p), local_invariants(g, p)
    if p == INF:
        return a.signature == b.signature
    return (a.rank, a.d_class, a.epsilon) == (b.rank, b.d_class, b.epsilon)


def prime_factors(n: int) -> list[int]:
    n = abs(int(n))
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1 if k == 2 else 2
    if n > 1:
        out.append(n)
    return out


def relevant_places(*forms: Iterable) -> list[Place]:
    """``inf``, 2 and every odd prime dividing a numerator or denominator."""
    primes = {2}
    for f in forms:
        for c in _as_form(f).coefficients:
            primes.update(prime_factors(c.numerator))
            primes.update(prime_factors(c.denominator))
    return [INF] + sorted(primes)


def rationally_equivalent(f, g, detail: bool = False):
    """Hasse-Minkowski test over the finite set of places where the forms can differ.

    With ``detail=True`` returns ``(verdict, failing_places)``.
    """
    f, g = _as_form(f), _as_form(g)
    if f.rank != g.rank:
        return (False, [INF]) if detail else False
    failing = [p for p in relevant_places(f, g) if not locally_equivalent(f, g, p)]
    if detail:
        return not failing, failing
    return not failing


def diag(*coeffs) -> DiagonalForm:
    return DiagonalForm(tuple(coeffs))


def forms_sum(forms: Sequence[DiagonalForm]) -> DiagonalForm:
    out = ()
    for f in forms:
        out += _as_form(f).coefficients
    return DiagonalForm(out)
