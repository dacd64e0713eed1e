"""
Charakter kwadratowy mod p, sumy Gaussa i sumy charakterów.

Wartości W(chi) nigdy nie są liczone numerycznie: W(chi, a) = chi(a) W(chi)
przenoszone jest symbolicznie. Dokładne sumy Gaussa liczone są w pierścieniu
liczb cyklotomicznych Z[zeta_p].
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Tuple, Union

from sympy import Poly, cyclotomic_poly, isprime, legendre_symbol, symbols

from errors import BothVanish, HypothesisViolated, InvalidPrime, NonPIntegral

_ZETA = symbols("zeta")


# ============================================================================
# CHARAKTER KWADRATOWY
# ============================================================================

def require_odd_prime(p: int) -> int:
    if not isinstance(p, int) or p < 3 or not isprime(p):
        raise InvalidPrime(f"p musi być nieparzystą liczbą pierwszą, otrzymano {p}")
    return p


def legendre(a: int, p: int) -> int:
    """Symbol Legendre'a (a/p); 0 gdy p | a."""
    return int(legendre_symbol(a % p, p))


def chi_prod(p: int, *factors: int) -> int:
    """chi(f1*f2*...) liczone czynnik po czynniku."""
    value = 1
    for factor in factors:
        value *= legendre(factor, p)
        if value == 0:
            return 0
    return value


def chi_rational(q: Union[int, Fraction], p: int) -> int:
    q = Fraction(q)
    if q.denominator % p == 0:
        raise NonPIntegral(f"{q} nie jest p-całkowite dla p={p}")
    # chi(d^{-1}) = chi(d)
    return legendre(q.numerator, p) * legendre(q.denominator, p)


@dataclass(frozen=True)
class QuadChar:
    """Nietrywialny kwadratowy charakter Dirichleta mod p."""

    p: int

    def __post_init__(self):
        require_odd_prime(self.p)

    def __call__(self, *factors: int) -> int:
        return chi_prod(self.p, *factors)

    def of_rational(self, q: Union[int, Fraction]) -> int:
        return chi_rational(q, self.p)


# ============================================================================
# SUMY GAUSSA
# ============================================================================

class GaussCharacter(Enum):
    TRIVIAL = "trivial"
    CHI = "chi"


@dataclass(frozen=True)
class GaussSymbolic:
    """plain + w_chi_multiplier * W(chi)."""

    w_chi_multiplier: int
    plain: Fraction = Fraction(0)


def gauss_trivial(a: int, p: int) -> int:
    """W(1, a): p-1 gdy p | a, w przeciwnym razie -1."""
    return p - 1 if a % p == 0 else -1


def gauss_chi(a: int, p: int) -> GaussSymbolic:
    return GaussSymbolic(w_chi_multiplier=legendre(a, p))


@dataclass(frozen=True)
class CyclotomicInt:
    """
    Element Z[zeta_p] zapisany w bazie 1, zeta, ..., zeta^{p-2}.

    Postać kanoniczna otrzymywana jest jako reszta z dzielenia przez
    wielomian cyklotomiczny Phi_p, więc równość to równość współczynników.
    """

    p: int
    coeffs: Tuple[int, ...]

    @classmethod
    def from_exponents(cls, p: int, exponents: Iterable[int]) -> "CyclotomicInt":
        """Buduje element z wektora współczynników przy zeta^0..zeta^n."""
        poly = Poly(list(reversed(list(exponents))) or [0], _ZETA)
        return cls._from_poly(p, poly)

    @classmethod
    def _from_poly(cls, p: int, poly: Poly) -> "CyclotomicInt":
        remainder = poly.rem(Poly(cyclotomic_poly(p, _ZETA), _ZETA))
        low_first = [int(c) for c in reversed(remainder.all_coeffs())]
        low_first += [0] * (p - 1 - len(low_first))
        return cls(p, tuple(low_first[: p - 1]))

    @classmethod
    def constant(cls, p: int, value: int) -> "CyclotomicInt":
        return cls.from_exponents(p, [value])

    def _poly(self) -> Poly:
        return Poly(list(reversed(self.coeffs)), _ZETA)

    def _check(self, other: "CyclotomicInt"):
        if other.p != self.p:
            raise ValueError("elementy z różnych ciał cyklotomicznych")

    def __add__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        self._check(other)
        return CyclotomicInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CyclotomicInt":
        return CyclotomicInt(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        return self + (-other)

    def __mul__(self, other: Union["CyclotomicInt", int]) -> "CyclotomicInt":
        if isinstance(other, int):
            return CyclotomicInt(self.p, tuple(a * other for a in self.coeffs))
        self._check(other)
        return self._from_poly(self.p, self._poly() * other._poly())

    __rmul__ = __mul__

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self} nie jest liczbą całkowitą")
        return self.coeffs[0]

    def __str__(self):
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


def gauss_bruteforce(xi: GaussCharacter, a: int, p: int) -> CyclotomicInt:
    """Dokładna suma W(xi, a) = sum_b xi(b) zeta^{ab}."""
    xi = GaussCharacter(xi)
    exponents = [0] * p
    for b in range(1, p):
        weight = 1 if xi is GaussCharacter.TRIVIAL else legendre(b, p)
        exponents[(a * b) % p] += weight
    return CyclotomicInt.from_exponents(p, exponents)


# ============================================================================
# SUMY CHARAKTERÓW: POSTACI ZAMKNIĘTE
# ============================================================================

def sum_chi_quadratic(A: int, B: int, C: int, p: int) -> int:
    """sum_{x mod p} chi(Ax^2 + Bx + C)."""
    if A % p == 0 and B % p == 0:
        raise BothVanish(f"A i B podzielne przez p={p}")
    if A % p == 0:
        return 0
    D = B * B - 4 * A * C
    if D % p == 0:
        return (p - 1) * legendre(A, p)
    return -legendre(A, p)


def sum_chi_linear_pair(a1: int, b1: int, a2: int, b2: int, p: int) -> int:
    """sum_{x mod p} chi(a1 x + b1) chi(a2 x + b2) dla a1, a2 odwracalnych."""
    if a1 % p == 0 or a2 % p == 0:
        raise HypothesisViolated("a1 i a2 muszą być odwracalne mod p")
    sign = legendre(a1 * a2, p)
    if (a1 * b2 - a2 * b1) % p == 0:
        return (p - 1) * sign
    return -sign


def sum_ms(A: int, B: int, C: int, p: int) -> int:
    if A % p == 0 or (B * B - 4 * A * C) % p != 0:
        raise HypothesisViolated("wymagane (A,p)=1 oraz B^2-4AC = 0 (p)")
    return legendre(C, p) + legendre(-C, p)


def sum_mm(A: int, B: int, C: int, p: int) -> int:
    """
    Postać zamknięta sumy
    M = sum_{b,x,y in (Z/p)^x, x,y != 1} chi(y(1-x)(A(1-y)^{-1}(y-x)b^2 - Bb - Cx^{-1})).
    """
    A, B, C = A % p, B % p, C % p
    chi_a, chi_minus_a, chi_c = legendre(A, p), legendre(-A, p), legendre(C, p)
    chi_d = legendre(B * B - 4 * A * C, p)

    if A:
        if B and C:
            if chi_d == 0:
                return -2 * chi_c - chi_minus_a
            if chi_d == -1:
                return (p - 1) * chi_c - chi_minus_a + (p - 1) * chi_a
            return -(p + 1) * chi_c - chi_minus_a - (p + 1) * chi_a
        if B:
            return -chi_minus_a - chi_a
        if C:
            if chi_d == 1:
                return -2 * chi_c - (p + 1) * chi_a
            return (p - 1) * chi_a
        return (p - 1) * chi_minus_a + (p - 1) * chi_a
    if B:
        return -chi_c if C else 0
    # A = B = 0 (p)
    return (p - 1) * chi_c


# ============================================================================
# SUMY CHARAKTERÓW: BEZPOŚREDNIE SUMOWANIE
# ============================================================================

def _units_except_one(p: int) -> range:
    return range(2, p)


def sum_chi_quadratic_bruteforce(A: int, B: int, C: int, p: int) -> int:
    return sum(legendre(A * x * x + B * x + C, p) for x in range(p))


def sum_chi_linear_pair_bruteforce(a1: int, b1: int, a2: int, b2: int, p: int) -> int:
    return sum(legendre(a1 * x + b1, p) * legendre(a2 * x + b2, p) for x in range(p))


def _mm_summand(A: int, B: int, C: int, b: int, x: int, y: int, p: int) -> int:
    inner = A * pow(1 - y, -1, p) * (y - x) * b * b - B * b - C * pow(x, -1, p)
    return chi_prod(p, y, 1 - x, inner)


def sum_mm_bruteforce(A: int, B: int, C: int, p: int) -> int:
    return sum(
        _mm_summand(A, B, C, b, x, y, p)
        for b in range(1, p)
        for x in _units_except_one(p)
        for y in _units_except_one(p)
    )


def sum_ms_bruteforce(A: int, B: int, C: int, p: int) -> Tuple[int, int]:
    """Obie sumy ograniczone: po b = -B(2A)^{-1} oraz po pierwiastkach f(b) = 0 (p)."""
    if A % p == 0:
        raise HypothesisViolated("wymagane (A,p)=1")
    root = (-B * pow(2 * A, -1, p)) % p
    linear = sum(
        _mm_summand(A, B, C, root, x, y, p)
        for x in _units_except_one(p)
        for y in _units_except_one(p)
    ) if root else 0

    roots = [b for b in range(1, p) if (A * b * b + B * b + C) % p == 0]
    restricted = sum(
        chi_prod(p, y, A * pow(1 - y, -1, p) * b * b - C * pow(x, -1, p))
        for b in roots
        for x in _units_except_one(p)
        for y in _units_except_one(p)
    )
    return linear, restricted
