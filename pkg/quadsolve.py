"""
Pierwiastki wielomianów kwadratowych modulo p oraz p^2.

f(X) = AX^2 + BX + C, D = B^2 - 4AC; wszędzie korzystamy z tożsamości
4A f(X) = (2AX + B)^2 - D.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from sympy import mod_inverse, multiplicity
from sympy import sqrt_mod as _sympy_sqrt_mod

from charsum import legendre
from errors import HypothesisViolated, LeadingCoeffDivisible, NotInvertible


@dataclass(frozen=True)
class QuadPoly:
    A: int
    B: int
    C: int

    @property
    def D(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def __call__(self, x: int) -> int:
        return (self.A * x + self.B) * x + self.C


class RootKind(Enum):
    EMPTY = "empty"
    PAIR = "pair"
    LINE = "line"


@dataclass(frozen=True)
class RootSetModP2:
    kind: RootKind
    elements: Tuple[int, ...]


class RLevel(Enum):
    """Wariant predykatu R(k)."""

    MOD_P = "mod_p"          # 2Ar+B = 0 (p^{k-1}), f(r) = 0 (p^k)
    ROOT_MOD_P2 = "root"     # 2Ar = -B (p^k), f(r) = 0 (p^{k+2})


# ============================================================================
# ARYTMETYKA MODULARNA
# ============================================================================

def inv_mod(a: int, modulus: int) -> int:
    try:
        return int(mod_inverse(a, modulus)) % modulus
    except ValueError:
        raise NotInvertible(f"{a} nie jest odwracalne modulo {modulus}") from None


def valuation(n: int, p: int) -> int:
    """v_p(n) dla n != 0."""
    if n == 0:
        raise ValueError("waluacja zera jest nieskończona")
    return int(multiplicity(p, abs(n)))


def sqrt_mod(n: int, modulus: int) -> Optional[int]:
    """Jeden pierwiastek kwadratowy n modulo p lub p^2; None dla niereszty."""
    root = _sympy_sqrt_mod(n % modulus, modulus)
    return None if root is None else int(root)


def sqrt_pair_unique(s1: int, s2: int, p: int) -> bool:
    """Dla jednostek s1^2 = s2^2 (p^2) sprawdza s1 = +-s2 (p^2)."""
    m = p * p
    if s1 % p == 0 or s2 % p == 0 or (s1 * s1 - s2 * s2) % m != 0:
        raise HypothesisViolated("wymagane jednostki s1, s2 z s1^2 = s2^2 (p^2)")
    return (s1 - s2) % m == 0 or (s1 + s2) % m == 0


def quad_identity_holds(f: QuadPoly, r: int) -> bool:
    return 4 * f.A * f(r) == (2 * f.A * r + f.B) ** 2 - f.D


# ============================================================================
# PIERWIASTKI MODULO p^2
# ============================================================================

def _vertex(f: QuadPoly, modulus: int) -> int:
    """-B (2A)^{-1} mod modulus."""
    return (-f.B * inv_mod(2 * f.A, modulus)) % modulus


def roots_mod_p2(f: QuadPoly, p: int) -> RootSetModP2:
    if f.A % p == 0:
        raise LeadingCoeffDivisible(f"p={p} dzieli współczynnik wiodący {f.A}")

    m = p * p
    D = f.D
    if D % p:
        s = sqrt_mod(D, m)
        if s is None:
            return RootSetModP2(RootKind.EMPTY, ())
        inv2a = inv_mod(2 * f.A, m)
        pair = sorted({(-f.B + s) * inv2a % m, (-f.B - s) * inv2a % m})
        return RootSetModP2(RootKind.PAIR, tuple(pair))
    if D % m:
        return RootSetModP2(RootKind.EMPTY, ())
    r0 = _vertex(f, m)
    return RootSetModP2(RootKind.LINE, tuple(sorted((r0 + p * y) % m for y in range(p))))


def roots_mod_p2_bruteforce(f: QuadPoly, p: int) -> Tuple[int, ...]:
    m = p * p
    return tuple(r for r in range(m) if f(r) % m == 0)


# ============================================================================
# PREDYKATY R(k)
# ============================================================================

def satisfies_R(f: QuadPoly, r: int, k: int, level: RLevel, p: int) -> bool:
    if f.A % p == 0:
        raise HypothesisViolated("wymagane (A,p)=1")
    if k not in (1, 2):
        raise HypothesisViolated(f"k musi należeć do {{1, 2}}, otrzymano {k}")

    level = RLevel(level)
    if level is RLevel.MOD_P:
        return (2 * f.A * r + f.B) % p ** (k - 1) == 0 and f(r) % p ** k == 0

    if f(r) % (p * p):
        raise HypothesisViolated(f"r={r} nie jest pierwiastkiem f modulo p^2")
    return (2 * f.A * r + f.B) % p ** k == 0 and f(r) % p ** (k + 2) == 0


def r_closed_form(f: QuadPoly, k: int, level: RLevel, p: int) -> List[int]:
    """Zbiór rozwiązań R(k) z postaci zamkniętej (mod p lub mod p^2)."""
    level = RLevel(level)
    D = f.D

    if level is RLevel.MOD_P:
        if D % p:
            if legendre(D, p) == -1 or k == 2:
                return []
            s = sqrt_mod(D, p)
            inv2a = inv_mod(2 * f.A, p)
            return sorted({(-f.B + s) * inv2a % p, (-f.B - s) * inv2a % p})
        if D % (p * p) and k == 2:
            return []
        return [_vertex(f, p)]

    m = p * p
    if D % m:
        # p nie dzieli D albo p || D
        return []
    r0 = _vertex(f, m)
    if D % p ** 3:
        if k == 2:
            return []
        target = D // m
        return sorted(
            (r0 + p * y) % m
            for y in range(p)
            if ((2 * f.A * y) ** 2 - target) % p == 0
        )
    if D % p ** 4 and k == 2:
        return []
    return [r0]
