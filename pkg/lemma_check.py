"""
Porównanie postaci zamkniętych sum charakterów i zbiorów pierwiastków
z bezpośrednim przeliczeniem.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

from charsum import (
    GaussCharacter, gauss_bruteforce, gauss_trivial, legendre, sum_chi_linear_pair,
    sum_chi_linear_pair_bruteforce, sum_chi_quadratic, sum_chi_quadratic_bruteforce, sum_mm,
    sum_mm_bruteforce, sum_ms, sum_ms_bruteforce,
)
from quadsolve import (
    QuadPoly, RLevel, quad_identity_holds, roots_mod_p2, roots_mod_p2_bruteforce, r_closed_form,
    satisfies_R, sqrt_mod, sqrt_pair_unique,
)

logger = logging.getLogger(__name__)

LEMMAS = ("jlemma", "p22", "a2", "quadeq", "ccond", "ms", "mm")

# powyżej tej liczby pierwszej sprawdzenia mod p^2 są losowane
EXHAUSTIVE_P2_LIMIT = 5


@dataclass(frozen=True)
class LemmaResult:
    name: str
    p: int
    checked: int
    counterexample: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


class _Sampler:
    """Wszystkie trójki reszt albo losowa próbka."""

    def __init__(self, exhaustive: bool, samples: int, rng: random.Random):
        self.exhaustive = exhaustive
        self.samples = samples
        self.rng = rng

    def triples(self, moduli: Sequence[int], exhaustive: Optional[bool] = None) -> Iterator[Tuple[int, ...]]:
        if self.exhaustive if exhaustive is None else exhaustive:
            yield from itertools.product(*(range(m) for m in moduli))
            return
        for _ in range(self.samples):
            yield tuple(self.rng.randrange(m) for m in moduli)


def _run(name: str, p: int, cases: Iterable, test: Callable) -> LemmaResult:
    checked = 0
    for case in cases:
        failure = test(*case)
        checked += 1
        if failure:
            logger.error("Lemat %s nie zgadza się dla p=%d: %s", name, p, failure)
            return LemmaResult(name, p, checked, failure)
    logger.debug("Lemat %s: p=%d, sprawdzono %d przypadków", name, p, checked)
    return LemmaResult(name, p, checked)


# ============================================================================
# POSZCZEGÓLNE LEMATY
# ============================================================================

def check_jlemma(p: int, sampler: _Sampler) -> LemmaResult:
    def test(A, B, C):
        if A % p == 0 and B % p == 0:
            return None
        closed, brute = sum_chi_quadratic(A, B, C, p), sum_chi_quadratic_bruteforce(A, B, C, p)
        if closed != brute:
            return f"A={A} B={B} C={C}: {closed} != {brute}"
        a1, b1, a2, b2 = A or 1, B, C or 1, A
        closed = sum_chi_linear_pair(a1, b1, a2, b2, p)
        brute = sum_chi_linear_pair_bruteforce(a1, b1, a2, b2, p)
        if closed != brute:
            return f"a1={a1} b1={b1} a2={a2} b2={b2}: {closed} != {brute}"
        return None

    return _run("jlemma", p, sampler.triples([p, p, p]), test)


def check_p22(p: int, sampler: _Sampler) -> LemmaResult:
    m = p * p
    units = [s for s in range(1, m) if s % p]

    def test(n):
        if n % p == 0:
            return None
        root = sqrt_mod(n, m)
        squares = [s for s in units if (s * s - n) % m == 0]
        if root is None:
            return f"n={n}: brak pierwiastka, a istnieją {squares}" if squares else None
        if sorted({root % m, -root % m}) != squares:
            return f"n={n}: pierwiastki {squares} != +-{root}"
        if not all(sqrt_pair_unique(root, s, p) for s in squares):
            return f"n={n}: pierwiastki nie różnią się znakiem"
        return None

    return _run("p22", p, ((n,) for n in range(m)), test)


def _polys_mod_p2(p: int, sampler: _Sampler) -> Iterator[Tuple[int, int, int]]:
    exhaustive = sampler.exhaustive and p <= EXHAUSTIVE_P2_LIMIT
    for A, B, C in sampler.triples([p * p] * 3, exhaustive=exhaustive):
        if A % p:
            yield A, B, C


def check_a2(p: int, sampler: _Sampler) -> LemmaResult:
    def test(A, B, C):
        f = QuadPoly(A, B, C)
        if not all(quad_identity_holds(f, r) for r in range(p * p)):
            return f"f={f}: tożsamość 4Af = (2AX+B)^2 - D nie zachodzi"
        for k in (1, 2):
            literal = [r for r in range(p) if satisfies_R(f, r, k, RLevel.MOD_P, p)]
            lifted = [r for r in range(p * p) if satisfies_R(f, r, k, RLevel.MOD_P, p)]
            if sorted({r % p for r in lifted}) != literal or len(lifted) != p * len(literal):
                return f"f={f}, k={k}: R(k) zależy od reprezentanta mod p"
            closed = r_closed_form(f, k, RLevel.MOD_P, p)
            if literal != closed:
                return f"f={f}, k={k}: {literal} != {closed}"
        return None

    return _run("a2", p, _polys_mod_p2(p, sampler), test)


def check_quadeq(p: int, sampler: _Sampler) -> LemmaResult:
    def test(A, B, C):
        f = QuadPoly(A, B, C)
        closed, brute = roots_mod_p2(f, p).elements, roots_mod_p2_bruteforce(f, p)
        return None if closed == brute else f"f={f}: {closed} != {brute}"

    return _run("quadeq", p, _polys_mod_p2(p, sampler), test)


def _ccond_family(p: int) -> Iterator[Tuple[int, int, int]]:
    """Wielomiany o zadanej waluacji wyróżnika: D = p^j u, j = 0..4 (oraz D = 0 mod p^4)."""
    p4 = p ** 4
    for A in range(1, p):
        inv4a = pow(4 * A, -1, p4)
        for B in range(p * p):
            for j in range(5):
                for u in range(1, p):
                    D = p ** j * u if j < 4 else 0
                    yield A, B, (B * B - D) * inv4a % p4


def check_ccond(p: int, sampler: _Sampler) -> LemmaResult:
    def test(A, B, C):
        f = QuadPoly(A, B, C)
        roots = roots_mod_p2_bruteforce(f, p)
        for k in (1, 2):
            literal = [r for r in roots if satisfies_R(f, r, k, RLevel.ROOT_MOD_P2, p)]
            closed = r_closed_form(f, k, RLevel.ROOT_MOD_P2, p)
            if literal != closed:
                return f"f={f}, k={k}: {literal} != {closed}"
        return None

    return _run("ccond", p, _ccond_family(p), test)


def check_ms(p: int, sampler: _Sampler) -> LemmaResult:
    def test(A, B, C):
        if A % p == 0 or (B * B - 4 * A * C) % p:
            return None
        closed = sum_ms(A, B, C, p)
        linear, restricted = sum_ms_bruteforce(A, B, C, p)
        if not closed == linear == restricted:
            return f"A={A} B={B} C={C}: {closed}, {linear}, {restricted}"
        return None

    return _run("ms", p, sampler.triples([p, p, p]), test)


def check_mm(p: int, sampler: _Sampler) -> LemmaResult:
    def test(A, B, C):
        closed, brute = sum_mm(A, B, C, p), sum_mm_bruteforce(A, B, C, p)
        return None if closed == brute else f"A={A} B={B} C={C}: {closed} != {brute}"

    return _run("mm", p, sampler.triples([p, p, p]), test)


def check_gauss(p: int, sampler: _Sampler) -> LemmaResult:
    base = gauss_bruteforce(GaussCharacter.CHI, 1, p)

    def test(a):
        twisted = gauss_bruteforce(GaussCharacter.CHI, a, p)
        if twisted != base * legendre(a, p):
            return f"a={a}: W(chi,a) != chi(a) W(chi)"
        trivial = gauss_bruteforce(GaussCharacter.TRIVIAL, a, p)
        if not trivial.is_rational() or trivial.rational_value() != gauss_trivial(a, p):
            return f"a={a}: W(1,a) = {trivial}"
        return None

    return _run("gauss", p, ((a,) for a in range(p)), test)


_CHECKS = {
    "jlemma": check_jlemma,
    "p22": check_p22,
    "a2": check_a2,
    "quadeq": check_quadeq,
    "ccond": check_ccond,
    "ms": check_ms,
    "mm": check_mm,
    "gauss": check_gauss,
}


def run_lemma_checks(
    primes: Iterable[int],
    exhaustive: bool = True,
    samples: int = 200,
    seed: int = 0,
    names: Sequence[str] = LEMMAS,
) -> List[LemmaResult]:
    """Uruchamia sprawdzenia; zatrzymuje się na pierwszym kontrprzykładzie."""
    sampler = _Sampler(exhaustive, samples, random.Random(seed))
    results = []
    for name in names:
        for p in primes:
            result = _CHECKS[name](p, sampler)
            results.append(result)
            if not result.ok:
                return results
    return results
