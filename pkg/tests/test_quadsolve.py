import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from errors import HypothesisViolated, LeadingCoeffDivisible, NotInvertible
from quadsolve import (
    QuadPoly, RLevel, RootKind, inv_mod, quad_identity_holds, r_closed_form, roots_mod_p2,
    roots_mod_p2_bruteforce, satisfies_R, sqrt_mod, sqrt_pair_unique, valuation,
)


def test_inv_mod():
    assert inv_mod(2, 9) == 5
    with pytest.raises(NotInvertible):
        inv_mod(3, 9)
    with pytest.raises(ArithmeticError):
        inv_mod(0, 7)


def test_valuation():
    assert valuation(162, 3) == 4
    assert valuation(-27, 3) == 3
    assert valuation(7, 3) == 0
    with pytest.raises(ValueError):
        valuation(0, 3)


def test_sqrt_mod():
    root = sqrt_mod(7, 9)
    assert root * root % 9 == 7
    assert sqrt_mod(2, 9) is None


def test_sqrt_pair_unique():
    assert sqrt_pair_unique(4, 5, 3)
    assert sqrt_pair_unique(4, 4, 3)
    with pytest.raises(HypothesisViolated):
        sqrt_pair_unique(3, 6, 3)


def test_quad_identity():
    f = QuadPoly(3, -7, 11)
    assert all(quad_identity_holds(f, r) for r in range(-20, 20))


@pytest.mark.parametrize(
    "poly, kind, elements",
    [
        (QuadPoly(1, 0, -1), RootKind.PAIR, (1, 8)),
        (QuadPoly(1, 0, 0), RootKind.LINE, (0, 3, 6)),
        (QuadPoly(1, 0, -3), RootKind.EMPTY, ()),
        (QuadPoly(1, 0, -2), RootKind.EMPTY, ()),
    ],
)
def test_roots_mod_9(poly, kind, elements):
    roots = roots_mod_p2(poly, 3)
    assert roots.kind is kind
    assert roots.elements == elements


@pytest.mark.parametrize("p", [3, 5])
def test_roots_mod_p2_matches_enumeration(p):
    m = p * p
    for A in range(1, m):
        if A % p == 0:
            continue
        for B in range(m):
            for C in range(m):
                f = QuadPoly(A, B, C)
                assert roots_mod_p2(f, p).elements == roots_mod_p2_bruteforce(f, p), f


def test_roots_leading_coefficient_divisible():
    with pytest.raises(LeadingCoeffDivisible):
        roots_mod_p2(QuadPoly(3, 1, 1), 3)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("k", [1, 2])
def test_r_closed_form_mod_p(p, k):
    for A in range(1, p):
        for B in range(p):
            for C in range(p * p):
                f = QuadPoly(A, B, C)
                literal = [r for r in range(p) if satisfies_R(f, r, k, RLevel.MOD_P, p)]
                assert r_closed_form(f, k, RLevel.MOD_P, p) == literal, f


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("k", [1, 2])
def test_r_closed_form_on_roots_mod_p2(p, k):
    p4 = p ** 4
    for A in range(1, p):
        inv4a = pow(4 * A, -1, p4)
        for B in range(p * p):
            for D in [p ** j * u for j in range(4) for u in range(1, p)] + [0]:
                f = QuadPoly(A, B, (B * B - D) * inv4a % p4)
                literal = [
                    r for r in roots_mod_p2_bruteforce(f, p)
                    if satisfies_R(f, r, k, RLevel.ROOT_MOD_P2, p)
                ]
                assert r_closed_form(f, k, RLevel.ROOT_MOD_P2, p) == literal, f


def test_satisfies_R_hypotheses():
    with pytest.raises(HypothesisViolated):
        satisfies_R(QuadPoly(1, 0, 0), 0, 3, RLevel.MOD_P, 3)
    with pytest.raises(HypothesisViolated):
        satisfies_R(QuadPoly(3, 0, 0), 0, 1, RLevel.MOD_P, 3)
    with pytest.raises(HypothesisViolated):
        satisfies_R(QuadPoly(1, 0, -1), 2, 1, RLevel.ROOT_MOD_P2, 3)
