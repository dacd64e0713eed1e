"""
Współczynniki Fouriera a_chi(S) skręcenia formy paramodularnej stopnia 2
przez kwadratowy charakter chi mod p.

Dla S z A(N p^4)^+ rozwinięcie skręcenia ma współczynnik W(chi) a_chi(S);
a_chi(S) jest kombinacją liniową współczynników a(S[A]) formy wyjściowej
dla macierzy trójkątnych A o wyrazach będących potęgami p. Silnik buduje
tę kombinację symbolicznie (LinearForm), a tryb numeryczny wylicza ją
względem tablicy CoeffTable.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple, Union

from charsum import chi_prod, gauss_trivial, require_odd_prime
from coeffs import CoeffTable, LinearForm, evaluate_partial, format_value, lookup_symbolic
from errors import (
    InputError, InternalInvariantError, MissingCoefficient, NonIntegralCoefficient,
    NonIntegralResult, OutsideLevel, check,
)
from qform import HalfIntegralForm, RationalMatrix2, discriminant4, in_ANplus, transform
from quadsolve import QuadPoly, inv_mod, roots_mod_p2, valuation

logger = logging.getLogger(__name__)

Resolver = Callable[[HalfIntegralForm], LinearForm]


# ============================================================================
# KONTEKST I WYNIKI
# ============================================================================

@dataclass(frozen=True)
class TwistContext:
    """Poziom N, waga k i nieparzysta liczba pierwsza p nie dzieląca N."""

    level: int
    weight: int
    p: int

    def __post_init__(self):
        require_odd_prime(self.p)
        if self.level < 1 or self.weight < 1:
            raise InputError("N oraz k muszą być dodatnie")
        if self.level % self.p == 0:
            raise InputError(f"p={self.p} dzieli poziom N={self.level}")

    @property
    def twisted_level(self) -> int:
        return self.level * self.p ** 4


class Case(Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"


@dataclass(frozen=True)
class CaseLabel:
    case: Case
    v_two_beta: Optional[int]   # None gdy 2*beta = 0
    v_alpha: int

    def __str__(self):
        return f"Case {self.case.value}"


@dataclass
class TwistReport:
    label: CaseLabel
    value: Union[Fraction, LinearForm]
    consumed_keys: Tuple[Hashable, ...]
    notes: Dict[str, str] = field(default_factory=dict)
    approximate: bool = False
    assumed_zero: Tuple[Hashable, ...] = ()

    def to_json(self) -> dict:
        if isinstance(self.value, LinearForm):
            value = {",".join(map(str, k)) if isinstance(k, tuple) else str(k): format_value(c)
                     for k, c in sorted(self.value.items())}
        else:
            value = format_value(self.value)
        data = {
            "case": self.label.case.value,
            "value": value,
            "w_chi_factor": True,
            "consumed": [list(k) if isinstance(k, tuple) else k for k in self.consumed_keys],
            "branches": dict(self.notes),
        }
        if self.approximate:
            data["approximate"] = True
            data["assumed_zero"] = [list(k) for k in self.assumed_zero]
        return data

    def to_text(self) -> str:
        lines = [f"case: {self.label}", f"value: {self.value if isinstance(self.value, LinearForm) else format_value(self.value)}"]
        lines.append("consumed: " + "; ".join(_key_text(k) for k in self.consumed_keys))
        for name, note in self.notes.items():
            lines.append(f"branch {name}: {note}")
        if self.approximate:
            lines.append("approximate: missing coefficients treated as 0: "
                         + "; ".join(_key_text(k) for k in self.assumed_zero))
        return "\n".join(lines)


def _key_text(key) -> str:
    return ",".join(map(str, key)) if isinstance(key, tuple) else str(key)


# ============================================================================
# POMOCNICZE
# ============================================================================

def _exact(numerator: int, denominator: int, what: str) -> int:
    if numerator % denominator:
        raise InternalInvariantError(f"{what}: {numerator} niepodzielne przez {denominator}")
    return numerator // denominator


def f_S(form: HalfIntegralForm, p: int, x: int) -> int:
    """f_S(X) = alpha p^{-4} X^2 - 2beta p^{-2} X + gamma."""
    if form.alpha % p ** 4 or form.two_beta % p ** 2:
        raise NonIntegralCoefficient(
            f"f_S wymaga p^4 | alpha oraz p^2 | 2beta (S={form}, p={p})"
        )
    return (form.alpha // p ** 4) * x * x - (form.two_beta // p ** 2) * x + form.gamma


def classify(form: HalfIntegralForm, ctx: TwistContext) -> CaseLabel:
    p = ctx.p
    if not in_ANplus(form, ctx.twisted_level):
        raise OutsideLevel(f"{form} nie należy do A({ctx.twisted_level})^+")

    v_alpha = valuation(form.alpha, p)
    v_beta = valuation(form.two_beta, p) if form.two_beta else None
    deep_beta = 2 if v_beta is None else v_beta

    if deep_beta == 0:
        case = Case.I
    elif deep_beta == 1:
        case = Case.II if v_alpha == 4 else Case.III
    else:
        case = Case.IV if v_alpha == 4 else Case.V
    return CaseLabel(case, v_beta, v_alpha)


# ============================================================================
# SILNIK
# ============================================================================

class _Expansion:
    """Akumulator sumy c * a(S[A]) po kluczach zwracanych przez resolver."""

    def __init__(self, form: HalfIntegralForm, ctx: TwistContext, resolver: Resolver):
        self.form = form
        self.ctx = ctx
        self.p = ctx.p
        self.k = ctx.weight
        self.resolver = resolver
        self.terms: Dict[Hashable, Fraction] = defaultdict(Fraction)
        self.notes: Dict[str, str] = {}

        p = self.p
        self.alpha, self.t, self.gamma = form.key
        self.D = discriminant4(form)
        self.alpha4 = _exact(self.alpha, p ** 4, "alpha p^-4")

    # ------------------------------------------------------------------------
    # Podstawowe operacje
    # ------------------------------------------------------------------------

    def chi(self, *factors: int) -> int:
        return chi_prod(self.p, *factors)

    def power(self, exponent: int) -> Fraction:
        return Fraction(self.p) ** exponent

    def inv(self, a: int, modulus: int) -> int:
        return inv_mod(a, modulus)

    def term(self, coefficient, m11, m12, m22):
        """Dodaje coefficient * a(S[[m11, m12], [0, m22]])."""
        if coefficient == 0:
            return
        matrix = RationalMatrix2.upper(m11, m12, m22)
        try:
            image = transform(self.form, matrix)
        except NonIntegralResult as exc:
            raise InternalInvariantError(str(exc)) from exc
        check(
            image.det4 == matrix.det ** 2 * self.form.det4,
            f"det(S[A]) != det(A)^2 det(S) dla A={matrix}",
        )
        for key, value in self.resolver(image).items():
            self.terms[key] += Fraction(coefficient) * value

    def result(self) -> LinearForm:
        return LinearForm(self.terms)

    # ------------------------------------------------------------------------
    # Przypadki
    # ------------------------------------------------------------------------

    def case_i(self):
        p = self.p
        lead = self.power(1 - self.k) * self.chi(self.t)
        for b in range(1, p):
            self.term(lead * self.chi(b), 1, Fraction(-b, p), p)

    def _sum_over_ab(self, t1: int):
        """p^{-1} sum_{a,b} chi(ab(t1 a - gamma)) a(S[[1, -(a+b)/p], [0, 1]])."""
        p = self.p
        weights: Dict[int, int] = defaultdict(int)
        for a in range(1, p):
            for b in range(1, p):
                weights[a + b] += self.chi(a, b, t1 * a - self.gamma)
        for shift, weight in sorted(weights.items()):
            self.term(Fraction(weight, p), 1, Fraction(-shift, p), 1)

    def _gamma_shift_term(self, t1: int):
        """p^{k-2} chi(-gamma) a(S[[1, y/p^2], [0, 1/p]]), y t1 = -gamma (p^2)."""
        p = self.p
        y = (-self.gamma * self.inv(t1, p * p)) % (p * p)
        self.term(self.power(self.k - 2) * self.chi(-self.gamma), 1, Fraction(y, p ** 2), Fraction(1, p))

    def case_ii(self):
        p, k, alpha4 = self.p, self.k, self.alpha4
        t1 = _exact(self.t, p, "2beta p^-1")
        self._sum_over_ab(t1)

        for a in range(1, p):
            weight = sum(
                self.chi(a, z, 1 - z, a * z * alpha4 - t1) for z in range(2, p)
            )
            self.term(Fraction(weight, p), Fraction(1, p), Fraction(-a, p ** 2), p)

        self.term(Fraction(-self.chi(alpha4), p), Fraction(1, p ** 2), 0, p ** 2)

        x = (t1 * self.inv(alpha4, p * p)) % (p * p)
        self.term(self.power(k - 2) * self.chi(-alpha4), Fraction(1, p), Fraction(-x, p ** 3), 1)

        self._gamma_shift_term(t1)

    def case_iii(self):
        p = self.p
        t1 = _exact(self.t, p, "2beta p^-1")
        self._sum_over_ab(t1)
        self._gamma_shift_term(t1)
        lead = Fraction(-self.chi(t1), p)
        for a in range(1, p):
            self.term(lead * self.chi(a), Fraction(1, p), Fraction(-a, p ** 2), p)

    def _leading_terms(self):
        """(1 - 1/p) chi(gamma) a(S) - p^{-1} chi(gamma) sum_b a(S[[1, -b/p], [0, 1]])."""
        p = self.p
        chi_gamma = self.chi(self.gamma)
        self.term((1 - Fraction(1, p)) * chi_gamma, 1, 0, 1)
        for b in range(1, p):
            self.term(Fraction(-chi_gamma, p), 1, Fraction(-b, p), 1)

    def _roots_of_f(self, candidates: Iterable[int]) -> List[int]:
        p2 = self.p ** 2
        return [b for b in candidates if b % self.p and f_S(self.form, self.p, b) % p2 == 0]

    def case_iv(self):
        p, k, alpha4, gamma = self.p, self.k, self.alpha4, self.gamma
        t2 = _exact(self.t, p ** 2, "2beta p^-2")
        D4 = _exact(self.D, p ** 4, "D p^-4")

        # b_chi
        self._leading_terms()

        for b in range(1, p):
            weight = 0
            for x in range(2, p):
                x_inv = self.inv(x, p)
                for y in range(2, p):
                    ratio = (y - x) * self.inv(1 - y, p)
                    weight += self.chi(y, 1 - x, alpha4 * ratio * b * b + t2 * b - gamma * x_inv)
            self.term(self.power(k - 3) * weight, Fraction(1, p), Fraction(-b, p ** 2), 1)

        coefficient = (
            self.chi(gamma) + p * self.chi(D4, gamma) - self.chi(-alpha4) * gauss_trivial(t2, p)
        )
        self.term(self.power(k - 3) * coefficient, Fraction(1, p), 0, 1)

        chi_minus_alpha4 = self.chi(-alpha4)
        for x in range(p):
            self.term(
                self.power(k - 3) * chi_minus_alpha4 * gauss_trivial(t2 - x * alpha4, p),
                Fraction(1, p), Fraction(-x, p ** 2), 1,
            )

        roots = roots_mod_p2(QuadPoly(alpha4, -t2, gamma), p)
        for b in roots.elements:
            if b % p == 0:
                continue
            check(f_S(self.form, p, b) % p ** 2 == 0, f"b={b} nie jest pierwiastkiem f_S mod p^2")
            weight = sum(self.chi(z, 1 - z, gamma - z * alpha4 * b * b) for z in range(2, p))
            self.term(self.power(2 * k - 4) * weight, Fraction(1, p), Fraction(-b, p ** 3), Fraction(1, p))

        chi_alpha4 = self.chi(alpha4)
        for a in range(1, p):
            self.term(Fraction(-chi_alpha4, p), Fraction(1, p), Fraction(-a, p ** 2), p)

        self.term(
            self.power(k - 3) * chi_alpha4 * (p * self.chi(D4) - gauss_trivial(gamma, p)),
            Fraction(1, p ** 2), 0, p,
        )
        self.term((1 - Fraction(1, p)) * chi_alpha4, Fraction(1, p ** 2), 0, p ** 2)

        self._c_chi(alpha4)
        self._d_chi(alpha4, t2)

    def _c_chi(self, alpha4: int):
        p, k = self.p, self.k
        if self.D % p ** 5 or self.chi(self.gamma, alpha4) != 1:
            self.notes["c_chi"] = "0"
            return
        D5 = self.D // p ** 5
        self.notes["c_chi"] = "p^5 | D, chi(gamma alpha p^-4) = 1"
        self.term(
            self.power(2 * k - 4) * self.chi(alpha4) * gauss_trivial(D5, p),
            Fraction(1, p ** 2), 0, 1,
        )

    def _d_chi(self, alpha4: int, t2: int):
        p, k = self.p, self.k
        if self.D % p ** 6 or t2 % p == 0:
            self.notes["d_chi"] = "0"
            return

        a = (t2 * self.inv(2 * alpha4, p)) % p
        # czynnik chi(D p^-6) zamiast W(1, D p^-6); przy p^8 | D bez składnika (p-1) p^(3k-5)
        coefficient = self.power(3 * k - 5) * self.chi(alpha4) * self.chi(self.D // p ** 6)
        self.term(coefficient, Fraction(1, p ** 2), Fraction(-a, p ** 3), Fraction(1, p))

        if self.D % p ** 8:
            self.notes["d_chi"] = "p^6 | D" if coefficient else "p^7 | D, p^8 nmid D"
            return

        b = (t2 * self.inv(2 * alpha4, p * p)) % (p * p)
        self.notes["d_chi"] = "p^8 | D"
        self.term(
            self.power(4 * k - 6) * self.chi(alpha4),
            Fraction(1, p ** 2), Fraction(-b, p ** 4), Fraction(1, p ** 2),
        )

    def case_v(self):
        p, k, gamma = self.p, self.k, self.gamma
        t2 = _exact(self.t, p ** 2, "2beta p^-2")
        D4 = _exact(self.D, p ** 4, "D p^-4")

        self._leading_terms()

        for b in range(1, p):
            weight = sum(
                self.chi(1 - x, t2 * b - gamma * self.inv(x, p)) for x in range(2, p)
            )
            self.term(-self.power(k - 3) * weight, Fraction(1, p), Fraction(-b, p ** 2), 1)

        self.term(
            self.power(k - 3) * self.chi(gamma) * (1 - p + p * self.chi(D4)),
            Fraction(1, p), 0, 1,
        )

        lead = -self.power(2 * k - 4) * self.chi(-gamma)
        if lead:
            for b in self._roots_of_f(range(1, p * p)):
                self.term(lead, Fraction(1, p), Fraction(-b, p ** 3), Fraction(1, p))


_DISPATCH = {
    Case.I: _Expansion.case_i,
    Case.II: _Expansion.case_ii,
    Case.III: _Expansion.case_iii,
    Case.IV: _Expansion.case_iv,
    Case.V: _Expansion.case_v,
}


# ============================================================================
# API
# ============================================================================

def a_chi_symbolic(
    form: HalfIntegralForm,
    ctx: TwistContext,
    resolver: Optional[Resolver] = None,
) -> TwistReport:
    """
    a_chi(S) jako forma liniowa.

    Args:
        resolver: odwzorowanie S' -> LinearForm zastępujące a(S'); domyślnie
            klucz kanoniczny tablicy ze znakiem det(T)^k.
    """
    label = classify(form, ctx)
    if resolver is None:
        def resolver(image: HalfIntegralForm) -> LinearForm:
            return lookup_symbolic(image, ctx.level, ctx.weight)

    expansion = _Expansion(form, ctx, resolver)
    _DISPATCH[label.case](expansion)
    value = expansion.result()
    logger.debug("%s: %s, %d kluczy", form, label, len(value.terms))
    return TwistReport(label, value, tuple(value.support()), expansion.notes)


def a_chi(
    form: HalfIntegralForm,
    ctx: TwistContext,
    table: CoeffTable,
    assume_zero_outside_box: bool = False,
) -> TwistReport:
    if table.level != ctx.level or table.weight != ctx.weight:
        raise InputError(
            f"tablica ma N={table.level}, k={table.weight}; oczekiwano N={ctx.level}, k={ctx.weight}"
        )
    symbolic = a_chi_symbolic(form, ctx)
    value, missing = evaluate_partial(symbolic.value, table)
    if missing and not assume_zero_outside_box:
        raise MissingCoefficient(missing)
    if missing:
        logger.warning("Brakujące współczynniki traktowane jako 0: %d", len(missing))
    return TwistReport(
        symbolic.label, value, symbolic.consumed_keys, symbolic.notes,
        approximate=bool(missing), assumed_zero=tuple(missing),
    )


def required_support(form: HalfIntegralForm, ctx: TwistContext) -> List[Hashable]:
    return list(a_chi_symbolic(form, ctx).consumed_keys)


def upper_triangular_invariance(
    form: HalfIntegralForm,
    ctx: TwistContext,
    shifts: Iterable[int],
) -> Dict[int, bool]:
    """
    Porównuje a_chi(S) z a_chi(S[[1, m], [0, 1]]) jako formy liniowe.

    Równość jest konsekwencją modularności dla prawdziwych form, ale nie
    musi zachodzić dla dowolnej tablicy; wynik ma charakter eksploracyjny.
    """
    base = a_chi_symbolic(form, ctx).value
    report = {}
    for m in shifts:
        shifted = transform(form, RationalMatrix2.upper(1, m, 1))
        report[m] = a_chi_symbolic(shifted, ctx).value == base
        logger.debug("przesunięcie m=%d: %s", m, "równe" if report[m] else "różne")
    return report
