"""
Współczynniki podniesienia Maassa (Saito-Kurokawy) i test znikania skręcenia.

Dla formy z przestrzeni Maassa a(S) = sum_{d | (alpha, 2beta, gamma)} d^{k-1} C(D(S)/d^2),
gdzie C to współczynniki formy Jacobiego. W trybie symbolicznym każde C(D)
jest niezależną niewiadomą, więc a_chi(S) staje się formą liniową nad
wyróżnikami D; dla k parzystego i N = 1 powinna ona być zerowa.
"""

import logging
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from sympy import divisors

from coeffs import CoeffTable, LinearForm, Source, content_lines, evaluate
from errors import (
    DuplicateKeyConflict, InputError, InvalidHeader, MissingJacobiCoefficient,
    OutsideANplus, ParseError,
)
from qform import FormKey, HalfIntegralForm, RationalMatrix2, content, discriminant4, in_ANplus, transform
from twist import CaseLabel, Resolver, TwistContext, a_chi, a_chi_symbolic

logger = logging.getLogger(__name__)

_HEADER_RE = re.compile(r"^k\s*=\s*(\d+)$")
_ENTRY_RE = re.compile(r"^([+-]?\d+)\s+([+-]?\d+(?:/\d+)?)$")


# ============================================================================
# DANE JACOBIEGO
# ============================================================================

def _valid_discriminant(D: int) -> bool:
    return D <= 0 and D % 4 in (0, 1)


@dataclass(frozen=True)
class JacobiCoeffs:
    """Współczynniki C(D); w trybie symbolicznym wartości nie są potrzebne."""

    values: Mapping[int, Fraction] = field(default_factory=dict, repr=False)
    symbolic: bool = False
    weight: Optional[int] = None

    def __post_init__(self):
        for D in self.values:
            if not _valid_discriminant(D):
                raise InputError(f"niepoprawny wyróżnik {D}: wymagane D <= 0, D = 0,1 (mod 4)")
        frozen = {D: Fraction(v) for D, v in self.values.items()}
        object.__setattr__(self, "values", MappingProxyType(frozen))

    @classmethod
    def unknowns(cls) -> "JacobiCoeffs":
        return cls(symbolic=True)


def ingest_jacobi(source: Source) -> JacobiCoeffs:
    """Plik: nagłówek 'k=<int>', potem linie 'D wartość'."""
    lines = content_lines(source)
    try:
        line_no, header = next(lines)
    except StopIteration:
        raise InvalidHeader("brak nagłówka 'k=<int>'") from None
    match = _HEADER_RE.match(header)
    if not match:
        raise InvalidHeader(f"niepoprawny nagłówek {header!r}", line_no)
    weight = int(match.group(1))

    values: Dict[int, Fraction] = {}
    for line_no, line in lines:
        match = _ENTRY_RE.match(line)
        if not match:
            raise ParseError(f"oczekiwano 'D wartość', otrzymano {line!r}", line_no)
        D, value = int(match.group(1)), Fraction(match.group(2))
        if not _valid_discriminant(D):
            raise ParseError(f"niepoprawny wyróżnik {D}", line_no)
        if D in values and values[D] != value:
            raise DuplicateKeyConflict(D, line_no)
        values[D] = value
    return JacobiCoeffs(values, weight=weight)


# ============================================================================
# WSPÓŁCZYNNIKI MAASSA
# ============================================================================

def _divisor_terms(form: HalfIntegralForm, weight: int) -> List[Tuple[int, Fraction]]:
    D = discriminant4(form)
    return [(D // (d * d), Fraction(d) ** (weight - 1)) for d in divisors(content(form))]


def maass_coeff(
    form: HalfIntegralForm,
    weight: int,
    jacobi: JacobiCoeffs,
) -> Union[Fraction, LinearForm]:
    if not in_ANplus(form, 1):
        raise OutsideANplus(f"{form} nie należy do A(1)^+")
    terms = _divisor_terms(form, weight)
    if jacobi.symbolic:
        return LinearForm.from_pairs(terms)
    missing = [D for D, _ in terms if D not in jacobi.values]
    if missing:
        raise MissingJacobiCoefficient(missing)
    return sum((c * jacobi.values[D] for D, c in terms), Fraction(0))


def maass_coeff_naive(form: HalfIntegralForm, weight: int, jacobi: JacobiCoeffs) -> Fraction:
    """Niezależna implementacja sumy po dzielnikach przez dzielenie próbne."""
    alpha, two_beta, gamma = form.key
    disc = two_beta * two_beta - 4 * alpha * gamma
    total = Fraction(0)
    for d in range(1, min(abs(x) for x in form.key if x) + 1):
        if alpha % d == 0 and two_beta % d == 0 and gamma % d == 0:
            key = disc // (d * d)
            if key not in jacobi.values:
                raise MissingJacobiCoefficient([key])
            total += d ** (weight - 1) * jacobi.values[key]
    return total


def maass_resolver(weight: int) -> Resolver:
    """Zastępuje a(S') symboliczną sumą Maassa nad niewiadomymi C(D)."""
    unknowns = JacobiCoeffs.unknowns()

    def resolve(image: HalfIntegralForm) -> LinearForm:
        return maass_coeff(image, weight, unknowns)

    return resolve


@dataclass(frozen=True)
class FormBox:
    """Zredukowane formy 0 <= 2beta <= alpha <= gamma z alpha, gamma w granicach."""

    max_alpha: int
    max_gamma: int

    def reduced_forms(self) -> Iterable[HalfIntegralForm]:
        for alpha in range(1, self.max_alpha + 1):
            for two_beta in range(0, alpha + 1):
                for gamma in range(alpha, self.max_gamma + 1):
                    yield HalfIntegralForm(alpha, two_beta, gamma)


def maass_table_for_keys(keys: Iterable[FormKey], weight: int, jacobi: JacobiCoeffs) -> CoeffTable:
    entries = {}
    missing = set()
    for key in keys:
        try:
            entries[tuple(key)] = maass_coeff(HalfIntegralForm(*key), weight, jacobi)
        except MissingJacobiCoefficient as exc:
            missing.update(exc.keys)
    if missing:
        raise MissingJacobiCoefficient(missing)
    return CoeffTable(1, weight, entries)


def maass_table(box: FormBox, weight: int, jacobi: JacobiCoeffs) -> CoeffTable:
    if jacobi.symbolic:
        raise InputError("maass_table wymaga wartości liczbowych C(D)")
    return maass_table_for_keys((f.key for f in box.reduced_forms()), weight, jacobi)


# ============================================================================
# ZNIKANIE SKRĘCENIA
# ============================================================================

@dataclass(frozen=True)
class VanishingReport:
    form: HalfIntegralForm
    p: int
    weight: int
    label: CaseLabel
    residual: LinearForm

    @property
    def vanishes(self) -> bool:
        return self.residual.is_zero()

    @property
    def needed_keys(self) -> List[int]:
        return self.residual.support()


def _maass_context(p: int, weight: int) -> TwistContext:
    if weight % 2:
        raise InputError(f"test znikania wymaga parzystego k, otrzymano k={weight}")
    return TwistContext(1, weight, p)


def verify_maass_vanishing(form: HalfIntegralForm, p: int, weight: int) -> VanishingReport:
    ctx = _maass_context(p, weight)
    report = a_chi_symbolic(form, ctx, resolver=maass_resolver(weight))
    if not report.value.is_zero():
        logger.warning("Niezerowa reszta dla %s (p=%d, k=%d): %s", form, p, weight, report.value)
    return VanishingReport(form, p, weight, report.label, report.value)


def verify_maass_numeric(form: HalfIntegralForm, p: int, weight: int, rng: random.Random) -> bool:
    """Losowe całkowite C(D) na potrzebnych kluczach; a_chi po tablicy Maassa musi być 0."""
    ctx = _maass_context(p, weight)
    support = a_chi_symbolic(form, ctx).consumed_keys
    needed = sorted({
        D for key in support for D, _ in _divisor_terms(HalfIntegralForm(*key), weight)
    })
    jacobi = JacobiCoeffs({D: rng.randint(-10 ** 6, 10 ** 6) for D in needed})
    table = maass_table_for_keys(support, weight, jacobi)
    return a_chi(form, ctx, table).value == 0


def _prime_to_p(n: int, p: int) -> int:
    while n and n % p == 0:
        n //= p
    return n


def prime_to_p_content_preserved(form: HalfIntegralForm, matrix: RationalMatrix2, p: int) -> bool:
    """Część zawartości względnie pierwsza z p nie zmienia się przy S -> S[P]."""
    return _prime_to_p(content(form), p) == _prime_to_p(content(transform(form, matrix)), p)


def evaluate_with_jacobi(form: LinearForm, jacobi: JacobiCoeffs) -> Fraction:
    """Wylicza formę nad niewiadomymi C(D) dla konkretnych wartości."""
    missing = [D for D in form.support() if D not in jacobi.values]
    if missing:
        raise MissingJacobiCoefficient(missing)
    return evaluate(form, lambda D: jacobi.values[D])
