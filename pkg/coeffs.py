"""
Tablice współczynników Fouriera a(S) i formy liniowe nad kluczami tablic.

Format pliku tablicy (UTF-8):

    # komentarz
    N=1 k=20
    1,0,18 2256995864880
    2,0,9 -4329978670800

Klucz to trójka (alpha, 2*beta, gamma); wartość to liczba całkowita lub
ułamek "licznik/mianownik".
"""

import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import (
    Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, TextIO, Tuple, Union,
)

from errors import (
    DuplicateKeyConflict, InputError, InvalidHeader, MissingCoefficient, OutsideANplus, ParseError,
)
from qform import FormKey, HalfIntegralForm, canonical, in_ANplus

logger = logging.getLogger(__name__)

Source = Union[str, Path, TextIO]

_HEADER_RE = re.compile(r"^N\s*=\s*(\d+)\s+k\s*=\s*(\d+)$")
_ENTRY_RE = re.compile(
    r"^([+-]?\d+)\s*,\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s+([+-]?\d+(?:/\d+)?)$"
)


# ============================================================================
# FORMA LINIOWA
# ============================================================================

@dataclass(frozen=True)
class LinearForm:
    """Skończona kombinacja liniowa kluczy o wymiernych współczynnikach."""

    terms: Mapping[Hashable, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {
            key: Fraction(value) for key, value in self.terms.items() if value != 0
        }
        object.__setattr__(self, "terms", MappingProxyType(cleaned))

    @classmethod
    def zero(cls) -> "LinearForm":
        return cls({})

    @classmethod
    def single(cls, key: Hashable, coefficient=1) -> "LinearForm":
        return cls({key: Fraction(coefficient)})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Hashable, Fraction]]) -> "LinearForm":
        acc: Dict[Hashable, Fraction] = defaultdict(Fraction)
        for key, value in pairs:
            acc[key] += value
        return cls(acc)

    def items(self) -> Iterator[Tuple[Hashable, Fraction]]:
        return iter(self.terms.items())

    def support(self) -> List[Hashable]:
        return sorted(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: Hashable) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm.from_pairs(list(self.items()) + list(other.items()))

    def __neg__(self) -> "LinearForm":
        return self.scale(-1)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, factor) -> "LinearForm":
        factor = Fraction(factor)
        return LinearForm({key: factor * value for key, value in self.items()})

    def __rmul__(self, factor) -> "LinearForm":
        return self.scale(factor)

    def __str__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"({value})*a{key}" for key, value in sorted(self.terms.items()))


def add(left: LinearForm, right: LinearForm) -> LinearForm:
    return left + right


def scale(factor, form: LinearForm) -> LinearForm:
    return form.scale(factor)


# ============================================================================
# TABLICA WSPÓŁCZYNNIKÓW
# ============================================================================

@dataclass(frozen=True)
class CoeffTable:
    """Niezmienna tablica a(S) o kanonicznych kluczach dla poziomu N i wagi k."""

    level: int
    weight: int
    entries: Mapping[FormKey, Fraction] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.level < 1 or self.weight < 1:
            raise InputError("N oraz k muszą być dodatnie")
        frozen = {}
        for key, value in self.entries.items():
            form = HalfIntegralForm(*key)
            if not in_ANplus(form, self.level):
                raise OutsideANplus(f"klucz {key} spoza A({self.level})^+")
            if canonical(form, self.level).reduced != form:
                raise InputError(f"klucz {key} nie jest kanoniczny dla N={self.level}")
            frozen[tuple(key)] = Fraction(value)
        object.__setattr__(self, "entries", MappingProxyType(frozen))

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key) -> bool:
        return key in self.entries


def canonical_key(form: HalfIntegralForm, level: int) -> Tuple[FormKey, int]:
    """Zwraca (klucz kanoniczny, det_sign) dla S z A(N)^+."""
    if not in_ANplus(form, level):
        raise OutsideANplus(f"{form} nie należy do A({level})^+")
    result = canonical(form, level)
    return result.reduced.key, result.det_sign


def lookup(table: CoeffTable, form: HalfIntegralForm) -> Fraction:
    """a(S) = det(T)^k a(reduced)."""
    key, sign = canonical_key(form, table.level)
    if key not in table.entries:
        raise MissingCoefficient([key])
    return sign ** table.weight * table.entries[key]


def lookup_symbolic(form: HalfIntegralForm, level: int, weight: int) -> LinearForm:
    key, sign = canonical_key(form, level)
    return LinearForm.single(key, sign ** weight)


def evaluate_partial(form: LinearForm, table: CoeffTable) -> Tuple[Fraction, List]:
    """Wartość formy przy brakujących kluczach równych 0 oraz lista tych kluczy."""
    total = Fraction(0)
    missing = []
    for key, coefficient in form.items():
        if key in table.entries:
            total += coefficient * table.entries[key]
        else:
            missing.append(key)
    return total, sorted(missing)


def evaluate(form: LinearForm, table: Union[CoeffTable, Callable[[Hashable], Fraction]]) -> Fraction:
    if callable(table):
        return sum((c * table(key) for key, c in form.items()), Fraction(0))
    total, missing = evaluate_partial(form, table)
    if missing:
        raise MissingCoefficient(missing)
    return total


# ============================================================================
# WCZYTYWANIE I ZAPIS
# ============================================================================

def _lines(source: Source) -> List[str]:
    if hasattr(source, "read"):
        return source.read().splitlines()
    try:
        return Path(source).read_text(encoding="utf-8").splitlines()
    except UnicodeDecodeError as exc:
        raise ParseError(f"plik {source} nie jest poprawnym UTF-8 (bajt {exc.start})") from exc
    except OSError as exc:
        raise InputError(f"nie można odczytać pliku {source}: {exc.strerror or exc}") from exc


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def content_lines(source: Source) -> Iterator[Tuple[int, str]]:
    """Niepuste linie bez komentarzy wraz z numerem linii (od 1)."""
    for line_no, raw in enumerate(_lines(source), start=1):
        line = _strip(raw)
        if line:
            yield line_no, line


def ingest(source: Source) -> CoeffTable:
    lines = content_lines(source)
    try:
        line_no, header = next(lines)
    except StopIteration:
        raise InvalidHeader("brak nagłówka 'N=<int> k=<int>'") from None
    match = _HEADER_RE.match(header)
    if not match or int(match.group(1)) < 1 or int(match.group(2)) < 1:
        raise InvalidHeader(f"niepoprawny nagłówek {header!r}", line_no)
    level, weight = int(match.group(1)), int(match.group(2))

    entries: Dict[FormKey, Fraction] = {}
    for line_no, line in lines:
        match = _ENTRY_RE.match(line)
        if not match:
            raise ParseError(f"oczekiwano 'alpha,two_beta,gamma wartość', otrzymano {line!r}", line_no)
        form = HalfIntegralForm(*(int(match.group(i)) for i in (1, 2, 3)))
        value = Fraction(match.group(4))
        if not in_ANplus(form, level):
            raise ParseError(f"forma {form} spoza A({level})^+", line_no)

        result = canonical(form, level)
        key = result.reduced.key
        if key != form.key:
            logger.debug("Klucz %s sprowadzony do postaci kanonicznej %s", form.key, key)
            value *= result.det_sign ** weight
        if key in entries and entries[key] != value:
            raise DuplicateKeyConflict(key, line_no)
        entries[key] = value

    logger.debug("Wczytano %d współczynników (N=%d, k=%d)", len(entries), level, weight)
    return CoeffTable(level, weight, entries)


def format_value(value: Fraction) -> str:
    return str(Fraction(value))


def emit(table: CoeffTable, stream: TextIO):
    stream.write(f"N={table.level} k={table.weight}\n")
    for key in sorted(table.entries):
        stream.write(f"{key[0]},{key[1]},{key[2]} {format_value(table.entries[key])}\n")
