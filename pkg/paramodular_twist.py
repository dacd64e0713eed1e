"""
Wiersz poleceń: klasyfikacja, skręcanie, nośnik, redukcja, sprawdzanie lematów
oraz test znikania skręcenia dla form Maassa.

Kody wyjścia: 0 sukces, 1 naruszenie niezmiennika, 2 błąd wejścia/poziomu,
3 brak danych, 4 niepowodzenie weryfikacji.
"""

import argparse
import io
import json
import logging
import os
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from charsum import require_odd_prime
from coeffs import emit, ingest
from corollary_sweep import SweepEntry, covered_profiles, default_sweep, random_sweep
from errors import InputError, MissingData, ParamodularError
from lemma_check import LEMMAS, run_lemma_checks
from maass import FormBox, ingest_jacobi, maass_table, verify_maass_numeric, verify_maass_vanishing
from qform import HalfIntegralForm, canonical
from twist import TwistContext, a_chi, a_chi_symbolic, classify, required_support, upper_triangular_invariance

logger = logging.getLogger("paramodular_twist")


# ============================================================================
# KONFIGURACJA
# ============================================================================

ROOT = Path(__file__).resolve().parent

# Domyślna tablica współczynników (przykład Upsilon20, p=3)
PARAMODULAR_COEFFS = os.getenv("PARAMODULAR_COEFFS", str(ROOT / "data" / "upsilon20_p3.txt"))

# Domyślny plik współczynników Jacobiego (brak wartości domyślnej)
PARAMODULAR_JACOBI = os.getenv("PARAMODULAR_JACOBI")

PARAMODULAR_LOG_LEVEL = os.getenv("PARAMODULAR_LOG_LEVEL", "INFO")

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 4


@dataclass(frozen=True)
class CliConfig:
    """Zwalidowana konfiguracja jednego wywołania."""

    command: str
    p: Optional[int] = None
    k: int = 20
    N: int = 1
    form: Optional[HalfIntegralForm] = None
    coeffs_path: Optional[str] = None
    jacobi_path: Optional[str] = None
    output_format: str = "text"
    assume_zero: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.p is not None:
            require_odd_prime(self.p)
            if self.N % self.p == 0:
                raise InputError(f"p={self.p} dzieli N={self.N}")
        if self.N < 1 or self.k < 1:
            raise InputError("N oraz k muszą być dodatnie")

    @property
    def context(self) -> TwistContext:
        return TwistContext(self.N, self.k, self.p)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"oczekiwano listy liczb, otrzymano {text!r}") from None


def _form(text: str) -> HalfIntegralForm:
    try:
        return HalfIntegralForm.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paramodular_twist",
        description="Skręcenia paramodularnych form stopnia 2 przez charakter kwadratowy mod p",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="diagnostyka na poziomie DEBUG")
    parser.add_argument("-q", "--quiet", action="store_true", help="tylko ostrzeżenia i błędy")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_form(cmd, weight=True):
        cmd.add_argument("--form", type=_form, required=True, help="forma S jako alpha,2beta,gamma")
        cmd.add_argument("--p", type=int, required=True, help="nieparzysta liczba pierwsza p")
        cmd.add_argument("--N", type=int, default=1, help="poziom N (domyślnie 1)")
        if weight:
            cmd.add_argument("--k", type=int, required=True, help="waga k")

    cmd = sub.add_parser("classify", help="przypadek (I-V) formy S")
    with_form(cmd, weight=False)

    cmd = sub.add_parser("twist", help="a_chi(S) z tablicy współczynników")
    with_form(cmd)
    cmd.add_argument("--coeffs", default=PARAMODULAR_COEFFS, help="plik tablicy a(S)")
    cmd.add_argument(
        "--assume-zero-outside-box", action="store_true",
        help="brakujące a(S) traktuj jako 0 (wynik przybliżony)",
    )
    cmd.add_argument("--format", choices=("text", "json"), default="text", help="format wyniku")

    cmd = sub.add_parser("support", help="klucze a(S), od których zależy a_chi(S)")
    with_form(cmd)
    cmd.add_argument("--symbolic", action="store_true", help="wypisz pełną formę liniową")

    cmd = sub.add_parser("reduce", help="kanoniczny klucz formy S")
    cmd.add_argument("--form", type=_form, required=True, help="forma S jako alpha,2beta,gamma")
    cmd.add_argument("--N", type=int, default=1, help="poziom N (domyślnie 1)")

    cmd = sub.add_parser("lemma-check", help="wzory zamknięte a bezpośrednie sumowanie")
    cmd.add_argument("--p", type=_int_list, default=[3, 5, 7], help="lista liczb pierwszych, np. 3,5,7")
    mode = cmd.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="pełne przeglądanie (domyślnie)")
    mode.add_argument("--samples", type=int, help="liczba losowych prób zamiast pełnego przeglądu")
    cmd.add_argument("--seed", type=int, default=0, help="ziarno generatora losowego")
    cmd.add_argument("--gauss", action="store_true", help="sprawdź też tożsamości sum Gaussa")

    cmd = sub.add_parser("maass-vanish", help="znikanie skręcenia podniesień Maassa")
    cmd.add_argument("--p", type=_int_list, default=[3], help="lista liczb pierwszych")
    cmd.add_argument("--k", type=_int_list, default=[20], help="lista parzystych wag")
    cmd.add_argument("--sweep", choices=("default", "random"), default="default", help="zestaw form")
    cmd.add_argument("--count", type=int, default=20, help="liczba form w losowym zestawie")
    cmd.add_argument("--seed", type=int, default=0, help="ziarno generatora losowego")
    cmd.add_argument("--numeric", action="store_true", help="sprawdź też numerycznie dla losowych C(D)")

    cmd = sub.add_parser("ingest-validate", help="walidacja pliku współczynników lub Jacobiego")
    cmd.add_argument("path", help="ścieżka do pliku")
    cmd.add_argument("--jacobi", action="store_true", help="plik współczynników Jacobiego C(D)")

    cmd = sub.add_parser("maass-table", help="tablica podniesienia Maassa z pliku Jacobiego")
    cmd.add_argument(
        "--jacobi", default=PARAMODULAR_JACOBI, required=PARAMODULAR_JACOBI is None,
        help="plik współczynników Jacobiego C(D)",
    )
    cmd.add_argument("--k", type=int, help="waga (domyślnie z nagłówka pliku)")
    cmd.add_argument("--max-alpha", type=int, required=True, help="górna granica alpha")
    cmd.add_argument("--max-gamma", type=int, required=True, help="górna granica gamma")

    cmd = sub.add_parser("invariance-check", help="porównanie a_chi(S) z a_chi(S[[1,m],[0,1]])")
    with_form(cmd)
    cmd.add_argument("--shifts", type=_int_list, default=[1, 2, 3], help="przesunięcia m")

    return parser


# ============================================================================
# PODKOMENDY
# ============================================================================

class Commands:
    """Podkomendy CLI; wyjście przez wstrzykiwaną funkcję output."""

    def __init__(self, output: Callable[[str], None] = print):
        self.output = output

    def _config(self, args, **extra) -> CliConfig:
        return CliConfig(
            command=args.command,
            p=getattr(args, "p", None),
            k=1 if getattr(args, "k", None) is None else args.k,
            N=getattr(args, "N", 1),
            form=getattr(args, "form", None),
            **extra,
        )

    def classify(self, args) -> int:
        config = self._config(args)
        self.output(str(classify(config.form, TwistContext(config.N, 1, config.p))))
        return EXIT_OK

    def twist(self, args) -> int:
        config = self._config(
            args, coeffs_path=args.coeffs, output_format=args.format,
            assume_zero=args.assume_zero_outside_box,
        )
        table = ingest(config.coeffs_path)
        report = a_chi(config.form, config.context, table, config.assume_zero)
        if config.output_format == "json":
            self.output(json.dumps(report.to_json()))
        else:
            self.output(report.to_text())
        return EXIT_OK

    def support(self, args) -> int:
        config = self._config(args)
        if args.symbolic:
            self.output(str(a_chi_symbolic(config.form, config.context).value))
            return EXIT_OK
        for key in required_support(config.form, config.context):
            self.output(",".join(map(str, key)))
        return EXIT_OK

    def reduce(self, args) -> int:
        result = canonical(args.form, args.N)
        self.output(f"{result.reduced.literal()} det_sign={result.det_sign:+d}")
        return EXIT_OK

    def lemma_check(self, args) -> int:
        for p in args.p:
            require_odd_prime(p)
        names = LEMMAS + (("gauss",) if args.gauss else ())
        results = run_lemma_checks(
            args.p,
            exhaustive=args.samples is None,
            samples=args.samples or 0,
            seed=args.seed,
            names=names,
        )
        failed = [r for r in results if not r.ok]
        if failed:
            first = failed[0]
            self.output(f"lemma {first.name} failed at p={first.p}: {first.counterexample}")
            return EXIT_VERIFICATION_FAILED
        self.output(f"all lemmas verified: {', '.join(names)}")
        return EXIT_OK

    def _sweep(self, args, p: int) -> List[SweepEntry]:
        if args.sweep == "random":
            return random_sweep(p, args.count, args.seed)
        return default_sweep(p)

    def maass_vanish(self, args) -> int:
        rng = random.Random(args.seed)
        total = 0
        for p in args.p:
            entries = self._sweep(args, p)
            for profile, count in covered_profiles(entries):
                logger.info("p=%d profil %s: %d", p, profile, count)
            for k in args.k:
                for entry in entries:
                    report = verify_maass_vanishing(entry.form, p, k)
                    total += 1
                    if not report.vanishes:
                        residual = {D: str(c) for D, c in report.residual.items()}
                        self.output(
                            f"nonzero residual for S={entry.form.literal()} p={p} k={k} "
                            f"({entry.profile}): {residual}"
                        )
                        return EXIT_VERIFICATION_FAILED
                    if args.numeric and not verify_maass_numeric(entry.form, p, k, rng):
                        self.output(f"numeric check failed for S={entry.form.literal()} p={p} k={k}")
                        return EXIT_VERIFICATION_FAILED
        self.output(f"all branches vanish ({total} cases)")
        return EXIT_OK

    def ingest_validate(self, args) -> int:
        if args.jacobi:
            jacobi = ingest_jacobi(args.path)
            self.output(f"ok: k={jacobi.weight} entries={len(jacobi.values)}")
        else:
            table = ingest(args.path)
            self.output(f"ok: N={table.level} k={table.weight} entries={len(table)}")
        return EXIT_OK

    def maass_table(self, args) -> int:
        jacobi = ingest_jacobi(args.jacobi)
        weight = args.k or jacobi.weight
        table = maass_table(FormBox(args.max_alpha, args.max_gamma), weight, jacobi)
        buffer = io.StringIO()
        emit(table, buffer)
        self.output(buffer.getvalue().rstrip("\n"))
        return EXIT_OK

    def invariance_check(self, args) -> int:
        config = self._config(args)
        report = upper_triangular_invariance(config.form, config.context, args.shifts)
        for m, equal in report.items():
            self.output(f"m={m} {'equal' if equal else 'differs'}")
        return EXIT_OK


# ============================================================================
# MAIN
# ============================================================================

def _configure_logging(args):
    level = PARAMODULAR_LOG_LEVEL
    if args.verbose:
        level = "DEBUG"
    elif args.quiet:
        level = "WARNING"
    logging.basicConfig(
        level=level, stream=sys.stderr, format="[%(levelname)s] %(message)s", force=True,
    )


def main(argv: Optional[Sequence[str]] = None, output_func: Callable[[str], None] = print) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    _configure_logging(args)

    commands = Commands(output_func)
    handler = getattr(commands, args.command.replace("-", "_"))
    try:
        return handler(args)
    except MissingData as exc:
        logger.error("%s", exc)
        for key in exc.keys:
            logger.error("missing: %s", ",".join(map(str, key)) if isinstance(key, tuple) else key)
        return exc.exit_code
    except ParamodularError as exc:
        logger.error("%s", exc)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
