"""
Zestawy form S z A(p^4)^+ do testu znikania skręcenia form Maassa.

Domyślny zestaw dobierany jest deterministycznie tak, by pokryć każdy
profil waluacyjny: przypadek (I-V), podzielność gamma przez p, a dla
przypadku IV dodatkowo v_p(D) w przedziałach 4, 5, 6, 7, 8, 9+ oraz
chi(gamma alpha p^-4).
"""

import logging
import random
from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple

from charsum import legendre
from qform import HalfIntegralForm, discriminant4
from quadsolve import valuation
from twist import Case, TwistContext, classify

logger = logging.getLogger(__name__)

# liczba form na profil w zestawie domyślnym
PER_PROFILE = 2


@dataclass(frozen=True)
class SweepEntry:
    form: HalfIntegralForm
    profile: str


def profile_of(form: HalfIntegralForm, p: int) -> str:
    label = classify(form, TwistContext(1, 2, p))
    parts = [label.case.value]
    if label.case is Case.IV:
        v = valuation(discriminant4(form), p)
        parts.append(f"v(D)={v}" if v < 9 else "v(D)=9+")
    if form.gamma % p:
        parts.append("gamma unit")
        if label.case is Case.IV:
            chi = legendre(form.gamma * (form.alpha // p ** 4), p)
            parts.append(f"chi={chi:+d}")
    else:
        parts.append("p | gamma")
    return " ".join(parts)


def _family(alphas, two_betas, gamma_max: int) -> Iterator[HalfIntegralForm]:
    for alpha in alphas:
        for two_beta in two_betas:
            for gamma in range(1, gamma_max + 1):
                if 4 * alpha * gamma > two_beta * two_beta:
                    yield HalfIntegralForm(alpha, two_beta, gamma)


def _candidates(p: int) -> Iterator[HalfIntegralForm]:
    p4, p5 = p ** 4, p ** 5
    units = range(1, p)
    yield from _family([p4, 2 * p4], [1, 2, -1], p * p)                      # I
    yield from _family([p4 * a for a in units], [p, 2 * p, -p], p * p)       # II
    yield from _family([p5, 2 * p5], [p, -p], p * p)                         # III
    yield from _family([p4 * a for a in units], [p * p * t for t in range(0, 2 * p)], p5)  # IV
    yield from _family([p5, 2 * p5], [p * p * t for t in range(0, p + 1)], p * p)          # V


def default_sweep(p: int, per_profile: int = PER_PROFILE) -> List[SweepEntry]:
    """Po per_profile najmniejszych (w kolejności generowania) form na profil."""
    counts: Dict[str, int] = {}
    entries: List[SweepEntry] = []
    for form in _candidates(p):
        profile = profile_of(form, p)
        if counts.get(profile, 0) >= per_profile:
            continue
        counts[profile] = counts.get(profile, 0) + 1
        entries.append(SweepEntry(form, profile))
    logger.debug("Zestaw domyślny p=%d: %d form, %d profili", p, len(entries), len(counts))
    return entries


def random_sweep(p: int, count: int, seed: int) -> List[SweepEntry]:
    rng = random.Random(seed)
    entries = []
    while len(entries) < count:
        alpha = p ** 4 * rng.randint(1, 2 * p)
        two_beta = rng.randint(-p ** 3, p ** 3)
        gamma = rng.randint(1, p ** 3)
        form = HalfIntegralForm(alpha, two_beta, gamma)
        if form.is_positive():
            entries.append(SweepEntry(form, profile_of(form, p)))
    return entries


def covered_profiles(entries: List[SweepEntry]) -> List[Tuple[str, int]]:
    counts: Dict[str, int] = {}
    for entry in entries:
        counts[entry.profile] = counts.get(entry.profile, 0) + 1
    return sorted(counts.items())
