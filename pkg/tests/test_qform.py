import sys
from fractions import Fraction
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from errors import NonIntegralResult, NotPositiveDefinite, ParseError
from qform import (
    HalfIntegralForm, RationalMatrix2, canonical, content, discriminant4, in_ANplus,
    reduce_gl2z, transform,
)


def test_parse_literal():
    assert HalfIntegralForm.parse("81, 44, 6") == HalfIntegralForm(81, 44, 6)


@pytest.mark.parametrize("text", ["1,2", "a,b,c", "1,2,3,4"])
def test_parse_rejects_malformed_literal(text):
    with pytest.raises(ParseError):
        HalfIntegralForm.parse(text)


def test_positive_rejects_degenerate_form():
    with pytest.raises(NotPositiveDefinite):
        HalfIntegralForm.positive(1, 2, 1)


def test_non_integer_entry_is_type_error():
    with pytest.raises(TypeError):
        HalfIntegralForm(Fraction(1, 2), 0, 1)


def test_discriminant_and_content():
    assert discriminant4(HalfIntegralForm(81, 44, 6)) == -8
    assert content(HalfIntegralForm(6, 4, 2)) == 2
    assert HalfIntegralForm(81, 44, 6).det4 == 8


def test_in_ANplus():
    assert in_ANplus(HalfIntegralForm(81, 44, 6), 81)
    assert not in_ANplus(HalfIntegralForm(81, 44, 6), 2)
    assert not in_ANplus(HalfIntegralForm(1, 2, 1), 1)
    with pytest.raises(ValueError):
        in_ANplus(HalfIntegralForm(1, 0, 1), 0)


def test_transform_by_translation():
    image = transform(HalfIntegralForm(1, 0, 1), RationalMatrix2.upper(1, 1, 1))
    assert image == HalfIntegralForm(1, 2, 2)


@pytest.mark.parametrize("b, expected", [(1, (81, 78, 19)), (2, (81, 24, 2))])
def test_transform_with_rational_matrix(b, expected):
    matrix = RationalMatrix2.upper(1, Fraction(-b, 3), 3)
    assert transform(HalfIntegralForm(81, 44, 6), matrix).key == expected


def test_transform_non_integral_result():
    with pytest.raises(NonIntegralResult):
        transform(HalfIntegralForm(1, 0, 1), RationalMatrix2.upper(1, Fraction(1, 2), 1))


def test_transform_scales_determinant():
    form = HalfIntegralForm(81, 44, 6)
    matrix = RationalMatrix2.upper(1, Fraction(-1, 3), 3)
    image = transform(form, matrix)
    assert image.det4 == matrix.det ** 2 * form.det4


def test_matrix_product():
    a = RationalMatrix2.upper(1, 2, 3)
    b = RationalMatrix2(0, -1, 1, 0)
    assert a @ b == RationalMatrix2(2, -1, 3, 0)
    assert (a @ RationalMatrix2.identity()) == a


@pytest.mark.parametrize(
    "key, reduced",
    [
        ((81, 78, 19), (1, 0, 18)),
        ((81, 24, 2), (2, 0, 9)),
        ((1, 5, 10), (1, 1, 4)),
        ((2, 1, 3), (2, 1, 3)),
    ],
)
def test_reduce_gl2z(key, reduced):
    form = HalfIntegralForm(*key)
    result = reduce_gl2z(form)
    assert result.reduced.key == reduced
    assert transform(result.reduced, RationalMatrix2.from_int(result.transform)) == form
    assert result.reduced.det4 == form.det4


def test_reduce_sign_flip_has_negative_det():
    result = canonical(HalfIntegralForm(2, -1, 3))
    assert result.reduced.key == (2, 1, 3)
    assert result.det_sign == -1


def test_reduced_form_satisfies_inequalities():
    result = reduce_gl2z(HalfIntegralForm(97, -130, 45))
    a, b, c = result.reduced.key
    assert 0 <= b <= a <= c


def test_reduce_rejects_non_positive():
    with pytest.raises(NotPositiveDefinite):
        reduce_gl2z(HalfIntegralForm(1, 3, 1))


def test_canonical_for_higher_level_only_translates():
    result = canonical(HalfIntegralForm(6, 13, 10), level=6)
    assert result.reduced.key == (6, 1, 3)
    assert result.det_sign == 1


# ============================================================================
# KANONICZNOŚĆ I PRAWO ZNAKU
# ============================================================================

_GENERATORS = [
    RationalMatrix2.upper(1, 1, 1),
    RationalMatrix2.upper(1, -1, 1),
    RationalMatrix2(0, -1, 1, 0),
    RationalMatrix2(1, 0, 0, -1),
]


def _random_unimodular(rng, length=8):
    matrix = RationalMatrix2.identity()
    for _ in range(length):
        matrix = matrix @ rng.choice(_GENERATORS)
    return matrix


def _reduced_forms(max_det4):
    for a in range(1, 30):
        for b in range(0, a + 1):
            for c in range(a, max_det4):
                form = HalfIntegralForm(a, b, c)
                if form.det4 > max_det4:
                    break
                yield form


def test_reduction_is_canonical_on_equivalence_classes():
    import random

    rng = random.Random(1)
    for form in _reduced_forms(800):
        assert canonical(form).reduced == form
        image = transform(form, _random_unimodular(rng))
        assert canonical(image).reduced == form


@pytest.mark.parametrize("weight", [19, 20])
def test_lookup_sign_law(weight):
    import random

    from coeffs import CoeffTable, lookup

    rng = random.Random(weight)
    # formy bez automorfizmów o wyznaczniku -1
    strict = [f for f in _reduced_forms(400) if 0 < f.two_beta < f.alpha < f.gamma]
    for _ in range(1000):
        form = rng.choice(strict)
        table = CoeffTable(1, weight, {form.key: 7})
        matrix = _random_unimodular(rng)
        expected = int(matrix.det) ** weight * 7
        assert lookup(table, transform(form, matrix)) == expected


# ============================================================================
# WŁASNOŚCI PRZEKSZTAŁCEŃ
# ============================================================================

_BOX = [
    HalfIntegralForm(a, b, c)
    for a in range(1, 8)
    for b in range(-6, 7)
    for c in range(1, 8)
    if b * b < 4 * a * c
]


def test_transform_composition():
    import random

    rng = random.Random(5)
    for form in _BOX:
        first = _random_unimodular(rng, length=4) @ RationalMatrix2.upper(
            rng.randint(1, 3), rng.randint(-3, 3), rng.choice([-2, -1, 1, 2])
        )
        second = _random_unimodular(rng, length=4)
        assert transform(transform(form, first), second) == transform(form, first @ second)


@pytest.mark.parametrize("b", [1, 2])
def test_transform_composition_with_rational_matrix(b):
    form = HalfIntegralForm(81, 44, 6)
    first = RationalMatrix2.upper(1, Fraction(-b, 3), 3)
    for second in (_GENERATORS + [RationalMatrix2.upper(2, 1, 1)]):
        assert transform(transform(form, first), second) == transform(form, first @ second)


def test_content_invariant_under_unimodular():
    import random

    rng = random.Random(6)
    for form in _BOX:
        scaled = HalfIntegralForm(3 * form.alpha, 3 * form.two_beta, 3 * form.gamma)
        for source in (form, scaled):
            image = transform(source, _random_unimodular(rng))
            assert content(image) == content(source)


def test_reduction_is_idempotent():
    import random

    rng = random.Random(7)
    for form in _BOX:
        image = transform(form, _random_unimodular(rng))
        once = reduce_gl2z(image).reduced
        assert reduce_gl2z(once).reduced == once
        assert canonical(canonical(image).reduced).reduced == canonical(image).reduced
