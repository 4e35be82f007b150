"""Standard translation, first-order evaluation, and quasi-modal recognition."""

import random

import pytest

from modalkit import Model, bits, parse
from modalkit.errors import InvalidInputError, ParseError
from modalkit.firstorder import (
    BOTTOM,
    Conjunction,
    Exists,
    Forall,
    Implication,
    Negation,
    PAtom,
    RAtom,
    check_translation_equivalence,
    fo_satisfies,
    frame_satisfies,
    free_variables,
    is_quasi_modal,
    parse_fo,
    render_fo,
    simplify_fo,
    standard_translation,
)

from conftest import random_depth_formula, random_frame

# the twelve golden sentences: concrete syntax plus expected recognizer verdict
QM_GOLDEN = [
    ("forall x (x R x)", True),
    ("forall x forall y (x R y -> y R x)", True),
    ("forall x exists y (y R x)", False),
    ("forall x forall y (x R y -> forall z (y R z -> x R z))", True),
    ("forall x exists y (x R y)", True),
    ("forall x (x R x | forall y (x R y -> y R x))", True),
    ("forall x forall y (x R y -> x R x)", True),
    ("forall x (~(x R x))", False),
    ("forall x (x R x -> x R x)", False),
    ("exists x (x R x)", False),
    ("forall x forall y (x R y & y R x)", False),
    ("forall x exists y (x R y & forall z (y R z -> x R z))", True),
]


def test_standard_translation_examples():
    assert standard_translation(parse("[]p0"), 0) == \
        Forall(1, Implication(RAtom(0, 1), PAtom(0, 1)))
    assert standard_translation(parse("p0"), 0) == PAtom(0, 0)
    simplified = simplify_fo(standard_translation(parse("<>[]p0"), 0))
    assert simplified == Exists(1, Conjunction(
        RAtom(0, 1), Forall(2, Implication(RAtom(1, 2), PAtom(0, 2)))))


def test_translation_has_one_free_variable():
    rng = random.Random(31)
    for _ in range(200):
        f = random_depth_formula(rng, 3)
        for x in (0, 2):
            translated = standard_translation(f, x)
            assert free_variables(translated) <= {x}
            # constants like true have no variables at all; anything with a
            # variable or box mentions x
            if free_variables(translated):
                assert free_variables(translated) == {x}


def test_fo_satisfies_examples(f1, f2):
    serial = parse_fo("forall x exists y (x R y)")
    assert not frame_satisfies(f2, serial)  # fails at world 1
    assert frame_satisfies(f1, parse_fo("forall x (x R x)"))
    m = Model(f2, {0: bits([1])})
    guarded = parse_fo("forall y (x R y -> P0(y))")
    (x,) = free_variables(guarded)
    assert fo_satisfies(m, guarded, {x: 0})
    with pytest.raises(InvalidInputError):
        fo_satisfies(m, guarded, {})


def test_translation_equivalence_examples(f2):
    m = Model(f2, {0: bits([1])})
    assert check_translation_equivalence(m, 0, parse("[]p0"))
    assert check_translation_equivalence(m, 0, parse("false"))
    assert check_translation_equivalence(m, 1, parse("false"))


def test_translation_equivalence_fuzz():
    rng = random.Random(32)
    for _ in range(1000):
        fr = random_frame(rng, 4)
        m = Model(fr, {i: rng.randrange(1 << fr.n) for i in range(3)})
        a = rng.randrange(fr.n)
        f = random_depth_formula(rng, 3)
        assert check_translation_equivalence(m, a, f)


def test_simplify_preserves_satisfaction():
    rng = random.Random(33)
    for _ in range(300):
        fr = random_frame(rng, 3)
        m = Model(fr, {i: rng.randrange(1 << fr.n) for i in range(3)})
        f = standard_translation(random_depth_formula(rng, 3), 0)
        simplified = simplify_fo(f)
        for a in range(fr.n):
            assert fo_satisfies(m, f, {0: a}) == fo_satisfies(m, simplified, {0: a})


@pytest.mark.parametrize("text,expected", QM_GOLDEN)
def test_quasi_modal_golden(text, expected):
    result = is_quasi_modal(parse_fo(text))
    assert result.quasi_modal == expected
    if not expected:
        assert result.violation


def test_quasi_modal_violation_details():
    assert "second slot" in is_quasi_modal(
        parse_fo("forall x exists y (y R x)")).violation
    assert "universal quantifier" in is_quasi_modal(
        parse_fo("exists x (x R x)")).violation
    assert "negation" in is_quasi_modal(
        parse_fo("forall x (~(x R x))")).violation
    with pytest.raises(InvalidInputError):
        is_quasi_modal(parse_fo("x R y"))


def test_quasi_modal_preservation(frames_upto3_iso, morphism_catalog):
    from modalkit.frame import (
        disjoint_union,
        generated_subframe,
        morphism_image,
    )

    sentences = [parse_fo(text) for text, expected in QM_GOLDEN if expected]
    frames = frames_upto3_iso
    satisfied = {
        (i, si): frame_satisfies(fr, s)
        for i, fr in enumerate(frames) for si, s in enumerate(sentences)
    }
    # generated subframes
    for i, fr in enumerate(frames):
        for seeds in range(1, 1 << fr.n):
            sub, _ = generated_subframe(fr, seeds)
            for si, s in enumerate(sentences):
                if satisfied[i, si]:
                    assert frame_satisfies(sub, s)
    # bounded-morphic images
    for (i, j), morphisms in morphism_catalog.items():
        for g in morphisms:
            image, _ = morphism_image(g)
            for si, s in enumerate(sentences):
                if satisfied[i, si]:
                    assert frame_satisfies(image, s)
    # disjoint unions, both directions
    rng = random.Random(34)
    for _ in range(150):
        i, j = rng.randrange(len(frames)), rng.randrange(len(frames))
        union, _ = disjoint_union([frames[i], frames[j]])
        for si, s in enumerate(sentences):
            in_union = frame_satisfies(union, s)
            assert in_union == (satisfied[i, si] and satisfied[j, si])


def test_fo_parse_render_round_trip():
    for text, _ in QM_GOLDEN:
        sentence = parse_fo(text)
        assert parse_fo(render_fo(sentence)) == sentence


def test_fo_parser_errors():
    with pytest.raises(ParseError):
        parse_fo("forall x (x R)")
    with pytest.raises(ParseError):
        parse_fo("forall x (x S x)")
    with pytest.raises(ParseError):
        parse_fo("P0(x")
    with pytest.raises(ParseError):
        parse_fo("")


def test_fo_render_forms():
    assert render_fo(parse_fo("forall x (x R x)")) == "forall v0 (v0 R v0)"
    sentence = Implication(Forall(0, RAtom(0, 0)), PAtom(1, 1))
    assert render_fo(sentence) == "(forall v0 (v0 R v0)) -> P1(v1)"
    assert parse_fo(render_fo(sentence)) == sentence
    assert render_fo(Negation(BOTTOM)) == "~false"
