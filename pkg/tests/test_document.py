import pytest

from skewgin.document import parse
from skewgin.errors import ParseError, ValidationError

from docs import (MCKAY, MINIMAL, NEGATION_NONINVARIANT,
                  THREE_LOOPS_COMMUTATOR, TRIVIAL_GROUP_PIPELINE, doc)


def test_minimal_document_valid():
    d = parse(doc(MINIMAL))
    assert d.field.is_rationals
    assert d.quiver.vertices == ("1",)
    assert d.potential is None
    assert d.options["max_len"] == 4


def test_bad_json_is_parse_error():
    with pytest.raises(ParseError):
        parse("{not json")


def test_unknown_arrow_location():
    bad = doc(THREE_LOOPS_COMMUTATOR,
              potential=[{"coeff": "1", "cycle": ["q", "y", "z"]}])
    with pytest.raises(ValidationError) as info:
        parse(bad)
    assert any(ptr == "/potential/0/cycle/0" for ptr, _ in info.value.issues)


def test_nonprime_field_location():
    with pytest.raises(ValidationError) as info:
        parse(doc(MINIMAL, field={"p": 6}))
    assert any(ptr == "/field" and "not prime" in msg for ptr, msg in info.value.issues)


def test_open_cycle_rejected():
    bad = doc(MINIMAL, quiver={"vertices": ["1", "2"],
                               "arrows": [{"name": "a", "src": "1", "tgt": "2", "deg": 0}]},
              potential=[{"coeff": "1", "cycle": ["a"]}])
    with pytest.raises(ValidationError) as info:
        parse(bad)
    assert any("not closed" in msg for _, msg in info.value.issues)


def test_group_and_action_completion_from_generator():
    d = parse(doc(MCKAY))
    assert d.group.size == 3
    assert d.action is not None
    # the action map for g2 was generated by composing g with itself
    img = d.action.arrow_images[2]["x"]
    [(path, coeff)] = img.terms.items()
    assert path.arrows == ("x",)
    assert coeff == 4  # 2 * 2 mod 7


def test_action_identity_default():
    d = parse(doc(TRIVIAL_GROUP_PIPELINE))
    assert d.action is not None
    assert d.action.arrow_images[0]["x"].terms


def test_bad_matrix_shape_located():
    bad = doc(MCKAY, action={"g": {"arrow_matrices": {"(v,v)": [["2", "0"], ["0", "2"]]}}})
    with pytest.raises(ValidationError) as info:
        parse(bad)
    assert any(ptr == "/action/g/arrow_matrices/(v,v)" for ptr, _ in info.value.issues)


def test_negation_document_parses():
    d = parse(doc(NEGATION_NONINVARIANT))
    assert d.action is not None
    assert not d.potential.is_zero()
