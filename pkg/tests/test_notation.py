import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi.diagram import canonicalize, decode_key, tree_from_bracket
from jacobi.notation import (
    ParseError,
    Site,
    diagram_from_json,
    diagram_to_json,
    format_bracket,
    format_diagram,
    format_element,
    parse_bracket,
    parse_rooted,
    parse_sited,
)
from jacobi.serialize import element_from_json, element_to_json, parse_element, read_element
from jacobi.spaces import Element, generate_graphs

labels = st.text("abcxyz0123456789_", min_size=1, max_size=3)
brackets = st.recursive(labels, lambda inner: st.tuples(inner, inner), max_leaves=8)


def test_examples():
    assert parse_bracket("[[1,2],3]") == (("1", "2"), "3")
    assert parse_bracket(" ( 2 , (3,4) ) ") == ("2", ("3", "4"))
    assert parse_rooted("[[1,2],3]@4") == ((("1", "2"), "3"), "4")
    body, root = parse_sited("[[1@a,2@b],3@c]@4@d")
    assert root == Site("4", "d")
    assert format_bracket(body) == "[[1@a,2@b],3@c]"


@pytest.mark.parametrize(
    "text, offset",
    [("[1,", 3), ("", 0), ("[1,2", 4), ("[1;2]", 2), ("[1,2]]", 5), ("(1,2]", 4)],
)
def test_errors_report_their_offset(text, offset):
    with pytest.raises(ParseError) as err:
        parse_bracket(text)
    assert err.value.offset == offset


def test_error_line_and_column():
    with pytest.raises(ParseError) as err:
        parse_bracket("[1,\n  [2,]]")
    assert (err.value.line, err.value.column) == (2, 6)


@settings(max_examples=300, deadline=None)
@given(brackets, st.sampled_from(["[", "("]))
def test_bracket_round_trip(b, open_):
    assert parse_bracket(format_bracket(b, open_)) == b


@settings(max_examples=200, deadline=None)
@given(brackets.filter(lambda b: isinstance(b, tuple)), labels)
def test_tree_print_parse_round_trip(b, root):
    d = tree_from_bracket(b, root)
    again = tree_from_bracket(*parse_rooted(format_diagram(d)))
    assert canonicalize(again) == canonicalize(d)


def test_graph_json_round_trip():
    for c in generate_graphs(3, ["1", "2"]):
        d = decode_key(c.key)
        assert diagram_from_json(json.loads(json.dumps(diagram_to_json(d)))) == d


def test_element_text_and_json_round_trips():
    e = Element.from_terms([
        (2, tree_from_bracket((("1", "2"), "3"), "4")),
        (-1, tree_from_bracket(("1", ("2", "3")), "4")),
        (1, tree_from_bracket(("1", "1"), "2")),
    ] + [(3, decode_key(c.key)) for c in generate_graphs(3, ["1"])])
    text = format_element(e)
    assert "(mod 2)" in text
    assert parse_element(text) == e
    assert element_from_json(json.loads(json.dumps(element_to_json(e)))) == e
    assert read_element(json.dumps(element_to_json(e))) == e
    assert read_element("0") == Element()
    assert format_element(Element()) == "0"


def test_element_parse_errors():
    with pytest.raises(ParseError):
        parse_element("three [1,2]@3")
    with pytest.raises(ParseError):
        read_element("{not json")
