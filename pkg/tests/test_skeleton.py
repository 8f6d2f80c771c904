import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi.diagram import StructuralError, tree_from_bracket
from jacobi.notation import ParseError
from jacobi.skeleton import (
    Skeleton,
    attach,
    attached_element,
    attached_from_json,
    attached_ihx_relations,
    attached_to_json,
    canonicalize_attached,
    format_atree,
    parse_atree,
    pull_off,
)
from jacobi.spaces import Element, rank_and_torsion, reduce_mod

FOUR = "skel=(s:1,s:2,s:3,s:4)"


def atree(tree, sites, sign="+1", skel=FOUR):
    return parse_atree(f"atree sign={sign} {skel} tree={tree} sites: {sites}")


def test_parse_and_pull_off_the_spec_example():
    t = atree("[[1@a,2@b],3@c]@4@d", "1:(a) 2:(b) 3:(c) 4:(d)")
    e = attached_element([(1, t)])
    assert pull_off(e) == Element.from_diagram(tree_from_bracket((("1", "2"), "3"), "4"))


def test_format_round_trip_is_canonical():
    t = atree("[[1@a,1@b],2@c]@1@d", "1:(d,b,a) 2:(c)", "-1")
    again = parse_atree(format_atree(t))
    assert canonicalize_attached(again) == canonicalize_attached(t)
    assert again.sign == t.sign == -1
    assert format_atree(again) == format_atree(t)


def test_order_on_a_segment_matters():
    a = atree("[1@a,1@b]@2@c", "1:(a,b) 2:(c)")
    b = atree("[1@a,1@b]@2@c", "1:(b,a) 2:(c)")
    # swapping the two leaves is AS; the site order then differs by one transposition
    assert attached_element([(1, a)]) == -attached_element([(1, b)])
    assert pull_off(attached_element([(1, a), (1, b)])) == Element()


def test_circle_positions_are_taken_up_to_rotation():
    skel = "skel=(c:1,s:2)"
    a = atree("[[1@x,1@y],1@z]@2@r", "1:(x,y,z) 2:(r)", skel=skel)
    b = atree("[[1@x,1@y],1@z]@2@r", "1:(z,x,y) 2:(r)", skel=skel)
    assert canonicalize_attached(a) == canonicalize_attached(b)
    seg = "skel=(s:1,s:2)"
    c = atree("[[1@x,1@y],1@z]@2@r", "1:(x,y,z) 2:(r)", skel=seg)
    d = atree("[[1@x,1@y],1@z]@2@r", "1:(z,x,y) 2:(r)", skel=seg)
    assert canonicalize_attached(c)[0] != canonicalize_attached(d)[0]


def test_duplicate_positions_are_rejected():
    t = tree_from_bracket(("1", "1"), "2")
    halves = [h for h, _ in t.univalent]
    with pytest.raises(StructuralError, match="duplicate"):
        attach(t, {h: Fraction(1, 2) for h in halves}, Skeleton.segments("12"))


def test_unknown_sites_and_components():
    with pytest.raises(StructuralError):
        atree("[1@a,2@b]@3@c", "1:(a) 2:(b)", skel="skel=(s:1,s:2,s:3)")
    with pytest.raises(KeyError):
        atree("[1@a,5@b]@3@c", "1:(a) 5:(b) 3:(c)", skel="skel=(s:1,s:2,s:3)")
    with pytest.raises(ParseError):
        parse_atree("atree nonsense")


def test_skeleton_validation():
    with pytest.raises(ValueError):
        Skeleton(())
    with pytest.raises(ValueError):
        Skeleton((("1", "segment"), ("1", "circle")))
    with pytest.raises(ValueError):
        Skeleton((("1", "knot"),))


def test_json_round_trip():
    t = atree("[[1@a,2@b],3@c]@4@d", "1:(a) 2:(b) 3:(c) 4:(d)", "-1")
    back = attached_from_json(json.loads(json.dumps(attached_to_json(t))))
    assert canonicalize_attached(back) == canonicalize_attached(t)
    assert back.sign == -1


def test_attached_ihx_relator_reduces_to_zero():
    trees = [
        atree("[[1@a,2@b],3@c]@4@d", "1:(a) 2:(b) 3:(c) 4:(d)"),
        atree("[1@a,[2@b,3@c]]@4@d", "1:(a) 2:(b) 3:(c) 4:(d)"),
        atree("[[3@c,1@a],2@b]@4@d", "1:(a) 2:(b) 3:(c) 4:(d)"),
    ]
    e = attached_element(zip((1, -1, 1), trees))
    rs = attached_ihx_relations(trees)
    assert e != Element()
    assert reduce_mod(e, rs) == Element()
    report = rank_and_torsion(trees, rs)
    assert report.rank == 2


@settings(max_examples=100, deadline=None)
@given(st.permutations(["p", "q", "r"]), st.sampled_from(["+1", "-1"]))
def test_pull_off_forgets_the_order(order, sign):
    t = atree("[[1@p,1@q],1@r]@2@z", f"1:({','.join(order)}) 2:(z)", sign)
    plain = tree_from_bracket((("1", "1"), "1"), "2")
    assert pull_off(attached_element([(1, t)])) == Element.from_diagram(plain, int(sign))
