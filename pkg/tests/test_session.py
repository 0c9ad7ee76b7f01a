import pytest
from sympy import GF

from formalglue.errors import BadField, ConstantTermPresent, ParseError, UndefinedName
from formalglue.gluing import glue
from formalglue.session import RingDecl, parse_session, serialize, with_field

from conftest import CORPUS


def test_parse_ring_and_map():
    doc = parse_session("ring N = k[[x, y]] / (x*y)\nring K = k\nmap f : N -> K { }\n")
    N = doc.objects["N"]
    assert N.ambient_vars == ("x", "y") and [str(g) for g in N.std] == ["x*y"]
    assert doc.objects["f"].is_surjective
    assert doc.find("N") == RingDecl("N", ("x", "y"), ("x*y",))


def test_multiline_statement_and_comments():
    text = "ring A = k[[x, y]]  # plane\nring B = k[[x, y]] / (x,\n  y^2)\nmap f : A -> B {\n x -> x ;\n y -> y }\n"
    doc = parse_session(text)
    assert doc.objects["f"].images[1] == doc.objects["B"].var("y")


def test_unlisted_variables_map_to_zero():
    doc = parse_session("ring A = k[[x, y]]\nring B = k[[t]]\nmap f : A -> B { x -> t }\n")
    assert doc.objects["f"].images[1].is_zero()


def test_undefined_name():
    with pytest.raises(UndefinedName, match="Q") as info:
        parse_session("ring A = k[[x]]\nmap f : A -> Q { }\n")
    assert info.value.line == 2


def test_constant_term_location():
    with pytest.raises(ConstantTermPresent) as info:
        parse_session("ring A = k[[x, y]] / (x*y, 1 + x)\n")
    assert (info.value.line, info.value.column) == (1, 28)
    assert str(info.value).startswith("line 1, column 28: ")


def test_parse_error():
    with pytest.raises(ParseError) as info:
        parse_session("ring A = k[[x]]\nring B = k[[x]] / (x^^2)\n")
    assert info.value.line == 2


def test_bad_field():
    with pytest.raises(BadField):
        parse_session("field GF(8)\nring A = k[[x]]\n")


def test_field_prime():
    doc = parse_session("field GF(7)\nring A = k[[x]] / (7*x + x^2)\n")
    assert doc.objects["A"].field == GF(7)
    assert [str(g) for g in doc.objects["A"].std] == ["x^2"]


def test_corpus_round_trip():
    text = CORPUS.read_text()
    doc = parse_session(text)
    again = parse_session(serialize(doc))
    assert again == doc
    assert serialize(again) == serialize(doc)


def test_with_field_changes_every_object():
    doc = with_field(CORPUS.read_text(), "GF(7)")
    assert doc.field == "GF(7)"
    G = glue(*doc.objects["node"])
    assert G.charts[0].presentation.field == GF(7)
