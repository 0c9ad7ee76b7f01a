from pathlib import Path

import pytest
from sympy import QQ

from formalglue.poly import parse_poly
from formalglue.session import parse_session


@pytest.fixture
def P2():
    """Parser for polynomials in x, y over QQ."""
    return lambda s: parse_poly(s, ("x", "y"), QQ)


@pytest.fixture
def P3():
    return lambda s: parse_poly(s, ("x", "y", "z"), QQ)


CORPUS = Path(__file__).resolve().parents[1] / "corpus" / "gluings.fg"


@pytest.fixture(scope="session")
def corpus():
    """The shipped session document, parsed once."""
    return parse_session(CORPUS.read_text())
