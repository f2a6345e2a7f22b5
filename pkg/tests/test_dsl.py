from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from dorext.dsl import build, parse_spec, render
from dorext.errors import ArityError, ResolutionError, SpecSyntaxError

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_h_spec_shape():
    doc = parse_spec((FIXTURES / "h_lambda.spec").read_text())
    assert doc.ring is not None and doc.ring.gens == ("x1", "x2")
    assert len(doc.extensions) == 1
    assert len(doc.dcvs) == 1
    built = build(doc)
    assert set(built.extensions) == {"B"} and set(built.dcvs) == {"q"}


def test_empty_input():
    with pytest.raises(SpecSyntaxError) as err:
        parse_spec("")
    assert "1:1" in str(err.value) and "field" in str(err.value)


def test_unknown_generator():
    text = "field Q\nring R gens x1 x2\nmap sigma11 x1 = x3\n"
    with pytest.raises(ResolutionError) as err:
        build(parse_spec(text))
    assert "x3" in str(err.value)


def test_arity():
    text = "field Q\nring R gens x1 x2\nextension B = double(R, sigma, delta, P)\n"
    with pytest.raises(ArityError):
        parse_spec(text)


def test_syntax_error_position():
    with pytest.raises(SpecSyntaxError) as err:
        parse_spec("field Q\nring R gens x1\nrel x1*x1 = = x1\n")
    assert str(err.value).startswith("3:")


@pytest.mark.parametrize("name", sorted(p.name for p in FIXTURES.glob("*.spec")))
def test_shipped_specs_round_trip(name):
    doc = parse_spec((FIXTURES / name).read_text())
    again = parse_spec(render(doc))
    assert again == doc
    assert render(again) == render(doc)


gens = ("x1", "x2")
atoms = st.one_of(
    st.sampled_from(gens),
    st.integers(0, 9).map(str),
    st.tuples(st.integers(1, 9), st.integers(1, 9)).map(lambda t: f"{t[0]}/{t[1]}"),
)


@st.composite
def exprs(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        base = draw(atoms)
        if draw(st.booleans()) and base in gens:
            base = f"{base}^{draw(st.integers(1, 3))}"
        return base
    a, b = draw(exprs(depth=depth - 1)), draw(exprs(depth=depth - 1))
    op = draw(st.sampled_from(["+", "-", "*"]))
    text = f"{a} {op} {b}"
    return f"({text})" if draw(st.booleans()) else text


@st.composite
def documents(draw):
    lines = [draw(st.sampled_from(["field Q", "field F 5", "field F 7"]))]
    lines.append("ring R gens x1 x2 order x1 < x2")
    lines.append("rel x2*x1 = " + draw(st.sampled_from(["x1*x2", "-x1*x2", "x1*x2 + x1^2"])))
    for comp in draw(st.lists(st.sampled_from(["sigma11", "sigma12", "sigma21", "sigma22", "delta1", "delta2"]), max_size=4, unique=True)):
        lines.append(f"map {comp} {draw(st.sampled_from(gens))} = {draw(exprs())}")
    lines.append(f"param p12 = {draw(st.integers(-9, 9))}")
    lines.append(f"tau1 = {draw(exprs())}")
    lines.append("extension B = double(R, sigma, delta, P, tau)")
    lines.append(f"dcv q in B q1 = {draw(exprs())}*y1 q2 = y2 + {draw(exprs())} source(B)")
    lines.append(f"check dcv q --max-degree {draw(st.integers(0, 4))}")
    return "\n".join(lines) + "\n"


@settings(max_examples=80, deadline=None)
@given(documents())
def test_render_parse_round_trip(text):
    doc = parse_spec(text)
    canonical = render(doc)
    assert parse_spec(canonical) == doc
    assert render(parse_spec(canonical)) == canonical
