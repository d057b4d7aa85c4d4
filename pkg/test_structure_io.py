#!/usr/bin/env python3
"""
Test script for reading and writing structure files.
"""

import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

import pytest
from sympy import QQ

from kcat.axioms import check_monad
from kcat.errors import ParseError, ShapeMismatch, UnknownRole
from kcat.lincat import make_field
from kcat.reports import suite_passed
from kcat.structure_io import emit, emit_text, parse, parse_text
from kcat.structures import MonadDesc, structurally_equal
from kcat.zoo import conjugation_yd, h4_bimonad, symmetric_group_3, z2_quasi

KZ2 = """\
# kZ/2 written by hand
field q
space F 2
cell mu : F,F -> F
  0 <- 0,0 = 1
  1 <- 0,1 = 1
  1 <- 1,0 = 1
  0 <- 1,1 = 1
cell eta : I -> F
  0 <- - = 1
structure monad kZ2
  carrier = legs [F]
  mu = cell mu
  eta = cell eta
  name = text kZ2
"""


def test_parse_hand_written():
    """Test a small file written by hand."""
    print("Testing a hand-written file...")

    parsed = parse_text(KZ2)
    assert parsed.field == QQ
    assert parsed.spaces["F"].dim == 2
    assert parsed.comments == ["kZ/2 written by hand"]
    monad = parsed.top["kZ2"]
    assert isinstance(monad, MonadDesc)
    assert monad.mu.nnz == 4
    assert suite_passed(check_monad(monad))

    print("✓ Hand-written file tests passed!")


def test_round_trip():
    """Test that emit and parse preserve structures and text."""
    print("Testing round trips...")

    for structures in [{"H4": h4_bimonad()},
                       {"z2": z2_quasi(-1)},
                       {"S3_yd": conjugation_yd(symmetric_group_3())}]:
        text = emit_text(structures, comments=["round trip"])
        parsed = parse_text(text)
        assert set(parsed.top) == set(structures)
        for name, desc in structures.items():
            assert structurally_equal(parsed.top[name], desc)
        assert emit_text(parsed.top, comments=parsed.comments) == text

    print("✓ Round trip tests passed!")


def test_emit_to_file(tmp_path):
    """Test writing and reading back through the filesystem."""
    print("Testing file output...")

    path = os.path.join(str(tmp_path), "h4.kcat")
    emit({"H4": h4_bimonad()}, path)
    parsed = parse(path)
    assert structurally_equal(parsed.top["H4"], h4_bimonad())

    print("✓ File output tests passed!")


def test_bad_literal_reports_position():
    """Test that a zero denominator is reported with its line."""
    print("Testing literal errors...")

    text = "field q\nspace F 2\ncell c : F -> F\n  0 <- 0 = 1/0\n"
    with pytest.raises(ParseError) as info:
        parse_text(text)
    assert info.value.line == 4
    assert info.value.column > 1

    with pytest.raises(ParseError):
        parse_text("field q\nspace F 0\n")
    with pytest.raises(ParseError):
        parse_text("field q\nwidget F\n")

    print("✓ Literal error tests passed!")


def test_unknown_references():
    """Test undeclared spaces and missing or unknown roles."""
    print("Testing unknown references...")

    with pytest.raises(UnknownRole):
        parse_text("field q\nspace F 2\ncell c : G -> F\n")

    no_eta = KZ2.replace("  eta = cell eta\n", "")
    with pytest.raises(UnknownRole):
        parse_text(no_eta)

    extra = KZ2.replace("  name = text kZ2\n", "  unit = cell eta\n")
    with pytest.raises(UnknownRole):
        parse_text(extra)

    with pytest.raises(UnknownRole):
        parse_text(KZ2.replace("structure monad", "structure gizmo"))

    print("✓ Unknown reference tests passed!")


def test_bad_shape_rejected():
    """Test that a structure whose cells do not fit is refused."""
    print("Testing shape errors in files...")

    text = KZ2 + "cell id : F -> F\n  0 <- 0 = 1\n  1 <- 1 = 1\n" \
        "structure monad broken\n  carrier = legs [F]\n  mu = cell id\n  eta = cell eta\n"
    with pytest.raises(ShapeMismatch):
        parse_text(text)

    print("✓ File shape error tests passed!")


def test_field_override():
    """Test that a given field replaces the file's field line."""
    print("Testing field override...")

    gf5 = make_field("fp:5")
    text = "field q\nspace F 1\ncell half : F -> F\n  0 <- 0 = 1/2\n"
    parsed = parse_text(text, field=gf5)
    assert parsed.field == gf5
    assert parsed.cells["half"].get((0,), (0,)) == gf5(3)
    assert parse_text(text).cells["half"].get((0,), (0,)) == QQ(1, 2)

    print("✓ Field override tests passed!")


if __name__ == "__main__":
    print("Running Structure File Tests...\n")

    try:
        import tempfile
        test_parse_hand_written()
        test_round_trip()
        with tempfile.TemporaryDirectory() as tmp:
            test_emit_to_file(tmp)
        test_bad_literal_reports_position()
        test_unknown_references()
        test_bad_shape_rejected()
        test_field_override()

        print("\n🎉 All structure file tests passed!")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
