import math

import pytest

from spinbus.core.errors import ParseError
from spinbus.repositories.impl import GeometryFileRepositoryImpl, load_geometry
from spinbus.repositories.impl.geometry_file_repository_impl import parse_geometry
from tests.conftest import CONFIGS

TEXT = """\
# label x y z [t2]
sensor  0.10 0.20 -0.90

C1 -0.601 0.676 -0.692   # methyl
C2 -1.260 -1.451 2.904 0.005
"""


def test_parse_entries():
    entries = parse_geometry(TEXT)
    assert [e.label for e in entries] == ["sensor", "C1", "C2"]
    assert entries[1].position_nm == (-0.601, 0.676, -0.692)
    assert math.isinf(entries[0].t2)
    assert entries[2].t2 == 0.005


@pytest.mark.parametrize(
    "text, line",
    [
        ("a 1 2\n", 1),
        ("a 1 2 3\nb 1 x 3\n", 2),
        ("a 1 2 3\n\na 4 5 6\n", 3),
        ("a 1 2 3 -1\n", 1),
        ("a nan 2 3\n", 1),
        ("a 1 2 3 4 5\n", 1),
    ],
)
def test_malformed_lines_report_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_geometry(text, source="mol.xyz")
    assert info.value.line == line
    assert info.value.message.startswith(f"mol.xyz:{line}:")


def test_empty_geometry():
    with pytest.raises(ParseError):
        parse_geometry("# nothing here\n\n")


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        GeometryFileRepositoryImpl().load(tmp_path / "absent.xyz")


def test_bundled_valine_geometry():
    entries = load_geometry(CONFIGS / "valine.xyz")
    assert [e.label for e in entries][0] == "sensor"
    assert len(entries) == 4
