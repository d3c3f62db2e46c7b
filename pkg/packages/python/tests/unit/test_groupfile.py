import pytest

from fusionkit.errors import GroupFormatError
from fusionkit.groupfile import format_group_file, load_group_file, parse_group_file
from fusionkit.perm import Permutation


def test_parse_mixed_notation_with_comments():
    text = "# dihedral\n\n4\n(1 2 3 4)\n# reflection as images\n3 2 1 4\n"
    degree, gens = parse_group_file(text)
    assert degree == 4
    assert gens == [Permutation((1, 2, 3, 0)), Permutation((2, 1, 0, 3))]


def test_line_numbers_in_errors():
    with pytest.raises(GroupFormatError) as e:
        parse_group_file("# c\n3\n(1 2 3)\n(1 5)\n")
    assert e.value.line == 4
    assert str(e.value).startswith("GROUP_FORMAT: line 4:")
    with pytest.raises(GroupFormatError) as e:
        parse_group_file("three\n(1 2)\n")
    assert e.value.line == 1
    with pytest.raises(GroupFormatError):
        parse_group_file("# only comments\n")
    with pytest.raises(GroupFormatError) as e:
        parse_group_file("3\n1 2\n")
    assert e.value.line == 2


def test_format_then_load(tmp_path):
    gens = [Permutation.parse("(1 2 3 4 5)", 5), Permutation.parse("(1 2)", 5)]
    text = format_group_file(5, gens, comment="symmetric group\nof degree 5")
    assert text.splitlines()[:3] == ["# symmetric group", "# of degree 5", "5"]
    path = tmp_path / "s5.grp"
    path.write_text(text, encoding="utf-8")
    G = load_group_file(path)
    assert G.order == 120
    assert parse_group_file(text) == (5, gens)


def test_load_respects_cap(tmp_path):
    path = tmp_path / "s5.grp"
    path.write_text("5\n(1 2 3 4 5)\n(1 2)\n", encoding="utf-8")
    from fusionkit.errors import CapExceeded

    with pytest.raises(CapExceeded):
        load_group_file(path, cap=60)


def test_group_without_generators_is_trivial():
    degree, gens = parse_group_file("3\n")
    assert (degree, gens) == (3, [])
