import pytest
from fusionkit.perm import Permutation
from fusionkit.errors import InvalidPermutation


def test_products_read_left_to_right():
    a = Permutation.from_cycles(3, [[0, 1]])
    b = Permutation.from_cycles(3, [[1, 2]])
    # (a * b)(i) = b(a(i))
    assert (a * b).images == (2, 0, 1)
    assert (b * a).images == (1, 2, 0)
    assert (a * a).is_identity()


def test_parse_cycles_and_images_agree():
    c = Permutation.parse("(1 2 3)", 3)
    assert c.images == (1, 2, 0)
    assert Permutation.parse("2 3 1", 3) == c
    assert Permutation.parse("2,3,1", 3) == c
    assert Permutation.parse("(1 2)(3 4)", 4).order() == 2
    assert Permutation.parse("()", 5).is_identity()


def test_cycle_string_is_one_based_and_round_trips():
    p = Permutation.from_cycles(5, [[0, 3], [1, 2, 4]])
    assert p.to_cycle_string() == "(1 4)(2 3 5)"
    assert Permutation.parse(str(p), 5) == p
    assert str(Permutation.identity(3)) == "()"
    assert p.order() == 6


def test_inverse():
    p = Permutation.parse("(1 2 3 4)", 4)
    assert (p * p.inverse()).is_identity()
    assert p.inverse() == Permutation.parse("(4 3 2 1)", 4)


def test_rejects_non_bijections():
    with pytest.raises(InvalidPermutation):
        Permutation((0, 0, 1))
    with pytest.raises(InvalidPermutation):
        Permutation(())
    with pytest.raises(InvalidPermutation):
        Permutation.from_cycles(3, [[0, 1], [1, 2]])
    with pytest.raises(InvalidPermutation):
        Permutation.from_cycles(3, [[0, 3]])


def test_rejects_malformed_text():
    for bad in ("(1 2", "(1 x)", "1 2", "a b c"):
        with pytest.raises(InvalidPermutation):
            Permutation.parse(bad, 3)


def test_degree_mismatch_in_product():
    try:
        Permutation.identity(2) * Permutation.identity(3)
        assert False, "expected DEGREE_MISMATCH"
    except ValueError as e:
        assert str(e) == "INVALID_PERMUTATION: DEGREE_MISMATCH"
