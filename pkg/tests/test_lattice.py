import pytest

from triprox import (
    LatticeVec,
    OverflowGuardError,
    TriplePoint,
    height,
    is_primitive,
    sign_fixed,
    trilinear_form,
)


def vec(*coords):
    return LatticeVec(tuple(coords))


def triple(x, y, z):
    return TriplePoint(vec(*x), vec(*y), vec(*z))


def neg(v):
    return LatticeVec(tuple(-c for c in v))


class TestTrilinearForm:
    def test_balanced_signs(self):
        assert trilinear_form(triple((1, 1, 1), (1, 1, 1), (1, 1, -2))) == 0

    def test_mixed(self):
        assert trilinear_form(triple((1, -2, 1), (1, 1, 1), (3, 1, 1))) == 2

    def test_linear_in_z(self):
        x, y, z = vec(2, -1, 3), vec(1, 4, -2), vec(5, 1, 1)
        v = trilinear_form(TriplePoint(x, y, z))
        assert trilinear_form(TriplePoint(x, y, neg(z))) == -v
        assert trilinear_form(TriplePoint(neg(x), y, z)) == -v


class TestHeight:
    def test_ones(self):
        assert height(triple((1, 1, 1), (1, 1, 1), (1, 1, 1))) == 1

    def test_example(self):
        assert height(triple((1, -2, 1), (1, 1, 1), (3, 1, 1))) == 6

    def test_scaling_z(self):
        x, y, z = (1, -2, 1), (1, 1, 1), (3, 1, 1)
        h = height(triple(x, y, z))
        for m in (2, -3, 7):
            scaled = tuple(m * c for c in z)
            assert height(triple(x, y, scaled)) == abs(m) * h

    def test_sign_flip_invariance(self):
        x, y, z = vec(2, -5, 1), vec(-1, 1, 3), vec(4, -1, -2)
        h = height(TriplePoint(x, y, z))
        assert height(TriplePoint(neg(x), y, neg(z))) == h
        assert h >= 1


class TestPredicates:
    def test_primitive(self):
        assert not is_primitive(vec(2, 4, 6))
        assert is_primitive(vec(1, 7, -9))
        assert is_primitive(vec(6, 10, 15))

    def test_sign_fixed(self):
        assert sign_fixed(vec(3, -3, 1))
        assert not sign_fixed(vec(-3, 3, 1))
        assert sign_fixed(vec(1, 1, 1))

    def test_negation_involution(self):
        vectors = [vec(3, -3, 1), vec(-2, 5, 5), vec(1, 1, -1), vec(-7, 2, 7)]
        for v in vectors:
            assert sign_fixed(v) != sign_fixed(neg(v))


class TestValidation:
    def test_zero_coordinate_rejected(self):
        with pytest.raises(ValueError):
            vec(1, 0, 2)

    def test_dim_mismatch_rejected(self):
        with pytest.raises(ValueError):
            TriplePoint(vec(1, 1), vec(1, 1, 1), vec(1, 1, 1))

    def test_coordinate_magnitude_guard(self):
        with pytest.raises(OverflowGuardError):
            vec(2**63, 1, 1)

    def test_trilinear_overflow_guard(self):
        big = 2**62
        p = triple((big, 1, 1), (big, 1, 1), (big, 1, 1))
        with pytest.raises(OverflowGuardError):
            trilinear_form(p)
        with pytest.raises(OverflowGuardError):
            height(p)
