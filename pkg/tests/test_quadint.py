"""Ring arithmetic, residue rings, and the prime-field map."""

import random

import pytest

from bianchikit.errors import RingMismatchError
from bianchikit.quadint import (
    QuadInt,
    divide_exact,
    field_map,
    format_gaussian,
    parse_gaussian,
    reduce_mod,
    residue_ring,
)


def g(x, y=0):
    return QuadInt.gauss(x, y)


class TestMul:
    def test_conjugate_product_is_norm(self):
        assert g(3, 2) * g(3, -2) == g(13)

    def test_expansion(self):
        # (3+2i)(-1+i) = -3+3i-2i-2 = -5+i
        assert g(3, 2) * g(-1, 1) == g(-5, 1)

    def test_identity(self):
        q = g(7, -4)
        assert q * g(1) == q

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatchError):
            QuadInt(1, 1, 0) * QuadInt(2, 1, 0)

    def test_half_mode_omega_squared(self):
        # for d = 3 (mod 4), omega^2 = omega - (d+1)/4
        for d in (3, 7, 11):
            omega = QuadInt(d, 0, 1)
            assert omega * omega == QuadInt(d, -(d + 1) // 4, 1)


class TestNorm:
    def test_examples(self):
        assert g(3, 2).norm() == 13
        assert g(0, 0).norm() == 0
        assert g(1, 1).norm() == 2

    def test_zero_iff_zero(self):
        assert g(0).is_zero()
        assert not g(0, 1).is_zero()

    @pytest.mark.parametrize("d", [1, 2, 3, 5, 6, 7, 10, 11])
    def test_multiplicative_random(self, d):
        rng = random.Random(20 + d)
        for _ in range(1250):  # 10^4 pairs overall across the d values
            p = QuadInt(d, rng.randint(-50, 50), rng.randint(-50, 50))
            q = QuadInt(d, rng.randint(-50, 50), rng.randint(-50, 50))
            assert (p * q).norm() == p.norm() * q.norm()

    def test_norm_nonnegative_half_mode(self):
        rng = random.Random(5)
        for _ in range(500):
            q = QuadInt(7, rng.randint(-30, 30), rng.randint(-30, 30))
            assert q.norm() >= 0
            assert q * q.conj() == QuadInt(7, q.norm(), 0)


class TestDivideExact:
    def test_examples(self):
        assert divide_exact(g(-5, 1), g(3, 2)) == g(-1, 1)
        assert divide_exact(g(13), g(3, 2)) == g(3, -2)
        assert divide_exact(g(1), g(3, 2)) is None

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            divide_exact(g(1), g(0))

    @pytest.mark.parametrize("d", [1, 2, 3, 7])
    def test_roundtrip_random(self, d):
        rng = random.Random(100 + d)
        for _ in range(500):
            p = QuadInt(d, rng.randint(-40, 40), rng.randint(-40, 40))
            q = QuadInt(d, rng.randint(-40, 40), rng.randint(-40, 40))
            if q.is_zero():
                continue
            assert divide_exact(p * q, q) == p


class TestResidues:
    def test_examples(self):
        alpha = g(3, 2)
        assert reduce_mod(g(13), alpha).is_zero()
        assert reduce_mod(g(0, 1), alpha) == reduce_mod(g(5), alpha)
        assert reduce_mod(g(-5, 1), alpha).is_zero()

    def test_reduce_iff_divisible(self):
        alpha = g(3, 2)
        rng = random.Random(7)
        hits = 0
        for _ in range(400):
            a = g(rng.randint(-60, 60), rng.randint(-60, 60))
            b = g(rng.randint(-60, 60), rng.randint(-60, 60))
            same = reduce_mod(a, alpha) == reduce_mod(b, alpha)
            divisible = divide_exact(a - b, alpha) is not None
            assert same == divisible
            hits += same
        assert hits  # both branches exercised

    def test_ring_homomorphism(self):
        rng = random.Random(11)
        for alpha in (g(3, 2), g(2), g(1, 1), g(4, 1)):
            ring = residue_ring(alpha)
            for _ in range(200):
                a = g(rng.randint(-50, 50), rng.randint(-50, 50))
                b = g(rng.randint(-50, 50), rng.randint(-50, 50))
                assert ring.reduce(a + b) == ring.reduce(a) + ring.reduce(b)
                assert ring.reduce(a * b) == ring.reduce(a) * ring.reduce(b)

    def test_residue_count_equals_norm_exhaustive(self):
        # every ideal with norm <= 200 appears for some x, y >= 0
        for x in range(15):
            for y in range(15):
                alpha = g(x, y)
                n = alpha.norm()
                if n == 0 or n > 200:
                    continue
                ring = residue_ring(alpha)
                residues = list(ring.elements())
                assert len(residues) == n
                assert len(set(residues)) == n
                for r in residues:
                    assert ring.reduce(r.lift()) == r

    def test_canonical_reps_unique(self):
        alpha = g(3, 2)
        ring = residue_ring(alpha)
        seen = set()
        for x in range(-10, 10):
            for y in range(-10, 10):
                seen.add(ring.reduce(g(x, y)))
        assert len(seen) == 13

    def test_non_gaussian_rejected(self):
        with pytest.raises(ValueError, match="d = 1"):
            reduce_mod(QuadInt(2, 1, 0), QuadInt(2, 3, 0))


class TestFieldMap:
    def test_map_for_13(self):
        fm = field_map(g(3, 2))
        assert fm.p == 13
        assert fm.image_of_i == 5
        ring = residue_ring(g(3, 2))
        # consistency with reduce: the map is a ring isomorphism
        for a in ring.elements():
            for b in list(ring.elements())[:4]:
                assert fm(a * b) == (fm(a) * fm(b)) % 13
                assert fm(a + b) == (fm(a) + fm(b)) % 13
        images = {fm(r) for r in ring.elements()}
        assert images == set(range(13))

    def test_map_for_2(self):
        fm = field_map(g(1, 1))
        assert fm.p == 2

    def test_non_field(self):
        assert field_map(g(2)) is None  # Z[i]/(2) has a nilpotent, not a field
        assert field_map(g(3)) is None  # 9 elements, norm not prime


class TestTextSyntax:
    @pytest.mark.parametrize(
        "text,x,y",
        [
            ("3+2i", 3, 2),
            ("-5+i", -5, 1),
            ("13", 13, 0),
            ("2i", 0, 2),
            ("-i", 0, -1),
            ("i", 0, 1),
            ("0", 0, 0),
            ("7-3i", 7, -3),
        ],
    )
    def test_parse(self, text, x, y):
        assert parse_gaussian(text) == g(x, y)

    def test_roundtrip(self):
        rng = random.Random(3)
        for _ in range(200):
            q = g(rng.randint(-99, 99), rng.randint(-99, 99))
            assert parse_gaussian(format_gaussian(q)) == q

    def test_bad_input(self):
        for text in ("", "x", "3++2i", "2j"):
            with pytest.raises(ValueError):
                parse_gaussian(text)
