"""Projective matrices: sign canonicalization, classification, finite images."""

import math
import random

import pytest

from bianchikit.errors import GuardExceeded, RingMismatchError
from bianchikit.matgroup import (
    ELLIPTIC,
    LOXODROMIC,
    PARABOLIC,
    ProjMat,
    classify,
    complex_length,
    enumerate_image,
    gaussian_matrix,
    identity_gaussian,
    reduce_mat,
)
from bianchikit.quadint import QuadInt
from bianchikit.words import bianchi_matrices, eval_word, parse_word


def rand_word_matrix(rng, length):
    d = bianchi_matrices()
    steps = [d["a"], d["l"], d["t"], d["t"].inverse(), d["u"], d["u"].inverse()]
    m = identity_gaussian()
    for _ in range(length):
        m = m * steps[rng.randrange(len(steps))]
    return m


class TestProjMat:
    def test_inverse_roundtrip(self):
        t = bianchi_matrices()["t"]
        assert t * t.inverse() == identity_gaussian()

    def test_translations_commute(self):
        d = bianchi_matrices()
        assert d["t"] * d["u"] == d["u"] * d["t"]

    def test_projective_identification(self):
        m = gaussian_matrix(2, 1, 1, 1)
        minus_i = gaussian_matrix(-1, 0, 0, -1)  # canonicalizes to I
        assert minus_i == identity_gaussian()
        assert m * minus_i == m

    def test_sign_canonical_first_entry(self):
        # first nonzero entry must have x > 0, or x = 0 and y > 0
        m = gaussian_matrix(-1, 0, -1, -1)
        assert m.entries[0] == QuadInt.gauss(1, 0)
        z = QuadInt.gauss(0, -1)
        m2 = ProjMat(z, QuadInt.gauss(0), QuadInt.gauss(0), QuadInt.gauss(0, 1))
        assert m2.entries[0] == QuadInt.gauss(0, 1)

    def test_det_must_be_one(self):
        with pytest.raises(ValueError, match="determinant"):
            gaussian_matrix(1, 0, 0, 2)

    def test_ring_mismatch(self):
        t = bianchi_matrices()["t"]
        r = reduce_mat(t, QuadInt.gauss(3, 2))
        with pytest.raises(RingMismatchError):
            t * r

    def test_pow(self):
        t = bianchi_matrices()["t"]
        assert t**5 == gaussian_matrix(1, 5, 0, 1)
        assert t**-3 == gaussian_matrix(1, -3, 0, 1)
        assert t**0 == identity_gaussian()


class TestClassify:
    def test_examples(self):
        assert classify(gaussian_matrix(1, 13, 0, 1)).kind == PARABOLIC
        assert classify(gaussian_matrix(0, -1, 1, 0)).kind == ELLIPTIC
        assert classify(gaussian_matrix(2, 1, 1, 1)).kind == LOXODROMIC
        assert classify(identity_gaussian()).kind == "identity"

    def test_trace_2i_is_loxodromic(self):
        # |trace| = 2 but trace != +-2: not parabolic (and not elliptic:
        # trace^2 = -4 < 0); its square has real trace -6
        m = ProjMat(
            QuadInt.gauss(0, 2), QuadInt.gauss(-1), QuadInt.gauss(1), QuadInt.gauss(0)
        )
        assert classify(m).kind == LOXODROMIC
        sq = m * m
        assert classify(sq).trace in (QuadInt.gauss(-6), QuadInt.gauss(6))

    def test_elliptic_orders(self):
        # trace 0 elements square to the identity in PSL
        a = gaussian_matrix(0, -1, 1, 0)
        assert (a * a).is_identity()
        # trace +-1 elements have order 3
        ta = bianchi_matrices()["t"] * bianchi_matrices()["a"]
        assert classify(ta).kind == ELLIPTIC
        assert (ta * ta * ta).is_identity()

    def test_conjugation_invariance(self):
        rng = random.Random(42)
        samples = [
            gaussian_matrix(1, 13, 0, 1),
            gaussian_matrix(2, 1, 1, 1),
            gaussian_matrix(0, -1, 1, 0),
            eval_word(parse_word("t^-5*u"), bianchi_matrices()),
        ]
        for m in samples:
            kind = classify(m).kind
            for _ in range(20):
                c = rand_word_matrix(rng, rng.randint(1, 6))
                assert classify(c * m * c.inverse()).kind == kind

    def test_sign_flip_invariance(self):
        # ProjMat canonicalizes, so building from negated entries is a no-op
        m = gaussian_matrix(2, 1, 1, 1)
        n = ProjMat(*(-e for e in m.entries))
        assert classify(n).kind == classify(m).kind


class TestComplexLength:
    def test_real_trace_example(self):
        m = gaussian_matrix(2, 1, 1, 1)  # trace 3
        cl = complex_length(m)
        assert abs(cl.ell0 - 2 * math.acosh(1.5)) < 1e-12
        assert cl.theta == 0.0

    def test_roundtrip(self):
        rng = random.Random(9)
        found = 0
        while found < 40:
            m = rand_word_matrix(rng, rng.randint(2, 8))
            if classify(m).kind != LOXODROMIC:
                continue
            found += 1
            cl = complex_length(m)
            tr = complex(m.trace().x, m.trace().y)
            import cmath

            val = 2 * cmath.cosh((cl.ell0 + 1j * cl.theta) / 2)
            err = min(abs(val - tr), abs(val + tr)) / abs(tr)
            assert err < 1e-12
            assert cl.ell0 > 0
            assert -math.pi < cl.theta <= math.pi

    def test_power_scaling(self):
        rng = random.Random(10)
        found = 0
        while found < 10:
            m = rand_word_matrix(rng, rng.randint(2, 6))
            if classify(m).kind != LOXODROMIC:
                continue
            found += 1
            base = complex_length(m).ell0
            acc = m
            for k in range(2, 6):
                acc = acc * m
                assert abs(complex_length(acc).ell0 - k * base) < 1e-9

    def test_rejects_non_loxodromic(self):
        with pytest.raises(ValueError, match="loxodromic"):
            complex_length(gaussian_matrix(1, 1, 0, 1))


class TestReduceMat:
    def test_t13_reduces_to_identity(self):
        alpha = QuadInt.gauss(3, 2)
        m = eval_word(parse_word("t^13"), bianchi_matrices())
        assert reduce_mat(m, alpha).is_identity()

    def test_identity_reduces_to_identity(self):
        for alpha in (QuadInt.gauss(3, 2), QuadInt.gauss(2), QuadInt.gauss(1, 1)):
            assert reduce_mat(identity_gaussian(), alpha).is_identity()

    def test_homomorphism_on_random_words(self):
        rng = random.Random(12)
        alpha = QuadInt.gauss(3, 2)
        for _ in range(60):
            m = rand_word_matrix(rng, rng.randint(1, 6))
            n = rand_word_matrix(rng, rng.randint(1, 6))
            assert reduce_mat(m * n, alpha) == reduce_mat(m, alpha) * reduce_mat(n, alpha)


class TestEnumerateImage:
    def test_orders(self):
        assert enumerate_image(QuadInt.gauss(1, 1)).order == 6  # PSL(2, F_2)
        assert enumerate_image(QuadInt.gauss(1, 0)).order == 1
        assert enumerate_image(QuadInt.gauss(3, 2)).order == 1092  # 13*(13^2-1)/2

    def test_non_field_modulus(self):
        group = enumerate_image(QuadInt.gauss(2))
        # SL_2(Z[i]/2) mod +-1; 2 | 2 so -I = I and sign classes are singletons
        assert group.order == 48

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            enumerate_image(QuadInt.gauss(6, 1), max_scan=10**4)

    def test_group_axioms_small(self):
        group = enumerate_image(QuadInt.gauss(1, 1))
        e = group.identity_index
        for i in range(group.order):
            assert group.mul(i, group.inv(i)) == e
            assert group.mul(e, i) == i
        closure = group.closure(range(group.order))
        assert closure == list(range(group.order))

    def test_contains_random_reductions(self):
        alpha = QuadInt.gauss(3, 2)
        group = enumerate_image(alpha)
        rng = random.Random(13)
        indices = set()
        for _ in range(300):
            m = rand_word_matrix(rng, rng.randint(0, 8))
            indices.add(group.index_of(reduce_mat(m, alpha)))  # KeyError if absent
        closure = group.closure(sorted(indices))
        assert len(closure) == group.order  # samples generate everything
