import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import SHAPES, rand_complex, rand_nonneg, rand_selfconj, rand_tscalar, rel
from oracles import circular_convolve, conj_reflect
from talgebra import tscalar as ts
from talgebra.errors import DomainError, ShapeError, SingularError
from talgebra.tscalar import TScalar

seeds = st.integers(0, 2**31 - 1)
fast = settings(max_examples=25, deadline=None)
RING_SHAPES = [(1,), (2,), (3, 3), (2, 3, 2)]


def T(*vals):
    return TScalar.from_spatial(np.array(vals, dtype=complex))


def close(x, y, tol=1e-10):
    return rel(x.spatial, y.spatial) < tol or np.linalg.norm(x.spatial - y.spatial) < 1e-12


class TestExamples:
    def test_identities(self):
        assert np.allclose(ts.one((2,)).spatial, [1, 0])
        assert np.allclose(ts.one((3, 3)).spectrum, 1)
        x = T(1, 2)
        assert ts.add(ts.zero((2,)), x) == x

    def test_add_scale(self):
        assert np.allclose((T(1, 2) + T(3, 4)).spatial, [4, 6])
        assert np.allclose(ts.scale(0, T(1, 2)).spatial, 0)
        assert np.allclose(ts.scale(2 + 1j, T(1, 0)).spatial, [2 + 1j, 0])

    def test_mul(self):
        a, b, c, d = 1.5, -2.0, 0.5, 3.0
        assert np.allclose(ts.mul(T(a, b), T(c, d)).spatial, [a * c + b * d, a * d + b * c])
        x = T(1 + 1j, 2 - 1j)
        assert ts.mul(ts.one((2,)), x) == x
        assert np.allclose(ts.mul(T(2j), T(3)).spatial, [6j])

    def test_power(self):
        e = ts.one((3, 2))
        assert ts.power(e, 7) == e
        q = ts.idempotent((3, 2), 4)
        assert ts.power(q, 3) == q
        assert np.allclose(ts.power(T(0, 1), 2).spatial, [1, 0])
        assert ts.power(T(0, 1), 0) == ts.one((2,))

    def test_conj(self):
        a, b, c = 1.0, 2.0, 3.0
        assert np.allclose(ts.conj(T(a, b)).spatial, [a, b])
        assert np.allclose(ts.conj(T(a, b, c)).spatial, [a, c, b])
        assert ts.conj(ts.one((3, 3))) == ts.one((3, 3))

    def test_self_conjugate(self):
        assert ts.is_self_conjugate(ts.one((2, 2)))
        x = T(1j, 0)
        assert np.allclose(x.spectrum, [1j, 1j])
        assert not ts.is_self_conjugate(x)

    def test_order(self):
        assert ts.partial_le(ts.zero((2,)), ts.one((2,)))
        x = T(0, 1)
        assert np.allclose(x.spectrum, [1, -1])
        assert not ts.is_nonnegative(x)
        q1, q2 = ts.primitive_idempotents((2,))
        assert not ts.partial_le(q1, q2) and not ts.partial_le(q2, q1)

    def test_order_needs_self_conjugate(self):
        with pytest.raises(DomainError):
            ts.is_nonnegative(T(1j, 0))
        with pytest.raises(DomainError):
            ts.partial_le(T(1j, 0), T(1, 0))

    def test_roots(self):
        e = ts.one((2, 2))
        assert ts.nth_root(e, 2) == e
        assert np.allclose(ts.nth_root(T(4, 0), 2).spatial, [2, 0])
        with pytest.raises(DomainError):
            ts.nth_root(T(0, 1), 2)

    def test_abs(self):
        assert ts.abs_r(ts.zero((3,))) == ts.zero((3,))
        assert ts.abs_r(T(0, 1)) == ts.one((2,))

    def test_inner_products(self):
        q = ts.primitive_idempotents((2, 3))
        assert ts.psi(q[0], q[1]) == ts.zero((2, 3))
        for k in range(6):
            assert abs(ts.inner_canonical(q[k], q[k]) - 1 / 6) < 1e-14

    def test_idempotents(self):
        q1, q2 = ts.primitive_idempotents((2,))
        assert np.allclose(q1.spatial, [0.5, 0.5]) and np.allclose(q2.spatial, [0.5, -0.5])
        for dims in [(2,), (3, 3), (2, 3, 2)]:
            qs = ts.primitive_idempotents(dims)
            total = qs[0]
            for q in qs.members[1:]:
                total = total + q
            assert total == ts.one(dims)
            assert ts.is_idempotent(ts.one(dims) - qs[0])
            K = len(qs)
            gram = np.array([[ts.inner_canonical(a, b) for b in qs] for a in qs])
            assert np.allclose(gram, np.eye(K) / K, atol=1e-14)

    def test_tau(self):
        dims = (3, 2)
        qs = ts.primitive_idempotents(dims)
        for k in range(6):
            assert abs(ts.tau(k, qs[k]) - 1) < 1e-12
            assert abs(ts.tau((k + 1) % 6, qs[k])) < 1e-12
            assert abs(ts.tau(k, ts.one(dims)) - 1) < 1e-12
        with pytest.raises(IndexError):
            ts.tau(6, qs[0])

    def test_invert(self):
        e = ts.one((2, 2))
        assert ts.invert(e) == e
        c = T(1, 1)
        assert not ts.is_invertible(c)
        assert ts.tscalar_rank(c) == ts.primitive_idempotents((2,))[0]
        with pytest.raises(SingularError) as ei:
            ts.invert(c)
        assert ei.value.dead_slices == (1,)
        q = ts.idempotent((3,), 1)
        assert ts.tscalar_rank(q) == q

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            ts.add(T(1, 2), T(1, 2, 3))
        with pytest.raises(ShapeError):
            ts.mul(T(1, 2), T(1, 2, 3))


class TestRing:
    @fast
    @given(dims=st.sampled_from(RING_SHAPES), seed=seeds)
    def test_axioms(self, dims, seed):
        r = np.random.default_rng(seed)
        x, y, z = (rand_tscalar(r, dims) for _ in range(3))
        assert close((x * y) * z, x * (y * z))
        assert close(x * y, y * x)
        assert close(x * (y + z), x * y + x * z)
        assert close(ts.one(dims) * x, x)
        assert close(ts.zero(dims) + x, x)
        assert close(x + (-x), ts.zero(dims))

    @fast
    @given(dims=st.sampled_from(SHAPES), seed=seeds)
    def test_mul_is_circular_convolution(self, dims, seed):
        r = np.random.default_rng(seed)
        x, y = rand_complex(r, dims), rand_complex(r, dims)
        got = ts.mul(TScalar.from_spatial(x), TScalar.from_spatial(y)).spatial
        assert rel(got, circular_convolve(x, y)) < 1e-10


class TestConjugation:
    @fast
    @given(dims=st.sampled_from(RING_SHAPES), seed=seeds)
    def test_properties(self, dims, seed):
        r = np.random.default_rng(seed)
        x, y = rand_tscalar(r, dims), rand_tscalar(r, dims)
        lam = complex(*r.standard_normal(2))
        assert rel(ts.conj(x).spatial, conj_reflect(x.spatial)) < 1e-12
        assert rel(ts.conj_spatial(x).spatial, conj_reflect(x.spatial)) < 1e-14
        assert close(ts.conj(ts.conj(x)), x)
        assert close(ts.conj(x * y), ts.conj(x) * ts.conj(y))
        assert close(ts.conj(x + y), ts.conj(x) + ts.conj(y))
        assert close(ts.conj(lam * x), np.conj(lam) * ts.conj(x))

    @fast
    @given(dims=st.sampled_from(RING_SHAPES), seed=seeds)
    def test_complex_like_identities(self, dims, seed):
        r = np.random.default_rng(seed)
        x, y = rand_tscalar(r, dims), rand_tscalar(r, dims)
        re, im = ts.re(x), ts.im(x)
        assert ts.is_self_conjugate(re) and ts.is_self_conjugate(im)
        assert close(re + 1j * im, x, 1e-12)
        assert close(ts.conj(x), re - 1j * im)
        assert close(ts.conj(x) * x, re * re + im * im)
        assert close(x + y, (re + ts.re(y)) + 1j * (im + ts.im(y)))
        assert close(x * y, (re * ts.re(y) - im * ts.im(y)) + 1j * (im * ts.re(y) + re * ts.im(y)))


class TestOrder:
    @fast
    @given(dims=st.sampled_from(RING_SHAPES), seed=seeds)
    def test_axioms(self, dims, seed):
        r = np.random.default_rng(seed)
        x = rand_selfconj(r, dims)
        n1, n2 = rand_nonneg(r, dims), rand_nonneg(r, dims)
        y, z = x + n1, x + n1 + n2
        assert ts.partial_le(x, x)
        assert ts.partial_le(x, y) and ts.partial_le(y, z) and ts.partial_le(x, z)
        if ts.partial_le(y, x):
            assert close(x, y, 1e-9)
        # conj(x) o x is always nonnegative
        w = rand_tscalar(r, dims)
        assert ts.is_nonnegative(ts.conj(w) * w)

    @fast
    @given(dims=st.sampled_from(RING_SHAPES), p=st.integers(1, 4), seed=seeds)
    def test_root_roundtrip(self, dims, p, seed):
        x = rand_nonneg(np.random.default_rng(seed), dims)
        y = ts.nth_root(x, p)
        assert ts.is_nonnegative(y)
        assert close(ts.power(y, p), x)

    def test_root_clamps_tiny_negative_residue(self):
        x = TScalar.from_spectrum(np.array([1.0, -1e-13]))
        assert ts.is_nonnegative(x)
        assert np.all(ts.nth_root(x, 2).spectrum.real >= 0)
        assert not ts.is_nonnegative(TScalar.from_spectrum(np.array([1.0, -1e-6])))

    @fast
    @given(dims=st.sampled_from(RING_SHAPES), seed=seeds)
    def test_absolute_value(self, dims, seed):
        r = np.random.default_rng(seed)
        x, y = rand_tscalar(r, dims), rand_tscalar(r, dims)
        a = complex(*r.standard_normal(2))
        assert ts.is_nonnegative(ts.abs_r(x))
        assert close(ts.abs_r(a * x), abs(a) * ts.abs_r(x))
        assert close(ts.abs_r(x * y), ts.abs_r(x) * ts.abs_r(y))
        assert ts.partial_le(ts.abs_r(x + y), ts.abs_r(x) + ts.abs_r(y))
        assert close(ts.psi(x, x), ts.power(ts.abs_r(x), 2))
        assert close(ts.abs_r(x), ts.nth_root(ts.psi(x, x), 2))


class TestInnerProduct:
    @fast
    @given(dims=st.sampled_from(RING_SHAPES), seed=seeds)
    def test_identities(self, dims, seed):
        r = np.random.default_rng(seed)
        x, y, a, b = (rand_tscalar(r, dims) for _ in range(4))
        r2 = lambda z: ts.power(ts.abs_r(z), 2)
        pol = 0.25 * (r2(x + y) - 1j * r2(x + 1j * y) - r2(x - y) + 1j * r2(x - 1j * y))
        assert close(ts.psi(x, y), pol)
        assert close(ts.psi(x, y), ts.conj(ts.psi(y, x)))
        assert close(ts.psi(a * x, b * y), ts.psi(a, b) * ts.psi(x, y))
        assert close(ts.psi(x + y, a + b), ts.psi(x, a) + ts.psi(x, b) + ts.psi(y, a) + ts.psi(y, b))

    @fast
    @given(dims=st.sampled_from(RING_SHAPES), seed=seeds)
    def test_orthogonal_over_algebra_implies_orthogonal_over_field(self, dims, seed):
        r = np.random.default_rng(seed)
        K = int(np.prod(dims))
        mask = r.random(K) < 0.5
        x = TScalar.from_spectrum((r.standard_normal(K) * mask).reshape(dims))
        y = TScalar.from_spectrum((r.standard_normal(K) * ~mask).reshape(dims))
        assert ts.psi(x, y) == ts.zero(dims) or np.allclose(ts.psi(x, y).spectrum, 0)
        assert abs(ts.inner_canonical(x, y)) < 1e-12


class TestIdempotentSplit:
    """Direct-product equalities for a random idempotent P and its complement."""

    @fast
    @given(dims=st.sampled_from([(2,), (3, 3), (2, 3, 2)]), seed=seeds)
    def test_split(self, dims, seed):
        r = np.random.default_rng(seed)
        K = int(np.prod(dims))
        P = TScalar.from_spectrum((r.random(K) < 0.5).astype(float).reshape(dims))
        Pc = ts.one(dims) - P
        assert ts.is_idempotent(P) and ts.is_idempotent(Pc)
        assert ts.psi(P, Pc) == ts.zero(dims) or np.allclose(ts.psi(P, Pc).spectrum, 0)
        x, y = rand_tscalar(r, dims), rand_tscalar(r, dims)
        lam = complex(*r.standard_normal(2))
        assert close(y, P * y + Pc * y)
        assert np.allclose(ts.psi(P * y, Pc * y).spectrum, 0, atol=1e-12)
        assert close(ts.conj(x), ts.conj(P * x) + ts.conj(Pc * x))
        assert close(ts.abs_r(x), ts.abs_r(P * x) + ts.abs_r(Pc * x))
        assert close(lam * x, lam * (P * x) + lam * (Pc * x))
        assert close(x + y, (P * x + P * y) + (Pc * x + Pc * y))
        assert close(ts.psi(x, y), ts.psi(P * x, P * y) + ts.psi(Pc * x, Pc * y))
        assert close(x * y, (P * x) * (P * y) + (Pc * x) * (Pc * y))
        u, v = rand_selfconj(r, dims), rand_selfconj(r, dims)
        both = ts.partial_le(P * u, P * v) and ts.partial_le(Pc * u, Pc * v)
        assert ts.partial_le(u, v) == both


class TestSeries:
    @fast
    @given(dims=st.sampled_from(RING_SHAPES), seed=seeds)
    def test_coordinates_are_spectrum(self, dims, seed):
        r = np.random.default_rng(seed)
        y = rand_tscalar(r, dims)
        c = ts.series_coords(y)
        assert rel(c, y.spectrum.reshape(-1)) < 1e-12
        qs = ts.primitive_idempotents(dims)
        total = ts.zero(dims)
        for k, q in enumerate(qs):
            total = total + c[k] * q
        assert close(total, y)

    @fast
    @given(dims=st.sampled_from(RING_SHAPES), seed=seeds)
    def test_equalities_through_coordinates(self, dims, seed):
        r = np.random.default_rng(seed)
        x, y = rand_tscalar(r, dims), rand_tscalar(r, dims)
        lam = complex(*r.standard_normal(2))
        cx, cy = ts.series_coords(x), ts.series_coords(y)
        co = ts.series_coords
        assert rel(co(ts.conj(x)), np.conj(cx)) < 1e-10
        assert rel(co(ts.abs_r(x)), np.abs(cx)) < 1e-10
        assert rel(co(lam * x), lam * cx) < 1e-10
        assert rel(co(x + y), cx + cy) < 1e-10
        assert rel(co(ts.psi(x, y)), np.conj(cx) * cy) < 1e-10
        assert rel(co(x * y), cx * cy) < 1e-10
        u, v = rand_selfconj(r, dims), rand_selfconj(r, dims)
        assert ts.partial_le(u, v) == bool(np.all(co(u).real <= co(v).real + 1e-12))


class TestBackwardCompatibility:
    @fast
    @given(seed=seeds)
    def test_shape_one_is_complex_field(self, seed):
        r = np.random.default_rng(seed)
        a, b = complex(*r.standard_normal(2)), complex(*r.standard_normal(2))
        x, y = T(a), T(b)
        assert np.isclose((x * y).spatial[0], a * b, rtol=1e-15)
        assert np.isclose((x + y).spatial[0], a + b, rtol=1e-15)
        assert np.isclose(ts.conj(x).spatial[0], np.conj(a))
        assert np.isclose(ts.abs_r(x).spatial[0], abs(a))
        assert np.isclose(ts.psi(x, y).spatial[0], np.conj(a) * b)
        assert np.isclose(ts.invert(x).spatial[0], 1 / a)
        assert np.isclose(ts.inner_canonical(x, y), np.conj(a) * b)
        assert ts.partial_le(T(abs(a)), T(abs(a) + abs(b)))

    def test_order_zero_shape(self):
        x = TScalar((), spatial=np.array(2 + 1j))
        assert np.isclose((x * x).spatial, (2 + 1j) ** 2)
        assert ts.one(()).spectrum == 1


def test_lazy_forms_consistent(rng):
    x = rand_tscalar(rng, (3, 2))
    y = TScalar.from_spectrum(x.spectrum)
    assert rel(y.spatial, x.spatial) < 1e-12
    with pytest.raises(ValueError):
        x.spatial[0, 0] = 1
