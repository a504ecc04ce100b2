from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from torusmirror.errors import InputError, MisuseError
from torusmirror.lattice import (TorusSpec, basis_classes, fixed_classes, invariant_basis,
                                 make_class, validate)


def test_one_dimensional_spec_validates():
    spec = TorusSpec.build([[1]], [[F(3, 10)]], [[3]])
    assert validate(spec).passed


def test_asymmetric_pairing_is_reported():
    """N^T M = ((2,0),(1,2)) is not symmetric, witness names the entry."""
    spec = TorusSpec.build([[1, 0], [0, 1]], [[F(1, 5), 0], [0, F(1, 5)]], [[2, 1], [0, 2]])
    report = validate(spec)
    assert not report.passed
    assert report.first_failure.name == "N^T M symmetric"
    assert "(0,1)" in report.first_failure.witness


def test_kummer_example_validates():
    spec = TorusSpec.build([[1, 0], [0, 1]], [[F(1, 4), 0], [0, F(1, 4)]], [[2, 0], [0, 2]],
                           involution=True)
    assert validate(spec).passed


def test_not_positive_definite():
    spec = TorusSpec.build([[-1]], [[0]], [[3]])
    report = validate(spec)
    assert report.first_failure.name == "N^T M positive definite"


def test_float_input_uses_tolerance():
    spec = TorusSpec.build([[1.0, 1e-15], [0.0, 1.0]], [[0.0, 0.0], [0.0, 0.0]], [[2, 0], [0, 2]])
    assert validate(spec).passed


def test_shape_mismatch_is_input_error():
    with pytest.raises(InputError):
        TorusSpec.build([[1, 0], [0, 1]], [[0]], [[2, 0], [0, 2]])


def test_b_invertibility_is_informational():
    """Every worked family has B = 0, so this check reports but does not fail."""
    spec = TorusSpec.build([[1]], [[0]], [[3]])
    chk = next(c for c in validate(spec).checks if c.name == "B invertible")
    assert not chk.required
    assert validate(spec).passed


def test_basis_n3():
    spec = TorusSpec.from_periods(1j, 3)
    assert [c.coords[0] for c in basis_classes(spec, 1)] == [0, F(1, 3), F(2, 3)]
    assert [c.coords[0] for c in basis_classes(spec, 2)] == [F(j, 6) for j in range(6)]


def test_basis_kummer_level2(kummer):
    classes = basis_classes(kummer, 2)
    assert len(classes) == 16
    assert all(x.denominator in (1, 2, 4) for c in classes for x in c.coords)


def test_basis_rejects_nonpositive_level(hesse):
    with pytest.raises(InputError):
        basis_classes(hesse, 0)


def test_invariant_counts(kummer):
    assert [len(invariant_basis(kummer, k)) for k in range(1, 5)] == [4, 10, 20, 34]
    assert all(len(fixed_classes(kummer, k)) == 4 for k in range(1, 5))


def test_fixed_classes_n3(hesse):
    assert [c.coords[0] for c in fixed_classes(hesse, 1)] == [0]
    assert [c.coords[0] for c in fixed_classes(hesse, 2)] == [0, F(1, 2)]


def test_invariant_basis_needs_involution(hesse):
    with pytest.raises(MisuseError):
        invariant_basis(hesse, 1)


def test_class_canonical_form():
    assert make_class(2, [F(-1, 6)]) == make_class(2, [F(5, 6)])
    assert str(make_class(1, [F(4, 3)])) == "[1/3]@1"
    assert -make_class(1, [F(1, 3)]) == make_class(1, [F(2, 3)])


def test_digest_is_stable():
    a = TorusSpec.from_periods(1j, 3)
    b = TorusSpec.from_periods(1j, 3, name="other")
    assert a.digest() == b.digest()
    assert a.digest() != a.with_shift([F(1, 2)]).digest()


# small valid specs: diagonal-ish N with symmetric N^T M
@st.composite
def small_specs(draw):
    n = draw(st.integers(1, 2))
    d = [draw(st.integers(1, 3)) for _ in range(n)]
    m = [draw(st.integers(1, 4)) for _ in range(n)]
    N = [[d[i] if i == j else 0 for j in range(n)] for i in range(n)]
    M = [[F(m[i]) if i == j else F(0) for j in range(n)] for i in range(n)]
    B = [[F(0)] * n for _ in range(n)]
    return TorusSpec.build(M, B, N, involution=True)


@settings(max_examples=40, deadline=None)
@given(small_specs(), st.integers(1, 6))
def test_basis_count_and_closure(spec, k):
    classes = basis_classes(spec, k)
    assert len(classes) == k ** spec.n * abs(spec.det_N)
    assert len(set(classes)) == len(classes)
    assert {-c for c in classes} == set(classes)
    assert len(invariant_basis(spec, k)) == (len(classes) + len(fixed_classes(spec, k))) // 2


@settings(max_examples=30, deadline=None)
@given(small_specs(), st.integers(1, 5))
def test_validation_stable_under_scaling(spec, k):
    scaled = spec.with_N((spec.N_array * k).tolist())
    assert validate(spec).passed == validate(scaled).passed
