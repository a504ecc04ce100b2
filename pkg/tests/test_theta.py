from __future__ import annotations

import itertools
import math
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torusmirror.errors import ConvergenceError, InputError, PrecisionError
from torusmirror.lattice import TorusSpec, basis_classes
from torusmirror.specfile import load_spec
from torusmirror.theta import (SeriesParams, canonical_theta, pairing_form, structure_coefficient,
                               tail_bound, theta_char)


def box_sum(G, weight, c, R=12):
    """Direct sum of exp(-pi weight (c - l)^T G (c - l)) over the box |l| <= R."""
    G = np.atleast_2d(G)
    n = G.shape[0]
    pts = np.array(list(itertools.product(range(-R, R + 1), repeat=n)), dtype=float)
    d = np.asarray(c, dtype=float) - pts
    return complex(np.exp(-math.pi * weight * np.einsum("pi,ij,pj->p", d, G, d)).sum())


def test_theta_null_value():
    """theta[0,0](2i) against the Jacobi theta function."""
    value = theta_char(0, 0, 2j)
    assert abs(value - 1.0037349) < 1e-7
    assert abs(value - complex(mpmath.jtheta(3, 0, mpmath.exp(-2 * mpmath.pi)))) < 1e-14


@pytest.mark.parametrize("tau, z", [(1j, 0.2), (0.3 + 0.8j, 0.1 + 0.05j), (-0.5 + 2j, -0.4j)])
def test_theta_with_argument_matches_jacobi(tau, z):
    q = mpmath.exp(1j * mpmath.pi * tau)
    expected = complex(mpmath.jtheta(3, mpmath.pi * z, q))
    assert abs(theta_char(0, 0, tau, z) - expected) < 1e-13


@settings(max_examples=25, deadline=None)
@given(st.fractions(-2, 2, max_denominator=12), st.floats(-1, 1), st.floats(0.3, 3))
def test_characteristic_sign_symmetry(a, x, y):
    tau = complex(x, y)
    assert abs(theta_char([a], 0, tau) - theta_char([-a], 0, tau)) < 1e-12


def test_diagonal_factorizes():
    one = theta_char(0, 0, 2j)
    two = theta_char(0, 0, np.diag([2j, 2j]))
    assert abs(two - one * one) < 1e-14


def test_nondiagonal_against_box_sum():
    tau = np.array([[1j, 0.3 + 0.2j], [0.3 + 0.2j, 0.5 + 1.5j]])
    a, b, z = np.array([0.25, 0.5]), np.array([0.1, 0.0]), np.array([0.1 + 0.2j, -0.3j])
    pts = np.array(list(itertools.product(range(-14, 15), repeat=2)), dtype=float) + a
    expo = 1j * math.pi * np.einsum("pi,ij,pj->p", pts, tau, pts) + 2j * math.pi * pts @ (z + b)
    assert abs(theta_char(a, b, tau, z) - np.exp(expo).sum()) < 1e-12


def test_im_tau_not_positive_definite():
    with pytest.raises(ConvergenceError):
        theta_char(0, 0, np.diag([1j, -1j]))
    with pytest.raises(ConvergenceError):
        theta_char(0, 0, 0.5 + 0j)


def test_radius_cap():
    with pytest.raises(PrecisionError):
        theta_char(0, 0, 0.001j, params=SeriesParams(max_radius=5))


def test_bad_params():
    with pytest.raises(InputError):
        SeriesParams(tol=0)
    with pytest.raises(InputError):
        SeriesParams(max_radius=0)


@pytest.mark.parametrize("tau", [1j, 0.3 + 1j, 0.2 + 0.4j])
def test_self_consistency(tau):
    coarse = theta_char([F(1, 3)], 0, tau, 0.1, SeriesParams(tol=1e-10))
    fine = theta_char([F(1, 3)], 0, tau, 0.1, SeriesParams(tol=1e-12))
    assert abs(coarse - fine) < 1e-10


@pytest.mark.parametrize("weight", [F(1, 2), F(2, 3), 1, 2, 6])
def test_structure_coefficient_box_oracle(builtin_spec, weight):
    G = pairing_form(builtin_spec).G
    for c in basis_classes(builtin_spec, 2):
        got = structure_coefficient(builtin_spec, weight, list(c.coords))
        assert abs(got - box_sum(G, float(weight), c.as_array())) < 1e-12


def test_real_when_unshifted_and_no_b_field(builtin_spec):
    if any(builtin_spec.shift):
        pytest.skip("shifted spec")
    for c in basis_classes(builtin_spec, 3):
        assert abs(structure_coefficient(builtin_spec, 1, list(c.coords)).imag) < 1e-15


def test_origin_dominates(hesse):
    values = [abs(structure_coefficient(hesse, 1, list(c.coords))) for c in basis_classes(hesse, 2)]
    assert values[0] == max(values) and values[0] > 0


def test_negation_symmetry(kummer):
    for c in basis_classes(kummer, 3):
        assert abs(structure_coefficient(kummer, F(3, 2), list(c.coords))
                   - structure_coefficient(kummer, F(3, 2), list((-c).coords))) < 1e-15


@pytest.mark.parametrize("tau", [1j, 0.3 + 1j, 2j])
@pytest.mark.parametrize("b", [F(0), F(3, 10), F(1, 7), F(-1, 4)])
def test_shifted_coefficients_match_closed_form(tau, b):
    """A_k(b) = sum_n exp(i pi 6 tau (n + k/6 + b/2)^2), summed independently."""
    spec = TorusSpec.from_periods(tau, 3, shift=[b])
    for k in range(6):
        x = k / 6 + float(b) / 2
        direct = sum(complex(mpmath.exp(1j * mpmath.pi * 6 * tau * (n + x) ** 2))
                     for n in range(-10, 11))
        got = structure_coefficient(spec, 2, [F(k, 6)], shift_steps=1)
        assert abs(got - direct) < 1e-13


@pytest.mark.parametrize("b", [F(3, 10), F(1, 7)])
def test_commutativity_relation(b):
    """A_k(b) = A_{6-k}(-b)."""
    plus = TorusSpec.from_periods(0.3 + 1j, 3, shift=[b])
    minus = plus.with_shift([-b])
    for k in range(6):
        lhs = structure_coefficient(plus, 2, [F(k, 6)], shift_steps=1)
        rhs = structure_coefficient(minus, 2, [F(6 - k, 6)], shift_steps=1)
        assert abs(lhs - rhs) < 1e-14


@pytest.mark.parametrize("name", ["hesse", "quasihomogeneous"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_canonical_theta_null_identity(name, k):
    spec = load_spec(name)
    for c in basis_classes(spec, k):
        lhs = canonical_theta(spec, c)
        rhs = structure_coefficient(spec, k, list(c.coords))
        assert abs(lhs - rhs) < 1e-12


def test_canonical_theta_identity_with_b_field():
    spec = TorusSpec.from_periods(0.3 + 1j, 3)
    for c in basis_classes(spec, 2):
        assert abs(canonical_theta(spec, c) - structure_coefficient(spec, 2, list(c.coords))) < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3])
def test_canonical_theta_origin_one_dimensional(k):
    """At c = 0, v = 0 the value is theta[0,0](k N tau)."""
    tau = 0.3 + 1j
    spec = TorusSpec.from_periods(tau, 3)
    assert abs(canonical_theta(spec, [0.0], level=k) - theta_char(0, 0, 3 * k * tau)) < 1e-14


def test_canonical_theta_integer_periodicity(kummer):
    v = np.array([0.13, -0.21])
    c = np.array([0.5, 0.25])
    a = canonical_theta(kummer, c, v, level=2)
    b = canonical_theta(kummer, c + np.array([1.0, -2.0]), v, level=2)
    assert abs(a - b) < 1e-12 * max(1.0, abs(a))


def test_canonical_theta_needs_level(hesse):
    with pytest.raises(InputError):
        canonical_theta(hesse, [0.0])


def test_tail_bound_monotone():
    G = np.array([[1.0, 0.1], [0.1, 1.3]])
    values = [tail_bound(G, 2, R) for R in range(1, 12)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-60


def test_tail_bound_closed_form_example():
    """N = 3 at tau = i with weight 2: the form is 6, so R = 6 leaves a negligible tail."""
    assert tail_bound(3.0, 2, 6) < 1e-40


def test_tail_bound_not_positive():
    with pytest.raises(ConvergenceError):
        tail_bound(-1.0, 1, 2)


def test_tail_bound_sound_on_random_cases():
    rng = np.random.default_rng(7)
    for _ in range(20):
        g = rng.uniform(0.05, 3)
        w = rng.uniform(0.2, 4)
        c = rng.uniform(-1, 1)
        R = rng.uniform(1, 4)
        pts = np.arange(-400, 401) + c
        omitted = np.exp(-math.pi * w * g * pts[np.abs(pts) > R] ** 2).sum()
        assert omitted <= tail_bound(g, w, R)
