"""Theta series with characteristics and the Fukaya structure constants built from them.

Convention: the complex pairing on ``L_0`` is ``G = N^T M - i N^T B`` and every
triangle of weight ``kappa`` with edge vector ``l`` contributes
``exp(-pi kappa l^T G l)``.  For ``n = 1`` with ``tau = B + i M`` this is
``exp(i pi kappa N tau l^2)``, the holomorphic weighting of the worked examples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, InputError, PrecisionError
from .lattice import MorphismClass, TorusSpec, mod1, validate


@dataclass(frozen=True)
class SeriesParams:
    tol: float = 1e-14
    max_radius: int = 64

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError("tol must be positive")
        if self.max_radius < 1:
            raise InputError("max_radius must be >= 1")


DEFAULT_PARAMS = SeriesParams()


@dataclass(frozen=True, eq=False)
class PairingForm:
    """``G(x, y) = x^T G y``, the combination ``H_f - S_f`` restricted to ``L_0``.

    ``hermitian`` is the real part ``N^T M`` and ``bilinear`` the remaining
    ``S_f = i N^T B``, so that ``hermitian - bilinear == G``.
    """

    G: np.ndarray

    @property
    def hermitian(self) -> np.ndarray:
        return self.G.real.astype(complex)

    @property
    def bilinear(self) -> np.ndarray:
        return self.hermitian - self.G

    def __call__(self, x, y) -> complex:
        return complex(np.asarray(x) @ self.G @ np.asarray(y))


@lru_cache(maxsize=None)
def _checked(spec: TorusSpec) -> TorusSpec:
    report = validate(spec)
    if not report.passed:
        f = report.first_failure
        raise InputError(f"invalid torus spec: {f.name} fails ({f.witness})")
    return spec


@lru_cache(maxsize=None)
def _pairing(spec: TorusSpec) -> PairingForm:
    _checked(spec)
    N = spec.N_array.astype(float)
    G = N.T @ spec.M_array - 1j * (N.T @ spec.B_array)
    G = (G + G.T) / 2
    G.setflags(write=False)
    return PairingForm(G)


def pairing_form(spec: TorusSpec) -> PairingForm:
    return _pairing(spec)


def _tail_log(Y: np.ndarray, r: float) -> float:
    """log of a rigorous bound on sum over {x in a + Z^n : x^T Y x > r^2} of exp(-pi x^T Y x).

    For q > r^2, exp(-pi q) <= exp(-pi r^2 / 2) exp(-pi q / 2), and the full
    half-weight sum is at most prod_i (2 + sqrt(2 / mu)) with mu = min eig(Y),
    whatever the offset a.
    """
    mu = float(np.linalg.eigvalsh(Y).min())
    n = Y.shape[0]
    return -math.pi * r * r / 2 + n * math.log(2 + math.sqrt(2 / mu))


def tail_bound(G, weight: float, radius: float) -> float:
    """Bound on the omitted mass of ``sum exp(-pi weight x^T Re(G) x)`` outside radius ``radius``.

    The omitted set is every lattice point (relative to the series centre) with
    Euclidean, hence also sup-norm, length above ``radius``.
    """
    Y = np.real(np.atleast_2d(np.asarray(G, dtype=complex))) * float(weight)
    mu = float(np.linalg.eigvalsh(Y).min())
    if mu <= 0:
        raise ConvergenceError("real part of the weighted form is not positive definite")
    return math.exp(_tail_log(Y, math.sqrt(mu) * radius))


def _radius(Y: np.ndarray, log_scale: float, tol: float) -> float:
    mu = float(np.linalg.eigvalsh(Y).min())
    n = Y.shape[0]
    log_k = n * math.log(2 + math.sqrt(2 / mu))
    r2 = 2 / math.pi * (log_k + log_scale - math.log(tol))
    return math.sqrt(max(r2, 1.0))


def theta_char(a, b, tau, z=None, params: SeriesParams | None = None) -> complex:
    """``sum_m exp(i pi (m+a)^T tau (m+a) + 2 pi i (m+a)^T (z+b))`` over ``m in Z^n``.

    Summation runs over the ellipsoid around the dominant term, grown until the
    tail bound is below ``params.tol``.
    """
    params = params or DEFAULT_PARAMS
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    n = tau.shape[0]
    if tau.shape != (n, n):
        raise InputError("tau must be square")
    a = np.broadcast_to(np.asarray(a, dtype=float), (n,)).astype(float)
    b = np.broadcast_to(np.asarray(b, dtype=float), (n,)).astype(float)
    z = np.zeros(n, complex) if z is None else np.broadcast_to(np.asarray(z, dtype=complex), (n,))
    Y = tau.imag
    if not np.allclose(Y, Y.T, atol=1e-13 * max(1.0, abs(Y).max())):
        raise ConvergenceError("Im(tau) is not symmetric")
    Y = (Y + Y.T) / 2
    try:
        np.linalg.cholesky(Y)
    except np.linalg.LinAlgError:
        raise ConvergenceError("Im(tau) is not positive definite") from None
    Yinv = np.linalg.inv(Y)
    centre = -Yinv @ z.imag
    log_scale = math.pi * float(z.imag @ Yinv @ z.imag)
    r = _radius(Y, log_scale, params.tol)
    half = r * np.sqrt(np.diag(Yinv))
    if half.max() > params.max_radius:
        raise PrecisionError(f"truncation radius {half.max():.1f} exceeds max_radius "
                             f"{params.max_radius}")
    lo = np.ceil(centre - a - half).astype(int)
    hi = np.floor(centre - a + half).astype(int)
    axes = [np.arange(l, h + 1) for l, h in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    x = grid + a
    d = x - centre
    keep = np.einsum("pi,ij,pj->p", d, Y, d) <= r * r
    x = x[keep]
    expo = 1j * math.pi * np.einsum("pi,ij,pj->p", x, tau, x) + 2j * math.pi * (x @ (z + b))
    return complex(np.exp(expo).sum())


def _char_key(c) -> tuple:
    out = []
    for x in c:
        if isinstance(x, (Fraction, int)):
            out.append(mod1(Fraction(x)))
        else:
            out.append(float(x) % 1.0)
    return tuple(out)


@lru_cache(maxsize=200_000)
def _structure_cached(spec: TorusSpec, weight: Fraction | float, key: tuple,
                      params: SeriesParams) -> complex:
    G = _pairing(spec).G
    a = -np.array([float(x) for x in key])
    return theta_char(a, 0.0, 1j * float(weight) * G, None, params)


def structure_coefficient(spec: TorusSpec, weight, c: Sequence, params: SeriesParams | None = None,
                          shift_steps: int = 0) -> complex:
    """``A^[weight]_c = sum_{l in Z^n} exp(-pi weight (c - l)^T G (c - l))``.

    ``shift_steps`` adds ``shift_steps * shift / 2`` to the characteristic; with
    ``shift_steps = 1`` at weight 2 on the ``N = 3`` torus this is ``A_k(b)``.
    """
    params = params or DEFAULT_PARAMS
    _checked(spec)
    if len(c) != spec.n:
        raise InputError(f"characteristic must have {spec.n} entries")
    if isinstance(weight, int):
        weight = Fraction(weight)
    if not weight > 0:
        raise InputError("weight must be positive")
    c = list(c)
    if shift_steps:
        c = [ci + shift_steps * si / 2 if isinstance(ci, (Fraction, int))
             else ci + shift_steps * float(si) / 2 for ci, si in zip(c, spec.shift)]
    return _structure_cached(spec, weight, _char_key(c), params)


def canonical_theta(spec: TorusSpec, c, v=None, params: SeriesParams | None = None,
                    level: int | None = None) -> complex:
    """Canonical mirror theta function ``theta_c`` attached to the intersection class ``c``.

    A class at level ``k`` is paired with the ``2k``-th power of the mirror line
    bundle, so the polarization form is ``2k G``::

        exp(pi/2 S(v,v) - pi/2 G(c+2v, c)) * sum_l exp(pi G(c+v, l) - pi/2 G(l, l))

    with every form scaled by ``2k``.  ``v`` is a real vector along ``L_0``.
    """
    params = params or DEFAULT_PARAMS
    if isinstance(c, MorphismClass):
        level = c.level
        cvec = c.as_array()
    else:
        if level is None:
            raise InputError("level is required for a raw characteristic")
        cvec = np.asarray(c, dtype=float)
    if level <= 0:
        raise InputError("level must be positive")
    form = _pairing(spec)
    m = 2 * level
    G = m * form.G
    S = m * form.bilinear
    v = np.zeros(spec.n) if v is None else np.asarray(v, dtype=float)
    w = cvec + v
    pref = (math.pi / 2) * (v @ S @ v) - (math.pi / 2) * ((cvec + 2 * v) @ G @ cvec)
    series = theta_char(0.0, 0.0, 1j * G / 2, -1j * (G @ w) / 2, params)
    return complex(np.exp(pref) * series)
