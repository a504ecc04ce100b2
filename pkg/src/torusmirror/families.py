"""Worked mirror families on the two- and four-torus, as executable verifications.

* ``N = 3``: Hesse cubics at integral shift, the Sklyanin algebra otherwise.
* ``N = 1``: quasihomogeneous ring with weights (1, 2, 3), its sextic relation,
  the Weierstrass form and the j-invariant.
* ``N = 2 Id`` on the four-torus with the ``-1`` involution: Kummer surfaces.
"""
from __future__ import annotations

import cmath
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import InputError, PrecisionError, SingularParameterError
from .lattice import TorusSpec, basis_classes, invariant_basis, make_class
from .modular import j_eisenstein
from .report import Report
from .ring import (RingElement, basis_element, compose, evaluate_monomial, find_relations,
                   monomial_words)
from .theta import SeriesParams, structure_coefficient, theta_char

MU_NU_GUARD = 1e-8
MAX_J_TERMS = 8


def theta_constant(k: int, j: int, tau: complex, params: SeriesParams | None = None) -> complex:
    """``a^(k)_j = theta[j/k, 0](k tau, 0)``."""
    return theta_char([Fraction(j % k, k)], 0.0, k * complex(tau), None, params)


def containment_distance(X: np.ndarray, Y: np.ndarray, tol: float = 1e-10) -> float:
    """Largest relative distance of a row of ``X`` from the row space of ``Y``."""
    if X.shape[0] == 0:
        return 0.0
    if Y.shape[0] == 0:
        return 1.0
    _, s, vh = np.linalg.svd(Y)
    Q = vh[: int((s > tol * s.max()).sum())]
    proj = X @ Q.conj().T @ Q
    return float(max(np.linalg.norm(x - p) / np.linalg.norm(x) for x, p in zip(X, proj)))


def rowspace_distance(A: np.ndarray, B: np.ndarray, tol: float = 1e-10) -> float:
    """Symmetric version of :func:`containment_distance`; zero iff the row spaces agree."""
    return max(containment_distance(A, B, tol), containment_distance(B, A, tol))


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(np.abs(a - b).max() / max(np.abs(b).max(), 1e-300))


# ---------------------------------------------------------------------------
# Hesse / Sklyanin

@dataclass(frozen=True)
class SklyaninParams:
    p: complex
    q: complex
    r: complex
    A: tuple[complex, ...]
    b: float
    tau: complex

    @property
    def hesse_coefficient(self) -> complex:
        """``(p^3 + q^3 + r^3) / (p q r)``; undefined when ``b`` is integral."""
        pqr = self.p * self.q * self.r
        if abs(pqr) < 1e-14 * max(abs(self.p), abs(self.q), abs(self.r), 1e-300) ** 3:
            raise SingularParameterError("p q r vanishes (integral shift)")
        return (self.p ** 3 + self.q ** 3 + self.r ** 3) / pqr

    def relation_matrix(self) -> np.ndarray:
        """Rows of the three quadratic relations over the words ``X_i X_j`` (index ``3i + j``)."""
        rows = np.zeros((3, 9), complex)
        for row, (sq, a, b) in enumerate(((2, 0, 1), (1, 2, 0), (0, 1, 2))):
            rows[row, 3 * sq + sq] += self.p
            rows[row, 3 * a + b] += self.q
            rows[row, 3 * b + a] += self.r
        return rows


def hesse_spec(tau: complex, b=0) -> TorusSpec:
    return TorusSpec.from_periods(tau, 3, shift=[b], name="hesse" if not b else "sklyanin")


def sklyanin_coefficients(tau: complex, b: float,
                          params: SeriesParams | None = None) -> SklyaninParams:
    if complex(tau).imag <= 0:
        raise InputError("tau must lie in the upper half plane")
    spec = hesse_spec(tau, b)
    A = tuple(structure_coefficient(spec, 2, [Fraction(k, 6)], params, shift_steps=1)
              for k in range(6))
    p = A[1] * A[2] - A[4] * A[5]
    q = A[3] * A[4] - A[0] * A[1]
    r = A[0] * A[5] - A[3] * A[2]
    return SklyaninParams(p, q, r, A, float(b), complex(tau))


HESSE_SAMPLE_SHIFTS = (Fraction(1, 2), Fraction(3, 10), Fraction(1, 7))


def hesse_coefficient(tau: complex, params: SeriesParams | None = None) -> complex:
    """Cubic coefficient of the mirror Hesse curve; it does not depend on the shift."""
    return sklyanin_coefficients(tau, HESSE_SAMPLE_SHIFTS[0], params).hesse_coefficient


def hesse_row(tau: complex, params: SeriesParams | None = None) -> np.ndarray:
    """``X0^3 + X1^3 + X2^3 - h X0 X1 X2`` over the ten commutative cubic monomials."""
    words = monomial_words([1, 1, 1], 3, commutative=True)
    row = np.zeros(len(words), complex)
    for i in range(3):
        row[words.index((i, i, i))] = 1
    row[words.index((0, 1, 2))] = -hesse_coefficient(tau, params)
    return row


def verify_hesse(tau: complex = 1j, svd_tol: float = 1e-8,
                 params: SeriesParams | None = None) -> Report:
    spec = hesse_spec(tau)
    rep = Report("hesse", {"tau": complex(tau), "svd_tol": svd_tol, "spec_sha256": spec.digest()})
    quad = find_relations(spec, 2, svd_tol=svd_tol, params=params)
    rep.add("degree2_relation_count", quad.count, 0, abs(quad.count - 0), 0)
    cubic = find_relations(spec, 3, svd_tol=svd_tol, params=params)
    rep.add("degree3_relation_count", cubic.count, 1, abs(cubic.count - 1), 0)
    h_values = [sklyanin_coefficients(tau, b, params).hesse_coefficient for b in HESSE_SAMPLE_SHIFTS]
    rep.add("hesse_coefficient_shift_independent", h_values[1:], h_values[0],
            max(_rel(h, h_values[0]) for h in h_values[1:]), 1e-9)
    expected = hesse_row(tau, params)
    if cubic.count == 1:
        found = cubic.coefficient_matrix[0]
        found = found / found[cubic.words.index((0, 0, 0))]
        rep.add("cubic_matches_Q_pqr", found, expected, rowspace_distance(found[None], expected[None]),
                1e-8)
        rep.add("cubic_residual", float(cubic.residuals[0]), 0.0, float(cubic.residuals[0]), 1e-8)
        rep.add("cubic_coefficient", -found[cubic.words.index((0, 1, 2))], h_values[0],
                _rel(-found[cubic.words.index((0, 1, 2))], h_values[0]), 1e-8)
    gens = [basis_element(spec, c) for c in basis_classes(spec, 1)]
    value = sum((c * evaluate_monomial(spec, [gens[i] for i in w], params)
                 for c, w in zip(expected, cubic.words)), start=RingElement(spec, 3, np.zeros(9)))
    rep.add("Q_pqr_vanishes", value.norm(), 0.0, value.norm(), 1e-8)
    rep.data["hesse_coefficient"] = h_values[0]
    rep.data["cubic_relation"] = cubic.as_dict()
    return rep


def verify_sklyanin(tau: complex = 1j, b=Fraction(3, 10), svd_tol: float = 1e-8,
                    params: SeriesParams | None = None) -> Report:
    b = Fraction(b).limit_denominator(10**9) if isinstance(b, float) else Fraction(b)
    spec = hesse_spec(tau, b)
    coeffs = sklyanin_coefficients(tau, b, params)
    rep = Report("sklyanin", {"tau": complex(tau), "b": float(b), "svd_tol": svd_tol,
                              "spec_sha256": spec.digest()})
    rel = find_relations(spec, 2, commutative=False, svd_tol=svd_tol, params=params)
    rep.add("relation_space_dimension", rel.count, 3, abs(rel.count - 3), 0)
    rep.add("max_residual", float(rel.residuals.max(initial=0)), 0.0,
            float(rel.residuals.max(initial=0)), 1e-9)
    gens = [basis_element(spec, c) for c in basis_classes(spec, 1)]
    comm = max(np.abs((x * y).coeffs - (y * x).coeffs).max() for x, y in itertools.combinations(gens, 2))
    if b.denominator == 1:
        rep.data["branch"] = "commutative"
        commutators = np.zeros((3, 9), complex)
        for row, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
            commutators[row, 3 * i + j] = 1
            commutators[row, 3 * j + i] = -1
        rep.add("relations_are_commutators", rel.count, 3,
                rowspace_distance(rel.coefficient_matrix, commutators), 1e-9)
        rep.add("products_commute", comm, 0.0, comm, 1e-10)
        rep.add("p_vanishes", coeffs.p, 0.0, abs(coeffs.p) / max(abs(coeffs.q), 1e-300), 1e-10)
        rep.add("q_equals_minus_r", coeffs.q, -coeffs.r, _rel(coeffs.q, -coeffs.r), 1e-10)
        if b == 0:
            hesse = verify_hesse(tau, svd_tol, params)
            for chk in hesse.checks:
                rep.checks.append(replace(chk, id="hesse." + chk.id))
            rep.data["hesse_coefficient"] = hesse.data["hesse_coefficient"]
    else:
        rep.data["branch"] = "sklyanin"
        expected = coeffs.relation_matrix()
        rep.add("pqr_nonzero", [coeffs.p, coeffs.q, coeffs.r], 0.0,
                -min(abs(coeffs.p), abs(coeffs.q), abs(coeffs.r)), -1e-12)
        rep.add("rowspace_matches_sklyanin", rel.count, 3,
                rowspace_distance(rel.coefficient_matrix, expected), 1e-9)
        rep.add("noncommutative", comm, 0.0, -comm, -1e-3)
        rep.data["hesse_coefficient"] = coeffs.hesse_coefficient
    rep.data.update({"p": coeffs.p, "q": coeffs.q, "r": coeffs.r, "A": list(coeffs.A),
                     "relations": rel.as_dict()})
    return rep


# ---------------------------------------------------------------------------
# quasihomogeneous sextic

SEXTIC_MONOMIALS = ("X^6", "X^4*Y", "X^3*Z", "X^2*Y^2", "X*Y*Z", "Y^3", "Z^2")
# exponents of X, Y, Z
_EXPONENTS = {"X^6": (6, 0, 0), "X^4*Y": (4, 1, 0), "X^3*Z": (3, 0, 1), "X^2*Y^2": (2, 2, 0),
              "X*Y*Z": (1, 1, 1), "Y^3": (0, 3, 0), "Z^2": (0, 0, 2)}
_P_OF = {"Z^2": 0, "X*Y*Z": 1, "X^2*Y^2": 2, "X^3*Z": 3, "X^4*Y": 4, "X^6": 6}


@dataclass(frozen=True)
class SexticCurve:
    """``F = Y^3 - (p0 Z^2 + p1 XYZ + p2 X^2Y^2 + p3 X^3Z + p4 X^4Y + p6 X^6)``."""

    p: dict
    tau: complex | None = None
    mu: complex | None = None
    nu: complex | None = None
    near_singular: bool = False

    @property
    def t2(self) -> complex:
        p = self.p
        return p[2] - p[1] ** 2 / (4 * p[0])

    @property
    def t4(self) -> complex:
        p = self.p
        return p[4] - p[1] * p[3] / (2 * p[0])

    @property
    def t6(self) -> complex:
        p = self.p
        return p[6] - p[3] ** 2 / (4 * p[0])

    def polynomial(self) -> dict[tuple[int, int, int], complex]:
        poly = {(0, 3, 0): 1 + 0j}
        for label, k in _P_OF.items():
            poly[_EXPONENTS[label]] = -self.p[k]
        return poly

    def coefficient_row(self) -> np.ndarray:
        """Coefficients of ``F`` over ``V0..V6 = X^6, X^4Y, X^3Z, X^2Y^2, XYZ, Y^3, Z^2``."""
        poly = self.polynomial()
        return np.array([poly.get(_EXPONENTS[m], 0) for m in SEXTIC_MONOMIALS], complex)

    def normalized(self) -> "SexticCurve":
        """Substitute ``Z -> Z - (p1 XY + p3 X^3)/(2 p0)``, ``Y -> Y + t2 X^2 / 3``, rescale ``Z``.

        The result has ``p0 = 1/4`` and ``p1 = p2 = p3 = 0``; coefficients are read
        off the substituted polynomial.
        """
        p = self.p
        poly = self.polynomial()
        poly = _substitute(poly, {2: {(0, 0, 1): 1, (1, 1, 0): -p[1] / (2 * p[0]),
                                      (3, 0, 0): -p[3] / (2 * p[0])}})
        t2 = -poly.get((2, 2, 0), 0)
        poly = _substitute(poly, {1: {(0, 1, 0): 1, (2, 0, 0): t2 / 3}})
        scale = 1 / (2 * cmath.sqrt(-poly[(0, 0, 2)]))
        poly = _substitute(poly, {2: {(0, 0, 1): scale}})
        new_p = {k: -poly.get(_EXPONENTS[label], 0) for label, k in _P_OF.items()}
        return SexticCurve(new_p, self.tau, self.mu, self.nu, self.near_singular)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = defaultdict(complex)
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return dict(out)


def _substitute(poly: dict, images: dict[int, dict]) -> dict:
    """Replace variable ``v`` (0 = X, 1 = Y, 2 = Z) by the polynomial ``images[v]``."""
    out: dict = defaultdict(complex)
    for exps, coeff in poly.items():
        term = {tuple(e if v not in images else 0 for v, e in enumerate(exps)): coeff}
        for v, img in images.items():
            for _ in range(exps[v]):
                term = _poly_mul(term, img)
        for e, c in term.items():
            out[e] += c
    return dict(out)


def quasihomogeneous_spec(tau: complex) -> TorusSpec:
    return TorusSpec.from_periods(tau, 1, name="quasihomogeneous")


def quasihomogeneous_generators(spec: TorusSpec) -> dict[str, RingElement]:
    """``X`` at level 1, ``Y = Y_0`` at level 2, ``Z = Z_1`` at level 3."""
    return {"X": basis_element(spec, make_class(1, [0])),
            "Y": basis_element(spec, make_class(2, [0])),
            "Z": basis_element(spec, make_class(3, [Fraction(1, 3)]))}


@dataclass(frozen=True)
class SexticConstants:
    """Theta constants and derived scalars entering the closed-form reduction."""

    a: dict
    mu: complex
    nu: complex
    P: complex

    @classmethod
    def compute(cls, tau: complex, params: SeriesParams | None = None) -> "SexticConstants":
        a = {(k, j): theta_constant(k, j, tau, params)
             for k, js in ((2, range(2)), (4, (0, 2)), (6, range(6)), (12, (0, 2, 4, 6)))
             for j in js}
        P = a[2, 0] * a[6, 2] + a[2, 1] * a[6, 1]
        if abs(P) == 0 or abs(a[6, 2]) == 0:
            raise SingularParameterError("vanishing theta constant in the elimination denominators")
        mu = (a[2, 0] * a[6, 0] + a[2, 1] * a[6, 3]) / P
        nu = a[6, 0] / a[6, 2]
        return cls(a, mu, nu, P)

    def z_forms(self) -> dict[int, np.ndarray]:
        """``Z_0, Z_1, Z_2`` as linear forms in ``(X^3, XY, Z)``."""
        d = self.mu - self.nu
        if abs(d) == 0:
            raise SingularParameterError("mu = nu")
        alpha = 1 / (self.P * d)
        beta = 1 / (self.a[6, 2] * d)
        return {0: np.array([alpha, -beta, 0]),
                1: np.array([0, 0, 1], complex),
                2: np.array([-self.nu * alpha, self.mu * beta, -1])}


def derive_sextic(tau: complex, params: SeriesParams | None = None) -> SexticCurve:
    """The degree-six relation among ``X, Y, Z`` from closed-form theta constants.

    ``Z_0, Z_2`` are rewritten in ``X^3, XY, Z``; ``W_0`` and ``W_2 + W_4`` are
    bilinear in the ``Z_i``; ``Y^3`` is a combination of those two.
    """
    if complex(tau).imag <= 0:
        raise InputError("tau must lie in the upper half plane")
    K = SexticConstants.compute(tau, params)
    a = K.a
    near = abs(K.mu - K.nu) < MU_NU_GUARD * max(abs(K.mu), abs(K.nu), 1.0)
    Z = K.z_forms()
    delta = a[6, 0] * a[6, 1] - a[6, 2] * a[6, 3]
    c1, c3 = a[6, 1] / delta, a[6, 3] / delta

    def bil(i, j):
        return np.outer(Z[i], Z[j])

    W0 = c1 * bil(0, 0) - c3 * bil(1, 2)
    W24 = c1 * (bil(1, 1) + bil(2, 2)) - c3 * (bil(0, 1) + bil(0, 2))
    y3 = ((a[4, 0] * a[12, 0] + a[4, 2] * a[12, 6]) * W0
          + (a[4, 0] * a[12, 4] + a[4, 2] * a[12, 2]) * W24)
    Q = (y3 + y3.T) / 2
    # variables (u, w, Z) = (X^3, XY, Z)
    p = {6: Q[0, 0], 4: 2 * Q[0, 1], 3: 2 * Q[0, 2], 2: Q[1, 1], 1: 2 * Q[1, 2], 0: Q[2, 2]}
    if abs(p[0]) == 0:
        raise SingularParameterError("p0 vanishes")
    return SexticCurve({k: complex(v) for k, v in p.items()}, complex(tau), K.mu, K.nu, near)


def sextic_from_relations(tau: complex, svd_tol: float = 1e-8,
                          params: SeriesParams | None = None) -> SexticCurve:
    """Same curve from the numerical nullspace of all weighted degree-six monomials."""
    spec = quasihomogeneous_spec(tau)
    g = quasihomogeneous_generators(spec)
    rel = find_relations(spec, 6, [g["X"], g["Y"], g["Z"]], svd_tol=svd_tol,
                         names=["X", "Y", "Z"], params=params)
    if rel.count != 1:
        raise PrecisionError(f"expected one degree-6 relation, found {rel.count}")
    row = dict(zip(rel.labels, rel.coefficient_matrix[0]))
    lead = row["Y^3"]
    p = {k: complex(-row[label] / lead) for label, k in _P_OF.items()}
    return SexticCurve(p, complex(tau))


@dataclass(frozen=True)
class WeierstrassData:
    g2_cubed: complex
    g3_squared: complex
    j: complex


def weierstrass_reduce(curve: SexticCurve) -> WeierstrassData:
    p0 = curve.p[0]
    if abs(p0) == 0:
        raise SingularParameterError("p0 vanishes")
    t2, t4, t6 = curve.t2, curve.t4, curve.t6
    g2_cubed = (2 / p0) ** 2 * (t4 + t2 ** 2 / 3) ** 3
    g3_squared = (1 / p0) ** 2 * (t6 + t4 * t2 / 3 + 2 * t2 ** 3 / 27) ** 2
    disc = g2_cubed - 27 * g3_squared
    if abs(disc) <= 1e-14 * max(abs(g2_cubed), abs(27 * g3_squared)):
        raise SingularParameterError("g2^3 = 27 g3^2: the curve is singular")
    return WeierstrassData(g2_cubed, g3_squared, 1728 * g2_cubed / disc)


def j_invariant(tau: complex, params: SeriesParams | None = None) -> complex:
    return weierstrass_reduce(derive_sextic(tau, params)).j


@dataclass(frozen=True)
class JSeries:
    coefficients: list[complex]
    rounded: list[int]
    max_deviation: float
    y0: float
    samples: int


def j_qseries(n_terms: int = 6, y0: float | None = None, samples: int | None = None,
              params: SeriesParams | None = None) -> JSeries:
    """Laurent coefficients of ``j`` (``q^-1, q^0, ...``) fitted from the full pipeline.

    Samples lie on the horocycle ``Im tau = y0`` at ``Re tau = m / samples``; the
    default ``y0`` puts ``|q|^n_terms`` at ``1e-12``.
    """
    if not 1 <= n_terms <= MAX_J_TERMS:
        raise InputError(f"n_terms must be between 1 and {MAX_J_TERMS}; beyond that the "
                         "coefficients outgrow double precision")
    if y0 is None:
        y0 = 12 * math.log(10) / (2 * math.pi * n_terms)
    if samples is None:
        samples = max(17, 6 * n_terms)
    radius = math.exp(-2 * math.pi * y0)
    values = []
    for m in range(samples):
        tau = complex(m / samples, y0)
        q = cmath.exp(2j * math.pi * tau)
        values.append(q * j_invariant(tau, params))
    fft = np.fft.fft(np.array(values)) / samples
    coeffs = [complex(fft[n] / radius ** n) for n in range(n_terms)]
    rounded = [int(round(c.real)) for c in coeffs]
    dev = max(max(abs(c - r) for c, r in zip(coeffs, rounded)), 0.0)
    if dev >= 0.5:
        raise PrecisionError(f"q-series fit is not integral (max deviation {dev:.3g}); "
                             f"y0={y0}, samples={samples}")
    return JSeries(coeffs, rounded, float(dev), y0, samples)


def verify_quasihomogeneous(tau: complex = 1j, svd_tol: float = 1e-8,
                            params: SeriesParams | None = None) -> Report:
    spec = quasihomogeneous_spec(tau)
    rep = Report("quasihomogeneous", {"tau": complex(tau), "svd_tol": svd_tol,
                                      "spec_sha256": spec.digest()})
    g = quasihomogeneous_generators(spec)
    gens = [g["X"], g["Y"], g["Z"]]
    counts = {}
    for d in range(2, 7):
        counts[d] = find_relations(spec, d, gens, svd_tol=svd_tol, names=list("XYZ"),
                                   params=params).count
        rep.add(f"degree{d}_relation_count", counts[d], int(d == 6), abs(counts[d] - int(d == 6)), 0)
    curve = derive_sextic(tau, params)
    rep.add("mu_nu_separated", abs(curve.mu - curve.nu), MU_NU_GUARD, 0.0 if not curve.near_singular
            else 1.0, 0.0)
    if counts[6] == 1:
        other = sextic_from_relations(tau, svd_tol, params)
        err = max(abs(curve.p[k] - other.p[k]) for k in curve.p) / max(abs(v) for v in other.p.values())
        rep.add("closed_form_vs_nullspace", curve.p, other.p, err, 1e-9)
    norm = curve.normalized()
    rep.add("normalized_form", [norm.p[0], norm.p[1], norm.p[2], norm.p[3]], [0.25, 0, 0, 0],
            max(abs(norm.p[0] - 0.25), abs(norm.p[1]), abs(norm.p[2]), abs(norm.p[3])), 1e-12)
    w = weierstrass_reduce(curve)
    oracle = j_eisenstein(tau)
    rep.add("j_matches_eisenstein", w.j, oracle, _rel(w.j, oracle) if abs(oracle) > 1 else
            abs(w.j - oracle) / 1728, 1e-6)
    rep.data.update({"p": {f"p{k}": v for k, v in sorted(curve.p.items())},
                     "g2_cubed": w.g2_cubed, "g3_squared": w.g3_squared, "j": w.j})
    return rep


def veronese_relations() -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Binomial quadrics ``V_a V_b = V_c V_d`` spanning the ideal of ``P(1,2,3)`` in ``P^6``."""
    exps = [_EXPONENTS[m] for m in SEXTIC_MONOMIALS]
    groups: dict = defaultdict(list)
    for a, b in itertools.combinations_with_replacement(range(7), 2):
        groups[tuple(x + y for x, y in zip(exps[a], exps[b]))].append((a, b))
    out = []
    for pairs in groups.values():
        out += [(pairs[0], other) for other in pairs[1:]]
    return out


def veronese_elements(spec: TorusSpec, params: SeriesParams | None = None) -> list[RingElement]:
    g = quasihomogeneous_generators(spec)
    return [evaluate_monomial(spec, [g["X"]] * e[0] + [g["Y"]] * e[1] + [g["Z"]] * e[2], params)
            for e in (_EXPONENTS[m] for m in SEXTIC_MONOMIALS)]


def verify_p123_veronese(tau: complex = 1j, svd_tol: float = 1e-8,
                         params: SeriesParams | None = None) -> Report:
    spec = quasihomogeneous_spec(tau)
    rep = Report("veronese", {"tau": complex(tau), "svd_tol": svd_tol,
                              "spec_sha256": spec.digest()})
    V = veronese_elements(spec, params)
    pairs = veronese_relations()
    rep.add("binomial_count", len(pairs), 9, abs(len(pairs) - 9), 0)
    for (a, b), (c, d) in pairs:
        lhs = compose(spec, V[a], V[b], params)
        rhs = compose(spec, V[c], V[d], params)
        rep.add(f"V{a}V{b}=V{c}V{d}", lhs.norm(), rhs.norm(), _rel(lhs.coeffs, rhs.coeffs), 1e-9)
    rel = find_relations(spec, 12, V, svd_tol=svd_tol, names=[f"V{i}" for i in range(7)],
                         params=params)
    # on the curve the quadrics in V are the nine binomials plus the seven multiples V_i F
    rep.add("quadric_relation_count", rel.count, 16, abs(rel.count - 16), 0)
    binomials = np.zeros((len(pairs), len(rel.words)), complex)
    for row, (ab, cd) in enumerate(pairs):
        binomials[row, rel.words.index(ab)] += 1
        binomials[row, rel.words.index(cd)] -= 1
    contained = containment_distance(binomials, rel.coefficient_matrix)
    rep.add("binomials_in_relation_space", len(pairs), rel.count, contained, 1e-9)
    row = derive_sextic(tau, params).coefficient_row()
    value = sum((c * v for c, v in zip(row, V)), start=RingElement(spec, 6, np.zeros(6)))
    rep.add("F_linear_in_V", value.norm(), 0.0, value.norm() / max(v.norm() for v in V), 1e-9)
    rep.data["F_in_V"] = row
    return rep


# ---------------------------------------------------------------------------
# Kummer

KUMMER_LABELS = {"X0": (0, 0), "X1": (1, 0), "X2": (0, 1), "X3": (1, 1)}
QUARTIC_SHAPE = {
    "A": [(0, 0, 0, 0), (1, 1, 1, 1), (2, 2, 2, 2), (3, 3, 3, 3)],
    "B": [(0, 0, 1, 1), (2, 2, 3, 3)],
    "C": [(0, 0, 2, 2), (1, 1, 3, 3)],
    "D": [(0, 0, 3, 3), (1, 1, 2, 2)],
    "E": [(0, 1, 2, 3)],
}


def kummer_spec(tau1: complex, tau2: complex, tau3: complex = 0) -> TorusSpec:
    T = np.array([[tau1, tau3], [tau3, tau2]], dtype=complex)
    try:
        np.linalg.cholesky(T.imag)
    except np.linalg.LinAlgError:
        raise InputError("period matrix must have positive definite imaginary part") from None
    return TorusSpec.from_periods(T, [[2, 0], [0, 2]], involution=True, name="kummer")


def kummer_y(spec: TorusSpec, k: int, a: int, b: int) -> RingElement:
    """``Y^k_{a,b}``, the point ``(a/2k, 0, b/2k, 0)`` of ``L_0 cap rho^k L_0``."""
    return basis_element(spec, make_class(k, [Fraction(a, 2 * k), Fraction(b, 2 * k)]))


def kummer_generators(spec: TorusSpec) -> list[RingElement]:
    return [kummer_y(spec, 1, *ab) for ab in KUMMER_LABELS.values()]


def fit_quartic_shape(row: np.ndarray, words: list[tuple[int, ...]]) -> tuple[dict, float]:
    """Least-squares match of a quartic to the symmetric ``A..E`` shape; returns (coeffs, residual)."""
    basis = []
    for key, monos in QUARTIC_SHAPE.items():
        col = np.zeros(len(words), complex)
        for m in monos:
            col[words.index(m)] = 2 if key == "E" else 1
        basis.append(col)
    Bm = np.array(basis).T
    x, *_ = np.linalg.lstsq(Bm, row, rcond=None)
    resid = float(np.linalg.norm(Bm @ x - row) / np.linalg.norm(row))
    return dict(zip(QUARTIC_SHAPE, x)), resid


def verify_kummer(tau1: complex = 1j, tau2: complex = 1j, tau3: complex = 0, svd_tol: float = 1e-8,
                  params: SeriesParams | None = None) -> Report:
    spec = kummer_spec(tau1, tau2, tau3)
    degenerate = tau1 == tau2 and tau3 == 0
    rep = Report("kummer-degenerate" if degenerate else "kummer-generic",
                 {"tau1": complex(tau1), "tau2": complex(tau2), "tau3": complex(tau3),
                  "svd_tol": svd_tol, "spec_sha256": spec.digest()})
    for k, expected in zip(range(1, 5), (4, 10, 20, 34)):
        got = len(invariant_basis(spec, k))
        rep.add(f"invariant_dimension_k{k}", got, expected, abs(got - expected), 0)
    X = kummer_generators(spec)
    names = list(KUMMER_LABELS)
    if degenerate:
        a41 = theta_constant(4, 1, tau1, params)
        target = sum((kummer_y(spec, 2, a, b) for a in (1, 3) for b in (1, 3)),
                     start=RingElement(spec, 2, np.zeros(16)))
        target = a41 * a41 * target
        x03 = compose(spec, X[0], X[3], params)
        x12 = compose(spec, X[1], X[2], params)
        rep.add("X0X3_closed_form", x03.norm(), target.norm(), _rel(x03.coeffs, target.coeffs), 1e-9)
        rep.add("X1X2_closed_form", x12.norm(), target.norm(), _rel(x12.coeffs, target.coeffs), 1e-9)
        rel = find_relations(spec, 2, X, svd_tol=svd_tol, names=names, params=params)
        rep.add("quadric_found", rel.count, 1, 0.0 if rel.count >= 1 else 1.0, 0.0)
        quadric = np.zeros(len(rel.words), complex)
        quadric[rel.words.index((0, 3))] = 1
        quadric[rel.words.index((1, 2))] = -1
        rep.add("quadric_is_X0X3_minus_X1X2", rel.count, 1,
                rowspace_distance(rel.coefficient_matrix, quadric[None]), 1e-9)
        fac = kummer_factorization_error(tau1, params)
        rep.add("product_of_elliptic_factors", fac, 0.0, fac, 1e-10)
        rep.data["quadric"] = rel.as_dict()
    else:
        for d in (2, 3):
            count = find_relations(spec, d, X, svd_tol=svd_tol, names=names, params=params).count
            rep.add(f"degree{d}_relation_count", count, 0, count, 0)
        rel = find_relations(spec, 4, X, svd_tol=svd_tol, names=names, params=params)
        rep.add("degree4_relation_found", rel.count, 1, 0.0 if rel.count >= 1 else 1.0, 0.0)
        if rel.count:
            shape, resid = fit_quartic_shape(rel.coefficient_matrix[0], rel.words)
            rep.data["quartic_shape"] = shape
            rep.data["quartic_shape_residual"] = resid
        rep.data["quartic"] = rel.as_dict()
    return rep


def kummer_factorization_error(tau: complex, params: SeriesParams | None = None) -> float:
    """Max deviation of degree-(1,1) products from the tensor square of the ``N = 2`` curve ring."""
    spec2 = kummer_spec(tau, tau, 0)
    spec1 = TorusSpec.from_periods(tau, 2, name="elliptic-N2")
    e1 = [basis_element(spec1, c) for c in basis_classes(spec1, 1)]
    ones = basis_classes(spec2, 1)
    err = 0.0
    for c, d in itertools.product(ones, repeat=2):
        prod = compose(spec2, basis_element(spec2, c), basis_element(spec2, d), params)
        i1, j1 = (int(x * 2) for x in c.coords)
        i2, j2 = (int(x * 2) for x in d.coords)
        first = compose(spec1, e1[i1], e1[i2], params).coeffs
        second = compose(spec1, e1[j1], e1[j2], params).coeffs
        err = max(err, float(np.abs(prod.coeffs - np.outer(first, second).reshape(-1)).max()))
    return err


FAMILIES = ("hesse", "sklyanin", "quasihomogeneous", "veronese", "kummer-degenerate",
            "kummer-generic")


def run_family(name: str, tau: complex | None = None, b=None, svd_tol: float = 1e-8,
               params: SeriesParams | None = None, tau2: complex | None = None,
               tau3: complex | None = None) -> Report:
    tau = 1j if tau is None else tau
    if name == "hesse":
        return verify_hesse(tau, svd_tol, params)
    if name == "sklyanin":
        return verify_sklyanin(tau, Fraction(3, 10) if b is None else b, svd_tol, params)
    if name == "quasihomogeneous":
        return verify_quasihomogeneous(tau, svd_tol, params)
    if name == "veronese":
        return verify_p123_veronese(tau, svd_tol, params)
    if name == "kummer-degenerate":
        return verify_kummer(tau, tau, 0, svd_tol, params)
    if name == "kummer-generic":
        return verify_kummer(tau, 1.3j if tau2 is None else tau2, 0.1j if tau3 is None else tau3,
                             svd_tol, params)
    raise InputError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
