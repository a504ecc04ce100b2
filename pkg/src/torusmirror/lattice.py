"""Exact lattice bookkeeping for the symplectic torus and its Lagrangian sections.

A torus is described by the blocks ``M`` (symplectic), ``B`` (B-field) and the
integer matrix ``N`` of the linear part of the monodromy, together with an
optional affine shift and a flag for the ``c -> -c`` involution.  Intersection
points of ``L_0`` with ``L_k`` are labelled by classes of
``((1/k) N^-1 Z^n) / Z^n``; they are kept as exact fractions.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from numbers import Rational, Real
from typing import Sequence

import numpy as np

from .errors import InputError, MisuseError

Scalar = Fraction | float
Matrix = tuple[tuple[Scalar, ...], ...]

PIVOT_TOL = 1e-12


def _scalar(x) -> Scalar:
    if isinstance(x, (bool, np.bool_)):
        raise InputError(f"boolean is not a matrix entry: {x!r}")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, (np.integer,)):
        return Fraction(int(x))
    if isinstance(x, (Real, np.floating)):
        return float(x)
    raise InputError(f"expected a real number, got {x!r}")


def _matrix(data, n: int, name: str) -> Matrix:
    arr = data
    if isinstance(arr, np.ndarray):
        arr = arr.tolist()
    if n == 1 and not isinstance(arr, (list, tuple)):
        arr = [[arr]]
    try:
        rows = [list(r) for r in arr]
    except TypeError:
        raise InputError(f"{name} must be an {n}x{n} matrix") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"{name} must be {n}x{n}, got shape "
                         f"{len(rows)}x{[len(r) for r in rows]}")
    return tuple(tuple(_scalar(x) for x in r) for r in rows)


def _is_exact(m: Matrix) -> bool:
    return all(isinstance(x, Fraction) for r in m for x in r)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0))
                       for j in range(n)) for i in range(n))


def _transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def _det(a: Matrix) -> Scalar:
    """Determinant by Gaussian elimination; exact for Fraction input."""
    m = [list(r) for r in a]
    n = len(m)
    det = Fraction(1) if _is_exact(a) else 1.0
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[piv][col] == 0:
            return Fraction(0) if isinstance(det, Fraction) else 0.0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] = m[r][c] - f * m[col][c]
    return det


def _inverse_exact(a: tuple[tuple[Fraction, ...], ...]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(a)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise InputError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(r[n:]) for r in m)


def mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class TorusSpec:
    """Symplectic input: ``(i w + b)(l'_i, l_j) = i M_ij + B_ij`` and ``f(l_i) = sum_j N_ji l'_j``.

    Use :meth:`build` rather than the raw constructor; it normalizes shapes and
    number types.
    """

    n: int
    M: Matrix
    B: Matrix
    N: tuple[tuple[int, ...], ...]
    shift: tuple[Fraction, ...]
    involution: bool = False
    name: str = field(default="", compare=False)

    @classmethod
    def build(cls, M, B, N, shift=None, involution: bool = False, name: str = "") -> "TorusSpec":
        if isinstance(N, (int, np.integer)):
            n = 1
        else:
            try:
                n = len(N)
            except TypeError:
                raise InputError("N must be an integer matrix") from None
        if n < 1:
            raise InputError("dimension must be positive")
        Mm = _matrix(M, n, "M")
        Bm = _matrix(B, n, "B")
        Nm = _matrix(N, n, "N")
        if not _is_exact(Nm) or any(x.denominator != 1 for r in Nm for x in r):
            raise InputError("N must have integer entries")
        Ni = tuple(tuple(int(x) for x in r) for r in Nm)
        if shift is None:
            sh = tuple(Fraction(0) for _ in range(n))
        else:
            if isinstance(shift, (int, float, Fraction, np.integer, np.floating)):
                shift = [shift]
            sh = tuple(Fraction(s) if not isinstance(s, float) else Fraction(s).limit_denominator(10**9)
                       for s in shift)
            if len(sh) != n:
                raise InputError(f"shift must have {n} entries")
        return cls(n=n, M=Mm, B=Bm, N=Ni, shift=sh, involution=bool(involution), name=name)

    @classmethod
    def from_periods(cls, tau, N, shift=None, involution: bool = False, name: str = "") -> "TorusSpec":
        """Spec whose complexified form is ``tau = B + i M`` (n x n complex symmetric)."""
        t = np.atleast_2d(np.asarray(tau, dtype=complex))
        return cls.build(t.imag, t.real, N, shift=shift, involution=involution, name=name)

    def with_N(self, N) -> "TorusSpec":
        return TorusSpec.build(self.M, self.B, N, self.shift, self.involution, self.name)

    def with_shift(self, shift) -> "TorusSpec":
        return TorusSpec.build(self.M, self.B, self.N, shift, self.involution, self.name)

    @property
    def M_array(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.M])

    @property
    def B_array(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.B])

    @property
    def N_array(self) -> np.ndarray:
        return np.array(self.N, dtype=np.int64)

    @property
    def shift_array(self) -> np.ndarray:
        return np.array([float(s) for s in self.shift])

    @property
    def det_N(self) -> int:
        return int(_det(tuple(tuple(Fraction(x) for x in r) for r in self.N)))

    @property
    def has_integral_shift(self) -> bool:
        return all(s.denominator == 1 for s in self.shift)

    def to_text(self) -> str:
        """Canonical config-file rendering (round-trips through :func:`parse_spec`)."""
        from .specfile import format_spec
        return format_spec(self)

    def digest(self) -> str:
        """SHA-256 of the canonical text without the cosmetic name."""
        return hashlib.sha256(replace(self, name="").to_text().encode()).hexdigest()


@dataclass(frozen=True, order=True)
class MorphismClass:
    """Element of ``K(L_k)_0``: canonical coordinates in ``[0, 1)^n`` at level ``k``."""

    level: int
    coords: tuple[Fraction, ...]

    def __neg__(self) -> "MorphismClass":
        return MorphismClass(self.level, tuple(mod1(-c) for c in self.coords))

    def as_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coords])

    def __str__(self) -> str:
        inner = ",".join(str(c) for c in self.coords)
        return f"[{inner}]@{self.level}"


def make_class(level: int, coords: Sequence) -> MorphismClass:
    return MorphismClass(level, tuple(mod1(Fraction(c)) for c in coords))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    required: bool = True
    witness: str = ""


@dataclass(frozen=True)
class CheckReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.required)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if c.required and not c.passed), None)

    def as_dict(self) -> dict:
        return {"passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "required": c.required,
                            "witness": c.witness} for c in self.checks]}


def _symmetry_check(name: str, a: Matrix) -> Check:
    n = len(a)
    exact = _is_exact(a)
    scale = max([1.0] + [abs(float(x)) for r in a for x in r])
    for i in range(n):
        for j in range(i + 1, n):
            d = a[i][j] - a[j][i]
            bad = d != 0 if exact else abs(d) > PIVOT_TOL * scale
            if bad:
                return Check(name, False, witness=f"entry ({i},{j}): {a[i][j]} != {a[j][i]}")
    return Check(name, True)


def _pd_check(name: str, a: Matrix) -> Check:
    """Leading principal minors, exact when possible, else with a pivot tolerance."""
    n = len(a)
    exact = _is_exact(a)
    scale = max([1.0] + [abs(float(x)) for r in a for x in r])
    for k in range(1, n + 1):
        minor = _det(tuple(tuple(r[:k]) for r in a[:k]))
        bad = minor <= 0 if exact else minor <= PIVOT_TOL * scale ** k
        if bad:
            return Check(name, False, witness=f"leading minor {k} = {minor}")
    return Check(name, True)


def validate(spec: TorusSpec) -> CheckReport:
    """Check the equivalent Lagrangian/ampleness conditions on ``spec``.

    ``B`` invertibility is reported but not required: every worked example
    runs at purely imaginary periods, i.e. ``B = 0``.
    """
    if not isinstance(spec, TorusSpec):
        raise InputError("validate expects a TorusSpec")
    Nf = tuple(tuple(Fraction(x) for x in r) for r in spec.N)
    NT = _transpose(Nf)
    checks = []
    for label, mat, required in (("M invertible", spec.M, True),
                                 ("N invertible", Nf, True),
                                 ("B invertible", spec.B, False)):
        d = _det(mat)
        tol = 0 if _is_exact(mat) else PIVOT_TOL
        checks.append(Check(label, abs(d) > tol, required, "" if abs(d) > tol else f"det = {d}"))
    NtM = _matmul(NT, spec.M)
    NtB = _matmul(NT, spec.B)
    sym = _symmetry_check("N^T M symmetric", NtM)
    checks.append(sym)
    checks.append(_symmetry_check("N^T B symmetric", NtB))
    if sym.passed:
        checks.append(_pd_check("N^T M positive definite", NtM))
    else:
        checks.append(Check("N^T M positive definite", False, witness="not symmetric"))
    return CheckReport(tuple(checks))


def _require_valid(spec: TorusSpec) -> None:
    report = validate(spec)
    if not report.passed:
        f = report.first_failure
        raise InputError(f"invalid torus spec: {f.name} fails ({f.witness})")


@lru_cache(maxsize=None)
def _basis(spec: TorusSpec, k: int) -> tuple[MorphismClass, ...]:
    Ninv = _inverse_exact(tuple(tuple(Fraction(x) for x in r) for r in spec.N))
    n = spec.n
    gens = [tuple(mod1(Ninv[i][j] / k) for i in range(n)) for j in range(n)]
    zero = tuple(Fraction(0) for _ in range(n))
    seen = {zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(mod1(a + b) for a, b in zip(x, g))
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return tuple(MorphismClass(k, c) for c in sorted(seen))


def basis_classes(spec: TorusSpec, k: int) -> tuple[MorphismClass, ...]:
    """All classes of ``((1/k) N^-1 Z^n) / Z^n`` in lexicographic order."""
    if not isinstance(k, (int, np.integer)) or k <= 0:
        raise InputError(f"level must be a positive integer, got {k!r}")
    _require_valid(spec)
    return _basis(spec, int(k))


@lru_cache(maxsize=None)
def class_index(spec: TorusSpec, k: int) -> dict[MorphismClass, int]:
    return {c: i for i, c in enumerate(basis_classes(spec, k))}


def fixed_classes(spec: TorusSpec, k: int) -> tuple[MorphismClass, ...]:
    return tuple(c for c in basis_classes(spec, k) if -c == c)


def invariant_basis(spec: TorusSpec, k: int) -> tuple[tuple[MorphismClass, ...], ...]:
    """Orbits of ``c -> -c`` on ``K(L_k)_0``; each orbit stands for its orbit sum."""
    if not spec.involution:
        raise MisuseError("invariant_basis needs a spec with the involution flag set")
    orbits = []
    seen = set()
    for c in basis_classes(spec, k):
        if c in seen:
            continue
        orb = tuple(sorted({c, -c}))
        seen.update(orb)
        orbits.append(orb)
    return tuple(orbits)
