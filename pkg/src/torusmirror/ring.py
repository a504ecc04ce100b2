"""The graded ring ``R = sum_k Hom(L_0, L_k)`` with its Fukaya product.

Triangle selection rule.  For ``x`` at level ``k1`` (class ``c_x``) and ``y`` at
level ``k2`` (class ``c_y``) the triangles of the product ``x * y`` are indexed
by edge vectors ``l in c_x - c_y + (k1+k2) s / 2 + Z^n`` (``s`` the affine
shift).  Each contributes ``exp(-pi k1 k2/(k1+k2) l^T G l)`` to the class
``(k2 c_y + k1 c_x + k1 (l - l_0)) / (k1 + k2)``.  Grouping ``l`` by its image
class leaves theta sums at weight ``kappa D^2`` with ``D = (k1+k2)/gcd(k1,k2)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInputError, InputError, MisuseError, PrecisionError, UnsupportedError
from .lattice import MorphismClass, TorusSpec, basis_classes, class_index, invariant_basis, mod1
from .theta import DEFAULT_PARAMS, SeriesParams, _checked, canonical_theta, structure_coefficient


@dataclass(frozen=True, eq=False)
class RingElement:
    """Element of ``Hom(L_0, L_k)`` in the basis ``basis_classes(spec, k)``.

    Level 0 is the scalar line and carries a single coefficient.
    """

    spec: TorusSpec
    level: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if self.level < 0:
            raise InputError("level must be nonnegative")
        expected = 1 if self.level == 0 else len(basis_classes(self.spec, self.level))
        if coeffs.shape != (expected,):
            raise InputError(f"level {self.level} needs {expected} coefficients, got {coeffs.size}")
        object.__setattr__(self, "coeffs", coeffs)

    def __add__(self, other: "RingElement") -> "RingElement":
        _same(self, other)
        if self.level != other.level:
            raise MisuseError("cannot add elements of different levels")
        return RingElement(self.spec, self.level, self.coeffs + other.coeffs)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "RingElement":
        return RingElement(self.spec, self.level, complex(scalar) * self.coeffs)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return compose(self.spec, self, other)
        return other * self

    def classes(self) -> tuple[MorphismClass, ...]:
        return basis_classes(self.spec, self.level) if self.level else ()

    def norm(self) -> float:
        return float(np.abs(self.coeffs).max())


def _same(x: RingElement, y: RingElement) -> None:
    if x.spec != y.spec:
        raise MisuseError("ring elements belong to different torus specs")


def basis_element(spec: TorusSpec, c: MorphismClass) -> RingElement:
    idx = class_index(spec, c.level)
    if c not in idx:
        raise InputError(f"{c} is not a class at level {c.level}")
    v = np.zeros(len(idx), complex)
    v[idx[c]] = 1
    return RingElement(spec, c.level, v)


def generators(spec: TorusSpec, level: int = 1) -> list[RingElement]:
    """Degree-``level`` basis: classes, or orbit sums when the involution is on."""
    if spec.involution:
        return [orbit_element(spec, orb) for orb in invariant_basis(spec, level)]
    return [basis_element(spec, c) for c in basis_classes(spec, level)]


def orbit_element(spec: TorusSpec, orbit: Sequence[MorphismClass]) -> RingElement:
    out = basis_element(spec, orbit[0])
    for c in orbit[1:]:
        out = out + basis_element(spec, c)
    return out


def to_invariant(x: RingElement, tol: float = 1e-9) -> np.ndarray:
    """Coordinates of an involution-invariant element on the orbit-sum basis."""
    if x.level == 0:
        return x.coeffs.copy()
    idx = class_index(x.spec, x.level)
    orbits = invariant_basis(x.spec, x.level)
    coeffs = np.array([x.coeffs[idx[orb[0]]] for orb in orbits])
    for orb, a in zip(orbits, coeffs):
        for c in orb[1:]:
            if abs(x.coeffs[idx[c]] - a) > tol * max(1.0, x.norm()):
                raise MisuseError(f"element is not invariant under c -> -c at {c}")
    return coeffs


@lru_cache(maxsize=None)
def structure_table(spec: TorusSpec, k1: int, k2: int,
                    params: SeriesParams = DEFAULT_PARAMS) -> np.ndarray:
    """Dense tensor ``T[i, j, o]``: coefficient of class ``o`` in ``e_i * e_j``."""
    _checked(spec)
    left = basis_classes(spec, k1)
    right = basis_classes(spec, k2)
    out_idx = class_index(spec, k1 + k2)
    k3 = k1 + k2
    g = math.gcd(k1, k2)
    D = k3 // g
    kappa = Fraction(k1 * k2, k3)
    weight = kappa * D * D
    n = spec.n
    T = np.zeros((len(left), len(right), len(out_idx)), complex)
    offsets = list(itertools.product(range(D), repeat=n))
    for i, cx in enumerate(left):
        for j, cy in enumerate(right):
            for mu in offsets:
                c3 = MorphismClass(k3, tuple(mod1((k2 * a + k1 * b + k1 * m) / k3)
                                             for a, b, m in zip(cy.coords, cx.coords, mu)))
                char = [(b - a + m) / D for a, b, m in zip(cy.coords, cx.coords, mu)]
                T[i, j, out_idx[c3]] += structure_coefficient(spec, weight, char, params,
                                                              shift_steps=g)
    T.setflags(write=False)
    return T


def compose(spec: TorusSpec, x: RingElement, y: RingElement,
            params: SeriesParams | None = None) -> RingElement:
    """Fukaya product ``x * y`` landing at level ``x.level + y.level``."""
    params = params or DEFAULT_PARAMS
    if x.spec != spec or y.spec != spec:
        raise MisuseError("ring elements belong to a different torus spec")
    if x.level == 0:
        return RingElement(spec, y.level, x.coeffs[0] * y.coeffs)
    if y.level == 0:
        return RingElement(spec, x.level, y.coeffs[0] * x.coeffs)
    T = structure_table(spec, x.level, y.level, params)
    return RingElement(spec, x.level + y.level, np.einsum("i,j,ijo->o", x.coeffs, y.coeffs, T))


def evaluate_monomial(spec: TorusSpec, word: Sequence[RingElement],
                      params: SeriesParams | None = None) -> RingElement:
    if not word:
        raise InputError("empty word")
    return reduce(lambda acc, g: compose(spec, acc, g, params), word[1:], word[0])


def _sample_points(spec: TorusSpec, level: int) -> np.ndarray:
    per_axis = 2 * level * int(np.abs(spec.N_array).max()) + 3
    axis = (np.arange(per_axis) + 0.37) / per_axis
    grid = np.stack(np.meshgrid(*([axis] * spec.n), indexing="ij"), axis=-1)
    return grid.reshape(-1, spec.n)


@lru_cache(maxsize=None)
def _theta_on_grid(spec: TorusSpec, c: MorphismClass, grid_level: int,
                   params: SeriesParams) -> np.ndarray:
    vals = np.array([canonical_theta(spec, c, v, params) for v in _sample_points(spec, grid_level)])
    vals.setflags(write=False)
    return vals


def mirror_product(spec: TorusSpec, c1: MorphismClass, c2: MorphismClass,
                   params: SeriesParams | None = None) -> tuple[RingElement, float]:
    """Expand ``theta_c1 * theta_c2`` in the canonical basis one level up by sampling.

    Returns the coefficients and the relative least-squares residual.
    """
    params = params or DEFAULT_PARAMS
    if any(spec.shift):
        raise UnsupportedError("mirror product is only defined for shift = 0")
    k3 = c1.level + c2.level
    out = basis_classes(spec, k3)
    A = np.stack([_theta_on_grid(spec, c, k3, params) for c in out], axis=1)
    rhs = _theta_on_grid(spec, c1, k3, params) * _theta_on_grid(spec, c2, k3, params)
    scale = np.abs(A).max(axis=1)
    A = A / scale[:, None]
    rhs = rhs / scale
    coeffs, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    resid = float(np.linalg.norm(A @ coeffs - rhs) / max(np.linalg.norm(rhs), 1e-300))
    return RingElement(spec, k3, coeffs), resid


def mirror_compose(spec: TorusSpec, c1: MorphismClass, c2: MorphismClass,
                   params: SeriesParams | None = None, fit_tol: float = 1e-9) -> RingElement:
    """Classical theta product of the mirror sections ``theta_c1 theta_c2``."""
    elem, resid = mirror_product(spec, c1, c2, params)
    if resid > fit_tol:
        raise PrecisionError(f"theta product is not resolved by the level-{elem.level} basis "
                             f"(relative residual {resid:.2e})")
    return elem


# ---------------------------------------------------------------------------
# relations

def monomial_words(levels: Sequence[int], degree: int, commutative: bool) -> list[tuple[int, ...]]:
    """Generator-index words of total level ``degree``.

    Commutative: sorted index tuples in lexicographic order.  Noncommutative:
    all ordered words, by length then lexicographically.
    """
    g = len(levels)
    words = []
    max_len = degree // min(levels)
    for length in range(1, max_len + 1):
        source = (itertools.combinations_with_replacement(range(g), length) if commutative
                  else itertools.product(range(g), repeat=length))
        words += [w for w in source if sum(levels[i] for i in w) == degree]
    if commutative:
        words.sort()
    return words


def word_label(word: Sequence[int], names: Sequence[str], commutative: bool) -> str:
    if not commutative:
        return "*".join(names[i] for i in word)
    parts = []
    for i, grp in itertools.groupby(word):
        e = len(list(grp))
        parts.append(names[i] if e == 1 else f"{names[i]}^{e}")
    return "*".join(parts)


@dataclass
class RelationSet:
    degree: int
    words: list[tuple[int, ...]]
    names: list[str]
    commutative: bool
    coefficient_matrix: np.ndarray
    residuals: np.ndarray
    singular_values: np.ndarray
    svd_tol: float
    warnings: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return self.coefficient_matrix.shape[0]

    @property
    def labels(self) -> list[str]:
        return [word_label(w, self.names, self.commutative) for w in self.words]

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "commutative": self.commutative,
            "svd_tol": self.svd_tol,
            "words": self.labels,
            "relations": [
                {"coefficients": [[float(c.real), float(c.imag)] for c in row],
                 "residual": float(res)}
                for row, res in zip(self.coefficient_matrix, self.residuals)],
            "singular_values": [float(s) for s in self.singular_values],
            "warnings": list(self.warnings),
        }

    def to_csv(self) -> str:
        lines = ["relation,word,re,im,residual"]
        for r, (row, res) in enumerate(zip(self.coefficient_matrix, self.residuals)):
            for label, c in zip(self.labels, row):
                lines.append(f"{r},{label},{c.real:.17g},{c.imag:.17g},{res:.17g}")
        return "\n".join(lines) + "\n"


def canonical_rows(K: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Reduced row echelon form of a row space, rows rescaled to max modulus 1."""
    K = np.array(K, dtype=complex)
    if K.size == 0:
        return K
    scale = np.abs(K).max()
    rows, cols = K.shape
    r = 0
    for col in range(cols):
        if r == rows:
            break
        piv = r + int(np.argmax(np.abs(K[r:, col])))
        if abs(K[piv, col]) <= tol * scale:
            continue
        K[[r, piv]] = K[[piv, r]]
        K[r] /= K[r, col]
        for other in range(rows):
            if other != r:
                K[other] -= K[other, col] * K[r]
        r += 1
    K = K[:r]
    for i in range(r):
        j = int(np.argmax(np.abs(K[i])))
        K[i] /= K[i, j]
    return K


def evaluation_matrix(spec: TorusSpec, gens: Sequence[RingElement], words: Iterable[Sequence[int]],
                      params: SeriesParams | None = None) -> np.ndarray:
    rows = []
    for w in words:
        prod = evaluate_monomial(spec, [gens[i] for i in w], params)
        rows.append(to_invariant(prod) if spec.involution else prod.coeffs)
    return np.array(rows)


def find_relations(spec: TorusSpec, degree: int, gens: Sequence[RingElement] | None = None,
                   commutative: bool = True, svd_tol: float = 1e-8,
                   names: Sequence[str] | None = None,
                   params: SeriesParams | None = None) -> RelationSet:
    """Numerically discover all relations of total level ``degree`` among ``gens``.

    Relations are the left null vectors of the word-evaluation matrix with
    singular value below ``svd_tol * sigma_max``.
    """
    if gens is None:
        gens = generators(spec, 1)
    if not gens:
        raise InputError("no generators")
    if degree < 2:
        raise InputError("degree must be >= 2")
    levels = [g.level for g in gens]
    if min(levels) < 1:
        raise InputError("generators must have positive level")
    names = list(names) if names is not None else [f"X{i}" for i in range(len(gens))]
    warnings = []
    for lev in sorted(set(levels)):
        block = np.array([g.coeffs for g in gens if g.level == lev])
        if np.linalg.matrix_rank(block, tol=1e-10 * max(1.0, np.abs(block).max())) < len(block):
            warnings.append(f"generators of level {lev} are linearly dependent")
    words = monomial_words(levels, degree, commutative)
    E = evaluation_matrix(spec, gens, words, params)
    U, s, _ = np.linalg.svd(E, full_matrices=True)
    smax = float(s.max()) if s.size else 0.0
    if smax == 0:
        raise DegenerateInputError("all monomials evaluate to zero")
    small = [i for i in range(U.shape[1]) if i >= s.size or s[i] < svd_tol * smax]
    K = canonical_rows(U[:, small].conj().T) if small else np.zeros((0, len(words)), complex)
    residuals = (np.linalg.norm(K @ E, axis=1) / (np.linalg.norm(K, axis=1) * smax)
                 if K.shape[0] else np.zeros(0))
    return RelationSet(degree, words, names, commutative, K, residuals, s, svd_tol, warnings)


@dataclass(frozen=True)
class RiemannRelation:
    alpha_x: complex
    alpha_y: complex
    x_word: tuple[int, ...]
    y_word: tuple[int, ...]

    def coefficients(self) -> dict[tuple[int, ...], complex]:
        """``alpha_y * x_word - alpha_x * y_word`` as a word -> coefficient map."""
        out: dict[tuple[int, ...], complex] = {}
        out[self.x_word] = out.get(self.x_word, 0) + self.alpha_y
        out[self.y_word] = out.get(self.y_word, 0) - self.alpha_x
        return {w: c for w, c in out.items() if c != 0}


def riemann_relation(spec: TorusSpec, gens: Sequence[RingElement], x_word: Sequence[int],
                     y_word: Sequence[int], z: RingElement, tol: float = 1e-9,
                     params: SeriesParams | None = None) -> RiemannRelation | None:
    """If both products are proportional to ``z``, the relation they induce.

    ``alpha`` is the least-squares constant with ``product ~ alpha z``; returns
    ``None`` when either product is not proportional within ``tol``.
    """
    if len(x_word) != len(y_word) or not x_word:
        raise InputError("words must be nonempty and of equal length")
    zz = np.vdot(z.coeffs, z.coeffs).real
    if zz <= 1e-300 or z.norm() < 1e-14:
        raise DegenerateInputError("target element is zero")
    alphas = []
    for word in (x_word, y_word):
        prod = evaluate_monomial(spec, [gens[i] for i in word], params)
        if prod.level != z.level:
            return None
        alpha = np.vdot(z.coeffs, prod.coeffs) / zz
        if np.abs(prod.coeffs - alpha * z.coeffs).max() > tol * max(prod.norm(), 1e-300):
            return None
        alphas.append(complex(alpha))
    return RiemannRelation(alphas[0], alphas[1], tuple(x_word), tuple(y_word))
