"""Klein's j through Eisenstein series: an oracle independent of the Fukaya pipeline."""
from __future__ import annotations

import mpmath


def j_eisenstein(tau: complex) -> complex:
    """``j(tau) = 1728 J(tau)`` with ``J`` from mpmath (Eisenstein/Dedekind-eta based)."""
    if complex(tau).imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    return complex(1728 * mpmath.kleinj(complex(tau)))


def _sigma3(n: int) -> int:
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def j_coefficients(n_terms: int) -> list[int]:
    """Exact coefficients of ``q^-1, q^0, q^1, ...`` in ``j = E4^3 / Delta``."""
    L = n_terms + 1
    e4 = [1] + [240 * _sigma3(n) for n in range(1, L)]
    e4_cubed = _mul(_mul(e4, e4, L), e4, L)
    # Delta / q = prod (1 - q^n)^24
    eta24 = [1] + [0] * (L - 1)
    for n in range(1, L):
        factor = [0] * L
        factor[0] = 1
        factor[n] = -1
        for _ in range(24):
            eta24 = _mul(eta24, factor, L)
    inv = [0] * L
    inv[0] = 1
    for k in range(1, L):
        inv[k] = -sum(eta24[i] * inv[k - i] for i in range(1, k + 1))
    return _mul(e4_cubed, inv, L)[:n_terms]


def _mul(a: list[int], b: list[int], L: int) -> list[int]:
    out = [0] * L
    for i, x in enumerate(a[:L]):
        if x:
            for j, y in enumerate(b[:L - i]):
                out[i + j] += x * y
    return out
