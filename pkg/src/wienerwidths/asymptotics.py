"""Asymptotic constants and convergence diagnostics.

For the mixed weight families sigma_n behaves like C n^-s (ln n)^(s(d-1))
with an explicit leading constant, and the exact width formulas transfer
that behaviour:

    if sigma_n / (n^-s (ln n)^beta) -> C then

        v_n / (n^-s-1/2 (ln n)^beta) -> sqrt(2s+1) C        (transfer-vw)
        u_n / (n^-s    (ln n)^beta) -> (2s/(2s+1))^s C      (transfer-uv)

Named constants provided here:

    mix-l2-sigma    (2^d / (d-1)!)^s, the sigma constant of the mixed
                    families (beta = s(d-1))
    transfer-uv     (2s/(2s+1))^s
    transfer-vw     sqrt(2s+1)
    preasymptotic   C(d) = (1 + (1 + 2/log2(d-1))/(d-1))^(d-1), d >= 3,
                    giving sigma_n <= (C(d)/n)^(s/(r(1+log2(d-1)))) for
                    n >= 2 in the mixed-sr regime
    h1-constant     (2d)^(s-1) (2S+1)^((s-1)(d-1)) with
                    S = sum_{k>=1} (k^2+1)^(-s/(2(s-1)))  (s-series)
    s-series        S itself

The series S is summed directly to K terms and completed with a two-sided
integral sandwich of the tail: for p = s/(2(s-1)),

    L(K) = (K+2)^(1-2p)/(2p-1) <= sum_{k>K} (k^2+1)^-p <= K^(1-2p)/(2p-1) = U(K)

(the upper bound compares the terms with x^-2p, the lower with (x+1)^-2p).
Returning partial + (U+L)/2 certifies absolute error (U-L)/2 < tol with K in
the 1e5 range at desk tolerances, instead of the ~1/tol terms a one-sided
bound would force.

``aux_integral`` evaluates int_{a/n}^1 y^s (ln n / ln(yn))^beta dy, the
quantity whose limit 1/(s+1) drives the sup-formula asymptotics; it is a
smooth integrand for a > 1, handled by adaptive quadrature (QUADPACK).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .sigma import SigmaPrefix
from .widths import Embedding, WidthKind, WidthQuery, width

__all__ = [
    "CONSTANT_NAMES",
    "ConstantSpec",
    "ResourceLimitError",
    "constant",
    "series_S",
    "ConvergenceRow",
    "ConvergenceTable",
    "convergence_table",
    "aux_integral",
]

CONSTANT_NAMES = (
    "mix-l2-sigma",
    "transfer-uv",
    "transfer-vw",
    "preasymptotic",
    "h1-constant",
    "s-series",
)

# Hard cap on series length; beyond this the requested tolerance is treated
# as unreachable (exponent 2p too close to 1).
_SERIES_K_CAP = 50_000_000


class ResourceLimitError(RuntimeError):
    """A computation exceeded its resource cap (series length, prefix size)."""


@dataclass(frozen=True)
class ConstantSpec:
    """A named constant request; s/d are consumed as each formula needs."""

    name: str
    s: float | None = None
    d: int | None = None
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.name not in CONSTANT_NAMES:
            raise ValueError(
                f"unknown constant {self.name!r}; valid: {', '.join(CONSTANT_NAMES)}"
            )


def _need(value, what: str, cond: bool, constraint: str):
    if value is None:
        raise ValueError(f"{what} is required ({constraint})")
    if not cond:
        raise ValueError(f"{constraint}, got {what}={value!r}")
    return value


def constant(c: ConstantSpec) -> float:
    """Evaluate a named constant; domain errors name the violated constraint."""
    name = c.name
    if name == "mix-l2-sigma":
        d = _need(c.d, "d", c.d is not None and c.d >= 1, "mix-l2-sigma requires d >= 1")
        s = _need(c.s, "s", c.s is not None and c.s > 0, "mix-l2-sigma requires s > 0")
        base = 2.0**d / math.factorial(d - 1)
        return base**s
    if name == "transfer-uv":
        s = _need(c.s, "s", c.s is not None and c.s > 0, "transfer-uv requires s > 0")
        return (2.0 * s / (2.0 * s + 1.0)) ** s
    if name == "transfer-vw":
        s = _need(c.s, "s", c.s is not None and c.s > 0, "transfer-vw requires s > 0")
        return math.sqrt(2.0 * s + 1.0)
    if name == "preasymptotic":
        d = _need(c.d, "d", c.d is not None and c.d >= 3, "preasymptotic requires d >= 3")
        lg = math.log2(d - 1)
        return (1.0 + (1.0 + 2.0 / lg) / (d - 1)) ** (d - 1)
    if name == "h1-constant":
        d = _need(c.d, "d", c.d is not None and c.d >= 1, "h1-constant requires d >= 1")
        s = _need(c.s, "s", c.s is not None and c.s > 1, "h1-constant requires s > 1")
        out = (2.0 * d) ** (s - 1.0)
        if d > 1:
            S = series_S(s, c.tol)
            out *= (2.0 * S + 1.0) ** ((s - 1.0) * (d - 1.0))
        return out
    if name == "s-series":
        s = _need(c.s, "s", c.s is not None and c.s > 1, "s-series requires s > 1")
        return series_S(s, c.tol)
    raise AssertionError(name)  # pragma: no cover


def series_S(s: float, tol: float = 1e-10) -> float:
    """S = sum_{k>=1} (k^2+1)^(-p), p = s/(2(s-1)), to absolute error < tol.

    Plain summation to K terms plus the midpoint of the two-sided integral
    tail sandwich; K is the smallest power of two whose certified half-width
    (U-L)/2 drops below tol/2.  Raises ResourceLimitError when no admissible
    K exists under the cap (p too close to 1/2).
    """
    if not s > 1:
        raise ValueError("s-series requires s > 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    p = s / (2.0 * (s - 1.0))
    a = 2.0 * p - 1.0  # > 0 since p > 1/2 for s > 1

    def tail_bounds(K: int) -> tuple[float, float]:
        upper = K ** (-a) / a
        lower = (K + 2.0) ** (-a) / a
        return lower, upper

    K = 64
    while True:
        lower, upper = tail_bounds(K)
        # midpoint error is the half-width; 5% slack covers summation
        # rounding, which pairwise/fsum keeps near machine epsilon
        if (upper - lower) / 2.0 <= 0.95 * tol:
            break
        K *= 2
        if K > _SERIES_K_CAP:
            raise ResourceLimitError(
                f"series tolerance {tol} unreachable for s={s}: "
                f"would need more than {_SERIES_K_CAP} terms"
            )
    chunk = 1 << 20
    parts = []
    for lo in range(1, K + 1, chunk):
        k = np.arange(lo, min(lo + chunk - 1, K) + 1, dtype=np.float64)
        parts.append(float(np.sum((k * k + 1.0) ** (-p))))
    partial = math.fsum(parts)
    return partial + (upper + lower) / 2.0


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    raw: float  # the width itself
    normalizer: float  # n^-alpha (ln n)^beta
    ratio: float  # raw / normalizer
    target: float


@dataclass(frozen=True)
class ConvergenceTable:
    embedding: Embedding
    kind: WidthKind
    alpha: float
    beta: float
    target: float
    rows: tuple[ConvergenceRow, ...]


def convergence_table(
    prefix: SigmaPrefix,
    embedding: Embedding,
    kind: WidthKind,
    n_grid: Sequence[int],
    alpha: float,
    beta: float,
    target: float,
    threads: int = 1,
) -> ConvergenceTable:
    """Width values on an increasing n grid, normalized by n^-alpha (ln n)^beta.

    Only exact-width embeddings are accepted (a bracket has no single ratio).
    Rows are independent; with threads > 1 they are computed by an
    order-preserving thread map, so output does not depend on the count.
    """
    grid = [int(n) for n in n_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be strictly increasing")
    if grid[0] < 3:
        raise ValueError("n_grid entries must be >= 3 (ln n normalizer)")

    def row(n: int) -> ConvergenceRow:
        wv = width(prefix, WidthQuery(embedding, kind, n))
        if not wv.exact:
            raise ValueError(
                f"convergence tables need an exact width; "
                f"{embedding.value} yields a bracket"
            )
        norm = n ** (-alpha) * math.log(n) ** beta
        return ConvergenceRow(n, wv.value, norm, wv.value / norm, target)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = tuple(pool.map(row, grid))
    else:
        rows = tuple(row(n) for n in grid)
    return ConvergenceTable(embedding, kind, alpha, beta, target, rows)


def aux_integral(s: float, beta: float, a: float, n: float) -> float:
    """int_{a/n}^1 y^s (ln n / ln(yn))^beta dy, absolute error <= 1e-10.

    Converges to 1/(s+1) as n grows (for fixed a > 1, which keeps ln(yn)
    bounded away from 0 on the domain).  Adaptive quadrature; raises if the
    quadrature error estimate misses the target.
    """
    if not s > 0:
        raise ValueError("requires s > 0")
    if beta < 0:
        raise ValueError("requires beta >= 0")
    if not a > 1:
        raise ValueError("requires a > 1 (the lower endpoint must keep ln(yn) > 0)")
    if not n > a:
        raise ValueError("requires n > a")
    ln_n = math.log(n)

    def f(y: float) -> float:
        return y**s * (ln_n / math.log(y * n)) ** beta

    val, err = quad(f, a / n, 1.0, epsabs=1e-12, epsrel=1e-12, limit=500)
    if err > 1e-10:
        raise ResourceLimitError(
            f"quadrature error estimate {err:.3g} exceeds 1e-10"
        )
    return float(val)
