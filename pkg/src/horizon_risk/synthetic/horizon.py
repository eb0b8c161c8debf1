"""Horizon-class images rendered by exact pixel-area averaging of 1{t2 < h(t1)}.

Each pixel value is n^2 * integral over the column slice of
clamp(h(t1) - j/n, 0, 1/n). The slice is split wherever h crosses the
row's lower or upper boundary, so every piece is smooth and a fixed
16-point Gauss-Legendre rule integrates it to well below 1e-10.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.optimize import brentq

from horizon_risk.config import MARGIN, QUADRATURE_ORDER
from horizon_risk.errors import ContourOutOfRange, GridError, HoelderViolation, IndexOutOfBounds
from horizon_risk.schemas.contour import ContourKind, EdgeContour

from .grid import ImageGrid

logger = logging.getLogger(__name__)

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(QUADRATURE_ORDER)

_SCAN_POINTS = 33        # per-slice samples used to bracket boundary crossings
_RANGE_POINTS = 4097     # dense grid for range and Lipschitz checks
_SEMINORM_POINTS = 513   # pairwise grid for the Hoelder seminorm
_CHECK_TOL = 1e-9
_SNAP_TOL = 1e-12
EDGE_TIE_TOL = 1e-9


# ── Contour validation ───────────────────────────────────────────────────


def sampled_lipschitz(contour: EdgeContour) -> float:
    """Largest difference quotient of h on a dense uniform grid."""
    ts = np.linspace(0.0, 1.0, _RANGE_POINTS)
    return float(np.max(np.abs(np.diff(contour(ts)))) / (ts[1] - ts[0]))


def sampled_hoelder_seminorm(contour: EdgeContour) -> float:
    """sup |h^(k)(t) - h^(k)(t')| / |t - t'|^(alpha - k) over grid pairs, k = floor(alpha).

    For integral alpha the exponent is zero and this is the oscillation of h^(k).
    """
    k = contour.hoelder_order
    beta = contour.declared_alpha - k
    ts = np.linspace(0.0, 1.0, _SEMINORM_POINTS)
    dk = contour.derivative(ts, k)
    if beta == 0.0:
        return float(dk.max() - dk.min())
    upper = np.triu_indices(ts.size, k=1)
    num = np.abs(np.subtract.outer(dk, dk))[upper]
    den = np.abs(np.subtract.outer(ts, ts))[upper] ** beta
    return float(np.max(num / den))


def validate_contour(contour: EdgeContour, margin: float = MARGIN) -> EdgeContour:
    """Check range, 1-Lipschitz membership and the declared Hoelder bound."""
    ts = np.linspace(0.0, 1.0, _RANGE_POINTS)
    hs = contour(ts)
    if hs.min() < margin - _CHECK_TOL or hs.max() > 1.0 - margin + _CHECK_TOL:
        raise ContourOutOfRange(
            f"{contour.label()}: h ranges over [{hs.min():.4f}, {hs.max():.4f}], "
            f"outside [{margin}, {1 - margin}]"
        )
    lipschitz = sampled_lipschitz(contour)
    if lipschitz > 1.0 + _CHECK_TOL:
        raise HoelderViolation(f"{contour.label()}: Lipschitz ratio {lipschitz:.4f} > 1")
    seminorm = sampled_hoelder_seminorm(contour)
    if seminorm > contour.declared_C + _CHECK_TOL:
        raise HoelderViolation(
            f"{contour.label()}: Hoelder-{contour.declared_alpha:g} seminorm "
            f"{seminorm:.4f} exceeds declared C={contour.declared_C:g}"
        )
    return contour


def make_contour(
    kind: ContourKind,
    params: list[float],
    alpha: float,
    C: float,
    margin: float = MARGIN,
) -> EdgeContour:
    """Build an EdgeContour and reject it unless it lies in the declared Horizon class."""
    contour = EdgeContour(kind=kind, params=params, declared_alpha=alpha, declared_C=C)
    return validate_contour(contour, margin)


# ── Pixel averages ───────────────────────────────────────────────────────


def _crossings(contour: EdgeContour, a: float, b: float, level: float) -> list[float]:
    """Points in [a, b] where h crosses `level`, bracketed by a uniform scan."""
    ts = np.linspace(a, b, _SCAN_POINTS)
    gap = contour(ts) - level
    roots = []
    for k in range(ts.size - 1):
        if gap[k] == 0.0:
            roots.append(float(ts[k]))
        elif gap[k] * gap[k + 1] < 0.0:
            roots.append(brentq(lambda t: float(contour(t)) - level, ts[k], ts[k + 1], xtol=1e-15))
    return roots


def _gauss_legendre(func, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(_WEIGHTS, func(mid + half * _NODES)))


def pixel_average(contour: EdgeContour, n: int, i: int, j: int) -> float:
    """Average of the Horizon indicator over Pixel(i, j), in [0, 1]."""
    if not (0 <= i < n and 0 <= j < n):
        raise IndexOutOfBounds(f"pixel ({i}, {j}) outside a {n}x{n} grid")
    a, b = i / n, (i + 1) / n
    lo, hi = j / n, (j + 1) / n
    breaks = {a, b}
    for level in (lo, hi):
        breaks.update(t for t in _crossings(contour, a, b, level) if a < t < b)
    knots = sorted(breaks)

    def integrand(t: np.ndarray) -> np.ndarray:
        return np.clip(contour(t) - lo, 0.0, 1.0 / n)

    area = sum(_gauss_legendre(integrand, t0, t1) for t0, t1 in zip(knots, knots[1:]))
    value = min(max(n * n * area, 0.0), 1.0)
    if value < _SNAP_TOL:
        return 0.0
    if value > 1.0 - _SNAP_TOL:
        return 1.0
    return value


def render(contour: EdgeContour, n: int) -> ImageGrid:
    """Noise-free Horizon image x[i, j] for every pixel of an n x n grid.

    Rows entirely below the sampled column minimum of h are 1, rows entirely
    above the maximum are 0; only the rows the edge passes through are
    integrated. The sampled extremes are widened by the sample spacing,
    which bounds the error of a 1-Lipschitz contour.
    """
    if n < 2:
        raise GridError(f"render needs n >= 2, got {n}")
    data = np.zeros((n, n))
    rows = np.arange(n)
    slack = 1.0 / (n * (_SCAN_POINTS - 1))
    for i in range(n):
        hs = contour(np.linspace(i / n, (i + 1) / n, _SCAN_POINTS))
        h_min, h_max = hs.min() - slack, hs.max() + slack
        below = (rows + 1) / n <= h_min
        data[i, below] = 1.0
        for j in rows[~below & (rows / n < h_max)]:
            data[i, j] = pixel_average(contour, n, i, int(j))
    logger.debug("rendered %s at n=%d", contour.label(), n)
    return ImageGrid(data)


# ── Edge geometry ────────────────────────────────────────────────────────


def edge_rows(contour: EdgeContour, n: int) -> list[tuple[int, int]]:
    """Per column i, the pair (j_above, j_below) straddling the edge.

    j_below is the last row whose noise-free value is >= 0.5 (a bisected
    pixel counts as below); j_above = j_below + 1 is the first pixel above
    the edge.
    """
    values = render(contour, n).data
    j_below = (values >= 0.5 - EDGE_TIE_TOL).sum(axis=1) - 1
    return [(int(jb) + 1, int(jb)) for jb in j_below]


def region_partition(contour: EdgeContour, n: int, delta: int) -> np.ndarray:
    """Label every pixel 1..4 by its position relative to the edge band.

    S1: j/n > h(i/n) + 2 delta/n            (above, patch clear of the edge)
    S2: h(i/n) < j/n <= h(i/n) + 2 delta/n
    S3: h(i/n) - 2 delta/n <= j/n <= h(i/n)
    S4: j/n < h(i/n) - 2 delta/n            (below, patch clear of the edge)
    """
    h = contour(np.arange(n) / n)[:, None]
    t2 = (np.arange(n) / n)[None, :]
    band = 2.0 * delta / n
    labels = np.select(
        [t2 > h + band, t2 > h, t2 >= h - band],
        [1, 2, 3],
        default=4,
    )
    return labels.astype(np.int8)
