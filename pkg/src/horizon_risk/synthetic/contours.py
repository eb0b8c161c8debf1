"""Preset edge contours and the CLI contour grammar.

4 presets covering the test cases:
- half:  h = 1/2, the straight edge behind every closed form
- sine:  h = 0.5 + 0.05 sin(2 pi t), smooth Hoelder-2 edge (h'' oscillates by 0.4 pi^2)
- tilt:  h = 0.3 + 0.4 t, straight but not axis-aligned
- cubic: h = 0.5 + 0.1 t - 0.3 t^2 + 0.15 t^3, curved with nonconstant curvature
"""

from __future__ import annotations

from horizon_risk.errors import ConfigError
from horizon_risk.schemas.contour import ContourKind, EdgeContour

from .horizon import sampled_hoelder_seminorm, validate_contour

CONTOURS: dict[str, EdgeContour] = {
    "half": EdgeContour(kind="constant", params=[0.5], declared_alpha=2.0, declared_C=1.0),
    "sine": EdgeContour(kind="sinusoid", params=[0.05, 1.0, 0.5], declared_alpha=2.0, declared_C=4.0),
    "tilt": EdgeContour(kind="polynomial", params=[0.3, 0.4], declared_alpha=2.0, declared_C=1.0),
    "cubic": EdgeContour(
        kind="polynomial", params=[0.5, 0.1, -0.3, 0.15], declared_alpha=2.0, declared_C=1.0,
    ),
}

_PREFIXES: dict[str, ContourKind] = {
    "const": "constant",
    "poly": "polynomial",
    "sin": "sinusoid",
}


def parse_contour(text: str, alpha: float = 2.0, C: float | None = None) -> EdgeContour:
    """Parse ``half``, ``const:0.5``, ``sin:0.05,1,0.5`` or ``poly:0.3,0.4``.

    Presets keep their own declared class. For parsed contours, C defaults
    to the contour's sampled seminorm, the tightest declaration that holds.
    The result is always validated against the Horizon class.
    """
    text = text.strip()
    if text in CONTOURS:
        return validate_contour(CONTOURS[text])

    prefix, sep, body = text.partition(":")
    if not sep or prefix not in _PREFIXES:
        known = ", ".join(sorted(CONTOURS))
        raise ConfigError(
            f"bad contour {text!r}: expected one of {known} or const:/poly:/sin: followed by numbers"
        )
    try:
        params = [float(p) for p in body.split(",")]
    except ValueError:
        raise ConfigError(f"bad contour {text!r}: parameters must be numbers")

    kind = _PREFIXES[prefix]
    if C is None:
        probe = EdgeContour(kind=kind, params=params, declared_alpha=alpha)
        C = max(sampled_hoelder_seminorm(probe), 1e-12)
    return validate_contour(
        EdgeContour(kind=kind, params=params, declared_alpha=alpha, declared_C=C)
    )
