"""Log-log power-law slope fitting for scaling checks."""

from __future__ import annotations

import numpy as np


def fit_scaling_exponent(pairs) -> tuple[float, float]:
    """Least-squares slope of log(value) against log(scale).

    ``pairs`` is a sequence of (scale, value) with all entries positive and
    at least three points.  Returns (slope, r_squared); a constant series
    fits a horizontal line perfectly, so its r_squared is 1.
    """
    data = [(float(a), float(b)) for a, b in pairs]
    if len(data) < 3:
        raise ValueError(f"need at least 3 pairs to fit an exponent, got {len(data)}")
    scales = np.array([a for a, _ in data])
    values = np.array([b for _, b in data])
    if np.any(scales <= 0) or np.any(values <= 0):
        raise ValueError("all scales and values must be positive for a log-log fit")
    x = np.log(scales)
    y = np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(r2)
