from __future__ import annotations

import numpy as np
import pytest
from scipy.optimize import brentq
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def curve_distance(curve, points, samples: int = 8192) -> np.ndarray:
    """Distance from each point to a parametric curve.

    Seeds at the nearest dense sample, then solves ``(gamma(t) - p) . gamma'(t) = 0``
    on the neighbouring parameter bracket.
    """
    ts = np.arange(samples) / samples
    dense = curve(ts)
    out = []
    for p in np.atleast_2d(points):
        i = int(np.argmin(np.linalg.norm(dense - p, axis=1)))
        best = float(np.linalg.norm(dense[i] - p))

        def slope(t, p=p):
            d = (curve(t + 1e-7)[0] - curve(t - 1e-7)[0]) / 2e-7
            return float(np.dot(curve(t)[0] - p, d))

        for a, b in (((i - 1) / samples, i / samples), (i / samples, (i + 1) / samples)):
            if slope(a) * slope(b) <= 0:
                t = brentq(slope, a, b, xtol=1e-16, rtol=1e-15)
                best = min(best, float(np.linalg.norm(curve(t)[0] - p)))
        out.append(best)
    return np.array(out)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


# one (criterion, passed, summary) entry per acceptance criterion, printed after the run
ACCEPTANCE_RESULTS: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, summary in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {summary}")
