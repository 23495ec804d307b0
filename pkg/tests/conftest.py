from __future__ import annotations

import mpmath
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def ml_oracle(lam: float, z: float, dps: int = 50) -> float:
    """Mittag-Leffler series summed in high precision."""
    with mpmath.workdps(dps):
        lam_m, z_m = mpmath.mpf(lam), mpmath.mpf(z)
        total = mpmath.mpf(0)
        k = 0
        while True:
            term = z_m**k / mpmath.gamma(lam_m * k + 1)
            total += term
            if k > 10 and abs(term) < mpmath.mpf(10) ** (-dps + 5):
                return float(total)
            k += 1


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20261015)


# acceptance results, echoed in the terminal summary so they show without -s
ACCEPTANCE: list[str] = []


def record_acceptance(label: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter) -> None:
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
