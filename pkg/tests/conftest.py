from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

from gapcert.pauli import PauliPoly, all_strings

settings.register_profile("gapcert", deadline=None)
settings.load_profile("gapcert")


def z_field(n: int) -> PauliPoly:
    """H_n = -sum_i Z_i: lambda1 = -n, lambda2 = -n + 2."""
    return PauliPoly.parse(n, " ".join(f"- Z{i}" for i in range(1, n + 1)))


def random_local(n: int, rng, max_weight: int = 2) -> PauliPoly:
    """All strings of weight <= max_weight, rational coefficients uniform on [-1, 1]."""
    terms = {s: Fraction(int(rng.integers(-1000, 1001)), 1000) for s in all_strings(n, max_weight)[1:]}
    return PauliPoly(n, terms)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE: dict = {}


def record(num: int, ok: bool, detail: str) -> bool:
    """Store one PASS/FAIL line for the end-of-run summary."""
    ACCEPTANCE[num] = (ok, detail)
    print(f"CRITERION {num}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"CRITERION {num}: {'PASS' if ok else 'FAIL'}  {detail}")
