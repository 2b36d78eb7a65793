import random
import sys
from pathlib import Path

import pytest

from qhibe.numtheory import MasterSecret, PublicParams, gen_blum_modulus

sys.path.insert(0, str(Path(__file__).parent))

# H(id) at N = 77 for the two toy identities (see test_numtheory for the pin).
ID_QR = b"id-10"    # H = 4, key r = 9 with r^2 = a
ID_NQR = b"id-25"   # H = 73, key r = 9 with r^2 = -a


@pytest.fixture(scope="session")
def toy():
    return PublicParams(77, 4), MasterSecret(7, 11)


@pytest.fixture(scope="session")
def mid():
    """64-bit primes: big enough for statistics, fast enough for hypothesis."""
    return gen_blum_modulus(64, random.Random(1234))


@pytest.fixture(scope="session")
def big():
    return gen_blum_modulus(512, random.Random(2024))


@pytest.fixture
def rng():
    return random.Random(99)


# Acceptance criteria append (number, passed, detail) here; the lines are
# printed after the run whatever the capture mode.
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
