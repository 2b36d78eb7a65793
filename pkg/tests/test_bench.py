import random

import pytest

from qhibe.bench import CLAIMS, bench, gm_encrypt
from qhibe.numtheory import jacobi
from qhibe.plotting import plot_bench, plot_game
from qhibe.games import GameResult, TrialRecord


@pytest.fixture(scope="module")
def report(mid):
    return bench(64, 30, random.Random(1), pp=mid[0])


def test_counts(report):
    assert set(report.combine_mul) == {CLAIMS["combine_mul"]}
    assert set(report.encrypt_inv) == {CLAIMS["encrypt_inv"]}
    assert report.closed_form_inv == 2
    assert report.closed_form_mul == CLAIMS["encrypt_mul"]
    assert report.expansion == CLAIMS["expansion_vs_gm"]
    assert all(ok for _, ok, _ in report.checks())


def test_gm_reference(mid):
    pp, msk = mid
    rng = random.Random(2)
    for b in (0, 1):
        c = gm_encrypt(pp, b, rng)
        assert jacobi(c, pp.N) == 1
        assert (pow(c, (msk.p - 1) // 2, msk.p) == 1) == (b == 0)


def test_rows(report):
    rows = dict(report.rows())
    assert rows["combine_mul"] == "8" and rows["expansion_vs_gm"] == "4"
    # identity tag plus four coefficients
    assert int(rows["ciphertext_bytes"]) == 5 * int(rows["gm_ciphertext_bytes"])


def test_rejects_small():
    with pytest.raises(ValueError):
        bench(32, 1)


def test_figures(report, tmp_path):
    plot_bench(report, tmp_path / "b.png")
    res = GameResult(3, 4, "g", [TrialRecord(i, 0, int(i != 2)) for i in range(4)])
    plot_game(res, tmp_path / "g.png")
    for name in ("b.png", "g.png"):
        assert (tmp_path / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
