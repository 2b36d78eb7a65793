"""Figures for the bench and game reports. Rendered off-screen to files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import CLAIMS, BenchReport  # noqa: E402
from .games import GameResult  # noqa: E402


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_bench(report: BenchReport, path) -> None:
    """Measured counts next to the quoted figures."""
    mean = lambda xs: sum(xs) / len(xs) if xs else 0.0
    labels = ["combine\nmul", "encrypt\ninv", "encrypt mul\n(s = t)", "encrypt mul\n(uniform)", "expansion\nvs GM"]
    measured = [mean(report.combine_mul), mean(report.encrypt_inv), report.closed_form_mul,
                mean(report.encrypt_mul), report.expansion]
    claimed = [CLAIMS["combine_mul"], CLAIMS["encrypt_inv"], CLAIMS["encrypt_mul"], CLAIMS["encrypt_mul"],
               CLAIMS["expansion_vs_gm"]]
    x = range(len(labels))
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.bar([i - 0.2 for i in x], measured, width=0.4, label="measured")
    ax.bar([i + 0.2 for i in x], claimed, width=0.4, label="quoted", alpha=0.6)
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("count")
    ax.set_title(f"xhIBE operation counts, {report.bits}-bit primes")
    ax.legend(frameon=False)
    _finish(fig, path)


def plot_game(result: GameResult, path) -> None:
    """Running success rate with the coin-flip 3-sigma band."""
    wins, rate = 0, []
    for i, rec in enumerate(result.records, start=1):
        wins += rec.win
        rate.append(wins / i)
    n = range(1, len(rate) + 1)
    band = [1.5 / k ** 0.5 for k in n]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.fill_between(n, [0.5 - b for b in band], [0.5 + b for b in band], color="0.85", label="coin flip ±3σ")
    ax.plot(n, rate, lw=1.2, label="success rate")
    ax.set_ylim(0, 1.02)
    ax.set_xlabel("trials")
    ax.set_ylabel("success rate")
    ax.set_title(result.label or "game")
    ax.legend(frameon=False, loc="lower right")
    _finish(fig, path)
