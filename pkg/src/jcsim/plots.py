"""SVG figures from sweep and cat-state data (needs matplotlib)."""

from __future__ import annotations

import numpy as np

from .catgen import CatDistribution
from .stats import SweepResult


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_sweep(result: SweepResult, path: str) -> None:
    """P_n1, P_n2 and Mandel Q against phi, degenerate points left as gaps."""
    plt = _pyplot()
    phi = result.phis
    spec = result.spec
    fig, (ax_p, ax_q) = plt.subplots(2, 1, sharex=True, figsize=(6, 5))
    ax_p.plot(phi, result.column("p_n1"), label=f"P({spec.n1})")
    ax_p.plot(phi, result.column("p_n2"), label=f"P({spec.n2})")
    ax_p.set_ylabel("probability")
    ax_p.legend(loc="upper right")
    ax_q.plot(phi, result.column("mandel_q"), color="k")
    ax_q.axhline(0.0, color="grey", lw=0.5)
    ax_q.set_ylabel("Mandel Q")
    ax_q.set_xlabel("phi (rad)")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_cat(dist: CatDistribution, path: str, max_n: int | None = None) -> None:
    plt = _pyplot()
    probs = dist.probabilities
    if max_n is None:
        nonzero = np.nonzero(probs > 1e-6 * probs.max())[0]
        max_n = int(nonzero[-1]) + 2
    n = np.arange(min(max_n, len(probs) - 1) + 1)
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.bar(n, probs[: len(n)], width=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel("P(n)")
    ax.set_title(f"N={dist.spec.atoms}, alpha={dist.spec.alpha:g}, {dist.spec.parity.name.lower()}")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
