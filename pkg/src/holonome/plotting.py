"""Figure rendering for the report pipeline (Agg backend, file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_KHZ = 2.0 * np.pi * 1e3
_MHZ = 2.0 * np.pi * 1e6


def _sample_schedule(laws, rabi_t, n=600):
    """t (ns), |Omega|/2pi (MHz), chi and xi (rad) along a piecewise path."""
    ts, mags, chis, xis = [], [], [], []
    for t0, t1, _ in laws.smooth_segments():
        for t in np.linspace(t0, t1 - (t1 - t0) * 1e-9, max(2, int(n * (t1 - t0) / laws.duration))):
            p = laws.at(t)
            ts.append(t * 1e9)
            mags.append(rabi_t(t) / _MHZ)
            chis.append(p.chi)
            xis.append(p.xi)
    return np.array(ts), np.array(mags), np.array(chis), np.array(xis)


def pulse_figure(laws, rabi_t, path, title):
    ts, mags, chis, xis = _sample_schedule(laws, rabi_t)
    fig, (ax0, ax1) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 4.5))
    ax0.plot(ts, mags, color="tab:blue")
    ax0.set_ylabel(r"$|\Omega|/2\pi$ (MHz)")
    ax0.set_title(title)
    ax1.plot(ts, chis, color="tab:orange", label=r"$\chi$")
    ax1.plot(ts, xis, color="tab:green", label=r"$\xi$")
    ax1.set_xlabel("t (ns)")
    ax1.set_ylabel("angle (rad)")
    ax1.legend(loc="best")
    for ax in (ax0, ax1):
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def sweep_figure(rows, names, path):
    """Average fidelity against decoherence rate for each schedule."""
    kappas = np.array([row[0] for row in rows]) / _KHZ
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, name in enumerate(names):
        ax.plot(kappas, [row[2][i] for row in rows], marker="o", label=name)
    ax.set_xlabel(r"$\kappa/2\pi$ (kHz)")
    ax.set_ylabel("average gate fidelity")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def residuals_figure(draws, path):
    """Scatter of per-draw residuals, log scale; draws: (label, values) pairs."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, values in draws:
        ax.plot(range(len(values)), values, marker=".", linestyle="none", label=label)
    ax.set_yscale("log")
    ax.set_xlabel("draw")
    ax.set_ylabel("residual (max-entry norm)")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def compare_figure(laws_by_name, path):
    """Side-by-side pulse profiles; values are (laws, rabi_t) pairs."""
    fig, axes = plt.subplots(1, len(laws_by_name), sharey=True,
                             figsize=(5.0 * len(laws_by_name), 3.5))
    axes = np.atleast_1d(axes)
    for ax, (name, (laws, rabi_t)) in zip(axes, laws_by_name.items()):
        ts, mags, _, _ = _sample_schedule(laws, rabi_t)
        ax.plot(ts, mags, color="tab:blue")
        ax.set_xlabel("t (ns)")
        ax.set_title(name)
        ax.grid(True, alpha=0.3)
    axes[0].set_ylabel(r"$|\Omega|/2\pi$ (MHz)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
