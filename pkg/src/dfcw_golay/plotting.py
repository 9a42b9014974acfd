"""Rendered figures for the CLI report path.

matplotlib is imported lazily so the library itself never needs it. All
figures use the Agg backend and are written atomically as PNG.
"""

import os
import tempfile
from pathlib import Path

import numpy as np

from .code_builder import REGION_LABELS

DB_AXIS_FLOOR = -80.0

# PNG metadata without a software/version stamp keeps figures byte-stable.
_PNG_METADATA = {"Software": None}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path):
    plt = _pyplot()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".png")
    os.close(fd)
    try:
        fig.savefig(tmp, dpi=120, format="png", metadata=_PNG_METADATA)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)
    return path


def _clip(db):
    return np.maximum(np.asarray(db, dtype=float), DB_AXIS_FLOOR)


def plot_regions(path, traces, boundaries, title=""):
    """One panel per ``(label, magnitude_db)`` trace, region edges as dashed rules."""
    plt = _pyplot()
    fig, axes = plt.subplots(len(traces), 1, figsize=(9, 2.6 * len(traces)), squeeze=False)
    for ax, (label, db) in zip(axes[:, 0], traces):
        ax.plot(np.arange(len(db)), _clip(db), lw=0.7)
        for edge in boundaries:
            ax.axvline(edge, color="k", ls="--", lw=0.5)
        for name, lo, hi in zip(REGION_LABELS, boundaries[:-1], boundaries[1:]):
            ax.text((lo + hi) / 2, 2, name, ha="center", va="bottom", fontsize=7)
        ax.set_ylim(DB_AXIS_FLOOR, 12)
        ax.set_ylabel(f"{label} (dB)")
    axes[-1, 0].set_xlabel("sample index")
    axes[0, 0].set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_correlation(path, traces, title=""):
    """Overlay of ``(label, lags, magnitude_db)`` traces."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4))
    for label, lags, db in traces:
        ax.plot(lags, _clip(db), lw=0.8, label=label)
    ax.set_ylim(DB_AXIS_FLOOR, 5)
    ax.set_xlabel("lag")
    ax.set_ylabel("|R| (dB re peak)")
    ax.set_title(title)
    if len(traces) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_chip(path, samples, hops=None, title=""):
    plt = _pyplot()
    rows = 2 if hops is not None else 1
    fig, axes = plt.subplots(rows, 1, figsize=(8, 2.6 * rows), squeeze=False)
    ax = axes[0, 0]
    ax.plot(samples.real, lw=0.7, label="re")
    ax.plot(samples.imag, lw=0.7, label="im")
    ax.set_xlabel("sample index")
    ax.legend(fontsize=8)
    ax.set_title(title)
    if hops is not None:
        axes[1, 0].step(np.arange(len(hops)), hops, where="post")
        axes[1, 0].set_xlabel("sub-pulse")
        axes[1, 0].set_ylabel("hop")
    fig.tight_layout()
    return _save(fig, path)


def plot_rmse(path, curves, title=""):
    """``curves`` maps a label to rows ``(snr_db, rmse_off, rmse_on)``."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for i, (label, rows) in enumerate(curves.items()):
        rows = np.asarray(rows, dtype=float)
        color = f"C{i}"
        # zero RMSE has no place on a log axis; pin it to the bottom
        ax.semilogy(rows[:, 0], np.maximum(rows[:, 1], 1e-4), "o-", color=color, label=f"{label}, no fading")
        ax.semilogy(rows[:, 0], np.maximum(rows[:, 2], 1e-4), "s--", color=color, label=f"{label}, fading")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("RMSE (chip durations)")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_ambiguity(path, doppler_grid, magnitudes_db, title=""):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(9, 4))
    lags = np.arange(magnitudes_db.shape[1])
    mesh = ax.pcolormesh(lags, doppler_grid, _clip(magnitudes_db), shading="auto",
                         vmin=DB_AXIS_FLOOR, vmax=0, rasterized=True)
    fig.colorbar(mesh, ax=ax, label="dB")
    ax.set_xlabel("sample index")
    ax.set_ylabel(r"$f_d T$")
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_metrics(path, labels, mccp_db, accp_db, acf_db, title=""):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    pos = np.arange(len(labels))
    ax.plot(pos, mccp_db, "o-", label="MCCP")
    ax.plot(pos, accp_db, "s-", label="ACCP")
    ax.plot(pos, acf_db, "^-", label="avg ACF peak")
    ax.set_xticks(pos)
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("dB")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)
