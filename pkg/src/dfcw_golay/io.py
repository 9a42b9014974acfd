"""CSV/JSON emission with provenance, CSV ingestion, and plot-script generation.

Every file is written to a temporary sibling and renamed into place, so a failed
command never leaves a half-written output behind.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

PROVENANCE_PREFIX = "# provenance: "
OUT_DIR_ENV = "DFCW_GOLAY_OUT"


def default_out_dir():
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def fmt(value):
    """Full-precision text for numbers (17 significant digits), ``str`` otherwise."""
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return str(value)


def provenance_line(config):
    return PROVENANCE_PREFIX + json.dumps(config, sort_keys=True, default=_json_default)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def atomic_write(path, text, mode="w"):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, newline="" if "b" not in mode else None) as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def csv_text(header, rows, provenance=None):
    rows = list(rows)
    if not rows:
        raise ValueError("refusing to write an empty table")
    buf = io.StringIO()
    if provenance is not None:
        buf.write(provenance_line(provenance) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def emit_csv(path, header, rows, provenance=None):
    return atomic_write(path, csv_text(header, rows, provenance))


def emit_json(path, document, provenance=None):
    doc = dict(document)
    if provenance is not None:
        doc["provenance"] = provenance
    return atomic_write(path, json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")


def read_csv(path):
    """Return ``(provenance, header, rows)``; rows are lists of strings."""
    provenance = None
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith(PROVENANCE_PREFIX):
            provenance = json.loads(line[len(PROVENANCE_PREFIX):])
        elif line.startswith("#") or not line.strip():
            continue
        else:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    return provenance, header, list(reader)


def read_waveform(path):
    """Complex samples from a ``sample_index,re,im`` CSV."""
    _, header, rows = read_csv(path)
    cols = {name: i for i, name in enumerate(header)}
    if "re" not in cols or "im" not in cols:
        raise ValueError(f"{path}: expected 're' and 'im' columns, got {header}")
    re = np.array([float(r[cols["re"]]) for r in rows])
    im = np.array([float(r[cols["im"]]) for r in rows])
    return re + 1j * im


def waveform_rows(samples):
    return ((i, s.real, s.imag) for i, s in enumerate(np.asarray(samples)))


_SCRIPT_HEAD = '''\
"""Plot {csv_name}. Generated by dfcw-golay; edit freely."""
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV = {csv_name!r}


def load(path):
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    return rows


rows = load(sys.argv[1] if len(sys.argv) > 1 else CSV)
'''

_SCRIPT_BODIES = {
    "regions": '''
x = [int(r["sample_index"]) for r in rows]
y = [float(r["magnitude_db"]) for r in rows]
fig, ax = plt.subplots(figsize=(9, 4))
ax.plot(x, y, lw=0.8)
for edge in {boundaries!r}:
    ax.axvline(edge, color="k", ls="--", lw=0.6)
ax.set_ylim({ymin}, 5)
ax.set_xlabel("sample index")
ax.set_ylabel("|R| / mainlobe (dB)")
ax.set_title({title!r})
fig.tight_layout()
fig.savefig({png!r}, dpi=150)
''',
    "correlation": '''
x = [int(r["lag_index"]) for r in rows]
y = [float(r["magnitude_db"]) for r in rows]
fig, ax = plt.subplots(figsize=(8, 4))
ax.plot(x, y, lw=0.8)
ax.set_ylim({ymin}, 5)
ax.set_xlabel("lag")
ax.set_ylabel("|R| (dB re peak)")
ax.set_title({title!r})
fig.tight_layout()
fig.savefig({png!r}, dpi=150)
''',
    "rmse": '''
snr = [float(r["snr_db"]) for r in rows]
fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogy(snr, [max(float(r["rmse_fading_off"]), 1e-4) for r in rows], "o-", label="no fading")
ax.semilogy(snr, [max(float(r["rmse_fading_on"]), 1e-4) for r in rows], "s--", label="fading")
ax.set_xlabel("SNR (dB)")
ax.set_ylabel("RMSE (chip durations)")
ax.set_title({title!r})
ax.legend()
fig.tight_layout()
fig.savefig({png!r}, dpi=150)
''',
    "ambiguity": '''
import numpy as np
fd = sorted({{float(r["fd_T"]) for r in rows}})
lags = sorted({{int(r["lag_index"]) for r in rows}})
grid = np.full((len(fd), len(lags)), {ymin}, dtype=float)
fi = {{v: i for i, v in enumerate(fd)}}
li = {{v: i for i, v in enumerate(lags)}}
for r in rows:
    grid[fi[float(r["fd_T"])], li[int(r["lag_index"])]] = max(float(r["magnitude_db"]), {ymin})
fig, ax = plt.subplots(figsize=(9, 4))
mesh = ax.pcolormesh(lags, fd, grid, shading="auto", vmin={ymin}, vmax=0)
fig.colorbar(mesh, ax=ax, label="dB")
ax.set_xlabel("sample index")
ax.set_ylabel("f_d T")
ax.set_title({title!r})
fig.tight_layout()
fig.savefig({png!r}, dpi=150)
''',
    "metrics": '''
labels = [r["set_id"] for r in rows]
fig, ax = plt.subplots(figsize=(7, 4))
pos = range(len(labels))
ax.plot(pos, [float(r["MCCP_db"]) for r in rows], "o-", label="MCCP")
ax.plot(pos, [float(r["ACCP_db"]) for r in rows], "s-", label="ACCP")
ax.plot(pos, [float(r["avg_ACF_peak_db"]) for r in rows], "^-", label="avg ACF peak")
ax.set_xticks(list(pos))
ax.set_xticklabels(labels, rotation=30, ha="right")
ax.set_ylabel("dB")
ax.set_title({title!r})
ax.legend()
fig.tight_layout()
fig.savefig({png!r}, dpi=150)
''',
    "chip": '''
x = [int(r["sample_index"]) for r in rows]
fig, ax = plt.subplots(figsize=(8, 3))
ax.plot(x, [float(r["re"]) for r in rows], lw=0.8, label="re")
ax.plot(x, [float(r["im"]) for r in rows], lw=0.8, label="im")
ax.set_xlabel("sample index")
ax.set_title({title!r})
ax.legend()
fig.tight_layout()
fig.savefig({png!r}, dpi=150)
''',
}


def plot_script_text(kind, csv_name, title="", boundaries=(), ymin=-80):
    if kind not in _SCRIPT_BODIES:
        raise ValueError(f"no plot script template for {kind!r}")
    png = str(Path(csv_name).with_suffix(".script.png").name)
    head = _SCRIPT_HEAD.format(csv_name=str(Path(csv_name).name))
    body = _SCRIPT_BODIES[kind].format(
        boundaries=list(boundaries), ymin=ymin, title=title, png=png
    )
    return head + body


def emit_plot_script(path, kind, csv_path, **kwargs):
    return atomic_write(path, plot_script_text(kind, csv_path, **kwargs))
