"""``dfcw-golay`` command-line front end.

Every command computes all of its results before touching the file system,
then writes each file atomically. If any write fails, files already written by
that run are removed, so a failed command leaves nothing behind.

Errors are reported as a single ``error: <kind>: <message>`` line on stderr
with exit status 2.
"""

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from . import io as dio
from .channel import (
    DEFAULT_DOPPLER_GRID,
    RmseConfig,
    ambiguity,
    classical_pair_rmse,
    rmse_curves,
    rmse_experiment,
)
from .chips import (
    ChipSpec,
    FadingProfile,
    Family,
    default_fading_boundary,
    fading_mask,
    hop_sequence,
    mirror,
    synthesize,
)
from .code_builder import (
    analyze,
    build_base_code,
    build_code,
    region_boundaries,
    region_labels,
    region_report,
)
from .code_sets import (
    best_candidate_set,
    build_set,
    combined_set,
    mate_set,
    pair_mate_xcorr,
    set_metrics,
    table1,
)
from .correlate import acf as waveform_acf
from .correlate import to_db
from .golay import format_code, generate_golay_pair, mate_pair

EXIT_ERROR = 2

# Parameters that only steer where and how results land; kept out of provenance.
_NON_PROVENANCE = {"out_dir", "config", "no_figures", "prefix", "handler", "command"}


class UsageError(Exception):
    """Bad command line or configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- outputs


class Outputs:
    """Files staged by a command and written together at the end."""

    def __init__(self, out_dir, prefix, provenance, figures=True):
        self.out_dir = Path(out_dir)
        self.prefix = prefix
        self.provenance = provenance
        self.figures = figures
        self._staged = []

    def path(self, suffix):
        return self.out_dir / f"{self.prefix}{suffix}"

    def csv(self, suffix, header, rows, plot=None):
        """Stage a CSV; ``plot`` is ``(kind, kwargs)`` for its companion script."""
        path = self.path(suffix)
        text = dio.csv_text(header, rows, self.provenance)
        self._staged.append((path, lambda p=path, t=text: dio.atomic_write(p, t)))
        if plot is not None:
            kind, kwargs = plot
            script = dio.plot_script_text(kind, path.name, **kwargs)
            spath = path.with_suffix(".plot.py")
            self._staged.append((spath, lambda p=spath, t=script: dio.atomic_write(p, t)))
        return path

    def text(self, suffix, text):
        path = self.path(suffix)
        self._staged.append((path, lambda p=path, t=text: dio.atomic_write(p, t)))
        return path

    def json(self, suffix, document):
        path = self.path(suffix)
        doc = dict(document, provenance=self.provenance)
        text = json.dumps(doc, indent=2, sort_keys=True, default=dio._json_default) + "\n"
        return self.text(suffix, text)

    def figure(self, suffix, render, *args, **kwargs):
        if not self.figures:
            return None
        path = self.path(suffix)
        self._staged.append((path, lambda p=path: render(p, *args, **kwargs)))
        return path

    def commit(self):
        written = []
        try:
            for path, write in self._staged:
                write()
                written.append(path)
        except BaseException:
            for path in written:
                path.unlink(missing_ok=True)
            raise
        return written


# ---------------------------------------------------------------- argument types


def _power_of_two(text):
    value = int(text)
    if value < 1 or value & (value - 1):
        raise argparse.ArgumentTypeError(f"must be a power of two, got {text}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _family(text):
    try:
        return Family.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text):
    try:
        values = [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_pair(text):
    parts = str(text).split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}")
    return (float(parts[0]), float(parts[1]))


def _grid(text):
    """``start:stop:step`` (stop inclusive) or a comma list."""
    text = str(text)
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}")
        start, stop, step = parts
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    return [float(t) for t in text.split(",") if t.strip()]


def _fade_text(text):
    FadingProfile.parse(text)
    return text


# ---------------------------------------------------------------- argument groups


def _add_common(p):
    p.add_argument("--out-dir", default=None, help=f"output directory (default ${dio.OUT_DIR_ENV} or .)")
    p.add_argument("--prefix", default=None, help="file-name prefix (default: command name)")
    p.add_argument("--config", default=None, help="key=value file with the same keys as the flags")
    p.add_argument("--no-figures", action="store_true", help="skip rendered PNG figures")


def _add_chip(p, n_default=16):
    p.add_argument("--family", type=_family, default="df-lfm")
    p.add_argument("--n", "--n-subpulses", dest="n", type=_positive_int, default=n_default)
    p.add_argument("--ns", "--samples-per-subpulse", dest="ns", type=_positive_int, default=None,
                   help="samples per sub-pulse (default 2N, free of aliasing)")
    p.add_argument("--slope", type=float, default=None, help="chip slope gamma (default: base chip)")
    p.add_argument("--mirror-sign", type=int, choices=(1, -1), default=1)


def _add_code(p, ng_default=8, n_default=16):
    _add_chip(p, n_default)
    p.add_argument("--ng", type=_power_of_two, default=ng_default, help="Golay code length N_g")


def _add_set(p, ng_default=16, n_default=32):
    _add_code(p, ng_default, n_default)
    p.add_argument("--k", type=float, default=0.24, help="smallest chip slope")


def _ns(args):
    return args.ns if args.ns is not None else 2 * args.n


def _chip_spec(args):
    return ChipSpec(args.family, args.n, args.slope, args.mirror_sign, _ns(args))


def _fade(args, family, n):
    if not getattr(args, "fade", None):
        return None
    prof = FadingProfile.parse(args.fade)
    if prof.boundary > n:
        raise ValueError(f"fading boundary {prof.boundary} exceeds {n} sub-pulses")
    return prof


# ---------------------------------------------------------------- row helpers


def _db_rel(mag):
    peak = float(np.max(mag)) if len(mag) else 0.0
    return to_db(mag / peak) if peak > 0 else np.full(len(mag), to_db(0.0))


def _correlation_rows(corr):
    mag = np.abs(corr.values)
    db = _db_rel(mag)
    for i, v in enumerate(corr.values):
        yield (i - corr.zero_lag, v.real, v.imag, mag[i], db[i])


_CORR_HEADER = ("lag_index", "re", "im", "magnitude", "magnitude_db")
_REGION_HEADER = ("sample_index", "region_label", "magnitude", "magnitude_db")


def _region_rows(values, n_g, chip_len):
    labels = region_labels(n_g, chip_len)
    mag = np.abs(values)
    db = to_db(mag)
    return [(i, labels[i], mag[i], db[i]) for i in range(len(values))]


def _report_dict(report):
    out = {
        "mainlobe_peak": report.mainlobe_peak,
        "mainlobe_index": report.mainlobe_index,
        "zero_region_peak": report.zero_region_peak,
        "cross_region_peak": report.cross_region_peak,
        "cross_left_peak": report.cross_left_peak,
        "cross_right_peak": report.cross_right_peak,
        "has_mainlobe": report.has_mainlobe,
        "region_boundaries": list(report.region_boundaries),
    }
    out.update(report.as_db())
    return out


def _regions_plot(title, n_g, chip_len):
    return ("regions", {"title": title, "boundaries": list(region_boundaries(n_g, chip_len))})


# ---------------------------------------------------------------- commands


def cmd_gen_golay(args, out):
    a, b = generate_golay_pair(args.exponent)
    lines = [dio.provenance_line(out.provenance), format_code(a), format_code(b)]
    out.text(".csv", "\n".join(lines) + "\n")
    if args.mates:
        ma, mb = mate_pair(a, b)
        lines = [dio.provenance_line(out.provenance), format_code(ma), format_code(mb)]
        out.text("_mates.csv", "\n".join(lines) + "\n")
    return {"length": len(a)}


def cmd_gen_chip(args, out):
    from .plotting import plot_chip

    spec = _chip_spec(args)
    hops = hop_sequence(spec)
    u = synthesize(spec).samples
    profile = _fade(args, spec.family, spec.num_subpulses)
    if profile is not None:
        u = u * fading_mask(spec.num_subpulses, spec.samples_per_subpulse, profile)
    samples = mirror(u, spec.mirror_sign) if args.mirror else u
    title = f"{spec.family.value} chip, N={spec.num_subpulses}, gamma={spec.gamma:.4g}"
    out.csv(".csv", ("sample_index", "re", "im"), dio.waveform_rows(samples), plot=("chip", {"title": title}))
    hop_out = hops[::-1] if args.mirror else hops
    out.csv("_hops.csv", ("subpulse_index", "hop"), enumerate(hop_out))
    out.figure(".png", plot_chip, samples, hop_out, title=title)
    return {"num_samples": len(samples), "gamma": spec.gamma, "max_hop": int(hops.max())}


def cmd_gen_code(args, out):
    from .plotting import plot_chip

    code = build_base_code(_chip_spec(args), int(math.log2(args.ng)))
    title = f"{args.family} code, N_g={args.ng}, N={args.n}"
    out.csv(".csv", ("sample_index", "re", "im"), dio.waveform_rows(code.samples), plot=("chip", {"title": title}))
    out.figure(".png", plot_chip, code.samples, title=title)
    return {"num_samples": len(code), "chip_len": code.chip_len}


def cmd_acf(args, out):
    from .plotting import plot_correlation

    if args.input:
        samples = dio.read_waveform(args.input)
        title = f"ACF of {Path(args.input).name}"
    else:
        spec = _chip_spec(args)
        samples = synthesize(spec).samples
        profile = _fade(args, spec.family, spec.num_subpulses)
        if profile is not None:
            samples = samples * fading_mask(spec.num_subpulses, spec.samples_per_subpulse, profile)
        if args.mirror:
            samples = mirror(samples, spec.mirror_sign)
        title = f"{spec.family.value} chip ACF"
    corr = waveform_acf(samples, args.method)
    out.csv(".csv", _CORR_HEADER, _correlation_rows(corr), plot=("correlation", {"title": title}))
    mag = np.abs(corr.values)
    out.figure(".png", plot_correlation, [("ACF", corr.lags, _db_rel(mag))], title=title)
    return {"num_lags": len(corr), "peak": float(mag.max())}


def cmd_receiver(args, out):
    from .plotting import plot_regions

    code = build_base_code(_chip_spec(args), int(math.log2(args.ng)))
    res, report = analyze(code, method=args.method)
    n_g, c = code.n_g, code.chip_len
    title = f"{args.family}, N_g={n_g}, N={args.n}, Ns={_ns(args)}"
    out.csv(".csv", _REGION_HEADER, _region_rows(res.r.values, n_g, c), plot=_regions_plot(title, n_g, c))
    labels = region_labels(n_g, c)
    paths = [
        (i, labels[i], abs(res.r_xa.values[i]), abs(res.r_xb.values[i]), abs(res.r.values[i]))
        for i in range(len(res.r))
    ]
    out.csv("_paths.csv", ("sample_index", "region_label", "r_xa_magnitude", "r_xb_magnitude", "r_magnitude"), paths)
    out.json("_summary.json", _report_dict(report))
    out.figure(
        ".png", plot_regions,
        [("R_xa", to_db(np.abs(res.r_xa.values))), ("R_xb", to_db(np.abs(res.r_xb.values))),
         ("R", to_db(np.abs(res.r.values)))],
        region_boundaries(n_g, c), title=title,
    )
    return _report_dict(report)


def _make_set(args, kind, count):
    ns = _ns(args)
    if kind == "best":
        return best_candidate_set(args.family, args.ng, args.n, count, args.k, ns, args.mirror_sign)
    pair = build_set(args.family, args.ng, args.n, count, args.k, ns, args.mirror_sign)
    if kind == "pair":
        return pair
    mates = mate_set(pair)
    if kind == "mate":
        return mates
    return combined_set(pair, mates)


def cmd_gen_set(args, out):
    code_set = _make_set(args, args.kind, args.l)
    manifest = code_set.manifest()
    out.json(".json", manifest)
    return {"size": len(code_set)}


_METRICS_HEADER = ("set_id", "L", "N_g", "N", "family", "MCCP_db", "ACCP_db", "avg_ACF_peak_db")


def _metrics_row(set_id, code_set, metrics, args):
    return (set_id, len(code_set), args.ng, args.n, args.family,
            metrics.mccp_db, metrics.accp_db, metrics.avg_acf_peak_db)


def _stage_metrics(out, rows, asp_rows, title):
    from .plotting import plot_metrics

    out.csv(".csv", _METRICS_HEADER, rows, plot=("metrics", {"title": title}))
    out.csv("_asp.csv", ("set_id", "member", "kind", "gamma", "asp", "asp_db"), asp_rows)
    out.figure(".png", plot_metrics, [r[0] for r in rows], [r[5] for r in rows],
               [r[6] for r in rows], [r[7] for r in rows], title=title)


def _asp_rows(set_id, code_set, metrics):
    return [(set_id, i, m.kind, m.gamma, a, to_db(a))
            for i, (m, a) in enumerate(zip(code_set.members, metrics.asp))]


def cmd_set_metrics(args, out):
    rows, asp_rows = [], []
    for count in args.l:
        code_set = _make_set(args, args.kind, count)
        metrics = set_metrics(code_set)
        set_id = f"{args.kind}-L{count}"
        rows.append(_metrics_row(set_id, code_set, metrics, args))
        asp_rows += _asp_rows(set_id, code_set, metrics)
    _stage_metrics(out, rows, asp_rows, f"{args.family}, N_g={args.ng}, N={args.n}")
    return {r[0]: {"MCCP_db": r[5], "ACCP_db": r[6], "avg_ACF_peak_db": r[7]} for r in rows}


def cmd_best_set(args, out):
    rows, asp_rows = [], []
    best = None
    for kind in ("pair", "combined", "best"):
        code_set = _make_set(args, kind, args.l)
        metrics = set_metrics(code_set)
        set_id = f"{kind}-L{len(code_set)}"
        rows.append(_metrics_row(set_id, code_set, metrics, args))
        asp_rows += _asp_rows(set_id, code_set, metrics)
        if kind == "best":
            best = code_set
    _stage_metrics(out, rows, asp_rows, f"{args.family}, N_g={args.ng}, N={args.n}, L={args.l}")
    out.json("_manifest.json", best.manifest())
    return {r[0]: {"MCCP_db": r[5], "ACCP_db": r[6], "avg_ACF_peak_db": r[7]} for r in rows}


def cmd_mate_xcorr(args, out):
    from .plotting import plot_regions

    spec = _chip_spec(args)
    s1 = build_base_code(spec, int(math.log2(args.ng)))
    a, b = generate_golay_pair(int(math.log2(args.ng)))
    ma, mb = mate_pair(a, b)
    u = synthesize(spec)
    s2 = build_code(ma, mb, u, mirror(u, spec.mirror_sign))
    res, report = pair_mate_xcorr(s1, s2)
    n_g, c = s1.n_g, s1.chip_len
    title = f"pair vs mate, {args.family}, N_g={n_g}, N={args.n}"
    out.csv(".csv", _REGION_HEADER, _region_rows(res.r.values, n_g, c), plot=_regions_plot(title, n_g, c))
    out.json("_summary.json", _report_dict(report))
    out.figure(".png", plot_regions, [("R_12", to_db(np.abs(res.r.values)))],
               region_boundaries(n_g, c), title=title)
    return _report_dict(report)


def cmd_fading_demo(args, out):
    from .plotting import plot_correlation, plot_regions

    spec = _chip_spec(args)
    fade = args.fade or f"0.6,1.0,{default_fading_boundary(spec.family, spec.num_subpulses)}"
    profile = FadingProfile.parse(fade)
    if profile.boundary > spec.num_subpulses:
        raise ValueError(f"fading boundary {profile.boundary} exceeds {spec.num_subpulses} sub-pulses")
    u = synthesize(spec).samples
    d = mirror(u, spec.mirror_sign)
    mask = fading_mask(spec.num_subpulses, spec.samples_per_subpulse, profile)
    uf = u * mask
    df = mirror(uf, spec.mirror_sign)
    traces = [waveform_acf(x) for x in (u, d, uf, df)]
    peak = float(np.abs(traces[0].values).max())
    dbs = [to_db(np.abs(t.values) / peak) for t in traces]
    lags = traces[0].lags
    rows = [(int(k), *(db[i] for db in dbs)) for i, k in enumerate(lags)]
    title = f"{spec.family.value} chip ACF under fading {fade}"
    out.csv("_chips.csv", ("lag_index", "ru_db", "rd_db", "ru_faded_db", "rd_faded_db"), rows)
    mismatch = float(np.max(np.abs(traces[2].values - traces[3].values)))

    a, b = generate_golay_pair(int(math.log2(args.ng)))
    code = build_code(a, b, uf, df)
    res, report = analyze(code)
    n_g, c = code.n_g, code.chip_len
    out.csv("_receiver.csv", _REGION_HEADER, _region_rows(res.r.values, n_g, c),
            plot=_regions_plot(title, n_g, c))
    summary = dict(_report_dict(report), faded_acf_mismatch=mismatch, fade=fade)
    out.json("_summary.json", summary)
    out.figure("_chips.png", plot_correlation,
               [(name, lags, db) for name, db in zip(("R_u", "R_d", "R_u faded", "R_d faded"), dbs)],
               title=title)
    out.figure("_receiver.png", plot_regions, [("R", to_db(np.abs(res.r.values)))],
               region_boundaries(n_g, c), title=title)
    return summary


def cmd_rmse_sim(args, out):
    from .plotting import plot_rmse

    cfg = RmseConfig(
        snr_grid=tuple(args.snr_grid), trials=args.trials, fading_range=tuple(args.fading_range),
        seed=args.seed, snr_reference=args.snr_reference,
    )
    ns = _ns(args)
    proposed = rmse_curves(rmse_experiment, cfg, args.family, args.ng, args.n, ns,
                           slope=args.slope, reference=args.reference)
    header = ("snr_db", "rmse_fading_off", "rmse_fading_on")
    out.csv(".csv", header, proposed, plot=("rmse", {"title": f"{args.family}, N_g={args.ng}, N={args.n}"}))
    curves = {f"proposed N_g={args.ng}": proposed}
    for n_g in args.baseline_ng or ():
        classical = rmse_curves(classical_pair_rmse, cfg, n_g, chip_len=args.baseline_chip_len)
        out.csv(f"_classical_ng{n_g}.csv", header, classical,
                plot=("rmse", {"title": f"classical pair, N_g={n_g}"}))
        curves[f"classical N_g={n_g}"] = classical
    out.figure(".png", plot_rmse, curves, title="mainlobe location RMSE")
    return {label: [list(r) for r in rows] for label, rows in curves.items()}


def cmd_ambiguity(args, out):
    from .plotting import plot_ambiguity

    code = build_base_code(_chip_spec(args), int(math.log2(args.ng)))
    grid = args.doppler if args.doppler is not None else list(DEFAULT_DOPPLER_GRID)
    surface = ambiguity(code, grid)
    db = to_db(surface.magnitudes)
    step = args.lag_step
    rows = [(fd, i, db[r, i]) for r, fd in enumerate(surface.doppler_grid)
            for i in range(0, db.shape[1], step)]
    title = f"{args.family}, N_g={args.ng}, N={args.n}"
    out.csv(".csv", ("fd_T", "lag_index", "magnitude_db"), rows, plot=("ambiguity", {"title": title}))
    out.figure(".png", plot_ambiguity, surface.doppler_grid, db, title=title)
    zero = [region_report(m, code.n_g, code.chip_len).zero_region_peak for m in surface.magnitudes]
    return {"max_zero_region_peak_db": to_db(max(zero))}


def cmd_table1(args, out):
    rows, metrics = table1(args.ng, args.n, args.l, args.k, _ns(args), Family.parse(args.family))
    out.csv(".csv", ("set", "avg_acf_peak_db", "avg_ccp_db", "source"), rows)
    return {"avg_acf_peak_db": metrics.avg_acf_peak_db, "accp_db": metrics.accp_db,
            "mccp_db": metrics.mccp_db}


# ---------------------------------------------------------------- parser


def build_parser():
    parser = _Parser(prog="dfcw-golay", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def command(name, handler, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(handler=handler)
        _add_common(p)
        return p

    p = command("gen-golay", cmd_gen_golay, "Golay complementary pair of length 2**m")
    p.add_argument("--exponent", "--golay-exponent", dest="exponent", type=int, required=True)
    p.add_argument("--mates", action="store_true", help="also write the mate pair")

    p = command("gen-chip", cmd_gen_chip, "sampled DFCW chip and its hop sequence")
    _add_chip(p)
    p.add_argument("--mirror", action="store_true", help="emit the mirror chip")
    p.add_argument("--fade", type=_fade_text, default=None, help="a1,a2,n1 two-level fading")

    p = command("gen-code", cmd_gen_code, "concatenated code waveform a | zeros | b")
    _add_code(p)

    p = command("acf", cmd_acf, "autocorrelation of a waveform CSV or a chip")
    _add_chip(p)
    p.add_argument("--input", default=None, help="waveform CSV (sample_index,re,im)")
    p.add_argument("--mirror", action="store_true")
    p.add_argument("--fade", type=_fade_text, default=None)
    p.add_argument("--method", choices=("auto", "direct", "fft"), default="auto")

    p = command("receiver", cmd_receiver, "noiseless receiver output split into regions")
    _add_code(p)
    p.add_argument("--method", choices=("auto", "direct", "fft"), default="auto")

    p = command("gen-set", cmd_gen_set, "code-set manifest")
    _add_set(p)
    p.add_argument("--l", type=_positive_int, default=4)
    p.add_argument("--kind", choices=("pair", "mate", "combined", "best"), default="pair")

    p = command("set-metrics", cmd_set_metrics, "ASP, MCCP, ACCP of code sets")
    _add_set(p)
    p.add_argument("--l", type=_int_list, default=[4], help="set size, or comma list")
    p.add_argument("--kind", choices=("pair", "mate", "combined", "best"), default="pair")

    p = command("best-set", cmd_best_set, "best-candidate set against the pair and combined sets")
    _add_set(p)
    p.add_argument("--l", type=_positive_int, default=4)

    p = command("mate-xcorr", cmd_mate_xcorr, "cross-correlation of a pair code with its mate code")
    _add_code(p, ng_default=16, n_default=8)

    p = command("fading-demo", cmd_fading_demo, "chip ACFs and receiver output under fading")
    _add_code(p)
    p.add_argument("--fade", type=_fade_text, default=None, help="a1,a2,n1 (default 0.6,1.0,family split)")

    p = command("rmse-sim", cmd_rmse_sim, "Monte-Carlo mainlobe-location RMSE")
    _add_code(p, ng_default=16, n_default=16)
    p.add_argument("--trials", type=_positive_int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snr-grid", type=_grid, default=_grid("-10:50:5"), help="start:stop:step or list")
    p.add_argument("--fading-range", type=_float_pair, default=(0.6, 1.0))
    p.add_argument("--snr-reference", choices=("transmitted", "received"), default="transmitted")
    p.add_argument("--reference", choices=("matched", "clean"), default="matched")
    p.add_argument("--baseline-ng", type=_int_list, default=None, help="classical pair lengths")
    p.add_argument("--baseline-chip-len", type=_positive_int, default=8)

    p = command("ambiguity", cmd_ambiguity, "receiver output over a Doppler grid")
    _add_code(p)
    p.add_argument("--doppler", type=_grid, default=None, help="fd*T grid, start:stop:step or list")
    p.add_argument("--lag-step", type=_positive_int, default=1, help="keep every n-th lag in the CSV")

    p = command("table1", cmd_table1, "set-quality comparison table")
    _add_set(p)
    p.add_argument("--l", type=_positive_int, default=4)

    return parser


# ---------------------------------------------------------------- config files


def read_config(path):
    """``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("_", "-")] = value
    return values


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices.get(name)
    return None


def _config_argv(subparser, values):
    """Translate config entries into flags for ``subparser``; unknown keys raise."""
    known = {}
    for action in subparser._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                known[opt[2:]] = action
    argv = []
    for key, value in values.items():
        action = known.get(key)
        if action is None or key in ("config", "help"):
            raise UsageError(f"unknown config key {key!r}")
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append(f"--{key}")
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"config key {key!r} expects true/false, got {value!r}")
        else:
            argv.append(f"--{key}={value}")
    return argv


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        values = read_config(args.config)
        sub = _subparser(parser, args.command)
        # config first so explicit flags on the command line win
        args = parser.parse_args([args.command] + _config_argv(sub, values) + list(argv[1:]))
    return args


def provenance(args):
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _NON_PROVENANCE}
    if "ns" in params and params["ns"] is None and "n" in params:
        params["ns"] = 2 * params["n"]
    return {"tool": "dfcw-golay", "version": __version__, "command": args.command, "params": params}


# ---------------------------------------------------------------- entry point


def run(argv):
    """Run one command; returns ``(summary, written_paths)``. Raises on error."""
    args = parse_args(list(argv))
    out_dir = Path(args.out_dir) if args.out_dir else dio.default_out_dir()
    prefix = args.prefix or args.command.replace("-", "_")
    out = Outputs(out_dir, prefix, provenance(args), figures=not args.no_figures)
    summary = args.handler(args, out)
    return summary, out.commit()


def _one_line(text):
    return " ".join(str(text).split())


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            summary, written = run(argv)
    except UsageError as exc:
        print(f"error: usage: {_one_line(exc)}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, TypeError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {_one_line(exc)}", file=sys.stderr)
        return EXIT_ERROR
    for w in caught:
        print(f"warning: {w.category.__name__}: {_one_line(w.message)}", file=sys.stderr)
    print(json.dumps(summary, sort_keys=True, default=dio._json_default))
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
