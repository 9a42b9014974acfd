"""Concatenated code assembly, the delay-and-add receiver, and output regions.

The transmit code is ``s = a | zeros | b`` with ``a`` and ``b`` each ``N_g*C``
samples (``C`` samples per chip). The receiver output lives on a
``6*N_g*C``-sample timeline indexed by delay plus ``N_g*C``; the noiseless
mainlobe peak sits at index ``3*N_g*C`` and is normalized to 1.
"""

from dataclasses import dataclass, field

import numpy as np

from .chips import SampledWaveform, mirror, synthesize
from .correlate import delay_correlation, to_db
from .golay import Correlation, as_code, generate_golay_pair

ZERO_TOL = 1e-9
REGION_LABELS = ("XCORR_L", "ZERO_L", "MAIN", "ZERO_R", "XCORR_R")


def modulate(code, chip):
    """Block ``n`` of the output is ``code[n] * chip``."""
    code = as_code(code)
    samples = chip.samples if isinstance(chip, SampledWaveform) else np.asarray(chip)
    period = chip.sample_period if isinstance(chip, SampledWaveform) else 1.0
    return SampledWaveform(np.kron(code, samples).astype(np.complex128), period)


@dataclass(frozen=True)
class AssembledCode:
    waveform: SampledWaveform
    a_wave: SampledWaveform
    b_wave: SampledWaveform
    n_g: int
    chip_len: int
    # chips and codes behind a_wave/b_wave, kept for the cascade receiver
    u: np.ndarray | None = field(default=None, repr=False)
    d: np.ndarray | None = field(default=None, repr=False)
    a_code: np.ndarray | None = field(default=None, repr=False)
    b_code: np.ndarray | None = field(default=None, repr=False)

    @property
    def samples(self):
        return self.waveform.samples

    def __len__(self):
        return len(self.waveform)


def assemble(a_wave, b_wave, n_g, chip_len):
    """``s = a | N_g*C zeros | b``, total ``3*N_g*C`` samples."""
    block = n_g * chip_len
    if len(a_wave) != block or len(b_wave) != block:
        raise ValueError(
            f"component lengths {len(a_wave)}, {len(b_wave)} do not equal N_g*C = {block}"
        )
    samples = np.concatenate(
        [a_wave.samples, np.zeros(block, dtype=np.complex128), b_wave.samples]
    )
    return AssembledCode(SampledWaveform(samples, a_wave.sample_period), a_wave, b_wave, n_g, chip_len)


def build_code(a, b, u, d):
    """Assemble the code for codes ``(a, b)`` on chips ``(u, d)``."""
    u_s = u.samples if isinstance(u, SampledWaveform) else np.asarray(u)
    d_s = d.samples if isinstance(d, SampledWaveform) else np.asarray(d)
    a_wave = modulate(a, u)
    b_wave = modulate(b, d)
    code = assemble(a_wave, b_wave, len(a), len(u_s))
    return AssembledCode(
        code.waveform, a_wave, b_wave, code.n_g, code.chip_len,
        u=u_s, d=d_s, a_code=as_code(a), b_code=as_code(b),
    )


def build_base_code(spec, n_g_exponent):
    """Golay pair of length ``2**n_g_exponent`` on ``spec``'s chip and its mirror."""
    a, b = generate_golay_pair(n_g_exponent)
    u = synthesize(spec)
    return build_code(a, b, u, mirror(u, spec.mirror_sign))


def _timeline(corr, n_g, chip_len, shift):
    """Place a delay-axis correlation on the ``6*N_g*C`` output timeline."""
    total = 6 * n_g * chip_len
    out = np.zeros(total, dtype=np.complex128)
    start = shift + n_g * chip_len - corr.zero_lag
    lo, hi = max(start, 0), min(start + len(corr), total)
    out[lo:hi] = corr.values[lo - start : hi - start]
    return out


@dataclass(frozen=True)
class ReceiverOutput:
    r_xa: Correlation
    r_xb: Correlation
    r: Correlation

    def __iter__(self):
        return iter((self.r_xa, self.r_xb, self.r))


def receiver(x, a_ref, b_ref, n_g, chip_len, method="auto"):
    """Matched filters for ``a`` and ``b``, delay the ``a`` path by ``2*N_g*C``, add.

    All three outputs are on the ``6*N_g*C`` timeline and divided by ``2*N_g*C``.
    """
    block = n_g * chip_len
    if len(a_ref) != block or len(b_ref) != block:
        raise ValueError("reference lengths must equal N_g*C")
    xs = x.samples if hasattr(x, "samples") else np.asarray(x)
    if len(xs) != 3 * block:
        raise ValueError(f"received signal has {len(xs)} samples, expected {3 * block}")
    scale = 2.0 * block
    r_xa = _timeline(delay_correlation(xs, _s(a_ref), method), n_g, chip_len, 2 * block) / scale
    r_xb = _timeline(delay_correlation(xs, _s(b_ref), method), n_g, chip_len, 0) / scale
    center = 3 * block
    return ReceiverOutput(
        Correlation(r_xa, center), Correlation(r_xb, center), Correlation(r_xa + r_xb, center)
    )


def _s(w):
    return w.samples if hasattr(w, "samples") else np.asarray(w)


def code_matched_filter(x, code, chip_len):
    """Digital-code MF: ``y[d] = sum_n code[n] x[d + n*C]``, delays ``-(N_g*C-1)..len(x)-1``."""
    code = as_code(code)
    xs = np.asarray(x)
    n_g = len(code)
    block = n_g * chip_len
    # pad so every delay in range reads zeros outside the signal
    padded = np.concatenate([np.zeros(block - 1), xs, np.zeros(block)]).astype(np.complex128)
    n_out = len(xs) + block - 1
    out = np.zeros(n_out, dtype=np.complex128)
    for n, c in enumerate(code):
        out += c * padded[n * chip_len : n * chip_len + n_out]
    return out


def cascade_receiver(x, code, method="auto"):
    """Receiver built as a code MF followed by a chip MF on each path.

    Equivalent to :func:`receiver` by associativity of convolution; kept as an
    independent second path.
    """
    xs = _s(x)
    n_g, chip_len = code.n_g, code.chip_len
    block = n_g * chip_len
    scale = 2.0 * block

    def path(digital, chip):
        y = code_matched_filter(xs, digital, chip_len)
        z = delay_correlation(y, chip, method)
        # y[0] is delay -(block-1), so shift zero lag accordingly
        zero = z.zero_lag + block - 1
        keep = z.values[zero - (block - 1) : zero + len(xs)]
        return Correlation(keep, block - 1)

    r_xa = _timeline(path(code.a_code, code.u), n_g, chip_len, 2 * block) / scale
    r_xb = _timeline(path(code.b_code, code.d), n_g, chip_len, 0) / scale
    center = 3 * block
    return ReceiverOutput(
        Correlation(r_xa, center), Correlation(r_xb, center), Correlation(r_xa + r_xb, center)
    )


def region_boundaries(n_g, chip_len):
    b = n_g * chip_len
    c = chip_len
    return (0, 2 * b, 3 * b - c, 3 * b + c, 4 * b, 6 * b)


def region_labels(n_g, chip_len):
    """Label of every timeline index, one of :data:`REGION_LABELS`."""
    edges = region_boundaries(n_g, chip_len)
    labels = np.empty(edges[-1], dtype=object)
    for name, lo, hi in zip(REGION_LABELS, edges[:-1], edges[1:]):
        labels[lo:hi] = name
    return labels


@dataclass(frozen=True)
class RegionReport:
    mainlobe_peak: float
    mainlobe_index: int
    zero_region_peak: float
    cross_region_peak: float
    cross_left_peak: float
    cross_right_peak: float
    region_boundaries: tuple

    @property
    def has_mainlobe(self):
        return self.mainlobe_peak > ZERO_TOL

    @property
    def intervals(self):
        e = self.region_boundaries
        return list(zip(e[:-1], e[1:]))

    def as_db(self):
        return {
            "mainlobe_peak_db": to_db(self.mainlobe_peak),
            "zero_region_peak_db": to_db(self.zero_region_peak),
            "cross_region_peak_db": to_db(self.cross_region_peak),
        }


def region_report(r, n_g, chip_len):
    """Split a normalized receiver output into the five regions and take peaks."""
    values = r.values if isinstance(r, Correlation) else np.asarray(r)
    edges = region_boundaries(n_g, chip_len)
    if len(values) != edges[-1]:
        raise ValueError(f"output has {len(values)} samples, expected {edges[-1]}")
    mag = np.abs(values)
    peaks = [float(mag[lo:hi].max()) if hi > lo else 0.0 for lo, hi in zip(edges[:-1], edges[1:])]
    return RegionReport(
        mainlobe_peak=peaks[2],
        mainlobe_index=int(np.argmax(mag)),
        zero_region_peak=max(peaks[1], peaks[3]),
        cross_region_peak=max(peaks[0], peaks[4]),
        cross_left_peak=peaks[0],
        cross_right_peak=peaks[4],
        region_boundaries=edges,
    )


def analyze(code, x=None, method="auto"):
    """Receiver output and region report for ``x`` (default: the clean code)."""
    x = code.waveform if x is None else x
    out = receiver(x, code.a_wave, code.b_wave, code.n_g, code.chip_len, method)
    return out, region_report(out.r, code.n_g, code.chip_len)


def two_band_sum(a_wave, b_wave, n_g, chip_len, attenuation=(1.0, 1.0)):
    """``R + R'`` for the codes ``(a, b)`` and ``(-a, b)`` on two bands.

    ``attenuation`` scales the received signal of each band. The sum is divided
    by 2 so its noiseless mainlobe is 1.
    """
    first = assemble(a_wave, b_wave, n_g, chip_len)
    neg_a = SampledWaveform(-a_wave.samples, a_wave.sample_period)
    second = assemble(neg_a, b_wave, n_g, chip_len)
    beta1, beta2 = attenuation
    r1 = receiver(beta1 * first.samples, a_wave, b_wave, n_g, chip_len).r
    r2 = receiver(beta2 * second.samples, neg_a, b_wave, n_g, chip_len).r
    return Correlation((r1.values + r2.values) / 2.0, r1.zero_lag)


def outside_mainlobe_peak(r, n_g, chip_len):
    edges = region_boundaries(n_g, chip_len)
    mag = np.abs(r.values)
    return float(max(mag[: edges[2]].max(), mag[edges[3] :].max()))
