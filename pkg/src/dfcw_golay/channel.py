"""Noise, mainlobe-location RMSE under fading, and the ambiguity surface.

SNR follows the convention ``SNR = 20 log10(2 N_g / sigma^2)`` with ``2 N_g`` the
energy of a code built from unit-energy chips. Samples here have unit magnitude,
so a chip carries energy ``C`` and the per-sample noise variance used in the
experiments is ``sigma^2 * C``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .chips import ChipSpec, FadingProfile, Family, default_fading_boundary, fading_mask
from .code_builder import build_base_code, build_code, receiver
from .correlate import next_pow2
from .golay import Correlation, generate_golay_pair

NOISE_STREAM = 0
FADING_STREAM = 1


@dataclass(frozen=True)
class NoiseConfig:
    sigma_sq: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma_sq > 0:
            raise ValueError(f"noise power must be positive, got {self.sigma_sq}")


@dataclass(frozen=True)
class RmseConfig:
    snr_grid: tuple = tuple(range(-10, 55, 5))
    trials: int = 200
    fading_range: tuple = (0.6, 1.0)
    fading_enabled: bool = False
    seed: int = 0
    # "transmitted": noise set against the unfaded code energy 2*N_g;
    # "received": against the energy left after fading
    snr_reference: str = "transmitted"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        lo, hi = self.fading_range
        if not 0 < lo <= hi <= 1:
            raise ValueError(f"fading range must lie in (0, 1], got {self.fading_range}")
        if self.snr_reference not in ("received", "transmitted"):
            raise ValueError(f"unknown SNR reference {self.snr_reference!r}")


def snr_to_sigma(snr_db, n_g):
    """``sigma^2 = 2 N_g / 10**(snr_db / 20)``."""
    return 2.0 * n_g / 10 ** (snr_db / 20.0)


def trial_rng(seed, snr_index, trial_index, stream):
    """Independent generator for one (SNR point, trial, stream)."""
    return np.random.default_rng([seed, snr_index, trial_index, stream])


def complex_noise(rng, n, sigma_sq):
    """Circular complex Gaussian, total variance ``sigma_sq`` per sample."""
    scale = math.sqrt(sigma_sq / 2.0)
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def add_noise(x, cfg):
    samples = x.samples if hasattr(x, "samples") else np.asarray(x)
    rng = np.random.default_rng(cfg.seed)
    return samples + complex_noise(rng, len(samples), cfg.sigma_sq)


def locate_mainlobe(r):
    """Index of the largest magnitude; ties go to the lowest index."""
    values = r.values if isinstance(r, Correlation) else np.asarray(r)
    return int(np.argmax(np.abs(values)))


def _batch_delay_corr_peak(x, refs, chunk=32):
    """argmax delay of ``|sum_m x[i, m+d] conj(ref[i, m])|`` per row.

    ``refs`` is one reference or one per row. Delays run ``-(Q-1) .. P-1``;
    returned as signed delays.
    """
    p, q = x.shape[1], refs.shape[-1]
    nfft = next_pow2(p + q - 1)
    shared = refs.ndim == 1
    ref_spec = np.conj(np.fft.fft(refs, nfft, axis=-1)) if shared else None
    out = []
    for start in range(0, len(x), chunk):
        block = slice(start, start + chunk)
        spec = ref_spec if shared else np.conj(np.fft.fft(refs[block], nfft, axis=-1))
        circ = np.fft.ifft(np.fft.fft(x[block], nfft, axis=-1) * spec, axis=-1)
        # reorder to delays -(q-1) .. p-1 so argmax ties resolve to the earliest delay
        ordered = np.concatenate([circ[:, nfft - (q - 1) :], circ[:, :p]], axis=-1)
        out.append(np.argmax(np.abs(ordered), axis=-1) - (q - 1))
    return np.concatenate(out)


def _rmse(errors, chip_len):
    errors = np.asarray(errors, dtype=float)
    return float(np.sqrt(np.mean(errors**2)) / chip_len)


def _draw_alphas(cfg, snr_index, trial):
    rng = trial_rng(cfg.seed, snr_index, trial, FADING_STREAM)
    lo, hi = cfg.fading_range
    return rng.uniform(lo, hi, 2)


def rmse_experiment(family, n_g, n, ns, cfg, slope=None, boundary=None, reference="matched"):
    """Mainlobe-location RMSE (in chip durations) per SNR point.

    Each trial draws fresh noise and, with fading on, fresh ``alpha_1, alpha_2``
    applied with the forward/reversed sub-pulse masks. ``reference="matched"``
    correlates against the faded code, ``"clean"`` against the unfaded one.
    Returns ``[(snr_db, rmse), ...]``.
    """
    if reference not in ("matched", "clean"):
        raise ValueError(f"unknown reference {reference!r}")
    family = Family.parse(family)
    spec = ChipSpec(family, n, slope, 1, ns)
    exponent = int(math.log2(n_g))
    clean = build_base_code(spec, exponent)
    chip_len = clean.chip_len
    boundary = default_fading_boundary(family, n) if boundary is None else boundary
    a, b = generate_golay_pair(exponent)
    length = len(clean)
    curve = []
    for si, snr in enumerate(cfg.snr_grid):
        var = snr_to_sigma(snr, n_g) * chip_len
        rows, refs = [], []
        for trial in range(cfg.trials):
            if cfg.fading_enabled:
                a1, a2 = _draw_alphas(cfg, si, trial)
                mask = fading_mask(n, ns, FadingProfile(a1, a2, boundary))
                u = clean.u * mask
                code = build_code(a, b, u, np.conj(u[::-1]))
                energy = float(np.mean(mask**2))
            else:
                code, energy = clean, 1.0
            if cfg.snr_reference == "transmitted":
                energy = 1.0
            noise = complex_noise(trial_rng(cfg.seed, si, trial, NOISE_STREAM), length, var * energy)
            rows.append(code.samples + noise)
            if reference == "matched":
                refs.append(code.samples)
        ref_arr = np.array(refs) if refs else clean.samples
        errors = _batch_delay_corr_peak(np.array(rows), ref_arr)
        curve.append((float(snr), _rmse(errors, chip_len)))
    return curve


def classical_pair_rmse(n_g, cfg, chip_len=8):
    """Two-band Golay pair on a sinusoid chip, bands faded independently.

    Each band gets its own noise and matched filter; the outputs are summed.
    """
    a, b = generate_golay_pair(int(math.log2(n_g)))
    chip = np.ones(chip_len, dtype=np.complex128)
    a_wave = np.kron(a, chip)
    b_wave = np.kron(b, chip)
    length = len(a_wave)
    nfft = next_pow2(2 * length - 1)
    fa = np.conj(np.fft.fft(a_wave, nfft))
    fb = np.conj(np.fft.fft(b_wave, nfft))
    curve = []
    for si, snr in enumerate(cfg.snr_grid):
        var = snr_to_sigma(snr, n_g) * chip_len
        xa, xb = [], []
        for trial in range(cfg.trials):
            if cfg.fading_enabled:
                a1, a2 = _draw_alphas(cfg, si, trial)
            else:
                a1 = a2 = 1.0
            energy = (a1**2 + a2**2) / 2 if cfg.snr_reference == "received" else 1.0
            rng = trial_rng(cfg.seed, si, trial, NOISE_STREAM)
            xa.append(a1 * a_wave + complex_noise(rng, length, var * energy))
            xb.append(a2 * b_wave + complex_noise(rng, length, var * energy))
        circ = np.fft.ifft(
            np.fft.fft(np.array(xa), nfft, axis=-1) * fa + np.fft.fft(np.array(xb), nfft, axis=-1) * fb,
            axis=-1,
        )
        ordered = np.concatenate([circ[:, nfft - (length - 1) :], circ[:, :length]], axis=-1)
        errors = np.argmax(np.abs(ordered), axis=-1) - (length - 1)
        curve.append((float(snr), _rmse(errors, chip_len)))
    return curve


def rmse_curves(runner, cfg, *args, **kwargs):
    """Fading-off and fading-on curves on common random numbers.

    Returns ``[(snr_db, rmse_off, rmse_on), ...]``.
    """
    off = runner(*args, cfg=_with(cfg, fading_enabled=False), **kwargs)
    on = runner(*args, cfg=_with(cfg, fading_enabled=True), **kwargs)
    return [(s, r0, r1) for (s, r0), (_, r1) in zip(off, on)]


def _with(cfg, **changes):
    values = {f: getattr(cfg, f) for f in cfg.__dataclass_fields__}
    values.update(changes)
    return RmseConfig(**values)


DEFAULT_DOPPLER_GRID = tuple(np.round(np.linspace(-0.1, 0.1, 41), 12))


@dataclass(frozen=True)
class AmbiguitySurface:
    doppler_grid: np.ndarray
    magnitudes: np.ndarray
    n_g: int = 0
    chip_len: int = 0

    def row(self, fd_t):
        idx = int(np.argmin(np.abs(np.asarray(self.doppler_grid) - fd_t)))
        return self.magnitudes[idx]


def doppler_shift(samples, fd_t, chip_len):
    """Multiply by ``exp(i 2 pi fd_T m / C)`` over absolute sample index ``m``."""
    m = np.arange(len(samples))
    return samples * np.exp(2j * np.pi * fd_t * m / chip_len)


def ambiguity(code, doppler_grid=DEFAULT_DOPPLER_GRID):
    """Normalized receiver-output magnitude for every normalized Doppler ``fd*T``."""
    grid = np.asarray(doppler_grid, dtype=float)
    rows = []
    for fd_t in grid:
        x = code.samples if fd_t == 0 else doppler_shift(code.samples, fd_t, code.chip_len)
        out = receiver(x, code.a_wave, code.b_wave, code.n_g, code.chip_len)
        rows.append(np.abs(out.r.values))
    return AmbiguitySurface(grid, np.array(rows), code.n_g, code.chip_len)
