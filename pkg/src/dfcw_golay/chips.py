"""Discrete-frequency chips (DF-LFM and the two DF-PLFM variants).

A chip is ``N`` contiguous sub-pulses of duration ``dT``; sub-pulse ``n`` sits at
the integer hop ``f[n]`` times ``dW = 1/dT``. Samples are unit magnitude with
absolute-time phase, so phase is continuous across sub-pulse boundaries.
"""

import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_PLFM_SLOPE = 0.24


class Family(enum.Enum):
    DF_LFM = "df-lfm"
    DF_PLFM_UP_UP = "df-plfm-up-up"
    DF_PLFM_UP_DOWN = "df-plfm-up-down"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for fam in cls:
            if fam.value == key:
                return fam
        raise ValueError(f"unknown chip family {value!r}")

    @property
    def is_plfm(self):
        return self is not Family.DF_LFM


class AliasingWarning(UserWarning):
    """Hop frequencies reach the sampling rate and fold back."""


@dataclass(frozen=True)
class ChipSpec:
    """Parameters of one DFCW chip.

    ``slope=None`` selects the canonical base chip: ``N/(2(N-1))`` for DF-LFM
    (so that ``f[n] = n``) and :data:`DEFAULT_PLFM_SLOPE` for the PLFM families.
    """

    family: Family = Family.DF_LFM
    num_subpulses: int = 16
    slope: float | None = None
    mirror_sign: int = 1
    samples_per_subpulse: int = 8
    subpulse_duration: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        n = self.num_subpulses
        if n < 1:
            raise ValueError(f"num_subpulses must be positive, got {n}")
        if self.family.is_plfm and n % 2:
            raise ValueError(f"PLFM chips need an even number of sub-pulses, got {n}")
        if self.samples_per_subpulse < 1:
            raise ValueError("samples_per_subpulse must be positive")
        if self.mirror_sign not in (1, -1):
            raise ValueError("mirror_sign must be +1 or -1")
        if self.subpulse_duration <= 0:
            raise ValueError("subpulse_duration must be positive")
        if self.slope is not None and not 0 < self.slope <= 1:
            raise ValueError(f"slope must lie in (0, 1], got {self.slope}")

    @property
    def gamma(self):
        if self.slope is not None:
            return float(self.slope)
        if self.family is Family.DF_LFM:
            n = self.num_subpulses
            return n / (2 * (n - 1)) if n > 1 else 1.0
        return DEFAULT_PLFM_SLOPE

    @property
    def frequency_step(self):
        """Hop spacing dW; always ``1/dT``."""
        return 1.0 / self.subpulse_duration

    @property
    def num_samples(self):
        return self.num_subpulses * self.samples_per_subpulse

    @property
    def sample_period(self):
        return self.subpulse_duration / self.samples_per_subpulse


@dataclass(frozen=True)
class SampledWaveform:
    samples: np.ndarray
    sample_period: float = 1.0

    def __len__(self):
        return len(self.samples)

    @property
    def energy(self):
        return float(np.sum(np.abs(self.samples) ** 2))


@dataclass(frozen=True)
class FadingProfile:
    """Two-level attenuation: sub-pulses below ``boundary`` get ``alpha_low``."""

    alpha_low: float
    alpha_high: float
    boundary: int

    def __post_init__(self):
        for name in ("alpha_low", "alpha_high"):
            alpha = getattr(self, name)
            if not 0 < alpha <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {alpha}")
        if self.boundary <= 0:
            raise ValueError(f"fading boundary must be positive, got {self.boundary}")

    @classmethod
    def parse(cls, text):
        """Parse ``"a1,a2,n1"``."""
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 3:
            raise ValueError(f"fading profile must be 'a1,a2,n1', got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))


def round_half_away(x):
    """Round to nearest integer, ties away from zero."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def _up_segment(gamma, n_sub, n):
    return round_half_away(2 * gamma * (n_sub - 1) * n / n_sub)


def _second_segment(family, gamma, n_sub, n):
    if family is Family.DF_PLFM_UP_UP:
        return round_half_away((n_sub - 1) - 2 * (1 - gamma) * (n_sub - 1 - n))
    return round_half_away((n_sub - 1) - 2 * (1 - gamma) * (n_sub - 1) * (n - n_sub // 2) / n_sub)


def hop_sequence(spec):
    """Integer hop indices ``f[0..N-1]`` for ``spec``."""
    n_sub, gamma, family = spec.num_subpulses, spec.gamma, spec.family
    half = n_sub // 2
    hops = []
    for n in range(n_sub):
        if family is Family.DF_LFM or n < half:
            hops.append(_up_segment(gamma, n_sub, n))
        else:
            hops.append(_second_segment(family, gamma, n_sub, n))
    return np.array(hops, dtype=np.int64)


def formula_mirror_hops(spec):
    """Mirror-chip hops assembled segment by segment.

    Each half of the mirror takes the opposite half of the forward chip with
    its index read backwards, ``n -> N-1-n``.
    """
    n_sub, gamma, family = spec.num_subpulses, spec.gamma, spec.family
    half = n_sub // 2
    hops = []
    for n in range(n_sub):
        src = n_sub - 1 - n
        if family is Family.DF_LFM or src < half:
            hops.append(_up_segment(gamma, n_sub, src))
        else:
            hops.append(_second_segment(family, gamma, n_sub, src))
    return np.array(hops, dtype=np.int64)


def synthesize_hops(hops, samples_per_subpulse, sample_period=1.0):
    hops = np.asarray(hops, dtype=np.int64)
    m = np.arange(len(hops) * samples_per_subpulse)
    # integer product before division keeps the phase argument exact
    phase = (hops[m // samples_per_subpulse] * m) % samples_per_subpulse
    return SampledWaveform(np.exp(2j * np.pi * phase / samples_per_subpulse), sample_period)


def synthesize(spec):
    """Unit-magnitude samples ``exp(i 2 pi f[m // Ns] m / Ns)`` of the forward chip."""
    hops = hop_sequence(spec)
    if hops.max() >= spec.samples_per_subpulse:
        warnings.warn(
            f"hop {hops.max()} >= samples_per_subpulse {spec.samples_per_subpulse}; "
            "chip frequencies alias",
            AliasingWarning,
            stacklevel=2,
        )
    return synthesize_hops(hops, spec.samples_per_subpulse, spec.sample_period)


def mirror(u, sign=1):
    """Conjugate time reversal ``d[m] = sign * conj(u[M-m])``."""
    if sign not in (1, -1):
        raise ValueError("mirror sign must be +1 or -1")
    if isinstance(u, SampledWaveform):
        return SampledWaveform(sign * np.conj(u.samples[::-1]), u.sample_period)
    return sign * np.conj(np.asarray(u)[::-1])


class MirrorCheck(NamedTuple):
    hops_match: bool
    max_deviation: float
    aligned_deviation: float

    def __bool__(self):
        return self.hops_match


def hop_mirror_check(spec):
    """Cross-check the segment-wise mirror against the canonical mirror.

    ``max_deviation`` compares the formula-synthesized mirror with
    ``mirror(synthesize(spec))`` sample by sample. The two differ by a one-sample
    shift; ``aligned_deviation`` is the deviation after that shift.
    """
    forward = hop_sequence(spec)
    formula = formula_mirror_hops(spec)
    matches = bool(np.array_equal(formula, forward[::-1]))
    canonical = mirror(synthesize_hops(forward, spec.samples_per_subpulse)).samples
    direct = synthesize_hops(formula, spec.samples_per_subpulse).samples
    raw = float(np.max(np.abs(direct - canonical)))
    aligned = float(np.max(np.abs(direct[1:] - canonical[:-1]))) if len(direct) > 1 else 0.0
    return MirrorCheck(matches, raw, aligned)


def slope_values(family, count, k):
    """Slopes ``gamma_1..gamma_L`` for a set of ``count`` chips.

    DF-LFM spans ``[k, 1-2k]``; the PLFM families span ``[k, 1-k]``.
    """
    family = Family.parse(family)
    if not 0 < k <= 0.5:
        raise ValueError(f"k must lie in (0, 0.5], got {k}")
    if count < 1:
        raise ValueError(f"number of slopes must be positive, got {count}")
    if count == 1:
        return [float(k)]
    span = 1 - 3 * k if family is Family.DF_LFM else 1 - 2 * k
    if span <= 0:
        warnings.warn(f"k={k} gives a degenerate slope family (span {span:g})", stacklevel=2)
    return [k + (l - 1) * span / (count - 1) for l in range(1, count + 1)]


def fading_mask(num_subpulses, samples_per_subpulse, profile, is_mirror=False):
    if profile.boundary > num_subpulses:
        raise ValueError(
            f"fading boundary {profile.boundary} exceeds {num_subpulses} sub-pulses"
        )
    levels = np.where(
        np.arange(num_subpulses) < profile.boundary, profile.alpha_low, profile.alpha_high
    )
    if is_mirror:
        levels = levels[::-1]
    return np.repeat(levels, samples_per_subpulse)


def apply_fading(spec, profile, is_mirror=False):
    """Faded forward chip, or faded mirror chip when ``is_mirror``.

    The mirror's mask is the forward mask reversed, so the faded mirror is exactly
    ``mirror(faded forward)`` and the two keep identical autocorrelations.
    """
    u = synthesize(spec)
    mask = fading_mask(spec.num_subpulses, spec.samples_per_subpulse, profile)
    faded = SampledWaveform(u.samples * mask, u.sample_period)
    if is_mirror:
        return mirror(faded, spec.mirror_sign)
    return faded


def default_fading_boundary(family, num_subpulses):
    """Low/high split: ``N/2`` for PLFM, ``3N/4`` for DF-LFM."""
    family = Family.parse(family)
    if family.is_plfm:
        return num_subpulses // 2
    return max(1, (3 * num_subpulses) // 4)
