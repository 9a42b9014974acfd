"""Zero-sidelobe-region codes from Golay complementary pairs on discrete-frequency chips."""

from .chips import (
    ChipSpec,
    FadingProfile,
    Family,
    SampledWaveform,
    apply_fading,
    hop_mirror_check,
    hop_sequence,
    mirror,
    slope_values,
    synthesize,
)
from .code_builder import (
    AssembledCode,
    RegionReport,
    assemble,
    build_base_code,
    build_code,
    cascade_receiver,
    modulate,
    receiver,
    region_report,
    two_band_sum,
)
from .code_sets import (
    CodeSet,
    CodeSetMetrics,
    best_candidate_set,
    build_set,
    combined_set,
    mate_set,
    pair_mate_xcorr,
    set_metrics,
)
from .correlate import chip_ccp, to_db, xcorr_full
from .golay import (
    code_acf,
    code_xcorr,
    generate_golay_pair,
    mate_pair,
    verify_complementary,
)

__version__ = "0.1.0"
