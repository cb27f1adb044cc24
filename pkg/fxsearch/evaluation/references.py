"""
Published reference figures, recorded next to desk-scale results.

They were obtained with trained neural predictors on a large guitar corpus
and serve as orientation only.
"""

REFERENCE_POINTS: dict[str, dict[str, dict[str, float]]] = {
    "chain_types": {
        "direct+search": {"macro_f1": 0.958, "mean_ld": 0.313, "ema": 0.774},
        "type-iter": {"macro_f1": 0.949, "mean_ld": 0.369, "ema": 0.723},
        "config-iter": {"macro_f1": 0.942, "mean_ld": 0.408, "ema": 0.702},
    },
    "reconstruction": {
        "config-iter (no search)": {"si_sdr": 18.18, "mr_stft": 0.465},
        "direct+search": {"si_sdr": 23.07, "mr_stft": 0.340},
        "type-iter+search": {"si_sdr": 22.68, "mr_stft": 0.361},
        "config-iter+search": {"si_sdr": 22.64, "mr_stft": 0.366},
    },
    "single_type": {
        "type-iter": {"macro_f1": 0.919},
        "config-iter": {"macro_f1": 0.917},
    },
    "last_params": {
        "config-iter": {"param_mae": 0.0885},
    },
    "bypass_removal": {
        "type-iter": {"si_sdr": 26.32, "mr_stft": 0.690},
        "config-iter": {"si_sdr": 26.30, "mr_stft": 0.691},
    },
    "dry_removal": {
        "direct": {"si_sdr": 13.96, "mr_stft": 0.813},
        "type-iter": {"si_sdr": 14.95, "mr_stft": 0.898},
        "config-iter": {"si_sdr": 14.88, "mr_stft": 0.902},
    },
}
