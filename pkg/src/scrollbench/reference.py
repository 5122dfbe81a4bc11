"""Reference performance profiles for the eleven stock scrolling techniques.

Published movement-time model coefficients and mean speed/accuracy figures
for the stock technique set, bundled so simulations can be calibrated against
realistic behavior and so analysis output can be sanity-checked. Times are
seconds; distances are target row indices (lines); overshoot is CSS pixels.
"""

from __future__ import annotations

from dataclasses import dataclass

# T = a + b * D, fitted with the target position unknown.
LINEAR_UNKNOWN: dict[str, tuple[float, float, float]] = {
    # technique: (a, b, r2)
    "flick-phone": (1.109, 0.035, 0.9672),
    "touchpad-two-finger": (1.376, 0.040, 0.8599),
    "flick-tablet": (1.256, 0.044, 0.9416),
    "wheel-notched": (1.631, 0.037, 0.9643),
    "wheel-smooth": (1.333, 0.045, 0.9413),
    "roller-mouse": (2.252, 0.049, 0.8263),
    "trackball-ring": (2.089, 0.062, 0.9399),
    "scrollbar-thumb": (2.466, 0.054, 0.9357),
    "in-keyboard-joystick": (2.631, 0.059, 0.9271),
    "keyboard-arrows": (2.306, 0.069, 0.9726),
    "scrollbar-arrow-buttons": (4.033, 0.054, 0.8642),
}

# T = a + b * D, fitted with the target position known.
LINEAR_KNOWN: dict[str, tuple[float, float, float]] = {
    "flick-phone": (2.179, 0.021, 0.7800),
    "touchpad-two-finger": (2.431, 0.016, 0.8242),
    "flick-tablet": (2.287, 0.021, 0.7998),
    "wheel-notched": (3.234, 0.018, 0.7082),
    "wheel-smooth": (2.594, 0.025, 0.8867),
    "roller-mouse": (3.349, 0.025, 0.7504),
    "trackball-ring": (4.060, 0.023, 0.6110),
    "scrollbar-thumb": (4.277, 0.013, 0.6647),
    "in-keyboard-joystick": (3.646, 0.029, 0.8451),
    "keyboard-arrows": (4.405, 0.042, 0.7829),
    "scrollbar-arrow-buttons": (4.764, 0.048, 0.6653),
}

# T = a + b * log2(D), fitted with the target position known.
LOG_KNOWN: dict[str, tuple[float, float, float]] = {
    "flick-phone": (-1.420, 0.949, 0.8625),
    "touchpad-two-finger": (0.057, 0.661, 0.8228),
    "flick-tablet": (-1.318, 0.949, 0.9070),
    "wheel-notched": (0.351, 0.783, 0.7215),
    "wheel-smooth": (-0.959, 1.008, 0.7922),
    "roller-mouse": (-1.148, 1.178, 0.8206),
    "trackball-ring": (0.002, 1.070, 0.6662),
    "scrollbar-thumb": (2.191, 0.559, 0.7986),
    "in-keyboard-joystick": (-1.087, 1.278, 0.9110),
    "keyboard-arrows": (-2.416, 1.847, 0.8360),
    "scrollbar-arrow-buttons": (-4.206, 2.317, 0.7483),
}

# Cross-technique aggregate models over all distances and frame heights.
AGGREGATE_LINEAR_UNKNOWN: tuple[float, float, float] = (2.044, 0.05, 0.993)
AGGREGATE_LOG_KNOWN: tuple[float, float, float] = (-0.302, 1.043, 0.932)


@dataclass(frozen=True)
class MeanProfile:
    time_s: float
    switchbacks: float
    max_overshoot_px: float


# Mean movement time and accuracy per technique and condition.
MEANS: dict[str, dict[str, MeanProfile]] = {
    "flick-phone": {
        "unknown": MeanProfile(2.663, 0.856, 326.590),
        "known": MeanProfile(3.384, 0.841, 367.251),
    },
    "touchpad-two-finger": {
        "unknown": MeanProfile(3.131, 0.964, 270.769),
        "known": MeanProfile(3.362, 1.174, 295.374),
    },
    "flick-tablet": {
        "unknown": MeanProfile(3.207, 0.969, 323.713),
        "known": MeanProfile(3.412, 0.953, 290.821),
    },
    "wheel-notched": {
        "unknown": MeanProfile(3.261, 1.364, 180.995),
        "known": MeanProfile(4.330, 1.333, 122.856),
    },
    "wheel-smooth": {
        "unknown": MeanProfile(3.347, 1.897, 163.379),
        "known": MeanProfile(4.258, 1.815, 157.395),
    },
    "roller-mouse": {
        "unknown": MeanProfile(4.428, 1.379, 183.374),
        "known": MeanProfile(4.907, 1.246, 133.477),
    },
    "trackball-ring": {
        "unknown": MeanProfile(4.825, 1.554, 96.749),
        "known": MeanProfile(5.432, 2.062, 157.226),
    },
    "scrollbar-thumb": {
        "unknown": MeanProfile(4.871, 1.278, 125.379),
        "known": MeanProfile(4.755, 1.672, 93.333),
    },
    "in-keyboard-joystick": {
        "unknown": MeanProfile(5.260, 0.974, 179.589),
        "known": MeanProfile(5.292, 0.887, 106.508),
    },
    "keyboard-arrows": {
        "unknown": MeanProfile(5.375, 0.667, 112.071),
        "known": MeanProfile(6.786, 0.882, 60.077),
    },
    "scrollbar-arrow-buttons": {
        "unknown": MeanProfile(6.443, 0.723, 56.713),
        "known": MeanProfile(7.791, 0.748, 81.749),
    },
}

# Speed-tier partition of the stock techniques (fast to slow).
SPEED_TIERS: tuple[frozenset[str], ...] = (
    frozenset(
        {"flick-phone", "touchpad-two-finger", "flick-tablet", "wheel-notched", "wheel-smooth"}
    ),
    frozenset({"roller-mouse", "trackball-ring", "scrollbar-thumb", "in-keyboard-joystick"}),
    frozenset({"keyboard-arrows", "scrollbar-arrow-buttons"}),
)


def pooled_mean_time_s(technique: str) -> float:
    """Mean movement time over both conditions."""
    profile = MEANS[technique]
    return (profile["unknown"].time_s + profile["known"].time_s) / 2.0
