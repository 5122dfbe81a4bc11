"""Study configuration: one declarative, human-editable file of constants."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .design import DEFAULT_TECHNIQUE_IDS, DISTANCES, FRAME_FACTORS, VISIBLE_ROWS
from .errors import DesignError
from .metrics import DEFAULT_EPSILON_PX
from .trace import DEFAULT_QUIESCENCE_MS

# 99 target rows plus trailing rows so the last target can reach a centered frame.
DEFAULT_DOCUMENT_ROWS = 104

# JSON key <-> attribute; keys are what config files and the HTTP API use.
_KEYS = {
    "techniques": "techniques",
    "distances": "distances",
    "frameFactors": "frame_factors",
    "quiescenceMs": "quiescence_ms",
    "epsilonPx": "epsilon_px",
    "perParticipantTechniques": "per_participant_techniques",
    "participants": "participants",
    "requireClick": "require_click",
    "seed": "seed",
    "lineHeightPx": "line_height_px",
    "visibleRows": "visible_rows",
    "documentRows": "document_rows",
}


@dataclass(frozen=True)
class StudyConfig:
    techniques: tuple[str, ...] = DEFAULT_TECHNIQUE_IDS
    distances: tuple[int, ...] = DISTANCES
    frame_factors: tuple[float, ...] = FRAME_FACTORS
    quiescence_ms: int = DEFAULT_QUIESCENCE_MS
    epsilon_px: float = DEFAULT_EPSILON_PX
    per_participant_techniques: int = 3
    participants: int = 11
    require_click: bool = False
    seed: int = 1
    line_height_px: float = 60.0
    visible_rows: int = VISIBLE_ROWS
    document_rows: int = DEFAULT_DOCUMENT_ROWS

    def __post_init__(self) -> None:
        if self.quiescence_ms <= 0:
            raise DesignError("quiescenceMs must be positive")
        if self.epsilon_px < 0:
            raise DesignError("epsilonPx must be non-negative")
        if self.line_height_px <= 0:
            raise DesignError("lineHeightPx must be positive")
        if self.document_rows < max(self.distances, default=1):
            raise DesignError("documentRows must cover the largest target row")
        if len(set(self.techniques)) != len(self.techniques):
            raise DesignError("duplicate technique ids")

    @property
    def viewport_height_px(self) -> float:
        return self.line_height_px * self.visible_rows

    def to_dict(self) -> dict:
        out = {}
        for key, attr in _KEYS.items():
            value = getattr(self, attr)
            out[key] = list(value) if isinstance(value, tuple) else value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "StudyConfig":
        kwargs = {}
        unknown = set(data) - set(_KEYS)
        if unknown:
            raise DesignError(f"unknown config keys: {sorted(unknown)}")
        for key, attr in _KEYS.items():
            if key in data:
                value = data[key]
                kwargs[attr] = tuple(value) if isinstance(value, list) else value
        return cls(**kwargs)


def load_config(path: str | Path) -> StudyConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return StudyConfig.from_dict(json.load(fh))


def save_config(config: StudyConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config.to_dict(), fh, indent=2)
        fh.write("\n")


def with_overrides(config: StudyConfig, **kwargs) -> StudyConfig:
    return replace(config, **kwargs)
