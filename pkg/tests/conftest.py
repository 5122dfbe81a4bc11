from __future__ import annotations

import pytest

from scrollbench.geometry import TrialGeometry
from scrollbench.trace import ScrollEvent, TrialTrace


@pytest.fixture
def square_geometry():
    """Canonical layout: 60 px lines, 10 visible rows, H=2.0, target row 40."""
    return TrialGeometry.from_layout(
        line_height_px=60.0,
        row_count=104,
        frame_height_factor=2.0,
        target_row_index=40,
    )


def trace_of(*pairs: tuple[int, float], quiescence_ms: int = 66, start: int = 0) -> TrialTrace:
    return TrialTrace(
        events=tuple(ScrollEvent(t, float(s)) for t, s in pairs),
        start_click_t=start,
        quiescence_ms=quiescence_ms,
    )
