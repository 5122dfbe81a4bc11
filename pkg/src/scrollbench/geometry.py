"""Trial layout and the acceptance band for the target row.

Coordinates are CSS pixels. The scroll offset ``s`` is the distance the
document has moved up past the viewport top ("scrollTop" semantics), so the
target row sits at viewport coordinate ``target_top_px - s``. The grey frame
is fixed in the viewport; a trial can only complete while the target row is
entirely inside it, which happens exactly for ``s`` in ``[s_min, s_max]``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GeometryError

# Frame is vertically centered; browser layout may round by a pixel.
CENTERING_TOLERANCE_PX = 1.0 + 1e-6


@dataclass(frozen=True)
class TrialGeometry:
    """Document/frame/target layout for one trial.

    ``frame_top_px``/``frame_bottom_px`` are viewport coordinates;
    ``target_row_index`` is 1-based, so the target's document-coordinate top
    edge is ``(target_row_index - 1) * line_height_px``.
    """

    line_height_px: float
    row_count: int
    viewport_height_px: float
    frame_top_px: float
    frame_bottom_px: float
    target_row_index: int

    def __post_init__(self) -> None:
        if self.line_height_px <= 0:
            raise GeometryError("line height must be positive")
        if self.viewport_height_px <= 0:
            raise GeometryError("viewport height must be positive")
        if self.row_count < 1:
            raise GeometryError("document needs at least one row")
        if not 1 <= self.target_row_index <= self.row_count:
            raise GeometryError(
                f"target row {self.target_row_index} outside document rows 1..{self.row_count}"
            )
        if self.frame_bottom_px <= self.frame_top_px:
            raise GeometryError("frame bottom must lie below frame top")
        centering = abs(self.frame_top_px + self.frame_bottom_px - self.viewport_height_px)
        if centering > CENTERING_TOLERANCE_PX:
            raise GeometryError(
                f"frame not vertically centered (off by {centering:.2f} px, tolerance 1 px)"
            )
        if self.frame_height_px < self.line_height_px - CENTERING_TOLERANCE_PX:
            raise GeometryError("frame shorter than the target row; band would be empty")

    @property
    def frame_height_px(self) -> float:
        return self.frame_bottom_px - self.frame_top_px

    @property
    def frame_height_factor(self) -> float:
        return self.frame_height_px / self.line_height_px

    @property
    def target_top_px(self) -> float:
        return (self.target_row_index - 1) * self.line_height_px

    @property
    def target_height_px(self) -> float:
        return self.line_height_px

    @property
    def document_height_px(self) -> float:
        return self.row_count * self.line_height_px

    @property
    def s_doc_max(self) -> float:
        """Largest reachable scroll offset."""
        return max(0.0, self.document_height_px - self.viewport_height_px)

    @classmethod
    def from_layout(
        cls,
        line_height_px: float,
        row_count: int,
        frame_height_factor: float,
        target_row_index: int,
        visible_rows: int = 10,
    ) -> "TrialGeometry":
        """Build the canonical centered layout: a square area of ``visible_rows`` rows."""
        viewport = line_height_px * visible_rows
        frame_h = frame_height_factor * line_height_px
        top = (viewport - frame_h) / 2.0
        return cls(
            line_height_px=line_height_px,
            row_count=row_count,
            viewport_height_px=viewport,
            frame_top_px=top,
            frame_bottom_px=top + frame_h,
            target_row_index=target_row_index,
        )


def compute_target_band(g: TrialGeometry) -> tuple[float, float]:
    """Scroll-offset interval for which the target row is entirely inside the frame.

    Returns ``(s_min, s_max)`` with
    ``s_min = target_top + target_height - frame_bottom`` and
    ``s_max = target_top - frame_top``; the band width is
    ``(frame_height_factor - 1) * line_height``, degenerating to a single
    admissible offset when the frame exactly fits one row.

    Raises GeometryError when the target cannot be brought into the frame:
    already above it at trial start (``s_max < 0``) or beyond the maximum
    scroll offset (``s_min > s_doc_max``).
    """
    s_min = g.target_top_px + g.target_height_px - g.frame_bottom_px
    s_max = g.target_top_px - g.frame_top_px
    if s_max < s_min:
        raise GeometryError("empty acceptance band: frame shorter than target row")
    if s_max < 0:
        raise GeometryError(
            f"unreachable target: row {g.target_row_index} is above the frame at trial start"
        )
    if s_min > g.s_doc_max:
        raise GeometryError(
            f"unreachable target: band starts at {s_min:.1f} px but the document "
            f"only scrolls to {g.s_doc_max:.1f} px"
        )
    return s_min, s_max


def band_contains(g: TrialGeometry, s: float) -> bool:
    """Direct geometric containment check, independent of the band formula.

    True iff the target row rendered at scroll offset ``s`` lies entirely
    within the frame. Used to cross-check ``compute_target_band``.
    """
    top_in_viewport = g.target_top_px - s
    bottom_in_viewport = top_in_viewport + g.target_height_px
    return g.frame_top_px <= top_in_viewport and bottom_in_viewport <= g.frame_bottom_px
