"""Multiresolution frame of compactons and kink-antikink pairs, plus Morlet atoms."""

from compactlab.frame.elements import (
    FrameElement,
    KakPiece,
    cell_size,
    children,
    dilated_kak,
    elements_in_window,
    eta_eval,
    fine_index,
    kak_profile,
    partition_defect,
    ramp_width,
    refine,
    two_scale_check,
)
from compactlab.frame.expansion import (
    FrameBounds,
    FrameCoefficient,
    FrameExpansion,
    ProductTerm,
    SquareExpansion,
    expand,
    frame_bounds,
    reconstruction_csv,
    square_expand,
)
from compactlab.frame.morlet import (
    MorletAtom,
    MorletParams,
    derivative_estimate,
    dominant_scale,
    morlet_eval,
    morlet_reconstruct,
    morlet_transform,
)

__all__ = [
    "FrameBounds",
    "FrameCoefficient",
    "FrameElement",
    "FrameExpansion",
    "KakPiece",
    "MorletAtom",
    "MorletParams",
    "ProductTerm",
    "SquareExpansion",
    "cell_size",
    "children",
    "derivative_estimate",
    "dilated_kak",
    "dominant_scale",
    "elements_in_window",
    "eta_eval",
    "expand",
    "fine_index",
    "frame_bounds",
    "kak_profile",
    "morlet_eval",
    "morlet_reconstruct",
    "morlet_transform",
    "partition_defect",
    "ramp_width",
    "reconstruction_csv",
    "refine",
    "square_expand",
    "two_scale_check",
]
