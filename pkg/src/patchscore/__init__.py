"""Patch extraction, scoring and quantile dataset selection for lesion images."""

from .aggregation import AggregateVerdict, PatchPredictions, aggregate
from .entropy import histogram, shannon_entropy
from .imaging import (
    PATCH_SIDES,
    PatchRecord,
    crop,
    load_gray,
    load_mask,
    load_rgb,
    tile_roi,
    to_grayscale,
)
from .ingestion import DatasetIndex, IndexRecord, fetch_remote, load_index, write_index
from .memd import (
    MemdInstrumentation,
    PatchMemdSummary,
    memd_exhaustive,
    memd_multichannel_naive,
    memd_sorted,
    per_patch_memd,
    pixel_multiset,
    summarize_patches,
)
from .selection import (
    ScoreTable,
    SelectionSpec,
    SplitAssignment,
    assign_splits,
    balance_classes,
    select_band,
)
from .version import VERSION as __version__

__all__ = [
    "AggregateVerdict",
    "DatasetIndex",
    "IndexRecord",
    "MemdInstrumentation",
    "PATCH_SIDES",
    "PatchMemdSummary",
    "PatchPredictions",
    "PatchRecord",
    "ScoreTable",
    "SelectionSpec",
    "SplitAssignment",
    "aggregate",
    "assign_splits",
    "balance_classes",
    "crop",
    "fetch_remote",
    "histogram",
    "load_gray",
    "load_index",
    "load_mask",
    "load_rgb",
    "memd_exhaustive",
    "memd_multichannel_naive",
    "memd_sorted",
    "per_patch_memd",
    "pixel_multiset",
    "select_band",
    "shannon_entropy",
    "summarize_patches",
    "tile_roi",
    "to_grayscale",
    "write_index",
]
