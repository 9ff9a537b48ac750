"""Python bindings for the layerstack corpus-analysis pipeline."""

import json
from os import PathLike

from ._core import (
    LayerstackError,
    aggregate,
    belief,
    bitstream_entropy,
    combine,
    correlation_p_value,
    crowd_decomposition,
    entropic_gain,
    generate_synthetic,
    hartley_entropy,
    justification_score,
    keyword_belief_update,
    pearson_r,
    plausibility,
    rank,
    residual_entropy,
    shannon_entropy,
    term_frequencies,
    tokenize,
)
from ._core import _run_pipeline_json

__all__ = [
    "LayerstackError",
    "aggregate",
    "belief",
    "bitstream_entropy",
    "combine",
    "correlation_p_value",
    "crowd_decomposition",
    "entropic_gain",
    "generate_synthetic",
    "hartley_entropy",
    "justification_score",
    "keyword_belief_update",
    "pearson_r",
    "plausibility",
    "rank",
    "residual_entropy",
    "run_pipeline",
    "shannon_entropy",
    "term_frequencies",
    "tokenize",
]


def run_pipeline(
    source: str | PathLike,
    *,
    k: int = 9,
    rounds: int = 1,
    per_cluster: int = 5,
    top: int = 5,
    seed: int = 42,
    reservoir_strength: float = 1.0,
    stopwords: str | PathLike | None = None,
    out: str | PathLike | None = None,
    force_bit_layer: bool = False,
) -> dict:
    """Run all seven layers and return the report as a dict.

    When ``out`` is given the report, tables and plot data are written there.
    """
    text = _run_pipeline_json(
        source, k, rounds, per_cluster, top, seed, reservoir_strength, stopwords, out, force_bit_layer
    )
    return json.loads(text)
