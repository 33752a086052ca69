"""convqa: build conversational question-answering datasets from text corpora."""

from ._core import (
    __version__,
    build_judge_prompt,
    combined_loss,
    extract_keywords,
    inpaint,
    keyword_prompt,
    map_at_k,
    ndcg_at_k,
    recall_at_k,
    relevance,
    segment_sentences,
)

__all__ = [
    "__version__",
    "build_judge_prompt",
    "combined_loss",
    "extract_keywords",
    "inpaint",
    "keyword_prompt",
    "map_at_k",
    "ndcg_at_k",
    "recall_at_k",
    "relevance",
    "segment_sentences",
]
