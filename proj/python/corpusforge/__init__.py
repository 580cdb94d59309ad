# Copyright (c) 2026 The corpusforge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the corpusforge speech and text corpus tools."""

from ._corpusforge import (
    CorpusforgeError,
    Segment,
    Word,
    calibrate_threshold_eer,
    char_error_rate,
    choose_cuts,
    clean_pages,
    compute_stats,
    cosine_similarity,
    ensure_terminal_punct,
    estimate_snr,
    format_stats,
    normalize_for_cer,
    normalize_transcript,
    optimal_segmentation,
    score_pauses,
    validation_cer,
)

__all__ = [
    "CorpusforgeError",
    "Segment",
    "Word",
    "calibrate_threshold_eer",
    "char_error_rate",
    "choose_cuts",
    "clean_pages",
    "compute_stats",
    "cosine_similarity",
    "ensure_terminal_punct",
    "estimate_snr",
    "format_stats",
    "normalize_for_cer",
    "normalize_transcript",
    "optimal_segmentation",
    "score_pauses",
    "validation_cer",
]
