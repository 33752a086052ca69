#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "convqa/backend.hpp"
#include "convqa/corpus.hpp"
#include "convqa/dataset.hpp"
#include "convqa/keywords.hpp"
#include "convqa/render.hpp"
#include "convqa/rerank.hpp"

namespace convqa {

struct GenerationConfig {
    int beam_size = 5;
    int max_question_length = 64; // backend hint; deterministic backends may ignore it
    bool rerank = true;
    bool candidate_retention = false;
    int max_keywords = static_cast<int>(kDefaultMaxKeywords);
    std::string prompt_template = kDefaultPromptTemplate;
    RenderOptions render;

    void validate() const; // throws std::invalid_argument
};

// State needed to render the model input for one question slot: the title
// prompt, the already-completed (question, answer) pairs, and the answer
// whose question is being generated. Rendering puts the keyword prompt
// immediately before the sentinel, and the sentinel immediately before the
// next answer; earlier slots appear without their keyword prompts.
struct InferenceContext {
    std::string prompt_text; // "" = no title prompt element
    std::vector<std::pair<std::string, std::string>> completed; // (question, answer)
    std::string next_answer;
    std::string keyword_prompt; // "" = no keyword hint
    std::string mask_sentinel = std::string(kDefaultMaskSentinel);
};

// Context for question slot t of the passage (0-based over sentences).
// history must hold exactly t completed pairs.
InferenceContext build_context(const Passage& passage, std::size_t t,
                               const std::vector<std::pair<std::string, std::string>>& history,
                               const std::vector<std::string>& keywords,
                               const std::string& prompt_template = kDefaultPromptTemplate);

// Single rendering path shared with the training-side builders.
std::string render_context(const InferenceContext& ctx, const RenderOptions& opts);

struct InpaintedDialog {
    Dialog dialog;
    DialogMeta meta;
};

// Fills every question slot of the passage left to right: generate beam_size
// candidates for slot t, pick by relevance re-ranking (or candidate 0 when
// cfg.rerank is false), then feed the chosen question into the context of
// slot t+1. The result alternates generated user questions with the passage
// sentences as agent answers.
InpaintedDialog inpaint_passage(const Passage& passage, GeneratorBackend& backend,
                                const KeywordExtractor& extractor, const RelevanceScorer* scorer,
                                const GenerationConfig& cfg);

struct InpaintReport {
    std::size_t attempted = 0;
    std::size_t succeeded = 0;
    std::vector<std::pair<std::string, std::string>> failures; // (passage id, reason)
};

// One dialog per passage, in input order. Per-passage failures are recorded
// and skipped; the run aborts when more than max_failure_fraction of the
// passages failed.
ConvQADataset inpaint_corpus(const std::vector<Passage>& passages, GeneratorBackend& backend,
                             const KeywordExtractor& extractor, const RelevanceScorer* scorer,
                             const GenerationConfig& cfg, const std::string& dataset_name,
                             InpaintReport* report = nullptr,
                             double max_failure_fraction = 0.01);

} // namespace convqa
