#include "convqa/inpaint.hpp"

#include <stdexcept>

#include "convqa/text.hpp"

namespace convqa {

void GenerationConfig::validate() const {
    if (beam_size < 1) throw std::invalid_argument("GenerationConfig: beam_size must be >= 1");
    if (max_question_length < 1) {
        throw std::invalid_argument("GenerationConfig: max_question_length must be >= 1");
    }
    if (max_keywords < 1) throw std::invalid_argument("GenerationConfig: max_keywords must be >= 1");
    const std::string placeholder = "{title}";
    const auto pos = prompt_template.find(placeholder);
    if (pos == std::string::npos ||
        prompt_template.find(placeholder, pos + 1) != std::string::npos) {
        throw std::invalid_argument(
            "GenerationConfig: prompt_template must contain '{title}' exactly once");
    }
}

InferenceContext build_context(const Passage& passage, std::size_t t,
                               const std::vector<std::pair<std::string, std::string>>& history,
                               const std::vector<std::string>& keywords,
                               const std::string& prompt_template) {
    if (t >= passage.sentences.size()) {
        throw std::out_of_range("build_context: slot " + std::to_string(t) +
                                " out of range for passage '" + passage.id + "' with " +
                                std::to_string(passage.sentences.size()) + " sentences");
    }
    if (history.size() != t) {
        throw std::invalid_argument("build_context: slot " + std::to_string(t) + " needs exactly " +
                                    std::to_string(t) + " completed pairs, got " +
                                    std::to_string(history.size()));
    }
    InferenceContext ctx;
    if (!passage.title.empty()) {
        ctx.prompt_text = build_title_prompt(passage.title, prompt_template);
    }
    ctx.completed = history;
    ctx.next_answer = passage.sentences[t];
    if (!keywords.empty()) ctx.keyword_prompt = format_keyword_prompt(keywords);
    return ctx;
}

std::string render_context(const InferenceContext& ctx, const RenderOptions& opts) {
    std::vector<RenderElement> elements;
    if (!ctx.prompt_text.empty()) elements.push_back(RenderElement::plain(ctx.prompt_text));
    for (const auto& [question, answer] : ctx.completed) {
        elements.push_back(RenderElement::turn(Role::User, question));
        elements.push_back(RenderElement::turn(Role::Agent, answer));
    }
    elements.push_back(RenderElement::mask(Role::User, ctx.keyword_prompt));
    elements.push_back(RenderElement::turn(Role::Agent, ctx.next_answer));
    RenderOptions local = opts;
    if (!ctx.mask_sentinel.empty()) local.mask_sentinel = ctx.mask_sentinel;
    return render_elements(elements, local);
}

InpaintedDialog inpaint_passage(const Passage& passage, GeneratorBackend& backend,
                                const KeywordExtractor& extractor, const RelevanceScorer* scorer,
                                const GenerationConfig& cfg) {
    cfg.validate();
    if (passage.sentences.empty()) {
        throw std::invalid_argument("inpaint_passage: passage '" + passage.id +
                                    "' has no sentences");
    }
    if (cfg.rerank && scorer == nullptr) {
        throw std::invalid_argument("inpaint_passage: rerank enabled but no scorer given");
    }

    InpaintedDialog out;
    out.dialog.id = passage.id;
    if (!passage.title.empty()) out.dialog.title = passage.title;
    out.dialog.source_passage_id = passage.id;
    out.meta.title = passage.title;

    const std::string scorer_context = passage.normalized_text();
    std::vector<std::pair<std::string, std::string>> history;
    for (std::size_t t = 0; t < passage.sentences.size(); ++t) {
        const std::string& answer = passage.sentences[t];
        const std::vector<std::string> keywords =
            extractor.extract(answer, static_cast<std::size_t>(cfg.max_keywords));
        const InferenceContext ctx =
            build_context(passage, t, history, keywords, cfg.prompt_template);
        if (t == 0) out.meta.prompt_text = ctx.prompt_text;

        CandidateSet cs = backend.generate(render_context(ctx, cfg.render),
                                           static_cast<std::size_t>(cfg.beam_size));
        if (cs.candidates.empty()) {
            throw std::runtime_error("inpaint_passage: backend returned no candidates for passage '" +
                                     passage.id + "' slot " + std::to_string(t));
        }
        cs.validate();

        std::size_t selected = 0;
        if (cfg.rerank) selected = rerank(cs, *scorer, scorer_context, answer);
        const std::string question = normalize_whitespace(cs.candidates[selected].text);
        if (question.empty()) {
            throw std::runtime_error("inpaint_passage: backend produced an empty question for passage '" +
                                     passage.id + "' slot " + std::to_string(t));
        }

        out.dialog.utterances.push_back(Utterance{question, Role::User, Origin::Generated});
        out.dialog.utterances.push_back(Utterance{answer, Role::Agent, Origin::SourceSentence});
        TurnMeta tm;
        tm.keywords = keywords;
        if (cfg.candidate_retention) tm.candidates = cs.candidates;
        out.meta.turns.push_back(std::move(tm));
        history.emplace_back(question, answer);
    }

    const std::vector<std::string> violations = validate_dialog(out.dialog);
    if (!violations.empty()) {
        throw std::logic_error("inpaint_passage: generated dialog '" + out.dialog.id +
                               "' violates invariants: " + violations.front());
    }
    return out;
}

ConvQADataset inpaint_corpus(const std::vector<Passage>& passages, GeneratorBackend& backend,
                             const KeywordExtractor& extractor, const RelevanceScorer* scorer,
                             const GenerationConfig& cfg, const std::string& dataset_name,
                             InpaintReport* report, double max_failure_fraction) {
    if (passages.empty()) {
        throw std::invalid_argument("inpaint_corpus: passage list is empty");
    }
    ConvQADataset ds;
    ds.name = dataset_name;
    InpaintReport local;
    for (const Passage& p : passages) {
        ++local.attempted;
        try {
            InpaintedDialog result = inpaint_passage(p, backend, extractor, scorer, cfg);
            ds.per_dialog_meta.emplace(result.dialog.id, std::move(result.meta));
            ds.dialogs.push_back(std::move(result.dialog));
            ++local.succeeded;
        } catch (const std::exception& e) {
            local.failures.emplace_back(p.id, e.what());
        }
    }
    if (report) *report = local;
    const auto failed = local.attempted - local.succeeded;
    if (static_cast<double>(failed) > max_failure_fraction * static_cast<double>(local.attempted)) {
        std::string detail = local.failures.empty() ? "" : " (first: " + local.failures.front().first +
                                                               ": " + local.failures.front().second + ")";
        throw std::runtime_error("inpaint_corpus: " + std::to_string(failed) + " of " +
                                 std::to_string(local.attempted) + " passages failed" + detail);
    }
    return ds;
}

} // namespace convqa
