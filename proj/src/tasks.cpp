#include "convqa/tasks.hpp"

#include <stdexcept>

namespace convqa {

std::string_view task_name(Task t) {
    switch (t) {
    case Task::DialogReconstruction: return "dr";
    case Task::QuestionAnswerMatching: return "qam";
    case Task::TopicDialogGeneration: return "tdg";
    }
    throw std::invalid_argument("task_name: unknown task");
}

Task task_from_name(std::string_view name) {
    if (name == "dr") return Task::DialogReconstruction;
    if (name == "qam") return Task::QuestionAnswerMatching;
    if (name == "tdg") return Task::TopicDialogGeneration;
    throw std::invalid_argument("task_from_name: unknown task '" + std::string(name) + "'");
}

TrainingExample build_dr_example(const Dialog& d, std::size_t t, const RenderOptions& opts) {
    if (d.turn_count() < 2) {
        throw std::invalid_argument("build_dr_example: dialog '" + d.id +
                                    "' has fewer than two turns");
    }
    const MaskedDialog m = mask_utterance(d, t, opts.mask_sentinel);
    TrainingExample ex;
    ex.task = Task::DialogReconstruction;
    ex.input = render_masked_dialog(m, opts);
    ex.target = d.utterances[t].text;
    ex.dialog_id = d.id;
    ex.turn_index = t;
    return ex;
}

std::pair<TrainingExample, TrainingExample> build_qam_example_pair(const Dialog& d,
                                                                   std::size_t positive,
                                                                   std::size_t negative,
                                                                   const RenderOptions& opts) {
    const std::vector<QAPair> pairs = qa_pairs(d);
    if (pairs.size() < 2) {
        throw std::invalid_argument("build_qam_example_pair: dialog '" + d.id +
                                    "' has fewer than two question-answer pairs");
    }
    if (positive >= pairs.size() || negative >= pairs.size()) {
        throw std::out_of_range("build_qam_example_pair: pair index out of range for dialog '" +
                                d.id + "'");
    }
    if (positive == negative || pairs[positive].answer.text == pairs[negative].answer.text) {
        throw std::invalid_argument(
            "build_qam_example_pair: negative answer must differ from the positive answer");
    }

    TrainingExample pos;
    pos.task = Task::QuestionAnswerMatching;
    pos.input = render_qa(pairs[positive].question, pairs[positive].answer, opts);
    pos.target = kQamMatchTarget;
    pos.dialog_id = d.id;
    pos.turn_index = pairs[positive].turn_index;

    TrainingExample neg;
    neg.task = Task::QuestionAnswerMatching;
    neg.input = render_qa(pairs[positive].question, pairs[negative].answer, opts);
    neg.target = kQamNoMatchTarget;
    neg.dialog_id = d.id;
    neg.turn_index = pairs[positive].turn_index;

    return {std::move(pos), std::move(neg)};
}

TrainingExample build_tdg_example(const Dialog& d, std::size_t t,
                                  const std::vector<std::string>& keywords,
                                  const RenderOptions& opts) {
    if (t >= d.turn_count()) {
        throw std::out_of_range("build_tdg_example: turn " + std::to_string(t) +
                                " out of range for dialog '" + d.id + "'");
    }
    if (d.utterances[t].role != Role::User) {
        throw std::invalid_argument("build_tdg_example: turn " + std::to_string(t) +
                                    " of dialog '" + d.id + "' is not a user turn");
    }
    if (t + 1 >= d.turn_count()) {
        throw std::invalid_argument("build_tdg_example: turn " + std::to_string(t) +
                                    " of dialog '" + d.id + "' has no following answer");
    }
    const std::string prompt = format_keyword_prompt(keywords); // throws on empty
    const MaskedDialog m = mask_utterance(d, t, opts.mask_sentinel);
    TrainingExample ex;
    ex.task = Task::TopicDialogGeneration;
    ex.input = render_masked_dialog(m, opts, prompt);
    ex.target = d.utterances[t].text;
    ex.dialog_id = d.id;
    ex.turn_index = t;
    return ex;
}

TaskSampler::TaskSampler(const std::vector<Dialog>* dr_dialogs,
                         const std::vector<Dialog>* convqa_dialogs,
                         const KeywordExtractor* extractor, RenderOptions opts,
                         std::size_t max_keywords)
    : dr_dialogs_(dr_dialogs),
      convqa_dialogs_(convqa_dialogs),
      extractor_(extractor),
      opts_(std::move(opts)),
      max_keywords_(max_keywords) {}

namespace {
constexpr std::size_t kMaxDraws = 1000;
}

TrainingExample TaskSampler::sample_dr(Rng& rng) const {
    if (!has_dr()) throw std::logic_error("TaskSampler: no reconstruction dialogs configured");
    for (std::size_t attempt = 0; attempt < kMaxDraws; ++attempt) {
        const Dialog& d = (*dr_dialogs_)[rng.uniform_index(dr_dialogs_->size())];
        if (d.turn_count() < 2) continue;
        const std::size_t t = rng.uniform_index(d.turn_count());
        return build_dr_example(d, t, opts_);
    }
    throw std::runtime_error("TaskSampler: no dialog with at least two turns found");
}

std::pair<TrainingExample, TrainingExample> TaskSampler::sample_qam(Rng& rng) const {
    if (!has_convqa()) throw std::logic_error("TaskSampler: no question-answer dialogs configured");
    for (std::size_t attempt = 0; attempt < kMaxDraws; ++attempt) {
        const Dialog& d = (*convqa_dialogs_)[rng.uniform_index(convqa_dialogs_->size())];
        const std::vector<QAPair> pairs = qa_pairs(d);
        if (pairs.size() < 2) continue;
        const std::size_t positive = rng.uniform_index(pairs.size());
        std::vector<std::size_t> negatives;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (i != positive && pairs[i].answer.text != pairs[positive].answer.text) {
                negatives.push_back(i);
            }
        }
        if (negatives.empty()) continue;
        const std::size_t negative = negatives[rng.uniform_index(negatives.size())];
        return build_qam_example_pair(d, positive, negative, opts_);
    }
    throw std::runtime_error(
        "TaskSampler: no dialog with two distinct question-answer pairs found");
}

TrainingExample TaskSampler::sample_tdg(Rng& rng) const {
    if (!has_convqa()) throw std::logic_error("TaskSampler: no question-answer dialogs configured");
    for (std::size_t attempt = 0; attempt < kMaxDraws; ++attempt) {
        const Dialog& d = (*convqa_dialogs_)[rng.uniform_index(convqa_dialogs_->size())];
        std::vector<std::size_t> eligible;
        for (std::size_t t = 0; t + 1 < d.turn_count(); ++t) {
            if (d.utterances[t].role == Role::User) eligible.push_back(t);
        }
        if (eligible.empty()) continue;
        const std::size_t t = eligible[rng.uniform_index(eligible.size())];
        const std::vector<std::string> keywords =
            extractor_->extract(d.utterances[t + 1].text, max_keywords_);
        if (keywords.empty()) continue;
        return build_tdg_example(d, t, keywords, opts_);
    }
    throw std::runtime_error("TaskSampler: no turn with extractable answer keywords found");
}

} // namespace convqa
