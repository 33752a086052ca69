#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convqa/dialog.hpp"
#include "convqa/keywords.hpp"
#include "convqa/render.hpp"
#include "convqa/rng.hpp"

namespace convqa {

enum class Task { DialogReconstruction, QuestionAnswerMatching, TopicDialogGeneration };

std::string_view task_name(Task t); // "dr", "qam", "tdg"
Task task_from_name(std::string_view name);

struct TrainingExample {
    Task task = Task::DialogReconstruction;
    std::string input;
    std::string target;
    std::string dialog_id;
    std::size_t turn_index = 0; // masked / question turn; 0 for QAM negatives too

    bool operator==(const TrainingExample&) const = default;
};

// Classification targets for the matching task. Byte-exact contract with
// trained checkpoints: never reword these.
inline constexpr const char* kQamMatchTarget = "The answer matches the question";
inline constexpr const char* kQamNoMatchTarget = "The answer does not match the question";

// Reconstruction: input is the dialog with utterance t masked, target is the
// original utterance. Throws when the dialog has fewer than two turns or t is
// out of range.
TrainingExample build_dr_example(const Dialog& d, std::size_t t, const RenderOptions& opts);

// Matching: a (positive, negative) pair over the dialog's QA pairs. The
// negative keeps the question of pair `positive` but takes the answer of pair
// `negative`. Indices are into qa_pairs(d); the two answers must differ.
std::pair<TrainingExample, TrainingExample> build_qam_example_pair(const Dialog& d,
                                                                   std::size_t positive,
                                                                   std::size_t negative,
                                                                   const RenderOptions& opts);

// Topic-aware generation: like reconstruction of the question turn t, but the
// masked slot carries a keyword prompt derived from the answer at t+1.
// Throws when t is not a user turn, has no following answer, or keywords is
// empty.
TrainingExample build_tdg_example(const Dialog& d, std::size_t t,
                                  const std::vector<std::string>& keywords,
                                  const RenderOptions& opts);

// Draws single training examples from dialog corpora, deterministically given
// the Rng state. DR draws from `dr_dialogs`; QAM and TDG draw from
// `convqa_dialogs` (question-answer style data).
class TaskSampler {
public:
    TaskSampler(const std::vector<Dialog>* dr_dialogs,
                const std::vector<Dialog>* convqa_dialogs,
                const KeywordExtractor* extractor,
                RenderOptions opts,
                std::size_t max_keywords = kDefaultMaxKeywords);

    TrainingExample sample_dr(Rng& rng) const;
    std::pair<TrainingExample, TrainingExample> sample_qam(Rng& rng) const;
    TrainingExample sample_tdg(Rng& rng) const;

    bool has_dr() const { return dr_dialogs_ && !dr_dialogs_->empty(); }
    bool has_convqa() const { return convqa_dialogs_ && !convqa_dialogs_->empty(); }

private:
    const std::vector<Dialog>* dr_dialogs_;
    const std::vector<Dialog>* convqa_dialogs_;
    const KeywordExtractor* extractor_;
    RenderOptions opts_;
    std::size_t max_keywords_;
};

} // namespace convqa
