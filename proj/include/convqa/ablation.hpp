#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "convqa/corpus.hpp"
#include "convqa/inpaint.hpp"
#include "convqa/trainer.hpp"

namespace convqa {

struct AblationCell {
    std::string name; // e.g. "dr+qam_rerank-on"
    bool qam = false;
    bool tdg = false;
    bool rerank = false;
};

// The fixed 2x2x2 grid: task combination x rerank toggle, 8 cells.
std::vector<AblationCell> ablation_grid();

struct AblationConfig {
    TrainingConfig training;     // lambdas treated as the "on" values per cell
    GenerationConfig generation; // rerank flag overridden per cell
    std::string backend = "stub";
    std::string scorer = "lexical-overlap";
    std::string metric = "lexical-overlap";
    std::string dataset_name = "ablation";
};

struct AblationCellResult {
    AblationCell cell;
    double metric_mean = 0.0;
    std::size_t question_turns = 0;
    double final_combined_loss = 0.0;
    std::filesystem::path cell_dir;
};

// Trains, generates and evaluates one dataset per cell under
// out_dir/<cell name>/, writing a per-cell manifest that lists exactly the
// enabled tasks, then emits the comparison table (ablation.json and
// ablation.txt) in out_dir.
std::vector<AblationCellResult> run_ablation(const TrainingData& data,
                                             const std::vector<Passage>& passages,
                                             const AblationConfig& cfg,
                                             const KeywordExtractor& extractor,
                                             const std::filesystem::path& out_dir);

} // namespace convqa
