#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "convqa/backend.hpp"
#include "convqa/dialog.hpp"
#include "convqa/keywords.hpp"
#include "convqa/tasks.hpp"

namespace convqa {

struct OptimizerConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct TrainingConfig {
    double lambda_qam = 0.1;
    double lambda_tdg = 0.1;
    double learning_rate = 5e-5;
    int batch_size = 8;
    int grad_accum_steps = 8;
    double max_grad_norm = 1.0;
    OptimizerConfig optimizer;
    int warmup_steps = 0;
    int epochs = 3;
    std::uint64_t seed = 0;

    // Toolkit knobs (not model hyperparameters).
    int max_steps = 0;        // 0 = epochs * steps_per_epoch
    int steps_per_epoch = 0;  // 0 = ceil(#dialogs / effective batch)
    int checkpoint_every = 50;
    int max_keywords = static_cast<int>(kDefaultMaxKeywords);

    int effective_batch() const { return batch_size * grad_accum_steps; }

    // Throws std::invalid_argument naming the first offending field.
    void validate() const;
};

std::string training_config_to_json(const TrainingConfig& cfg);
TrainingConfig training_config_from_json(const std::string& json_text);
TrainingConfig load_training_config(const std::filesystem::path& path);

// l_dr + lambda_qam * l_qam + lambda_tdg * l_tdg. All terms must be finite
// and >= 0; violations throw naming the offending term.
double combined_loss(double l_dr, double l_qam, double l_tdg, const TrainingConfig& cfg);

struct TrainingData {
    std::vector<Dialog> reconstruction_dialogs;          // every dialog corpus
    std::vector<Dialog> convqa_dialogs;                  // QA-style subset (QAM/TDG source)
    std::map<std::string, std::string> corpus_fingerprints; // corpus name -> content hash
};

struct StepRecord {
    int step = 0;
    double l_dr = 0.0;
    double l_qam = 0.0;
    double l_tdg = 0.0;
    double combined = 0.0;
};

struct TrainResult {
    int steps_run = 0;
    double initial_combined = 0.0;
    double final_combined = 0.0;
    std::filesystem::path checkpoint_dir;
    std::filesystem::path metrics_path;
    std::vector<StepRecord> history;
};

// Runs the seeded training loop: every optimizer step draws one effective
// batch per enabled task (reconstruction always; matching and topic
// generation only when their lambda is > 0), calls backend.train_step once
// with the concatenated batch, logs per-task losses to metrics.jsonl and
// periodically checkpoints. A backend failure aborts but leaves the last
// successfully written checkpoint in place.
TrainResult train(const TrainingData& data, const TrainingConfig& cfg, GeneratorBackend& backend,
                  const KeywordExtractor& extractor, const std::filesystem::path& out_dir);

// Draws the exact example stream a training run would see, without touching a
// backend. Used to pin reproducibility properties.
std::vector<TrainingExample> training_example_stream(const TrainingData& data,
                                                     const TrainingConfig& cfg,
                                                     const KeywordExtractor& extractor,
                                                     int steps);

// --- checkpoints ----------------------------------------------------------

struct CheckpointInfo {
    int version = 1;
    int step = 0;
    std::string backend;
    TrainingConfig config;
    std::map<std::string, std::string> corpus_fingerprints;
};

void write_checkpoint(const std::filesystem::path& dir, const GeneratorBackend& backend,
                      const CheckpointInfo& info);
CheckpointInfo read_checkpoint_manifest(const std::filesystem::path& dir);

// Instantiates the backend named in the manifest and loads its blob.
std::unique_ptr<GeneratorBackend> load_checkpoint(const std::filesystem::path& dir,
                                                  CheckpointInfo* info = nullptr);

} // namespace convqa
