#include "convqa/trainer.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "convqa/rng.hpp"
#include "convqa/text.hpp"

namespace convqa {

namespace {

using ordered_json = nlohmann::ordered_json;

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("TrainingConfig: ") + field + " must be > 0");
    }
}

void require_non_negative(double value, const char* field) {
    if (value < 0.0 || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("TrainingConfig: ") + field +
                                    " must be finite and >= 0");
    }
}

} // namespace

void TrainingConfig::validate() const {
    require_non_negative(lambda_qam, "lambda_qam");
    require_non_negative(lambda_tdg, "lambda_tdg");
    require_positive(learning_rate, "learning_rate");
    if (batch_size <= 0) throw std::invalid_argument("TrainingConfig: batch_size must be > 0");
    if (grad_accum_steps <= 0) {
        throw std::invalid_argument("TrainingConfig: grad_accum_steps must be > 0");
    }
    require_positive(max_grad_norm, "max_grad_norm");
    if (!(optimizer.beta1 > 0.0 && optimizer.beta1 < 1.0)) {
        throw std::invalid_argument("TrainingConfig: optimizer.beta1 must be in (0, 1)");
    }
    if (!(optimizer.beta2 > 0.0 && optimizer.beta2 < 1.0)) {
        throw std::invalid_argument("TrainingConfig: optimizer.beta2 must be in (0, 1)");
    }
    require_positive(optimizer.epsilon, "optimizer.epsilon");
    if (warmup_steps < 0) throw std::invalid_argument("TrainingConfig: warmup_steps must be >= 0");
    if (epochs <= 0) throw std::invalid_argument("TrainingConfig: epochs must be > 0");
    if (max_steps < 0) throw std::invalid_argument("TrainingConfig: max_steps must be >= 0");
    if (steps_per_epoch < 0) {
        throw std::invalid_argument("TrainingConfig: steps_per_epoch must be >= 0");
    }
    if (checkpoint_every <= 0) {
        throw std::invalid_argument("TrainingConfig: checkpoint_every must be > 0");
    }
    if (max_keywords <= 0) throw std::invalid_argument("TrainingConfig: max_keywords must be > 0");
}

namespace {

ordered_json config_to_json_value(const TrainingConfig& cfg) {
    return ordered_json{
        {"lambda_qam", cfg.lambda_qam},
        {"lambda_tdg", cfg.lambda_tdg},
        {"learning_rate", cfg.learning_rate},
        {"batch_size", cfg.batch_size},
        {"grad_accum_steps", cfg.grad_accum_steps},
        {"max_grad_norm", cfg.max_grad_norm},
        {"optimizer",
         ordered_json{{"beta1", cfg.optimizer.beta1},
                      {"beta2", cfg.optimizer.beta2},
                      {"epsilon", cfg.optimizer.epsilon}}},
        {"warmup_steps", cfg.warmup_steps},
        {"epochs", cfg.epochs},
        {"seed", cfg.seed},
        {"max_steps", cfg.max_steps},
        {"steps_per_epoch", cfg.steps_per_epoch},
        {"checkpoint_every", cfg.checkpoint_every},
        {"max_keywords", cfg.max_keywords},
    };
}

TrainingConfig config_from_json_value(const ordered_json& j) {
    TrainingConfig cfg;
    cfg.lambda_qam = j.value("lambda_qam", cfg.lambda_qam);
    cfg.lambda_tdg = j.value("lambda_tdg", cfg.lambda_tdg);
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.grad_accum_steps = j.value("grad_accum_steps", cfg.grad_accum_steps);
    cfg.max_grad_norm = j.value("max_grad_norm", cfg.max_grad_norm);
    if (j.contains("optimizer")) {
        const auto& o = j.at("optimizer");
        cfg.optimizer.beta1 = o.value("beta1", cfg.optimizer.beta1);
        cfg.optimizer.beta2 = o.value("beta2", cfg.optimizer.beta2);
        cfg.optimizer.epsilon = o.value("epsilon", cfg.optimizer.epsilon);
    }
    cfg.warmup_steps = j.value("warmup_steps", cfg.warmup_steps);
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.max_steps = j.value("max_steps", cfg.max_steps);
    cfg.steps_per_epoch = j.value("steps_per_epoch", cfg.steps_per_epoch);
    cfg.checkpoint_every = j.value("checkpoint_every", cfg.checkpoint_every);
    cfg.max_keywords = j.value("max_keywords", cfg.max_keywords);
    return cfg;
}

} // namespace

std::string training_config_to_json(const TrainingConfig& cfg) {
    return config_to_json_value(cfg).dump(2);
}

TrainingConfig training_config_from_json(const std::string& json_text) {
    return config_from_json_value(ordered_json::parse(json_text));
}

TrainingConfig load_training_config(const std::filesystem::path& path) {
    try {
        return training_config_from_json(read_file(path.string()));
    } catch (const std::exception& e) {
        throw std::runtime_error("load_training_config: " + path.string() + ": " + e.what());
    }
}

double combined_loss(double l_dr, double l_qam, double l_tdg, const TrainingConfig& cfg) {
    const struct {
        const char* name;
        double value;
    } terms[] = {{"l_dr", l_dr}, {"l_qam", l_qam}, {"l_tdg", l_tdg}};
    for (const auto& term : terms) {
        if (!std::isfinite(term.value)) {
            throw std::invalid_argument(std::string("combined_loss: ") + term.name +
                                        " is not finite");
        }
        if (term.value < 0.0) {
            throw std::invalid_argument(std::string("combined_loss: ") + term.name +
                                        " is negative");
        }
    }
    return l_dr + cfg.lambda_qam * l_qam + cfg.lambda_tdg * l_tdg;
}

namespace {

int resolve_steps(const TrainingConfig& cfg, std::size_t n_dialogs) {
    if (cfg.max_steps > 0) return cfg.max_steps;
    int per_epoch = cfg.steps_per_epoch;
    if (per_epoch == 0) {
        const int eb = cfg.effective_batch();
        per_epoch = static_cast<int>((n_dialogs + eb - 1) / eb);
        if (per_epoch == 0) per_epoch = 1;
    }
    return cfg.epochs * per_epoch;
}

struct SamplerBundle {
    TaskSampler sampler;
    Rng dr_rng;
    Rng qam_rng;
    Rng tdg_rng;
    bool qam_enabled;
    bool tdg_enabled;
};

SamplerBundle make_samplers(const TrainingData& data, const TrainingConfig& cfg,
                            const KeywordExtractor& extractor) {
    cfg.validate();
    if (data.reconstruction_dialogs.empty()) {
        throw std::invalid_argument("train: need at least one dialog corpus");
    }
    const bool qam_enabled = cfg.lambda_qam > 0.0;
    const bool tdg_enabled = cfg.lambda_tdg > 0.0;
    if ((qam_enabled || tdg_enabled) && data.convqa_dialogs.empty()) {
        throw std::invalid_argument(
            "train: lambda_qam/lambda_tdg > 0 requires a question-answer dialog corpus");
    }
    const Rng root(cfg.seed);
    return SamplerBundle{
        TaskSampler(&data.reconstruction_dialogs, &data.convqa_dialogs, &extractor,
                    RenderOptions{}, static_cast<std::size_t>(cfg.max_keywords)),
        // independent per-task streams: disabling a task never shifts the others
        root.derive("dr"), root.derive("qam"), root.derive("tdg"), qam_enabled, tdg_enabled};
}

std::vector<TrainingExample> draw_step_batch(SamplerBundle& b, int effective_batch) {
    std::vector<TrainingExample> batch;
    const auto eb = static_cast<std::size_t>(effective_batch);
    for (std::size_t i = 0; i < eb; ++i) batch.push_back(b.sampler.sample_dr(b.dr_rng));
    if (b.qam_enabled) {
        std::vector<TrainingExample> qam;
        while (qam.size() < eb) {
            auto [pos, neg] = b.sampler.sample_qam(b.qam_rng);
            qam.push_back(std::move(pos));
            if (qam.size() < eb) qam.push_back(std::move(neg));
        }
        for (auto& ex : qam) batch.push_back(std::move(ex));
    }
    if (b.tdg_enabled) {
        for (std::size_t i = 0; i < eb; ++i) batch.push_back(b.sampler.sample_tdg(b.tdg_rng));
    }
    return batch;
}

} // namespace

std::vector<TrainingExample> training_example_stream(const TrainingData& data,
                                                     const TrainingConfig& cfg,
                                                     const KeywordExtractor& extractor,
                                                     int steps) {
    SamplerBundle bundle = make_samplers(data, cfg, extractor);
    std::vector<TrainingExample> stream;
    for (int s = 0; s < steps; ++s) {
        for (auto& ex : draw_step_batch(bundle, cfg.effective_batch())) {
            stream.push_back(std::move(ex));
        }
    }
    return stream;
}

void write_checkpoint(const std::filesystem::path& dir, const GeneratorBackend& backend,
                      const CheckpointInfo& info) {
    const std::filesystem::path tmp = dir.string() + ".tmp";
    std::filesystem::remove_all(tmp);
    std::filesystem::create_directories(tmp);
    backend.save(tmp);
    ordered_json fingerprints = ordered_json::object();
    for (const auto& [name, hash] : info.corpus_fingerprints) fingerprints[name] = hash;
    const ordered_json manifest{
        {"format", "convqa.checkpoint"}, {"version", info.version},
        {"step", info.step},             {"backend", info.backend},
        {"config", ordered_json::parse(training_config_to_json(info.config))},
        {"corpus_fingerprints", fingerprints},
    };
    {
        std::ofstream out(tmp / "manifest.json", std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("write_checkpoint: cannot open " +
                                     (tmp / "manifest.json").string());
        }
        out << manifest.dump(2) << '\n';
    }
    // the swap is the last step so an existing checkpoint survives any failure above
    std::filesystem::remove_all(dir);
    std::filesystem::rename(tmp, dir);
}

CheckpointInfo read_checkpoint_manifest(const std::filesystem::path& dir) {
    const std::filesystem::path manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_checkpoint_manifest: cannot open " +
                                 manifest_path.string());
    }
    ordered_json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error("read_checkpoint_manifest: " + manifest_path.string() + ": " +
                                 e.what());
    }
    if (doc.value("format", std::string()) != "convqa.checkpoint") {
        throw std::runtime_error("read_checkpoint_manifest: " + manifest_path.string() +
                                 " is not a checkpoint manifest");
    }
    CheckpointInfo info;
    info.version = doc.value("version", 1);
    info.step = doc.value("step", 0);
    info.backend = doc.value("backend", std::string());
    if (doc.contains("config")) info.config = config_from_json_value(doc.at("config"));
    if (doc.contains("corpus_fingerprints")) {
        for (const auto& [name, hash] : doc.at("corpus_fingerprints").items()) {
            info.corpus_fingerprints[name] = hash.get<std::string>();
        }
    }
    return info;
}

std::unique_ptr<GeneratorBackend> load_checkpoint(const std::filesystem::path& dir,
                                                  CheckpointInfo* info_out) {
    const CheckpointInfo info = read_checkpoint_manifest(dir);
    std::unique_ptr<GeneratorBackend> backend = make_backend(info.backend);
    backend->load(dir);
    if (info_out) *info_out = info;
    return backend;
}

TrainResult train(const TrainingData& data, const TrainingConfig& cfg, GeneratorBackend& backend,
                  const KeywordExtractor& extractor, const std::filesystem::path& out_dir) {
    SamplerBundle bundle = make_samplers(data, cfg, extractor);
    std::filesystem::create_directories(out_dir);

    TrainResult result;
    result.checkpoint_dir = out_dir / "checkpoint";
    result.metrics_path = out_dir / "metrics.jsonl";

    std::ofstream metrics(result.metrics_path, std::ios::binary | std::ios::trunc);
    if (!metrics) {
        throw std::runtime_error("train: cannot open " + result.metrics_path.string());
    }

    const int total_steps = resolve_steps(cfg, data.reconstruction_dialogs.size());
    CheckpointInfo info;
    info.backend = backend.name();
    info.config = cfg;
    info.corpus_fingerprints = data.corpus_fingerprints;

    for (int step = 1; step <= total_steps; ++step) {
        StepLosses losses;
        try {
            const std::vector<TrainingExample> batch =
                draw_step_batch(bundle, cfg.effective_batch());
            losses = backend.train_step(batch);
        } catch (const std::exception& e) {
            throw std::runtime_error("train: backend failure at step " + std::to_string(step) +
                                     ": " + e.what() + " (last checkpoint retained)");
        }
        StepRecord rec;
        rec.step = step;
        rec.l_dr = losses.dr.value_or(0.0);
        rec.l_qam = losses.qam.value_or(0.0);
        rec.l_tdg = losses.tdg.value_or(0.0);
        rec.combined = combined_loss(rec.l_dr, rec.l_qam, rec.l_tdg, cfg);
        metrics << ordered_json{{"step", rec.step},
                                {"l_dr", rec.l_dr},
                                {"l_qam", rec.l_qam},
                                {"l_tdg", rec.l_tdg},
                                {"combined", rec.combined}}
                       .dump()
                << '\n';
        metrics.flush();
        if (step == 1) result.initial_combined = rec.combined;
        result.final_combined = rec.combined;
        result.history.push_back(rec);
        result.steps_run = step;

        if (step % cfg.checkpoint_every == 0 || step == total_steps) {
            info.step = step;
            write_checkpoint(result.checkpoint_dir, backend, info);
        }
    }
    return result;
}

} // namespace convqa
