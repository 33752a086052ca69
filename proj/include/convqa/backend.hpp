#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "convqa/candidates.hpp"
#include "convqa/tasks.hpp"

namespace convqa {

// Mean loss per task over one batch; a field is set only when the batch
// contained examples of that task.
struct StepLosses {
    std::optional<double> dr;
    std::optional<double> qam;
    std::optional<double> tdg;

    const std::optional<double>& for_task(Task t) const;
    std::optional<double>& for_task(Task t);
};

// Sequence-to-sequence model abstraction. The toolkit never sees model
// internals: it hands over rendered text and receives losses or candidates.
class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;

    virtual std::string name() const = 0;

    // Finite, >= 0 for valid text.
    virtual double loss(const std::string& input, const std::string& target) const = 0;

    // Up to beam_size candidates in non-increasing model-score order.
    virtual CandidateSet generate(const std::string& input, std::size_t beam_size) = 0;

    // One optimizer step over the batch; returns per-task mean losses
    // measured before the parameter update.
    virtual StepLosses train_step(const std::vector<TrainingExample>& batch) = 0;

    // Backend-owned checkpoint blob inside `dir` (the trainer owns the
    // manifest that sits next to it).
    virtual void save(const std::filesystem::path& dir) const = 0;
    virtual void load(const std::filesystem::path& dir) = 0;
};

// Deterministic trainable test double. Each (input, target) pair owns one
// scalar weight; its loss decays as the pair is revisited, so training curves
// are real and reproducible without any model weights. Generation emits
// template questions built from the keyword hint and the answer found in the
// input, independent of the surrounding dialog history.
class StubBackend : public GeneratorBackend {
public:
    StubBackend() = default;
    explicit StubBackend(RenderOptions render_options);

    std::string name() const override { return "stub"; }
    double loss(const std::string& input, const std::string& target) const override;
    CandidateSet generate(const std::string& input, std::size_t beam_size) override;
    StepLosses train_step(const std::vector<TrainingExample>& batch) override;
    void save(const std::filesystem::path& dir) const override;
    void load(const std::filesystem::path& dir) override;

    std::size_t weight_count() const { return weights_.size(); }

private:
    std::uint64_t example_key(const std::string& input, const std::string& target) const;

    RenderOptions render_options_;
    std::map<std::uint64_t, double> weights_;
};

using BackendFactory = std::function<std::unique_ptr<GeneratorBackend>()>;

// Registry for backend plug-ins; "stub" is always available.
void register_backend(const std::string& name, BackendFactory factory);
std::unique_ptr<GeneratorBackend> make_backend(const std::string& name);
std::vector<std::string> backend_names();

} // namespace convqa
