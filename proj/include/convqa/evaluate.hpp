#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "convqa/dataset.hpp"
#include "convqa/rerank.hpp"

namespace convqa {

// Reference-free per-turn metric. Heavyweight published metrics plug in
// behind this interface; the repo ships deterministic ones only.
class MetricPlugin {
public:
    virtual ~MetricPlugin() = default;
    virtual std::string name() const = 0;
    virtual double evaluate(const std::string& context, const std::string& question,
                            const std::string& answer) const = 0;
};

class LexicalOverlapMetric : public MetricPlugin {
public:
    std::string name() const override { return "lexical-overlap"; }
    double evaluate(const std::string& context, const std::string& question,
                    const std::string& answer) const override {
        return scorer_.score(context, question, answer);
    }

private:
    LexicalOverlapScorer scorer_;
};

class ConstantMetric : public MetricPlugin {
public:
    explicit ConstantMetric(double value) : value_(value) {}
    std::string name() const override;
    double evaluate(const std::string&, const std::string&, const std::string&) const override {
        return value_;
    }

private:
    double value_;
};

using MetricFactory = std::function<std::unique_ptr<MetricPlugin>()>;
void register_metric(const std::string& name, MetricFactory factory);
// Accepts registered names plus "constant:<value>".
std::unique_ptr<MetricPlugin> make_metric(const std::string& name);
std::vector<std::string> metric_names();

// --- dataset statistics ---------------------------------------------------

struct DatasetStatistics {
    std::size_t num_dialogs = 0;
    double mean_turns = 0.0; // rounded to 2 decimals
    std::map<std::size_t, std::size_t> turn_histogram; // utterance count -> #dialogs
};

DatasetStatistics dataset_statistics(const ConvQADataset& ds); // empty -> error

// The evaluation context of a dialog: its agent-side turns joined by single
// spaces. For inpainted dialogs this equals the source passage text.
std::string dialog_context(const Dialog& d);

// --- metric harness ---------------------------------------------------------

struct MetricReport {
    std::string metric;
    bool available = true;
    std::string error;                 // set when unavailable
    double mean = 0.0;                 // over all question turns of the dataset
    std::size_t question_turns = 0;
    std::map<std::string, double> per_dialog_mean;
};

// Evaluates every metric over every question turn. A plugin that throws is
// reported unavailable; the other metrics still run.
std::vector<MetricReport> evaluate_dataset(const ConvQADataset& ds,
                                           const std::vector<const MetricPlugin*>& metrics);

// --- question-type profiling -----------------------------------------------

struct QuestionTypeOntology {
    std::vector<std::string> raw_types;    // fine-grained input labels
    std::vector<std::string> merged_types; // reported categories, fixed order
    std::map<std::string, std::string> merge_map;

    void validate() const; // merge_map total over raw_types, values in merged_types
};

// Built-in ontology; data/question_type_merge.json mirrors it.
QuestionTypeOntology default_ontology();
QuestionTypeOntology load_ontology(const std::filesystem::path& path);

class QuestionClassifier {
public:
    virtual ~QuestionClassifier() = default;
    virtual std::string name() const = 0;
    virtual std::string classify(const std::string& question) const = 0; // raw type
};

// Keyword/auxiliary pattern rules; lower fidelity than a trained classifier
// but fully deterministic.
class RuleBasedQuestionClassifier : public QuestionClassifier {
public:
    std::string name() const override { return "rules"; }
    std::string classify(const std::string& question) const override;
};

struct TypeDistribution {
    std::size_t total = 0;
    std::map<std::string, std::size_t> counts;    // merged type -> count
    std::map<std::string, double> fractions;      // merged type -> count/total
};

TypeDistribution question_type_distribution(const ConvQADataset& ds,
                                            const QuestionClassifier& classifier,
                                            const QuestionTypeOntology& ontology);

// --- pairwise judge ---------------------------------------------------------

// Fills the fixed pairwise-comparison prompt template. All fields must be
// non-empty after whitespace normalization.
std::string build_judge_prompt(const std::string& context, const std::string& question_a,
                               const std::string& question_b, const std::string& answer);

inline constexpr const char* kJudgeEndpointEnvVar = "CONVQA_JUDGE_ENDPOINT";

// Endpoint from the environment, if configured.
std::optional<std::string> judge_endpoint();

// POSTs the prompt to an "http://host[:port][/path]" endpoint and returns the
// response body. Network errors throw.
std::string query_judge(const std::string& endpoint, const std::string& prompt);

} // namespace convqa
