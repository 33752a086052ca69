#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "convqa/corpus.hpp"
#include "convqa/dataset.hpp"

namespace convqa {

// A generated question paired with its source passage (the single relevant
// document under binary relevance).
struct QueryPassagePair {
    std::string query_id; // "<dialog id>#<question turn index>"
    std::string query;
    std::string passage_id;
    std::string passage_text;

    bool operator==(const QueryPassagePair&) const = default;
};

// One pair per question turn, dialogs in dataset order. cap = 0 means no
// limit. A dialog without a resolvable source passage raises an error naming
// that dialog.
std::vector<QueryPassagePair> build_pairs(const ConvQADataset& ds, const PassageStore& corpus,
                                          std::size_t cap = 0);

struct RankedRetrieval {
    std::string query_id;
    std::vector<std::string> ranked_passage_ids; // no duplicates
    std::set<std::string> relevant_ids;
};

// Binary-relevance metrics. k must be >= 1; an empty relevant set makes the
// metric undefined and throws std::domain_error (aggregation counts these as
// exclusions). NDCG uses the log2(rank+1) discount with ideal normalization;
// MAP averages precision at relevant ranks over min(|relevant|, k);
// Recall@k = |relevant in top k| / |relevant|.
double ndcg_at_k(const RankedRetrieval& r, std::size_t k);
double map_at_k(const RankedRetrieval& r, std::size_t k);
double recall_at_k(const RankedRetrieval& r, std::size_t k);

struct RetrievalRow {
    std::string metric; // "ndcg", "map", "recall"
    std::size_t k = 0;
    double mean = 0.0;
    std::size_t evaluated = 0;
    std::size_t excluded = 0; // queries with an empty relevant set
};

std::vector<RetrievalRow> evaluate_rankings(const std::vector<RankedRetrieval>& rankings,
                                            const std::vector<std::size_t>& ks);

// --- retriever plug-ins ----------------------------------------------------

// Dual-encoder training defaults; the toolkit only transports these to the
// plug-in.
struct RetrieverTrainConfig {
    int batch_size = 32;
    double learning_rate = 1e-4;
    int epochs = 10;
    int warmup_steps = 0;
    std::uint64_t seed = 0;
};

class RetrieverPlugin {
public:
    virtual ~RetrieverPlugin() = default;
    virtual std::string name() const = 0;
    virtual void train(const std::vector<QueryPassagePair>& pairs,
                       const RetrieverTrainConfig& cfg) = 0;
    virtual std::vector<std::string> rank(const std::string& query, const PassageStore& corpus,
                                          std::size_t top_k) const = 0;
};

// Baseline plug-in: a seeded random permutation per query. Useless as a
// retriever, ideal for validating the harness against analytic expectations.
class ShuffleRetriever : public RetrieverPlugin {
public:
    explicit ShuffleRetriever(std::uint64_t seed) : seed_(seed) {}
    std::string name() const override { return "shuffle"; }
    void train(const std::vector<QueryPassagePair>&, const RetrieverTrainConfig&) override {}
    std::vector<std::string> rank(const std::string& query, const PassageStore& corpus,
                                  std::size_t top_k) const override;

private:
    std::uint64_t seed_;
};

// --- benchmark / static-ranking files ---------------------------------------

struct BenchmarkQuery {
    std::string query_id;
    std::string query;
    std::vector<std::string> relevant;
};

// JSONL records {"query_id", "query", "relevant": [...]}
std::vector<BenchmarkQuery> load_benchmark(const std::filesystem::path& path);

// JSONL records {"query_id", "ranking": [...]}
std::map<std::string, std::vector<std::string>> load_static_rankings(
    const std::filesystem::path& path);

std::vector<RetrievalRow> evaluate_static_rankings(
    const std::vector<BenchmarkQuery>& benchmark,
    const std::map<std::string, std::vector<std::string>>& rankings,
    const std::vector<std::size_t>& ks);

struct ZeroshotResult {
    std::vector<std::pair<std::uint64_t, std::vector<RetrievalRow>>> per_seed;
    std::vector<RetrievalRow> mean;   // over seeds
    std::vector<RetrievalRow> stddev; // sample standard deviation; 0 for one seed
};

using RetrieverFactory = std::function<std::unique_ptr<RetrieverPlugin>(std::uint64_t seed)>;

// Runs the retriever once per seed over the benchmark and aggregates the
// metric table across seeds.
ZeroshotResult run_zeroshot_eval(const std::vector<BenchmarkQuery>& benchmark,
                                 const PassageStore& corpus,
                                 const RetrieverFactory& make_retriever,
                                 const std::vector<std::uint64_t>& seeds,
                                 const std::vector<std::size_t>& ks);

inline const std::vector<std::size_t> kDefaultRetrievalKs = {10};

} // namespace convqa
