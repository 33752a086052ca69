#include "convqa/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "convqa/rng.hpp"
#include "convqa/text.hpp"

namespace convqa {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::vector<QueryPassagePair> build_pairs(const ConvQADataset& ds, const PassageStore& corpus,
                                          std::size_t cap) {
    std::vector<QueryPassagePair> pairs;
    for (const Dialog& d : ds.dialogs) {
        if (!d.source_passage_id) {
            throw std::runtime_error("build_pairs: dialog '" + d.id +
                                     "' has no source passage id");
        }
        const Passage* passage = corpus.find(*d.source_passage_id);
        if (!passage) {
            throw std::runtime_error("build_pairs: dialog '" + d.id +
                                     "' references unknown passage '" + *d.source_passage_id +
                                     "'");
        }
        for (const QAPair& qa : qa_pairs(d)) {
            if (cap > 0 && pairs.size() == cap) return pairs;
            QueryPassagePair pair;
            pair.query_id = d.id + "#" + std::to_string(qa.turn_index);
            pair.query = qa.question.text;
            pair.passage_id = passage->id;
            pair.passage_text = passage->normalized_text();
            pairs.push_back(std::move(pair));
        }
    }
    return pairs;
}

namespace {

void check_ranking(const RankedRetrieval& r, std::size_t k) {
    if (k < 1) throw std::invalid_argument("retrieval metric: k must be >= 1");
    if (r.relevant_ids.empty()) {
        throw std::domain_error("retrieval metric: query '" + r.query_id +
                                "' has an empty relevant set");
    }
    std::set<std::string> seen;
    for (const std::string& id : r.ranked_passage_ids) {
        if (!seen.insert(id).second) {
            throw std::invalid_argument("retrieval metric: query '" + r.query_id +
                                        "' ranking repeats passage '" + id + "'");
        }
    }
}

} // namespace

double ndcg_at_k(const RankedRetrieval& r, std::size_t k) {
    check_ranking(r, k);
    const std::size_t depth = std::min(k, r.ranked_passage_ids.size());
    double dcg = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (r.relevant_ids.count(r.ranked_passage_ids[i])) {
            dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
    }
    const std::size_t ideal = std::min(k, r.relevant_ids.size());
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal; ++i) {
        idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    return dcg / idcg;
}

double map_at_k(const RankedRetrieval& r, std::size_t k) {
    check_ranking(r, k);
    const std::size_t depth = std::min(k, r.ranked_passage_ids.size());
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (r.relevant_ids.count(r.ranked_passage_ids[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    const std::size_t denom = std::min(r.relevant_ids.size(), k);
    return sum / static_cast<double>(denom);
}

double recall_at_k(const RankedRetrieval& r, std::size_t k) {
    check_ranking(r, k);
    const std::size_t depth = std::min(k, r.ranked_passage_ids.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (r.relevant_ids.count(r.ranked_passage_ids[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(r.relevant_ids.size());
}

std::vector<RetrievalRow> evaluate_rankings(const std::vector<RankedRetrieval>& rankings,
                                            const std::vector<std::size_t>& ks) {
    if (ks.empty()) throw std::invalid_argument("evaluate_rankings: no k values");
    using MetricFn = double (*)(const RankedRetrieval&, std::size_t);
    const std::pair<const char*, MetricFn> metrics[] = {
        {"ndcg", &ndcg_at_k}, {"map", &map_at_k}, {"recall", &recall_at_k}};
    std::vector<RetrievalRow> rows;
    for (const std::size_t k : ks) {
        for (const auto& [name, fn] : metrics) {
            RetrievalRow row;
            row.metric = name;
            row.k = k;
            double sum = 0.0;
            for (const RankedRetrieval& r : rankings) {
                if (r.relevant_ids.empty()) {
                    ++row.excluded;
                    continue;
                }
                sum += fn(r, k);
                ++row.evaluated;
            }
            if (row.evaluated == 0) {
                throw std::runtime_error("evaluate_rankings: every query was excluded for " +
                                         std::string(name) + "@" + std::to_string(k));
            }
            row.mean = sum / static_cast<double>(row.evaluated);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<std::string> ShuffleRetriever::rank(const std::string& query,
                                                const PassageStore& corpus,
                                                std::size_t top_k) const {
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const Passage& p : corpus.all()) ids.push_back(p.id);
    Rng rng(fnv1a64(query, seed_));
    for (std::size_t i = ids.size(); i > 1; --i) {
        std::swap(ids[i - 1], ids[rng.uniform_index(i)]);
    }
    if (ids.size() > top_k) ids.resize(top_k);
    return ids;
}

std::vector<BenchmarkQuery> load_benchmark(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_benchmark: cannot open " + path.string());
    std::vector<BenchmarkQuery> queries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (normalize_whitespace(line).empty()) continue;
        try {
            const ordered_json rec = ordered_json::parse(line);
            BenchmarkQuery q;
            q.query_id = rec.at("query_id").get<std::string>();
            q.query = rec.at("query").get<std::string>();
            q.relevant = rec.at("relevant").get<std::vector<std::string>>();
            queries.push_back(std::move(q));
        } catch (const std::exception& e) {
            throw std::runtime_error("load_benchmark: " + path.string() + " line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
    }
    if (queries.empty()) {
        throw std::runtime_error("load_benchmark: " + path.string() + " has no queries");
    }
    return queries;
}

std::map<std::string, std::vector<std::string>> load_static_rankings(
    const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_static_rankings: cannot open " + path.string());
    std::map<std::string, std::vector<std::string>> rankings;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (normalize_whitespace(line).empty()) continue;
        try {
            const ordered_json rec = ordered_json::parse(line);
            const std::string id = rec.at("query_id").get<std::string>();
            if (rankings.count(id)) {
                throw std::runtime_error("duplicate query_id '" + id + "'");
            }
            rankings[id] = rec.at("ranking").get<std::vector<std::string>>();
        } catch (const std::exception& e) {
            throw std::runtime_error("load_static_rankings: " + path.string() + " line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
    }
    return rankings;
}

namespace {

std::vector<RankedRetrieval> to_ranked(const std::vector<BenchmarkQuery>& benchmark,
                                       const std::function<std::vector<std::string>(
                                           const BenchmarkQuery&)>& ranking_of) {
    std::vector<RankedRetrieval> rankings;
    for (const BenchmarkQuery& q : benchmark) {
        RankedRetrieval r;
        r.query_id = q.query_id;
        r.ranked_passage_ids = ranking_of(q);
        r.relevant_ids.insert(q.relevant.begin(), q.relevant.end());
        rankings.push_back(std::move(r));
    }
    return rankings;
}

} // namespace

std::vector<RetrievalRow> evaluate_static_rankings(
    const std::vector<BenchmarkQuery>& benchmark,
    const std::map<std::string, std::vector<std::string>>& rankings,
    const std::vector<std::size_t>& ks) {
    return evaluate_rankings(
        to_ranked(benchmark,
                  [&](const BenchmarkQuery& q) {
                      const auto it = rankings.find(q.query_id);
                      if (it == rankings.end()) {
                          throw std::runtime_error(
                              "evaluate_static_rankings: no ranking for query '" + q.query_id +
                              "'");
                      }
                      return it->second;
                  }),
        ks);
}

ZeroshotResult run_zeroshot_eval(const std::vector<BenchmarkQuery>& benchmark,
                                 const PassageStore& corpus,
                                 const RetrieverFactory& make_retriever,
                                 const std::vector<std::uint64_t>& seeds,
                                 const std::vector<std::size_t>& ks) {
    if (seeds.empty()) throw std::invalid_argument("run_zeroshot_eval: no seeds");
    if (ks.empty()) throw std::invalid_argument("run_zeroshot_eval: no k values");
    const std::size_t top_k = *std::max_element(ks.begin(), ks.end());

    ZeroshotResult result;
    for (const std::uint64_t seed : seeds) {
        const std::unique_ptr<RetrieverPlugin> retriever = make_retriever(seed);
        if (!retriever) {
            throw std::runtime_error("run_zeroshot_eval: retriever factory returned null");
        }
        auto rankings = to_ranked(benchmark, [&](const BenchmarkQuery& q) {
            return retriever->rank(q.query, corpus, top_k);
        });
        result.per_seed.emplace_back(seed, evaluate_rankings(rankings, ks));
    }

    const std::vector<RetrievalRow>& first = result.per_seed.front().second;
    for (std::size_t i = 0; i < first.size(); ++i) {
        RetrievalRow mean_row = first[i];
        double sum = 0.0;
        for (const auto& [seed, rows] : result.per_seed) {
            (void)seed;
            sum += rows[i].mean;
        }
        const double mean = sum / static_cast<double>(result.per_seed.size());
        mean_row.mean = mean;

        RetrievalRow std_row = first[i];
        double var = 0.0;
        if (result.per_seed.size() > 1) {
            for (const auto& [seed, rows] : result.per_seed) {
                (void)seed;
                const double d = rows[i].mean - mean;
                var += d * d;
            }
            var /= static_cast<double>(result.per_seed.size() - 1);
        }
        std_row.mean = std::sqrt(var);

        result.mean.push_back(std::move(mean_row));
        result.stddev.push_back(std::move(std_row));
    }
    return result;
}

} // namespace convqa
