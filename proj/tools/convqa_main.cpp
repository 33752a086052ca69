// convqa command line: train / generate / evaluate / stats / retrieval-eval / ablate.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "convqa/ablation.hpp"
#include "convqa/backend.hpp"
#include "convqa/corpus.hpp"
#include "convqa/dataset.hpp"
#include "convqa/evaluate.hpp"
#include "convqa/inpaint.hpp"
#include "convqa/manifest.hpp"
#include "convqa/rerank.hpp"
#include "convqa/retrieval.hpp"
#include "convqa/text.hpp"
#include "convqa/trainer.hpp"
#include "convqa/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace convqa;

namespace {

struct SharedState {
    // one run manifest per invocation
    RunManifest manifest;
    fs::path output_dir;

    void start(const std::string& command) {
        manifest.command = command;
        manifest.code_version = kVersion;
        manifest.started_at = utc_timestamp();
    }

    void fingerprint(const std::string& name, const fs::path& path) {
        manifest.corpus_fingerprints[name] = fingerprint_file(path);
    }

    void finish(const ordered_json& config, std::uint64_t seed) {
        manifest.config_json = config.dump();
        manifest.seed = seed;
        manifest.finished_at = utc_timestamp();
        fs::create_directories(output_dir);
        write_run_manifest(manifest, output_dir / "run_manifest.json");
    }
};

// Registry corpora grouped for training; every dialog feeds reconstruction,
// QA-style dialogs additionally feed matching / topic generation.
TrainingData load_training_data(const fs::path& registry_path, SharedState& state) {
    TrainingData data;
    state.fingerprint("registry", registry_path);
    for (const CorpusDescriptor& desc : load_corpus_registry(registry_path)) {
        if (desc.kind == CorpusKind::TextPassages) continue;
        const DialogCorpus corpus = load_dialog_corpus(desc);
        state.fingerprint(desc.name, desc.path.string());
        for (const std::string& warning : corpus.warnings) {
            std::cerr << "warning: corpus " << desc.name << ": " << warning << "\n";
        }
        std::cerr << "loaded corpus " << desc.name << ": " << corpus.dialogs.size()
                  << " dialogs, mean turns " << std::fixed << std::setprecision(2)
                  << corpus.mean_turns() << " (" << corpus.skipped << " skipped)\n";
        for (const Dialog& d : corpus.dialogs) {
            data.reconstruction_dialogs.push_back(d);
            if (desc.kind == CorpusKind::ConvQADialog) data.convqa_dialogs.push_back(d);
        }
        data.corpus_fingerprints[desc.name] = state.manifest.corpus_fingerprints[desc.name];
    }
    if (data.reconstruction_dialogs.empty()) {
        throw std::runtime_error("registry " + registry_path.string() +
                                 " provided no dialog corpora");
    }
    return data;
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(static_cast<std::size_t>(std::stoull(item)));
    }
    if (out.empty()) throw std::invalid_argument("empty list: '" + csv + "'");
    return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    for (const std::size_t v : parse_size_list(csv)) out.push_back(v);
    return out;
}

ordered_json rows_to_json(const std::vector<RetrievalRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const RetrievalRow& r : rows) {
        arr.push_back(ordered_json{{"metric", r.metric},
                                   {"k", r.k},
                                   {"mean", r.mean},
                                   {"evaluated", r.evaluated},
                                   {"excluded", r.excluded}});
    }
    return arr;
}

int cmd_train(const fs::path& config_path, const fs::path& registry_path, const fs::path& out_dir,
              const std::string& backend_name, const std::optional<double>& lambda_qam,
              const std::optional<double>& lambda_tdg, const std::optional<std::uint64_t>& seed) {
    SharedState state;
    state.start("train");
    state.output_dir = out_dir;
    state.fingerprint("config", config_path);

    TrainingConfig cfg = load_training_config(config_path);
    if (lambda_qam) cfg.lambda_qam = *lambda_qam;
    if (lambda_tdg) cfg.lambda_tdg = *lambda_tdg;
    if (seed) cfg.seed = *seed;

    const TrainingData data = load_training_data(registry_path, state);
    const std::unique_ptr<GeneratorBackend> backend = make_backend(backend_name);
    const FrequencyKeywordExtractor extractor;
    const TrainResult result = train(data, cfg, *backend, extractor, out_dir);

    std::cout << "trained " << result.steps_run << " steps; combined loss "
              << result.initial_combined << " -> " << result.final_combined << "\n"
              << "checkpoint: " << result.checkpoint_dir.string() << "\n"
              << "metrics: " << result.metrics_path.string() << "\n";

    ordered_json config = ordered_json::parse(training_config_to_json(cfg));
    config["backend"] = backend_name;
    state.finish(config, cfg.seed);
    return 0;
}

int cmd_generate(const std::optional<fs::path>& checkpoint, const fs::path& passages_path,
                 const fs::path& out_dir, const std::string& dataset_name,
                 const std::string& backend_name, GenerationConfig gen_cfg,
                 const std::string& scorer_name) {
    SharedState state;
    state.start("generate");
    state.output_dir = out_dir;
    state.fingerprint("passages", passages_path);

    std::unique_ptr<GeneratorBackend> backend;
    if (checkpoint) {
        CheckpointInfo info;
        backend = load_checkpoint(*checkpoint, &info);
        std::cerr << "loaded checkpoint " << checkpoint->string() << " (backend "
                  << info.backend << ", step " << info.step << ")\n";
    } else {
        backend = make_backend(backend_name);
    }

    const RuleSegmenter segmenter;
    const std::vector<Passage> passages = load_passages(passages_path, segmenter);
    const FrequencyKeywordExtractor extractor;
    std::unique_ptr<RelevanceScorer> scorer;
    if (gen_cfg.rerank) scorer = make_scorer(scorer_name);

    InpaintReport report;
    const ConvQADataset ds = inpaint_corpus(passages, *backend, extractor, scorer.get(), gen_cfg,
                                            dataset_name, &report);
    fs::create_directories(out_dir);
    const fs::path dataset_path = out_dir / (dataset_name + ".jsonl");
    write_dataset(ds, dataset_path);

    std::cout << "inpainted " << report.succeeded << "/" << report.attempted << " passages ("
              << report.failures.size() << " failed)\n"
              << "dataset: " << dataset_path.string() << "\n";
    for (const auto& [id, reason] : report.failures) {
        std::cerr << "failed passage " << id << ": " << reason << "\n";
    }

    const ordered_json config{{"checkpoint", checkpoint ? checkpoint->string() : ""},
                              {"backend", backend->name()},
                              {"dataset_name", dataset_name},
                              {"beam_size", gen_cfg.beam_size},
                              {"rerank", gen_cfg.rerank},
                              {"scorer", gen_cfg.rerank ? scorer_name : ""},
                              {"max_keywords", gen_cfg.max_keywords},
                              {"candidate_retention", gen_cfg.candidate_retention},
                              {"prompt_template", gen_cfg.prompt_template}};
    state.finish(config, 0);
    return 0;
}

int cmd_evaluate(const fs::path& dataset_path, const fs::path& out_dir,
                 const std::vector<std::string>& metric_specs) {
    SharedState state;
    state.start("evaluate");
    state.output_dir = out_dir;
    state.fingerprint("dataset", dataset_path);

    const ConvQADataset ds = read_dataset(dataset_path);
    std::vector<std::unique_ptr<MetricPlugin>> metrics;
    std::vector<const MetricPlugin*> metric_ptrs;
    for (const std::string& spec : metric_specs) {
        metrics.push_back(make_metric(spec));
        metric_ptrs.push_back(metrics.back().get());
    }
    const std::vector<MetricReport> reports = evaluate_dataset(ds, metric_ptrs);

    ordered_json table = ordered_json::array();
    for (const MetricReport& r : reports) {
        ordered_json row{{"metric", r.metric}, {"available", r.available}};
        if (r.available) {
            row["mean"] = r.mean;
            row["question_turns"] = r.question_turns;
        } else {
            row["error"] = r.error;
        }
        table.push_back(std::move(row));
        if (r.available) {
            std::cout << r.metric << ": mean " << std::setprecision(6) << r.mean << " over "
                      << r.question_turns << " question turns\n";
        } else {
            std::cout << r.metric << ": unavailable (" << r.error << ")\n";
        }
    }
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "evaluation.json", std::ios::binary | std::ios::trunc);
    out << table.dump(2) << '\n';

    ordered_json config{{"dataset", dataset_path.string()}};
    config["metrics"] = metric_specs;
    state.finish(config, 0);
    return 0;
}

int cmd_stats(const fs::path& dataset_path, const fs::path& out_dir, bool with_types,
              const std::optional<fs::path>& ontology_path) {
    SharedState state;
    state.start("stats");
    state.output_dir = out_dir;
    state.fingerprint("dataset", dataset_path);

    const ConvQADataset ds = read_dataset(dataset_path);
    const DatasetStatistics stats = dataset_statistics(ds);

    ordered_json doc{{"dataset", ds.name},
                     {"num_dialogs", stats.num_dialogs},
                     {"mean_turns", stats.mean_turns}};
    ordered_json hist = ordered_json::object();
    for (const auto& [turns, count] : stats.turn_histogram) {
        hist[std::to_string(turns)] = count;
    }
    doc["turn_histogram"] = hist;

    if (with_types) {
        const QuestionTypeOntology ontology =
            ontology_path ? load_ontology(*ontology_path) : default_ontology();
        const RuleBasedQuestionClassifier classifier;
        const TypeDistribution dist = question_type_distribution(ds, classifier, ontology);
        ordered_json types = ordered_json::object();
        for (const std::string& merged : ontology.merged_types) {
            types[merged] = ordered_json{{"count", dist.counts.at(merged)},
                                         {"fraction", dist.fractions.at(merged)}};
        }
        doc["question_types"] = types;
        doc["question_turns"] = dist.total;
    }

    std::cout << doc.dump(2) << "\n";
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "stats.json", std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << '\n';

    ordered_json config{{"dataset", dataset_path.string()}, {"types", with_types}};
    state.finish(config, 0);
    return 0;
}

int cmd_retrieval_eval(const std::optional<fs::path>& dataset_path,
                       const std::optional<fs::path>& passages_path,
                       const std::optional<fs::path>& benchmark_path,
                       const std::optional<fs::path>& rankings_path, const fs::path& out_dir,
                       const std::string& retriever_name, const std::string& seeds_csv,
                       const std::string& ks_csv, std::size_t cap,
                       const std::optional<fs::path>& export_pairs) {
    SharedState state;
    state.start("retrieval-eval");
    state.output_dir = out_dir;

    const std::vector<std::size_t> ks = parse_size_list(ks_csv);
    fs::create_directories(out_dir);

    PassageStore store;
    if (passages_path) {
        state.fingerprint("passages", *passages_path);
        const RuleSegmenter segmenter;
        store = PassageStore(load_passages(*passages_path, segmenter));
    }

    std::vector<BenchmarkQuery> benchmark;
    if (benchmark_path) {
        state.fingerprint("benchmark", *benchmark_path);
        benchmark = load_benchmark(*benchmark_path);
    } else if (dataset_path) {
        // each generated question queries for its own source passage
        if (!passages_path) {
            throw std::runtime_error("retrieval-eval: --dataset needs --passages to resolve ids");
        }
        state.fingerprint("dataset", *dataset_path);
        const ConvQADataset ds = read_dataset(*dataset_path);
        const std::vector<QueryPassagePair> pairs = build_pairs(ds, store, cap);
        if (export_pairs) {
            std::ofstream out(*export_pairs, std::ios::binary | std::ios::trunc);
            for (const QueryPassagePair& p : pairs) {
                out << ordered_json{{"query_id", p.query_id},
                                    {"query", p.query},
                                    {"passage_id", p.passage_id}}
                           .dump()
                    << '\n';
            }
            std::cout << "pairs: " << export_pairs->string() << " (" << pairs.size() << ")\n";
        }
        for (const QueryPassagePair& p : pairs) {
            benchmark.push_back(BenchmarkQuery{p.query_id, p.query, {p.passage_id}});
        }
    } else {
        throw std::runtime_error("retrieval-eval: need --benchmark or --dataset");
    }

    ordered_json doc;
    if (rankings_path) {
        state.fingerprint("rankings", *rankings_path);
        const auto rankings = load_static_rankings(*rankings_path);
        const std::vector<RetrievalRow> rows = evaluate_static_rankings(benchmark, rankings, ks);
        doc = ordered_json{{"mode", "static"}, {"rows", rows_to_json(rows)}};
        for (const RetrievalRow& r : rows) {
            std::cout << r.metric << "@" << r.k << ": " << std::setprecision(6) << r.mean << "\n";
        }
    } else {
        if (store.size() == 0) {
            throw std::runtime_error("retrieval-eval: retriever mode needs --passages");
        }
        if (retriever_name != "shuffle") {
            throw std::runtime_error("retrieval-eval: unknown retriever '" + retriever_name +
                                     "' (known: shuffle; static rankings via --rankings)");
        }
        const std::vector<std::uint64_t> seeds = parse_seed_list(seeds_csv);
        const ZeroshotResult result = run_zeroshot_eval(
            benchmark, store,
            [](std::uint64_t seed) { return std::make_unique<ShuffleRetriever>(seed); }, seeds,
            ks);
        ordered_json per_seed = ordered_json::array();
        for (const auto& [seed, rows] : result.per_seed) {
            per_seed.push_back(ordered_json{{"seed", seed}, {"rows", rows_to_json(rows)}});
        }
        doc = ordered_json{{"mode", retriever_name},
                           {"per_seed", per_seed},
                           {"mean", rows_to_json(result.mean)},
                           {"stddev", rows_to_json(result.stddev)}};
        for (std::size_t i = 0; i < result.mean.size(); ++i) {
            std::cout << result.mean[i].metric << "@" << result.mean[i].k << ": "
                      << std::setprecision(6) << result.mean[i].mean << " +/- "
                      << result.stddev[i].mean << " over " << result.per_seed.size()
                      << " seeds\n";
        }
    }
    std::ofstream out(out_dir / "retrieval.json", std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << '\n';

    const ordered_json config{{"retriever", rankings_path ? "static" : retriever_name},
                              {"k", ks_csv},
                              {"seeds", seeds_csv},
                              {"cap", cap}};
    state.finish(config, 0);
    return 0;
}

int cmd_ablate(const fs::path& config_path, const fs::path& registry_path,
               const fs::path& passages_path, const fs::path& out_dir,
               const std::string& backend_name, const std::string& scorer_name,
               const std::string& metric_name, int beam_size) {
    SharedState state;
    state.start("ablate");
    state.output_dir = out_dir;
    state.fingerprint("config", config_path);
    state.fingerprint("passages", passages_path);

    AblationConfig cfg;
    cfg.training = load_training_config(config_path);
    if (cfg.training.lambda_qam <= 0.0) cfg.training.lambda_qam = 0.1;
    if (cfg.training.lambda_tdg <= 0.0) cfg.training.lambda_tdg = 0.1;
    cfg.generation.beam_size = beam_size;
    cfg.backend = backend_name;
    cfg.scorer = scorer_name;
    cfg.metric = metric_name;

    const TrainingData data = load_training_data(registry_path, state);
    const RuleSegmenter segmenter;
    const std::vector<Passage> passages = load_passages(passages_path, segmenter);
    const FrequencyKeywordExtractor extractor;

    const std::vector<AblationCellResult> results =
        run_ablation(data, passages, cfg, extractor, out_dir);
    for (const AblationCellResult& r : results) {
        std::cout << std::left << std::setw(24) << r.cell.name << std::setprecision(6)
                  << r.metric_mean << "\n";
    }
    std::cout << "table: " << (out_dir / "ablation.txt").string() << "\n";

    ordered_json config = ordered_json::parse(training_config_to_json(cfg.training));
    config["backend"] = backend_name;
    config["scorer"] = scorer_name;
    config["metric"] = metric_name;
    config["beam_size"] = beam_size;
    state.finish(config, cfg.training.seed);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"convqa: build conversational question-answering datasets from text corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // train
    auto* train_cmd = app.add_subcommand("train", "Train an inpainter backend on dialog corpora");
    std::string train_config, train_registry, train_output, train_backend = "stub";
    std::optional<double> train_lambda_qam, train_lambda_tdg;
    std::optional<std::uint64_t> train_seed;
    train_cmd->add_option("--config", train_config, "training config JSON")->required();
    train_cmd->add_option("--corpus", train_registry, "corpus registry JSON")->required();
    train_cmd->add_option("--output", train_output, "output directory")->required();
    train_cmd->add_option("--backend", train_backend, "generator backend name");
    train_cmd->add_option("--lambda-qam", train_lambda_qam, "override lambda_qam");
    train_cmd->add_option("--lambda-tdg", train_lambda_tdg, "override lambda_tdg");
    train_cmd->add_option("--seed", train_seed, "override seed");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Inpaint passages into a ConvQA dataset");
    std::string gen_passages, gen_output, gen_name = "dataset", gen_backend = "stub";
    std::string gen_scorer = "lexical-overlap";
    std::optional<std::string> gen_checkpoint;
    GenerationConfig gen_cfg;
    gen_cmd->add_option("--checkpoint", gen_checkpoint, "checkpoint directory");
    gen_cmd->add_option("--passages", gen_passages, "passages JSONL")->required();
    gen_cmd->add_option("--output", gen_output, "output directory")->required();
    gen_cmd->add_option("--name", gen_name, "dataset name");
    gen_cmd->add_option("--backend", gen_backend, "backend when no checkpoint is given");
    gen_cmd->add_option("--beam-size", gen_cfg.beam_size, "beam size")->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--rerank,!--no-rerank", gen_cfg.rerank, "relevance re-ranking");
    gen_cmd->add_option("--scorer", gen_scorer, "relevance scorer name");
    gen_cmd->add_option("--keywords", gen_cfg.max_keywords, "max keywords per answer")
        ->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--retain-candidates", gen_cfg.candidate_retention,
                      "store all beam candidates in the sidecar");
    gen_cmd->add_option("--title-template", gen_cfg.prompt_template, "title prompt template");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Run reference-free metrics over a dataset");
    std::string eval_dataset, eval_output;
    std::vector<std::string> eval_metrics{"lexical-overlap"};
    eval_cmd->add_option("--dataset", eval_dataset, "dataset JSONL")->required();
    eval_cmd->add_option("--output", eval_output, "output directory")->required();
    eval_cmd->add_option("--metric", eval_metrics, "metric names (repeatable)");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics and question-type profile");
    std::string stats_dataset, stats_output;
    bool stats_types = false;
    std::optional<std::string> stats_ontology;
    stats_cmd->add_option("--dataset", stats_dataset, "dataset JSONL")->required();
    stats_cmd->add_option("--output", stats_output, "output directory")->required();
    stats_cmd->add_flag("--types", stats_types, "include question-type distribution");
    stats_cmd->add_option("--ontology", stats_ontology, "question-type merge JSON");

    // retrieval-eval
    auto* retr_cmd = app.add_subcommand("retrieval-eval", "Zero-shot retrieval harness");
    std::optional<std::string> retr_dataset, retr_passages, retr_benchmark, retr_rankings,
        retr_export;
    std::string retr_output, retr_retriever = "shuffle", retr_seeds = "0", retr_ks = "10";
    std::size_t retr_cap = 0;
    retr_cmd->add_option("--dataset", retr_dataset, "generated dataset JSONL");
    retr_cmd->add_option("--passages", retr_passages, "passages JSONL");
    retr_cmd->add_option("--benchmark", retr_benchmark, "benchmark queries JSONL");
    retr_cmd->add_option("--rankings", retr_rankings, "static rankings JSONL");
    retr_cmd->add_option("--output", retr_output, "output directory")->required();
    retr_cmd->add_option("--retriever", retr_retriever, "retriever plug-in name");
    retr_cmd->add_option("--seeds", retr_seeds, "comma-separated seeds");
    retr_cmd->add_option("--k", retr_ks, "comma-separated k values");
    retr_cmd->add_option("--cap", retr_cap, "max pairs built from the dataset");
    retr_cmd->add_option("--export-pairs", retr_export, "write query/passage pairs JSONL");

    // ablate
    auto* abl_cmd = app.add_subcommand("ablate", "Run the 8-cell task x rerank ablation grid");
    std::string abl_config, abl_registry, abl_passages, abl_output, abl_backend = "stub";
    std::string abl_scorer = "lexical-overlap", abl_metric = "lexical-overlap";
    int abl_beam = 5;
    abl_cmd->add_option("--config", abl_config, "training config JSON")->required();
    abl_cmd->add_option("--corpus", abl_registry, "corpus registry JSON")->required();
    abl_cmd->add_option("--passages", abl_passages, "passages JSONL")->required();
    abl_cmd->add_option("--output", abl_output, "output directory")->required();
    abl_cmd->add_option("--backend", abl_backend, "generator backend name");
    abl_cmd->add_option("--scorer", abl_scorer, "relevance scorer name");
    abl_cmd->add_option("--metric", abl_metric, "evaluation metric name");
    abl_cmd->add_option("--beam-size", abl_beam, "beam size")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // 0
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e); // 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (train_cmd->parsed()) {
            return cmd_train(train_config, train_registry, train_output, train_backend,
                             train_lambda_qam, train_lambda_tdg, train_seed);
        }
        if (gen_cmd->parsed()) {
            std::optional<fs::path> checkpoint;
            if (gen_checkpoint) checkpoint = *gen_checkpoint;
            return cmd_generate(checkpoint, gen_passages, gen_output, gen_name, gen_backend,
                                gen_cfg, gen_scorer);
        }
        if (eval_cmd->parsed()) return cmd_evaluate(eval_dataset, eval_output, eval_metrics);
        if (stats_cmd->parsed()) {
            std::optional<fs::path> ontology;
            if (stats_ontology) ontology = *stats_ontology;
            return cmd_stats(stats_dataset, stats_output, stats_types, ontology);
        }
        if (retr_cmd->parsed()) {
            auto opt_path = [](const std::optional<std::string>& s) {
                return s ? std::optional<fs::path>(*s) : std::nullopt;
            };
            return cmd_retrieval_eval(opt_path(retr_dataset), opt_path(retr_passages),
                                      opt_path(retr_benchmark), opt_path(retr_rankings),
                                      retr_output, retr_retriever, retr_seeds, retr_ks, retr_cap,
                                      opt_path(retr_export));
        }
        if (abl_cmd->parsed()) {
            return cmd_ablate(abl_config, abl_registry, abl_passages, abl_output, abl_backend,
                              abl_scorer, abl_metric, abl_beam);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}
