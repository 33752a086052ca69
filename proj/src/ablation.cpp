#include "convqa/ablation.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "convqa/evaluate.hpp"

namespace convqa {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::vector<AblationCell> ablation_grid() {
    std::vector<AblationCell> grid;
    const std::pair<bool, bool> tasks[] = {{false, false}, {true, false}, {false, true},
                                           {true, true}};
    for (const auto& [qam, tdg] : tasks) {
        for (const bool rerank : {false, true}) {
            AblationCell cell;
            cell.qam = qam;
            cell.tdg = tdg;
            cell.rerank = rerank;
            std::string name = "dr";
            if (qam) name += "+qam";
            if (tdg) name += "+tdg";
            name += rerank ? "_rerank-on" : "_rerank-off";
            cell.name = std::move(name);
            grid.push_back(std::move(cell));
        }
    }
    return grid;
}

std::vector<AblationCellResult> run_ablation(const TrainingData& data,
                                             const std::vector<Passage>& passages,
                                             const AblationConfig& cfg,
                                             const KeywordExtractor& extractor,
                                             const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::unique_ptr<RelevanceScorer> scorer = make_scorer(cfg.scorer);
    const std::unique_ptr<MetricPlugin> metric = make_metric(cfg.metric);

    std::vector<AblationCellResult> results;
    for (const AblationCell& cell : ablation_grid()) {
        const std::filesystem::path cell_dir = out_dir / cell.name;
        std::filesystem::create_directories(cell_dir);

        TrainingConfig train_cfg = cfg.training;
        if (!cell.qam) train_cfg.lambda_qam = 0.0;
        if (!cell.tdg) train_cfg.lambda_tdg = 0.0;

        const std::unique_ptr<GeneratorBackend> backend = make_backend(cfg.backend);
        const TrainResult trained = train(data, train_cfg, *backend, extractor, cell_dir);

        GenerationConfig gen_cfg = cfg.generation;
        gen_cfg.rerank = cell.rerank;
        gen_cfg.candidate_retention = true; // audits need the full beams
        const ConvQADataset ds =
            inpaint_corpus(passages, *backend, extractor, scorer.get(), gen_cfg,
                           cfg.dataset_name + "-" + cell.name);
        write_dataset(ds, cell_dir / "dataset.jsonl");

        const std::vector<MetricReport> reports = evaluate_dataset(ds, {metric.get()});
        if (reports.size() != 1 || !reports.front().available) {
            throw std::runtime_error("run_ablation: metric '" + cfg.metric +
                                     "' unavailable for cell " + cell.name +
                                     (reports.empty() ? "" : ": " + reports.front().error));
        }

        AblationCellResult result;
        result.cell = cell;
        result.metric_mean = reports.front().mean;
        result.question_turns = reports.front().question_turns;
        result.final_combined_loss = trained.final_combined;
        result.cell_dir = cell_dir;
        results.push_back(result);

        ordered_json tasks = ordered_json::array();
        tasks.push_back("dr");
        if (cell.qam) tasks.push_back("qam");
        if (cell.tdg) tasks.push_back("tdg");
        const ordered_json manifest{
            {"format", "convqa.ablation-cell"},
            {"cell", cell.name},
            {"tasks", tasks},
            {"rerank", cell.rerank},
            {"metric", cfg.metric},
            {"metric_mean", result.metric_mean},
            {"question_turns", result.question_turns},
            {"final_combined_loss", result.final_combined_loss},
        };
        std::ofstream out(cell_dir / "cell_manifest.json", std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("run_ablation: cannot open " +
                                     (cell_dir / "cell_manifest.json").string());
        }
        out << manifest.dump(2) << '\n';
    }

    ordered_json table = ordered_json::array();
    for (const AblationCellResult& r : results) {
        table.push_back(ordered_json{{"cell", r.cell.name},
                                     {"qam", r.cell.qam},
                                     {"tdg", r.cell.tdg},
                                     {"rerank", r.cell.rerank},
                                     {"metric_mean", r.metric_mean},
                                     {"final_combined_loss", r.final_combined_loss}});
    }
    {
        std::ofstream out(out_dir / "ablation.json", std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("run_ablation: cannot open " +
                                     (out_dir / "ablation.json").string());
        }
        out << table.dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir / "ablation.txt", std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("run_ablation: cannot open " +
                                     (out_dir / "ablation.txt").string());
        }
        out << std::left << std::setw(24) << "cell" << std::setw(14) << cfg.metric
            << "final_loss\n";
        for (const AblationCellResult& r : results) {
            std::ostringstream mm, fl;
            mm << std::fixed << std::setprecision(6) << r.metric_mean;
            fl << std::fixed << std::setprecision(6) << r.final_combined_loss;
            out << std::left << std::setw(24) << r.cell.name << std::setw(14) << mm.str()
                << fl.str() << '\n';
        }
    }
    return results;
}

} // namespace convqa
