// pybind11 surface: the main toolkit operations for scripting and smoke tests.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "convqa/backend.hpp"
#include "convqa/corpus.hpp"
#include "convqa/evaluate.hpp"
#include "convqa/inpaint.hpp"
#include "convqa/keywords.hpp"
#include "convqa/rerank.hpp"
#include "convqa/retrieval.hpp"
#include "convqa/trainer.hpp"
#include "convqa/version.hpp"

namespace py = pybind11;
using namespace convqa;

namespace {

std::vector<std::string> segment_sentences(const std::string& text) {
    return RuleSegmenter().segment(text);
}

std::vector<std::string> extract_keywords(const std::string& text, std::size_t max_keywords) {
    return FrequencyKeywordExtractor().extract(text, max_keywords);
}

double combined_loss_py(double l_dr, double l_qam, double l_tdg, double lambda_qam,
                        double lambda_tdg) {
    TrainingConfig cfg;
    cfg.lambda_qam = lambda_qam;
    cfg.lambda_tdg = lambda_tdg;
    return combined_loss(l_dr, l_qam, l_tdg, cfg);
}

RankedRetrieval make_ranked(const std::vector<std::string>& ranking,
                            const std::vector<std::string>& relevant) {
    RankedRetrieval r;
    r.query_id = "py";
    r.ranked_passage_ids = ranking;
    r.relevant_ids.insert(relevant.begin(), relevant.end());
    return r;
}

double relevance_py(const std::string& context, const std::string& question,
                    const std::string& answer) {
    return LexicalOverlapScorer().score(context, question, answer);
}

py::dict inpaint_text(const std::string& id, const std::string& title, const std::string& text,
                      int beam_size, bool rerank, int max_keywords) {
    const RuleSegmenter segmenter;
    const Passage passage = segment_passage(id, title, text, segmenter);
    StubBackend backend;
    const FrequencyKeywordExtractor extractor;
    const LexicalOverlapScorer scorer;
    GenerationConfig cfg;
    cfg.beam_size = beam_size;
    cfg.rerank = rerank;
    cfg.max_keywords = max_keywords;
    const InpaintedDialog result = inpaint_passage(passage, backend, extractor, &scorer, cfg);

    py::list turns;
    for (std::size_t t = 0; t + 1 < result.dialog.utterances.size(); t += 2) {
        py::dict turn;
        turn["question"] = result.dialog.utterances[t].text;
        turn["answer"] = result.dialog.utterances[t + 1].text;
        turn["keywords"] = result.meta.turns[t / 2].keywords;
        turns.append(turn);
    }
    py::dict out;
    out["id"] = result.dialog.id;
    out["title"] = title;
    out["prompt"] = result.meta.prompt_text;
    out["turns"] = turns;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "convqa core operations";
    m.attr("__version__") = kVersion;

    m.def("segment_sentences", &segment_sentences, py::arg("text"),
          "Split text into sentences with the rule-based segmenter.");
    m.def("extract_keywords", &extract_keywords, py::arg("text"), py::arg("max_keywords") = 3,
          "Frequency-based keywords of a sentence.");
    m.def("keyword_prompt", &format_keyword_prompt, py::arg("keywords"),
          "Render the 'Keyword: ...' hint used in model inputs.");
    m.def("combined_loss", &combined_loss_py, py::arg("l_dr"), py::arg("l_qam"), py::arg("l_tdg"),
          py::arg("lambda_qam") = 0.1, py::arg("lambda_tdg") = 0.1,
          "Weighted multi-task training loss.");
    m.def("relevance", &relevance_py, py::arg("context"), py::arg("question"), py::arg("answer"),
          "Lexical-overlap relevance of a question to (context, answer).");
    m.def(
        "ndcg_at_k",
        [](const std::vector<std::string>& ranking, const std::vector<std::string>& relevant,
           std::size_t k) { return ndcg_at_k(make_ranked(ranking, relevant), k); },
        py::arg("ranking"), py::arg("relevant"), py::arg("k"));
    m.def(
        "map_at_k",
        [](const std::vector<std::string>& ranking, const std::vector<std::string>& relevant,
           std::size_t k) { return map_at_k(make_ranked(ranking, relevant), k); },
        py::arg("ranking"), py::arg("relevant"), py::arg("k"));
    m.def(
        "recall_at_k",
        [](const std::vector<std::string>& ranking, const std::vector<std::string>& relevant,
           std::size_t k) { return recall_at_k(make_ranked(ranking, relevant), k); },
        py::arg("ranking"), py::arg("relevant"), py::arg("k"));
    m.def("build_judge_prompt", &build_judge_prompt, py::arg("context"), py::arg("question_a"),
          py::arg("question_b"), py::arg("answer"),
          "Pairwise question-comparison prompt for an external judge.");
    m.def("inpaint", &inpaint_text, py::arg("id"), py::arg("title"), py::arg("text"),
          py::arg("beam_size") = 5, py::arg("rerank") = true, py::arg("max_keywords") = 3,
          "Turn a passage into a ConvQA dialog with the stub backend.");
}
