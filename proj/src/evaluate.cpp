#include "convqa/evaluate.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "convqa/text.hpp"

namespace convqa {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string ConstantMetric::name() const {
    std::ostringstream os;
    os << "constant:" << value_;
    return os.str();
}

namespace {

std::map<std::string, MetricFactory>& metric_registry() {
    static std::map<std::string, MetricFactory> registry{
        {"lexical-overlap", [] { return std::make_unique<LexicalOverlapMetric>(); }},
    };
    return registry;
}

} // namespace

void register_metric(const std::string& name, MetricFactory factory) {
    auto [it, inserted] = metric_registry().emplace(name, std::move(factory));
    (void)it;
    if (!inserted) {
        throw std::invalid_argument("register_metric: metric '" + name + "' already registered");
    }
}

std::unique_ptr<MetricPlugin> make_metric(const std::string& name) {
    if (name.rfind("constant:", 0) == 0) {
        const std::string value = name.substr(9);
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            return std::make_unique<ConstantMetric>(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("make_metric: bad constant value '" + value + "'");
        }
    }
    const auto& registry = metric_registry();
    const auto it = registry.find(name);
    if (it == registry.end()) {
        std::string known = "constant:<value>";
        for (const auto& [k, v] : registry) {
            (void)v;
            known += ", " + k;
        }
        throw std::invalid_argument("make_metric: unknown metric '" + name + "' (known: " + known +
                                    ")");
    }
    return it->second();
}

std::vector<std::string> metric_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : metric_registry()) {
        (void)v;
        names.push_back(k);
    }
    return names;
}

// --- dataset statistics ---------------------------------------------------

DatasetStatistics dataset_statistics(const ConvQADataset& ds) {
    if (ds.dialogs.empty()) {
        throw std::invalid_argument("dataset_statistics: dataset has no dialogs");
    }
    DatasetStatistics stats;
    stats.num_dialogs = ds.dialogs.size();
    std::size_t total = 0;
    for (const Dialog& d : ds.dialogs) {
        total += d.turn_count();
        ++stats.turn_histogram[d.turn_count()];
    }
    const double mean = static_cast<double>(total) / static_cast<double>(ds.dialogs.size());
    stats.mean_turns = std::round(mean * 100.0) / 100.0;
    return stats;
}

std::string dialog_context(const Dialog& d) {
    std::string out;
    for (const Utterance& u : d.utterances) {
        if (u.role != Role::Agent) continue;
        if (!out.empty()) out += ' ';
        out += u.text;
    }
    return out;
}

// --- metric harness ---------------------------------------------------------

std::vector<MetricReport> evaluate_dataset(const ConvQADataset& ds,
                                           const std::vector<const MetricPlugin*>& metrics) {
    if (ds.dialogs.empty()) {
        throw std::invalid_argument("evaluate_dataset: dataset has no dialogs");
    }
    std::vector<MetricReport> reports;
    for (const MetricPlugin* metric : metrics) {
        MetricReport report;
        report.metric = metric->name();
        double sum = 0.0;
        std::size_t count = 0;
        try {
            for (const Dialog& d : ds.dialogs) {
                const std::string context = dialog_context(d);
                double dialog_sum = 0.0;
                std::size_t dialog_count = 0;
                for (const QAPair& pair : qa_pairs(d)) {
                    const double v = metric->evaluate(context, pair.question.text,
                                                      pair.answer.text);
                    if (!std::isfinite(v)) {
                        throw std::runtime_error("metric '" + report.metric +
                                                 "' returned a non-finite value");
                    }
                    dialog_sum += v;
                    ++dialog_count;
                }
                if (dialog_count > 0) {
                    report.per_dialog_mean[d.id] =
                        dialog_sum / static_cast<double>(dialog_count);
                    sum += dialog_sum;
                    count += dialog_count;
                }
            }
            if (count == 0) {
                throw std::runtime_error("dataset has no question turns");
            }
            report.mean = sum / static_cast<double>(count);
            report.question_turns = count;
        } catch (const std::exception& e) {
            report = MetricReport{};
            report.metric = metric->name();
            report.available = false;
            report.error = e.what();
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

// --- question-type profiling -----------------------------------------------

void QuestionTypeOntology::validate() const {
    if (raw_types.empty()) throw std::invalid_argument("QuestionTypeOntology: no raw types");
    if (merged_types.empty()) throw std::invalid_argument("QuestionTypeOntology: no merged types");
    for (const std::string& raw : raw_types) {
        const auto it = merge_map.find(raw);
        if (it == merge_map.end()) {
            throw std::invalid_argument("QuestionTypeOntology: raw type '" + raw +
                                        "' has no merge entry");
        }
        if (std::find(merged_types.begin(), merged_types.end(), it->second) ==
            merged_types.end()) {
            throw std::invalid_argument("QuestionTypeOntology: raw type '" + raw +
                                        "' maps to unknown merged type '" + it->second + "'");
        }
    }
    if (merge_map.size() != raw_types.size()) {
        throw std::invalid_argument("QuestionTypeOntology: merge_map has entries outside raw_types");
    }
}

namespace {

// Keep in sync with data/question_type_merge.json (parity test).
const std::pair<const char*, const char*> kDefaultMergeMap[] = {
    {"verification", "verification"},
    {"disjunctive", "verification"},
    {"concept_completion", "concept"},
    {"feature_specification", "concept"},
    {"definition", "concept"},
    {"quantification", "quantification"},
    {"example", "example"},
    {"comparison", "comparison"},
    {"interpretation", "other"},
    {"causal_antecedent", "causal"},
    {"causal_consequence", "causal"},
    {"goal_orientation", "causal"},
    {"procedural", "procedural"},
    {"enablement", "procedural"},
    {"expectation", "other"},
    {"judgmental", "judgmental"},
    {"assertion", "other"},
    {"request", "other"},
};

const char* const kMergedTypes[] = {
    "verification", "concept", "quantification", "example", "comparison",
    "causal",       "procedural", "judgmental",  "other",
};

} // namespace

QuestionTypeOntology default_ontology() {
    QuestionTypeOntology o;
    for (const auto& [raw, merged] : kDefaultMergeMap) {
        o.raw_types.emplace_back(raw);
        o.merge_map.emplace(raw, merged);
    }
    o.merged_types.assign(std::begin(kMergedTypes), std::end(kMergedTypes));
    o.validate();
    return o;
}

QuestionTypeOntology load_ontology(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_ontology: cannot open " + path.string());
    ordered_json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error("load_ontology: " + path.string() + ": " + e.what());
    }
    QuestionTypeOntology o;
    for (const auto& t : doc.at("merged_types")) o.merged_types.push_back(t.get<std::string>());
    for (const auto& [raw, merged] : doc.at("merge_map").items()) {
        o.raw_types.push_back(raw);
        o.merge_map.emplace(raw, merged.get<std::string>());
    }
    o.validate();
    return o;
}

namespace {

bool starts_with_any(const std::string& s, std::initializer_list<const char*> prefixes) {
    for (const char* p : prefixes) {
        if (s.rfind(p, 0) == 0) return true;
    }
    return false;
}

bool contains_any(const std::string& s, std::initializer_list<const char*> needles) {
    for (const char* n : needles) {
        if (s.find(n) != std::string::npos) return true;
    }
    return false;
}

} // namespace

std::string RuleBasedQuestionClassifier::classify(const std::string& question) const {
    const std::string q = to_lower(normalize_whitespace(question));
    if (q.empty() || q.find('?') == std::string::npos) return "assertion";
    // rules are ordered; the first hit wins
    if (starts_with_any(q, {"what if", "what would happen"})) return "expectation";
    if (starts_with_any(q, {"can you", "could you", "would you", "will you", "please"})) {
        return "request";
    }
    if (starts_with_any(q, {"why"})) return "causal_antecedent";
    if (starts_with_any(q, {"what happens", "what happened"})) return "causal_consequence";
    if (contains_any(q, {"in order to"}) ||
        starts_with_any(q, {"what is needed", "what do i need", "what do you need"})) {
        return "enablement";
    }
    if (contains_any(q, {"purpose of"}) ||
        starts_with_any(q, {"what is the purpose", "what was the purpose"})) {
        return "goal_orientation";
    }
    if (starts_with_any(q, {"how many", "how much", "how often", "how tall", "how long",
                            "how old", "how far", "how big", "how wide", "how high",
                            "how heavy"})) {
        return "quantification";
    }
    if (starts_with_any(q, {"how"})) return "procedural";
    if (contains_any(q, {"difference between", "compared to", "similar to", "similarities"}) ||
        starts_with_any(q, {"compare"})) {
        return "comparison";
    }
    if (contains_any(q, {"mean by", "interpret"})) return "interpretation";
    if ((starts_with_any(q, {"what does"}) && contains_any(q, {" mean"})) ||
        starts_with_any(q, {"what is the definition", "define "})) {
        return "definition";
    }
    if (starts_with_any(q, {"what kind", "what type", "what sort", "what color", "what colour",
                            "what shape", "what properties"})) {
        return "feature_specification";
    }
    if (contains_any(q, {"an example", "examples of", "for example", "such as"})) {
        return "example";
    }
    if (starts_with_any(q, {"do you think", "what do you think", "should i", "should we",
                            "is it better"})) {
        return "judgmental";
    }
    if (starts_with_any(q, {"is ", "are ", "was ", "were ", "am ", "do ", "does ", "did ",
                            "can ", "could ", "will ", "would ", "shall ", "should ", "has ",
                            "have ", "had ", "must ", "may ", "might "})) {
        return q.find(" or ") != std::string::npos ? "disjunctive" : "verification";
    }
    return "concept_completion";
}

TypeDistribution question_type_distribution(const ConvQADataset& ds,
                                            const QuestionClassifier& classifier,
                                            const QuestionTypeOntology& ontology) {
    ontology.validate();
    TypeDistribution dist;
    for (const std::string& merged : ontology.merged_types) dist.counts[merged] = 0;
    for (const Dialog& d : ds.dialogs) {
        for (const QAPair& pair : qa_pairs(d)) {
            const std::string raw = classifier.classify(pair.question.text);
            const auto it = ontology.merge_map.find(raw);
            if (it == ontology.merge_map.end()) {
                throw std::runtime_error("question_type_distribution: classifier '" +
                                         classifier.name() + "' returned unknown raw type '" +
                                         raw + "'");
            }
            ++dist.counts[it->second];
            ++dist.total;
        }
    }
    if (dist.total == 0) {
        throw std::invalid_argument("question_type_distribution: dataset has no question turns");
    }
    for (const auto& [merged, count] : dist.counts) {
        dist.fractions[merged] = static_cast<double>(count) / static_cast<double>(dist.total);
    }
    return dist;
}

// --- pairwise judge ---------------------------------------------------------

std::string build_judge_prompt(const std::string& context, const std::string& question_a,
                               const std::string& question_b, const std::string& answer) {
    const struct {
        const char* name;
        const std::string* value;
    } fields[] = {{"context", &context},
                  {"question_a", &question_a},
                  {"question_b", &question_b},
                  {"answer", &answer}};
    for (const auto& f : fields) {
        if (normalize_whitespace(*f.value).empty()) {
            throw std::invalid_argument(std::string("build_judge_prompt: ") + f.name +
                                        " is empty");
        }
    }
    std::string out;
    out += "This is a task to evaluate the quality of a conversational question answering "
           "dataset. You will be given [context, two candidate questions, answer], and your "
           "task is to compare the quality of the candidate questions based on four criteria: "
           "contextual relevance, well-formedness, fluency, overall quality. For each "
           "criteria, answer which question is better.\n";
    out += "\n";
    out += "1. Contextual Relevance: whether the question relevant to the answer/context\n";
    out += "2. Well-formedness: whether the question is well-formed\n";
    out += "3. Overall Quality: overall quality of the question\n";
    out += "\n";
    out += "• Context: " + context + "\n";
    out += "• Question A: " + question_a + "\n";
    out += "• Question B: " + question_b + "\n";
    out += "• Answer: " + answer + "\n";
    out += "\n";
    out += "Choose the question which is more relevant to the given answer.\n";
    out += "options: [Question A, Equal, Question B]\n";
    out += "Choose the question which is more well-formed?\n";
    out += "options: [Question A, Equal, Question B]\n";
    out += "Choose the question which has better overall-quality.\n";
    out += "options: [Question A, Equal, Question B]\n";
    return out;
}

std::optional<std::string> judge_endpoint() {
    const char* value = std::getenv(kJudgeEndpointEnvVar);
    if (!value || *value == '\0') return std::nullopt;
    return std::string(value);
}

} // namespace convqa
