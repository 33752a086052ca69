#include "convqa/backend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "convqa/keywords.hpp"
#include "convqa/rng.hpp"
#include "convqa/text.hpp"

namespace convqa {

const std::optional<double>& StepLosses::for_task(Task t) const {
    switch (t) {
    case Task::DialogReconstruction: return dr;
    case Task::QuestionAnswerMatching: return qam;
    case Task::TopicDialogGeneration: return tdg;
    }
    throw std::invalid_argument("StepLosses: unknown task");
}

std::optional<double>& StepLosses::for_task(Task t) {
    return const_cast<std::optional<double>&>(std::as_const(*this).for_task(t));
}

// --- stub backend --------------------------------------------------------

StubBackend::StubBackend(RenderOptions render_options)
    : render_options_(std::move(render_options)) {}

std::uint64_t StubBackend::example_key(const std::string& input, const std::string& target) const {
    return fnv1a64(target, fnv1a64(input));
}

double StubBackend::loss(const std::string& input, const std::string& target) const {
    const std::uint64_t key = example_key(input, target);
    const double base = 1.5 + static_cast<double>(key % 1000) / 1000.0;
    const auto it = weights_.find(key);
    const double w = it == weights_.end() ? 0.0 : it->second;
    return base / (1.0 + w);
}

StepLosses StubBackend::train_step(const std::vector<TrainingExample>& batch) {
    if (batch.empty()) throw std::invalid_argument("StubBackend::train_step: empty batch");
    double sums[3] = {0.0, 0.0, 0.0};
    std::size_t counts[3] = {0, 0, 0};
    for (const TrainingExample& ex : batch) {
        const auto slot = static_cast<std::size_t>(ex.task);
        sums[slot] += loss(ex.input, ex.target);
        ++counts[slot];
    }
    // losses are reported pre-update
    for (const TrainingExample& ex : batch) {
        weights_[example_key(ex.input, ex.target)] += 1.0;
    }
    StepLosses out;
    const Task tasks[3] = {Task::DialogReconstruction, Task::QuestionAnswerMatching,
                           Task::TopicDialogGeneration};
    for (std::size_t i = 0; i < 3; ++i) {
        if (counts[i] > 0) out.for_task(tasks[i]) = sums[i] / static_cast<double>(counts[i]);
    }
    return out;
}

namespace {

std::string lowercase_first(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

std::string expand(const std::string& tmpl, const std::string& k1, const std::string& k2) {
    std::string out;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] == '\x01') out += k1;
        else if (tmpl[i] == '\x02') out += k2;
        else out += tmpl[i];
    }
    return out;
}

// \x01 = first keyword, \x02 = second keyword (or first again)
const char* const kQuestionTemplates[] = {
    "What is \x01?",
    "Can you tell me about \x01?",
    "How does \x02 work?",
    "What do you know about \x01?",
    "Why is \x02 important?",
    "Is there anything else about \x01?",
};
constexpr std::size_t kTemplateCount = std::size(kQuestionTemplates);

} // namespace

CandidateSet StubBackend::generate(const std::string& input, std::size_t beam_size) {
    if (beam_size == 0) throw std::invalid_argument("StubBackend::generate: beam_size must be > 0");

    // The generated question must depend only on the masked slot itself (its
    // keyword hint and the answer that follows the sentinel), never on the
    // dialog history, so that candidate sets for a given answer are stable
    // across histories.
    const std::string& sentinel = render_options_.mask_sentinel;
    const std::size_t mask_pos = input.find(sentinel);

    std::string keyword_region;
    std::string answer_region;
    if (mask_pos != std::string::npos) {
        const std::string before = input.substr(0, mask_pos);
        const std::size_t kw = before.rfind(kKeywordPromptPrefix);
        if (kw != std::string::npos) {
            keyword_region = normalize_whitespace(before.substr(kw + std::string(kKeywordPromptPrefix).size()));
        }
        answer_region = normalize_whitespace(input.substr(mask_pos + sentinel.size()));
        const std::string& agent = render_options_.agent_prefix;
        if (answer_region.rfind(agent, 0) == 0) answer_region = answer_region.substr(agent.size());
    } else {
        answer_region = normalize_whitespace(input);
    }

    std::vector<std::string> keywords;
    {
        std::size_t start = 0;
        while (start < keyword_region.size()) {
            std::size_t comma = keyword_region.find(", ", start);
            if (comma == std::string::npos) comma = keyword_region.size();
            const std::string k = keyword_region.substr(start, comma - start);
            if (!k.empty()) keywords.push_back(k);
            start = comma + 2;
        }
    }
    const std::string k1 = keywords.empty() ? "this topic" : keywords[0];
    const std::string k2 = keywords.size() > 1 ? keywords[1] : k1;

    Rng rng(fnv1a64(answer_region, fnv1a64(keyword_region)));
    std::size_t perm[kTemplateCount];
    for (std::size_t i = 0; i < kTemplateCount; ++i) perm[i] = i;
    for (std::size_t i = kTemplateCount - 1; i > 0; --i) {
        std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
    }

    CandidateSet set;
    for (std::size_t i = 0; i < beam_size; ++i) {
        std::string text = expand(kQuestionTemplates[perm[i % kTemplateCount]], k1, k2);
        const std::size_t cycle = i / kTemplateCount;
        if (cycle > 0) {
            std::string prefix;
            for (std::size_t c = 0; c < cycle; ++c) prefix += "Really, ";
            text = prefix + lowercase_first(text);
        }
        Candidate cand;
        cand.text = std::move(text);
        cand.model_score = 1.0 / (1.0 + static_cast<double>(i));
        set.candidates.push_back(std::move(cand));
    }
    set.validate();
    return set;
}

void StubBackend::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    nlohmann::json weights = nlohmann::json::object();
    for (const auto& [key, value] : weights_) {
        weights[to_hex(key)] = value;
    }
    nlohmann::json doc{{"format", "convqa.stub-backend"}, {"version", 1}, {"weights", weights}};
    std::ofstream out(dir / "stub_weights.json", std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("StubBackend::save: cannot open " +
                                 (dir / "stub_weights.json").string());
    }
    out << doc.dump(2) << '\n';
}

void StubBackend::load(const std::filesystem::path& dir) {
    std::ifstream in(dir / "stub_weights.json", std::ios::binary);
    if (!in) {
        throw std::runtime_error("StubBackend::load: cannot open " +
                                 (dir / "stub_weights.json").string());
    }
    nlohmann::json doc;
    in >> doc;
    if (doc.value("format", std::string()) != "convqa.stub-backend") {
        throw std::runtime_error("StubBackend::load: not a stub backend checkpoint");
    }
    weights_.clear();
    for (const auto& [hex, value] : doc.at("weights").items()) {
        weights_[std::stoull(hex, nullptr, 16)] = value.get<double>();
    }
}

// --- registry ------------------------------------------------------------

namespace {

std::map<std::string, BackendFactory>& backend_registry() {
    static std::map<std::string, BackendFactory> registry{
        {"stub", [] { return std::make_unique<StubBackend>(); }},
    };
    return registry;
}

} // namespace

void register_backend(const std::string& name, BackendFactory factory) {
    auto [it, inserted] = backend_registry().emplace(name, std::move(factory));
    (void)it;
    if (!inserted) {
        throw std::invalid_argument("register_backend: backend '" + name + "' already registered");
    }
}

std::unique_ptr<GeneratorBackend> make_backend(const std::string& name) {
    const auto& registry = backend_registry();
    const auto it = registry.find(name);
    if (it == registry.end()) {
        std::string known;
        for (const auto& [k, v] : registry) {
            (void)v;
            if (!known.empty()) known += ", ";
            known += k;
        }
        throw std::invalid_argument("make_backend: unknown backend '" + name + "' (known: " +
                                    known + ")");
    }
    return it->second();
}

std::vector<std::string> backend_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : backend_registry()) {
        (void)v;
        names.push_back(k);
    }
    return names;
}

} // namespace convqa
