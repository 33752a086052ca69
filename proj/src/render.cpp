#include "convqa/render.hpp"

namespace convqa {

RenderElement RenderElement::plain(std::string text) {
    RenderElement e;
    e.kind = Kind::Plain;
    e.text = std::move(text);
    return e;
}

RenderElement RenderElement::turn(Role role, std::string text) {
    RenderElement e;
    e.kind = Kind::Turn;
    e.role = role;
    e.text = std::move(text);
    return e;
}

RenderElement RenderElement::mask(Role role, std::string keyword_prompt) {
    RenderElement e;
    e.kind = Kind::Mask;
    e.role = role;
    e.keyword_prompt = std::move(keyword_prompt);
    return e;
}

std::string render_elements(const std::vector<RenderElement>& elements,
                            const RenderOptions& opts) {
    std::string out;
    bool first = true;
    for (const RenderElement& e : elements) {
        if (!first) out += opts.separator;
        first = false;
        switch (e.kind) {
            case RenderElement::Kind::Plain:
                out += e.text;
                break;
            case RenderElement::Kind::Turn:
                out += opts.prefix(e.role);
                out += e.text;
                break;
            case RenderElement::Kind::Mask:
                out += opts.prefix(e.role);
                if (!e.keyword_prompt.empty()) {
                    out += e.keyword_prompt;
                    out += opts.separator;
                }
                out += opts.mask_sentinel;
                break;
        }
    }
    return out;
}

std::string render_dialog(const Dialog& d, const RenderOptions& opts) {
    std::vector<RenderElement> elements;
    elements.reserve(d.utterances.size());
    for (const Utterance& u : d.utterances) {
        elements.push_back(RenderElement::turn(u.role, u.text));
    }
    return render_elements(elements, opts);
}

std::string render_masked_dialog(const MaskedDialog& m, const RenderOptions& opts,
                                 std::string_view keyword_prompt) {
    std::vector<RenderElement> elements;
    elements.reserve(m.base.utterances.size());
    for (std::size_t i = 0; i < m.base.utterances.size(); ++i) {
        const Utterance& u = m.base.utterances[i];
        if (i == m.mask_index) {
            elements.push_back(RenderElement::mask(u.role, std::string(keyword_prompt)));
        } else {
            elements.push_back(RenderElement::turn(u.role, u.text));
        }
    }
    RenderOptions local = opts;
    if (!m.mask_sentinel.empty()) local.mask_sentinel = m.mask_sentinel;
    return render_elements(elements, local);
}

std::string render_qa(const Utterance& question, const Utterance& answer,
                      const RenderOptions& opts) {
    return render_elements({RenderElement::turn(question.role, question.text),
                            RenderElement::turn(answer.role, answer.text)},
                           opts);
}

} // namespace convqa
