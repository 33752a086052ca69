#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "convqa/dialog.hpp"

namespace convqa {

// Model-facing sentinel tokens (e.g. "<extra_id_0>") are a backend concern;
// this is the toolkit-level default.
inline constexpr std::string_view kDefaultMaskSentinel = "<mask>";

struct RenderOptions {
    std::string user_prefix = "User: ";
    std::string agent_prefix = "Agent: ";
    std::string separator = " ";
    std::string mask_sentinel = std::string(kDefaultMaskSentinel);

    const std::string& prefix(Role r) const {
        return r == Role::User ? user_prefix : agent_prefix;
    }
};

// One element of a rendered sequence:
//   Plain  -> text                                   (prompts, bare hints)
//   Turn   -> role prefix + text
//   Mask   -> role prefix [+ keyword prompt + sep] + sentinel
// Training inputs and inference contexts are both rendered through
// render_elements, so the two formats cannot drift.
struct RenderElement {
    enum class Kind { Plain, Turn, Mask };

    Kind kind = Kind::Plain;
    Role role = Role::User;      // Turn, Mask
    std::string text;            // Plain, Turn
    std::string keyword_prompt;  // Mask; empty = no keyword hint

    static RenderElement plain(std::string text);
    static RenderElement turn(Role role, std::string text);
    static RenderElement mask(Role role, std::string keyword_prompt = "");
};

std::string render_elements(const std::vector<RenderElement>& elements,
                            const RenderOptions& opts);

// Full dialog with role prefixes.
std::string render_dialog(const Dialog& d, const RenderOptions& opts);

// Dialog with the masked slot replaced by the sentinel; a non-empty
// keyword_prompt lands inside the masked slot, directly before the sentinel.
std::string render_masked_dialog(const MaskedDialog& m, const RenderOptions& opts,
                                 std::string_view keyword_prompt = "");

// "User: <q> Agent: <a>"
std::string render_qa(const Utterance& question, const Utterance& answer,
                      const RenderOptions& opts);

} // namespace convqa
