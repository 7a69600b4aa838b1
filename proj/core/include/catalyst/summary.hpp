#pragma once

#include <string_view>

#include "catalyst/model.hpp"

namespace catalyst {

// Every write below trims the text, recomputes word_count, clears approval
// and bumps the revision. A session past Summarize falls back to Summarize
// so that later stages never see an unapproved summary.

// Typed path: replaces any existing summary, source = typed.
Summary set_summary_text(SessionState& state, std::string_view text);

// Stores an LLM-produced summary, source = uploaded.
Summary store_uploaded_summary(SessionState& state, std::string_view text);

// Teacher edit of an existing summary; source is preserved.
Summary edit_summary(SessionState& state, std::string_view text);

// Marks the summary approved and moves the session to Conceptualize.
void approve_summary(SessionState& state);

}  // namespace catalyst
