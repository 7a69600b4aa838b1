#pragma once

#include "catalyst/model.hpp"

namespace catalyst {

// Fresh session at Summarize with an empty graph, no groups and an empty bank.
SessionState make_session(SessionId id, Timestamp now);

// Non-linear navigation: any stage is reachable once the summary is approved,
// only Summarize before that. Touches nothing but `stage`.
void set_stage(SessionState& state, Stage target);

}  // namespace catalyst
