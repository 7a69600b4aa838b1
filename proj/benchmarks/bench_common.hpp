#pragma once

#include <string>

#include "catalyst/concept_graph.hpp"
#include "catalyst/questions.hpp"
#include "catalyst/session.hpp"
#include "catalyst/summary.hpp"

namespace catalyst::bench {

// Session with `groups` groups of five questions each, every other question
// accepted.
inline SessionState populated_session(std::size_t groups) {
  SessionState s = make_session(SessionId("bench"), Timestamp(std::chrono::milliseconds(1'700'000'000'000)));
  set_summary_text(s, "Students design a package that protects a raw egg dropped from a height of three meters.");
  approve_summary(s);
  for (std::size_t g = 0; g < groups; ++g) {
    Concept c = create_custom_concept(s, "concept " + std::to_string(g));
    place_concept(s, c.id, 10.0 * g, 5.0);
    GroupId gid = create_group(s).id;
    toggle_concept_in_group(s, gid, c.id);
    std::vector<std::string> texts;
    for (int i = 0; i < 5; ++i) {
      texts.push_back("How would you test the cushioning of design " + std::to_string(g) + "-" + std::to_string(i) + "?");
    }
    auto qs = append_generated_questions(s, gid, texts);
    for (std::size_t i = 0; i < qs.size(); i += 2) review_question(s, qs[i].id, Accept{});
  }
  return s;
}

}  // namespace catalyst::bench
