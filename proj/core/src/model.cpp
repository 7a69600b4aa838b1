#include "catalyst/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "catalyst/text.hpp"

namespace catalyst {

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Summarize: return "summarize";
    case Stage::Conceptualize: return "conceptualize";
    case Stage::Synthesize: return "synthesize";
  }
  return "summarize";
}

std::optional<Stage> parse_stage(std::string_view s) noexcept {
  if (s == "summarize") return Stage::Summarize;
  if (s == "conceptualize") return Stage::Conceptualize;
  if (s == "synthesize") return Stage::Synthesize;
  return std::nullopt;
}

std::string_view to_string(SummarySource source) noexcept {
  return source == SummarySource::Uploaded ? "uploaded" : "typed";
}

std::string_view to_string(QuestionStatus status) noexcept {
  switch (status) {
    case QuestionStatus::Pending: return "pending";
    case QuestionStatus::Accepted: return "accepted";
    case QuestionStatus::Rejected: return "rejected";
  }
  return "pending";
}

Concept* ConceptGraph::find(const ConceptId& id) noexcept {
  auto it = std::find_if(concepts.begin(), concepts.end(), [&](const Concept& c) { return c.id == id; });
  return it == concepts.end() ? nullptr : &*it;
}

const Concept* ConceptGraph::find(const ConceptId& id) const noexcept {
  return const_cast<ConceptGraph*>(this)->find(id);
}

const Edge* ConceptGraph::find_edge(const EdgeId& id) const noexcept {
  auto it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.id == id; });
  return it == edges.end() ? nullptr : &*it;
}

bool QuestionGroup::is_attached(const ConceptId& c) const noexcept {
  return std::find(attached.begin(), attached.end(), c) != attached.end();
}

QuestionGroup* SessionState::find_group(const GroupId& id) noexcept {
  auto it = std::find_if(groups.begin(), groups.end(), [&](const QuestionGroup& g) { return g.id == id; });
  return it == groups.end() ? nullptr : &*it;
}

const QuestionGroup* SessionState::find_group(const GroupId& id) const noexcept {
  return const_cast<SessionState*>(this)->find_group(id);
}

Question* SessionState::find_question(const QuestionId& id) noexcept {
  for (auto& g : groups) {
    for (auto& q : g.questions) {
      if (q.id == id) return &q;
    }
  }
  return nullptr;
}

const Question* SessionState::find_question(const QuestionId& id) const noexcept {
  return const_cast<SessionState*>(this)->find_question(id);
}

ConceptId SessionState::next_concept_id() { return ConceptId("c" + std::to_string(counters.concept_id++)); }
EdgeId SessionState::next_edge_id() { return EdgeId("e" + std::to_string(counters.edge_id++)); }
GroupId SessionState::next_group_id() { return GroupId("g" + std::to_string(counters.group_id++)); }
QuestionId SessionState::next_question_id() { return QuestionId("q" + std::to_string(counters.question_id++)); }

namespace {

// Serial number of an id minted by next_*_id, if it has that shape.
std::optional<std::uint64_t> serial_of(const std::string& id, char prefix) {
  if (id.size() < 2 || id[0] != prefix) return std::nullopt;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), v);
  if (ec != std::errc{} || p != id.data() + id.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<std::string> invariant_violations(const SessionState& s) {
  std::vector<std::string> out;
  auto fail = [&](std::string msg) { out.push_back(std::move(msg)); };

  if (s.id.empty()) fail("session id is empty");
  if (s.stage != Stage::Summarize && !s.has_approved_summary()) {
    fail("stage beyond summarize without an approved summary");
  }
  if (s.summary) {
    const Summary& sum = *s.summary;
    if (sum.word_count != text::word_count(sum.text)) fail("summary word_count mismatch");
    if (sum.approved && text::is_blank(sum.text)) fail("approved summary is blank");
    if (sum.revision < 1) fail("summary revision below 1");
  }

  std::set<std::string> concept_ids;
  for (const Concept& c : s.graph.concepts) {
    if (!concept_ids.insert(c.id.str()).second) fail("duplicate concept id " + c.id.str());
    if (c.label.empty() || text::trim(c.label) != c.label) fail("concept label not trimmed/non-empty: " + c.id.str());
    if (auto v = serial_of(c.id.str(), 'c'); v && *v >= s.counters.concept_id) fail("concept counter behind " + c.id.str());
    if (c.position && (!std::isfinite(c.position->x) || !std::isfinite(c.position->y))) {
      fail("non-finite position on " + c.id.str());
    }
    if (const HighlightOrigin* h = c.highlight()) {
      if (h->start >= h->end) fail("empty highlight span on " + c.id.str());
      if (s.summary && h->summary_revision == s.summary->revision) {
        std::size_t len = text::utf8_length(s.summary->text);
        if (h->end > len) fail("highlight span beyond summary on " + c.id.str());
      }
    }
  }

  std::set<std::pair<std::string, std::string>> pairs;
  std::set<std::string> edge_ids;
  for (const Edge& e : s.graph.edges) {
    if (!edge_ids.insert(e.id.str()).second) fail("duplicate edge id " + e.id.str());
    if (auto v = serial_of(e.id.str(), 'e'); v && *v >= s.counters.edge_id) fail("edge counter behind " + e.id.str());
    if (e.a == e.b) fail("self edge " + e.id.str());
    const Concept* a = s.graph.find(e.a);
    const Concept* b = s.graph.find(e.b);
    if (!a || !b) {
      fail("dangling edge " + e.id.str());
    } else if (!a->in_graph() || !b->in_graph()) {
      fail("edge endpoint outside graph area " + e.id.str());
    }
    auto key = std::minmax(e.a.str(), e.b.str());
    if (!pairs.insert({key.first, key.second}).second) fail("duplicate edge pair " + e.id.str());
  }

  std::set<std::string> group_ids;
  std::set<std::string> question_ids;
  std::vector<const Question*> accepted;
  for (const QuestionGroup& g : s.groups) {
    if (!group_ids.insert(g.id.str()).second) fail("duplicate group id " + g.id.str());
    if (auto v = serial_of(g.id.str(), 'g'); v && *v >= s.counters.group_id) fail("group counter behind " + g.id.str());
    std::set<std::string> seen;
    for (const ConceptId& c : g.attached) {
      if (!seen.insert(c.str()).second) fail("concept attached twice to " + g.id.str());
      const Concept* member = s.graph.find(c);
      if (!member) {
        fail("group " + g.id.str() + " references missing concept " + c.str());
      } else if (!member->in_graph()) {
        fail("group " + g.id.str() + " references waiting concept " + c.str());
      }
    }
    if (!g.questions.empty() && g.generation_count < 1) fail("questions without generation in " + g.id.str());
    for (const Question& q : g.questions) {
      if (!question_ids.insert(q.id.str()).second) fail("duplicate question id " + q.id.str());
      if (auto v = serial_of(q.id.str(), 'q'); v && *v >= s.counters.question_id) fail("question counter behind " + q.id.str());
      if (q.group != g.id) fail("question " + q.id.str() + " names the wrong group");
      if (q.current_text.empty()) fail("question " + q.id.str() + " has empty text");
      bool is_accepted = q.status == QuestionStatus::Accepted;
      if (is_accepted != q.accepted_at.has_value()) fail("accepted_at inconsistent on " + q.id.str());
      if (is_accepted) accepted.push_back(&q);
    }
  }

  std::sort(accepted.begin(), accepted.end(),
            [](const Question* x, const Question* y) { return *x->accepted_at < *y->accepted_at; });
  if (accepted.size() != s.bank.entries.size()) {
    fail("bank size differs from accepted question count");
  } else {
    for (std::size_t i = 0; i < accepted.size(); ++i) {
      if (accepted[i]->id != s.bank.entries[i]) fail("bank order differs at position " + std::to_string(i + 1));
      if (*accepted[i]->accepted_at != i + 1) fail("accepted_at not dense at position " + std::to_string(i + 1));
    }
  }
  return out;
}

}  // namespace catalyst
