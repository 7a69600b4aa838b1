#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "catalyst/concept_graph.hpp"
#include "catalyst/questions.hpp"
#include "test_support.hpp"

namespace catalyst {
namespace {

using testing::approved_session;
using testing::fixed_time;
using testing::for_all_seeds;
using testing::Rng;

TEST(ConceptGraph, HighlightTakesTrimmedSummarySlice) {
  SessionState s = approved_session();
  Concept c = create_concept_from_highlight(s, 9, 17);
  EXPECT_EQ(c.label, "catapult");
  EXPECT_EQ(c.id.str(), "c1");
  EXPECT_FALSE(c.in_graph());
  ASSERT_NE(c.highlight(), nullptr);
  EXPECT_EQ(c.highlight()->start, 9u);
  EXPECT_EQ(c.highlight()->end, 17u);
  EXPECT_EQ(create_concept_from_highlight(s, 8, 18).label, "catapult");
}

TEST(ConceptGraph, HighlightOffsetsAreCodePoints) {
  SessionState s = approved_session("Café — crème brûlée");
  EXPECT_EQ(create_concept_from_highlight(s, 7, 12).label, "crème");
  EXPECT_EQ(create_concept_from_highlight(s, 13, 19).label, "brûlée");
  EXPECT_CATALYST_ERROR(create_concept_from_highlight(s, 13, 20), ErrorCode::InvalidSpan);
}

TEST(ConceptGraph, HighlightRejectsBadSpans) {
  SessionState s = approved_session();
  EXPECT_CATALYST_ERROR(create_concept_from_highlight(s, 5, 5), ErrorCode::InvalidSpan);
  EXPECT_CATALYST_ERROR(create_concept_from_highlight(s, 6, 5), ErrorCode::InvalidSpan);
  EXPECT_CATALYST_ERROR(create_concept_from_highlight(s, 0, 1000), ErrorCode::InvalidSpan);
  EXPECT_CATALYST_ERROR(create_concept_from_highlight(s, 6, 7), ErrorCode::BlankSpan);  // a single space
  EXPECT_TRUE(s.graph.concepts.empty());
  EXPECT_EQ(s.counters.concept_id, 1u);
}

TEST(ConceptGraph, HighlightNeedsApprovedSummary) {
  SessionState s = make_session(SessionId("x"), fixed_time());
  EXPECT_CATALYST_ERROR(create_concept_from_highlight(s, 0, 1), ErrorCode::NoApprovedSummary);
  set_summary_text(s, "Unapproved");
  EXPECT_CATALYST_ERROR(create_concept_from_highlight(s, 0, 3), ErrorCode::NoApprovedSummary);
}

TEST(ConceptGraph, CustomConceptLabelIsTrimmed) {
  SessionState s = approved_session();
  EXPECT_EQ(create_custom_concept(s, "  friction \n").label, "friction");
  EXPECT_CATALYST_ERROR(create_custom_concept(s, " \t "), ErrorCode::BlankLabel);
}

TEST(ConceptGraph, PlacementAndCoordinates) {
  SessionState s = approved_session();
  ConceptId id = create_custom_concept(s, "gravity").id;
  Concept placed = place_concept(s, id, 120.5, -40.0);
  EXPECT_TRUE(placed.in_graph());
  EXPECT_EQ(*placed.position, (Point{120.5, -40.0}));
  EXPECT_CATALYST_ERROR(place_concept(s, id, std::nan(""), 0), ErrorCode::NonFiniteCoordinate);
  EXPECT_CATALYST_ERROR(place_concept(s, id, 0, std::numeric_limits<double>::infinity()),
                        ErrorCode::NonFiniteCoordinate);
  EXPECT_CATALYST_ERROR(place_concept(s, ConceptId("c99"), 0, 0), ErrorCode::NotFound);
}

TEST(ConceptGraph, EdgesAreUndirectedAndUnique) {
  SessionState s = approved_session();
  ConceptId a = create_custom_concept(s, "a").id;
  ConceptId b = create_custom_concept(s, "b").id;
  EXPECT_CATALYST_ERROR(connect_concepts(s, a, b), ErrorCode::NotInGraph);
  place_concept(s, a, 0, 0);
  EXPECT_CATALYST_ERROR(connect_concepts(s, a, b), ErrorCode::NotInGraph);
  place_concept(s, b, 10, 10);
  Edge e = connect_concepts(s, a, b);
  EXPECT_EQ(e.id.str(), "e1");
  EXPECT_CATALYST_ERROR(connect_concepts(s, b, a), ErrorCode::DuplicateEdge);
  EXPECT_CATALYST_ERROR(connect_concepts(s, a, a), ErrorCode::SelfEdge);
  EXPECT_CATALYST_ERROR(connect_concepts(s, a, ConceptId("nope")), ErrorCode::NotFound);
  // Moving a placed concept keeps its edges.
  place_concept(s, a, 50, 50);
  EXPECT_EQ(s.graph.edges.size(), 1u);
  disconnect(s, e.id);
  EXPECT_TRUE(s.graph.edges.empty());
  EXPECT_CATALYST_ERROR(disconnect(s, e.id), ErrorCode::NotFound);
  EXPECT_EQ(connect_concepts(s, b, a).id.str(), "e2");
}

TEST(ConceptGraph, ReturnToWaitingCascades) {
  SessionState s = approved_session();
  ConceptId a = create_custom_concept(s, "a").id;
  ConceptId b = create_custom_concept(s, "b").id;
  ConceptId c = create_custom_concept(s, "c").id;
  for (const auto& id : {a, b, c}) place_concept(s, id, 1, 1);
  connect_concepts(s, a, b);
  connect_concepts(s, b, c);
  GroupId g = create_group(s).id;
  toggle_concept_in_group(s, g, a);
  toggle_concept_in_group(s, g, b);
  auto qs = append_generated_questions(s, g, {"q about b"});

  return_to_waiting(s, b);
  EXPECT_TRUE(s.graph.edges.empty());
  EXPECT_EQ(s.find_group(g)->attached, std::vector<ConceptId>{a});
  EXPECT_NE(s.find_question(qs[0].id), nullptr);
  EXPECT_CATALYST_ERROR(return_to_waiting(s, b), ErrorCode::NotInGraph);
  EXPECT_TRUE(invariant_violations(s).empty());
}

TEST(ConceptGraph, RemoveWorksFromEitherArea) {
  SessionState s = approved_session();
  ConceptId waiting = create_custom_concept(s, "w").id;
  ConceptId placed = create_custom_concept(s, "p").id;
  ConceptId other = create_custom_concept(s, "o").id;
  place_concept(s, placed, 0, 0);
  place_concept(s, other, 1, 0);
  connect_concepts(s, placed, other);
  remove_concept(s, waiting);
  remove_concept(s, placed);
  EXPECT_EQ(s.graph.concepts.size(), 1u);
  EXPECT_TRUE(s.graph.edges.empty());
  EXPECT_CATALYST_ERROR(remove_concept(s, placed), ErrorCode::NotFound);
  EXPECT_EQ(create_custom_concept(s, "fresh").id.str(), "c4");
}

TEST(ConceptGraph, SummaryRewriteMarksHighlightsStaleButKeepsThem) {
  SessionState s = approved_session();
  Concept hl = create_concept_from_highlight(s, 9, 17);
  Concept custom = create_custom_concept(s, "energy");
  EXPECT_FALSE(is_stale(hl, s));
  edit_summary(s, "A different unit entirely.");
  EXPECT_EQ(s.stage, Stage::Summarize);
  EXPECT_TRUE(is_stale(*s.graph.find(hl.id), s));
  EXPECT_FALSE(is_stale(*s.graph.find(custom.id), s));
  EXPECT_EQ(s.graph.find(hl.id)->label, "catapult");
  EXPECT_TRUE(invariant_violations(s).empty());
}

// Independent reference model for the graph area.
struct GraphModel {
  std::map<std::string, bool> placed;  // id -> on canvas
  std::set<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::pair<std::string, std::string>> edge_ids;
  std::vector<std::string> attached;
  int next_concept = 1;
  int next_edge = 1;

  static std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  void drop(const std::string& id) {
    for (auto it = edge_ids.begin(); it != edge_ids.end();) {
      if (it->second.first == id || it->second.second == id) {
        edges.erase(it->second);
        it = edge_ids.erase(it);
      } else {
        ++it;
      }
    }
    std::erase(attached, id);
  }
};

TEST(ConceptGraphFuzz, MatchesReferenceModel) {
  for_all_seeds(31, 60, [](Rng& rng) {
    SessionState s = approved_session();
    GroupId g = create_group(s).id;
    GraphModel m;
    auto some_concept = [&]() -> std::string {
      if (m.placed.empty() || rng.chance(0.05)) return "c" + std::to_string(1000 + rng.below(3));
      auto it = m.placed.begin();
      std::advance(it, rng.below(m.placed.size()));
      return it->first;
    };
    for (int step = 0; step < 150; ++step) {
      std::optional<ErrorCode> expected;
      std::optional<ErrorCode> actual;
      auto run = [&](auto&& fn) {
        try {
          fn();
        } catch (const Error& e) {
          actual = e.code();
        }
      };
      switch (rng.below(7)) {
        case 0: {
          run([&] { create_custom_concept(s, rng.word()); });
          m.placed["c" + std::to_string(m.next_concept++)] = false;
          break;
        }
        case 1: {
          std::string id = some_concept();
          run([&] { place_concept(s, ConceptId(id), rng.real(-500, 500), rng.real(-500, 500)); });
          if (!m.placed.count(id)) expected = ErrorCode::NotFound;
          else m.placed[id] = true;
          break;
        }
        case 2: {
          std::string id = some_concept();
          run([&] { return_to_waiting(s, ConceptId(id)); });
          if (!m.placed.count(id)) expected = ErrorCode::NotFound;
          else if (!m.placed[id]) expected = ErrorCode::NotInGraph;
          else {
            m.placed[id] = false;
            m.drop(id);
          }
          break;
        }
        case 3: {
          if (!rng.chance(0.3)) break;
          std::string id = some_concept();
          run([&] { remove_concept(s, ConceptId(id)); });
          if (!m.placed.count(id)) expected = ErrorCode::NotFound;
          else {
            m.placed.erase(id);
            m.drop(id);
          }
          break;
        }
        case 4: {
          std::string a = some_concept();
          std::string b = rng.chance(0.05) ? a : some_concept();
          run([&] { connect_concepts(s, ConceptId(a), ConceptId(b)); });
          if (a == b) expected = ErrorCode::SelfEdge;
          else if (!m.placed.count(a) || !m.placed.count(b)) expected = ErrorCode::NotFound;
          else if (!m.placed[a] || !m.placed[b]) expected = ErrorCode::NotInGraph;
          else if (m.edges.count(GraphModel::key(a, b))) expected = ErrorCode::DuplicateEdge;
          else {
            m.edges.insert(GraphModel::key(a, b));
            m.edge_ids["e" + std::to_string(m.next_edge++)] = GraphModel::key(a, b);
          }
          break;
        }
        case 5: {
          std::string id = m.edge_ids.empty() || rng.chance(0.1)
                               ? "e999"
                               : std::next(m.edge_ids.begin(), static_cast<long>(rng.below(m.edge_ids.size())))->first;
          run([&] { disconnect(s, EdgeId(id)); });
          if (!m.edge_ids.count(id)) expected = ErrorCode::NotFound;
          else {
            m.edges.erase(m.edge_ids[id]);
            m.edge_ids.erase(id);
          }
          break;
        }
        case 6: {
          std::string id = some_concept();
          run([&] { toggle_concept_in_group(s, g, ConceptId(id)); });
          bool is_attached = std::find(m.attached.begin(), m.attached.end(), id) != m.attached.end();
          if (!m.placed.count(id)) expected = ErrorCode::NotFound;
          else if (is_attached) std::erase(m.attached, id);
          else if (!m.placed[id]) expected = ErrorCode::ConceptNotInGraph;
          else m.attached.push_back(id);
          break;
        }
      }
      ASSERT_EQ(actual.has_value(), expected.has_value()) << "step " << step;
      if (actual) {
        ASSERT_EQ(to_string(*actual), to_string(*expected)) << "step " << step;
      }

      ASSERT_TRUE(invariant_violations(s).empty()) << invariant_violations(s).front();
      ASSERT_EQ(s.graph.concepts.size(), m.placed.size());
      for (const Concept& c : s.graph.concepts) {
        ASSERT_TRUE(m.placed.count(c.id.str()));
        ASSERT_EQ(c.in_graph(), m.placed[c.id.str()]);
      }
      std::set<std::pair<std::string, std::string>> actual_edges;
      for (const Edge& e : s.graph.edges) actual_edges.insert(GraphModel::key(e.a.str(), e.b.str()));
      ASSERT_EQ(actual_edges, m.edges);
      std::vector<std::string> attached;
      for (const auto& id : s.find_group(g)->attached) attached.push_back(id.str());
      ASSERT_EQ(attached, m.attached);
    }
  });
}

}  // namespace
}  // namespace catalyst
