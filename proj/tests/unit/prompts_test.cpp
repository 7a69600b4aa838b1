#include "catalyst/prompts.hpp"
#include "catalyst/text.hpp"
#include "test_support.hpp"

namespace catalyst {
namespace {

using testing::for_all_seeds;
using testing::Rng;

using Relations = std::vector<std::pair<std::string, std::string>>;

TEST(Templates, PlaceholdersAreSubstitutedOnce) {
  EXPECT_EQ(render_template("a {x} b {y}", {{"x", "{y}"}, {"y", "2"}}), "a {y} b 2");
  EXPECT_CATALYST_ERROR(render_template("{missing}", {}), ErrorCode::InvalidPrompt);
  EXPECT_CATALYST_ERROR(render_template("open {brace", {{"brace", "x"}}), ErrorCode::InvalidPrompt);
}

TEST(Templates, BothResourcesAreEmbedded) {
  EXPECT_NE(template_source(TemplateId::Summarize).find("{raw_text}"), std::string_view::npos);
  EXPECT_NE(template_source(TemplateId::Summarize).find("{target_words}"), std::string_view::npos);
  EXPECT_NE(template_source(TemplateId::GenerateQuestions).find("{concepts}"), std::string_view::npos);
}

TEST(SummaryPrompt, EmbedsTargetAndText) {
  PromptRequest r200 = build_summary_prompt("Unit map text.", 200);
  PromptRequest r500 = build_summary_prompt("Unit map text.", 500);
  EXPECT_EQ(r200.template_id, TemplateId::Summarize);
  EXPECT_NE(r200.rendered_text.find("approximately 200 words"), std::string::npos);
  EXPECT_NE(r500.rendered_text.find("approximately 500 words"), std::string::npos);
  EXPECT_NE(r200.rendered_text.find("<<<\nUnit map text.\n>>>"), std::string::npos);
  EXPECT_FALSE(r200.truncated);
  EXPECT_CATALYST_ERROR(build_summary_prompt("  ", 200), ErrorCode::EmptyText);
  EXPECT_CATALYST_ERROR(build_summary_prompt("x", 0), ErrorCode::InvalidPrompt);
}

TEST(SummaryPrompt, LongInputIsCutAtWordBoundary) {
  PromptRequest r = build_summary_prompt("alpha beta gamma delta", 10, 13);
  EXPECT_TRUE(r.truncated);
  EXPECT_NE(r.rendered_text.find("<<<\nalpha beta\n>>>"), std::string::npos);
  PromptRequest exact = build_summary_prompt("alpha beta gamma", 10, 10);
  EXPECT_NE(exact.rendered_text.find("<<<\nalpha beta\n>>>"), std::string::npos);
}

TEST(SummaryPromptProperty, TruncatedBodyIsAWordPrefixWithinBudget) {
  for_all_seeds(61, 200, [](Rng& rng) {
    std::string raw = rng.sentence(1, 60);
    std::size_t budget = rng.between(10, 200);  // words are at most 9 letters
    PromptRequest r = build_summary_prompt(raw, 50, budget);
    std::size_t b = r.rendered_text.find("<<<\n") + 4;
    std::size_t e = r.rendered_text.rfind("\n>>>");
    std::string body = r.rendered_text.substr(b, e - b);
    EXPECT_EQ(r.truncated, raw.size() > budget);
    if (r.truncated) EXPECT_LE(body.size(), budget);
    else EXPECT_EQ(body, raw);
    auto words = text::split_words(raw);
    auto kept = text::split_words(body);
    ASSERT_LE(kept.size(), words.size());
    for (std::size_t i = 0; i < kept.size(); ++i) EXPECT_EQ(kept[i], words[i]);
  });
}

TEST(QuestionPrompt, ListsConceptsAndRelations) {
  PromptRequest r = build_question_prompt("Build a bridge.", {"load", "span"}, {{"load", "span"}}, 5);
  EXPECT_EQ(r.template_id, TemplateId::GenerateQuestions);
  const std::string& t = r.rendered_text;
  EXPECT_NE(t.find("Write exactly 5 numbered"), std::string::npos);
  EXPECT_NE(t.find("<<<\nBuild a bridge.\n>>>"), std::string::npos);
  EXPECT_NE(t.find("CONCEPTS:\n- load\n- span\n"), std::string::npos);
  EXPECT_NE(t.find("RELATIONS:\n- load — span\n"), std::string::npos);
  PromptRequest bare = build_question_prompt("Build a bridge.", {"load"}, {}, 3);
  EXPECT_EQ(bare.rendered_text.find("RELATIONS"), std::string::npos);
  EXPECT_CATALYST_ERROR(build_question_prompt("s", {}, {}, 5), ErrorCode::EmptyConcepts);
  EXPECT_CATALYST_ERROR(build_question_prompt("s", {"a"}, {}, 0), ErrorCode::InvalidPrompt);
}

TEST(QuestionPrompt, EscapingRoundTrips) {
  for (std::string s : {"plain", "two\nlines", "back\\slash", "a — b", "\\n literal", "cr\r\n"}) {
    EXPECT_EQ(unescape_line(escape_line(s)), s);
    EXPECT_EQ(escape_line(s).find('\n'), std::string::npos);
  }
}

// Decodes the concept and relation sections back out of a rendered prompt.
// Written against the documented line format only.
std::pair<std::vector<std::string>, Relations> decode_sections(const std::string& prompt) {
  std::vector<std::string> concepts;
  Relations relations;
  std::size_t p = prompt.find("\nCONCEPTS:\n") + 11;
  auto next_line = [&](std::size_t& pos) {
    std::size_t nl = prompt.find('\n', pos);
    std::string line = prompt.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };
  std::string line;
  while ((line = next_line(p)).rfind("- ", 0) == 0) concepts.push_back(unescape_line(line.substr(2)));
  if (line.empty() && prompt.compare(p, 11, "RELATIONS:\n") == 0) {
    p += 11;
    const std::string sep = " — ";
    while ((line = next_line(p)).rfind("- ", 0) == 0) {
      std::string body = line.substr(2);
      // The separator is the only em dash not preceded by a backslash.
      std::size_t at = 0;
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '\\') {
          ++i;
          continue;
        }
        if (body.compare(i, sep.size(), sep) == 0) {
          at = i;
          break;
        }
      }
      relations.emplace_back(unescape_line(body.substr(0, at)), unescape_line(body.substr(at + sep.size())));
    }
  }
  return {concepts, relations};
}

std::string tricky_label(Rng& rng) {
  static const std::vector<std::string> parts = {"a", "b", "- ", "\n", "\n- ", " — ", "—", "\\", "\\n", "RELATIONS:", " "};
  std::string s;
  std::size_t n = rng.between(1, 4);
  for (std::size_t i = 0; i < n; ++i) s += rng.chance(0.4) ? rng.pick(parts) : rng.word(1, 3);
  return s;
}

TEST(QuestionPromptProperty, RenderingIsInjectiveOnConceptsAndRelations) {
  for_all_seeds(62, 500, [](Rng& rng) {
    std::vector<std::string> concepts;
    std::size_t n = rng.between(1, 5);
    for (std::size_t i = 0; i < n; ++i) concepts.push_back(tricky_label(rng));
    Relations relations;
    std::size_t m = rng.below(4);
    for (std::size_t i = 0; i < m; ++i) relations.emplace_back(rng.pick(concepts), rng.pick(concepts));
    PromptRequest r = build_question_prompt("Summary.", concepts, relations, 5);
    auto [c, rel] = decode_sections(r.rendered_text);
    ASSERT_EQ(c, concepts);
    ASSERT_EQ(rel, relations);
  });
}

TEST(QuestionPromptProperty, DifferentConceptSetsNeverCollide) {
  for_all_seeds(63, 500, [](Rng& rng) {
    auto make = [&] {
      std::vector<std::string> v;
      std::size_t n = rng.between(1, 3);
      for (std::size_t i = 0; i < n; ++i) v.push_back(tricky_label(rng));
      return v;
    };
    auto a = make();
    auto b = rng.chance(0.2) ? a : make();
    bool same_prompt = build_question_prompt("S", a, {}, 5).rendered_text == build_question_prompt("S", b, {}, 5).rendered_text;
    ASSERT_EQ(same_prompt, a == b);
  });
  // Hand-picked near collisions.
  EXPECT_NE(build_question_prompt("S", {"a\n- b"}, {}, 5).rendered_text,
            build_question_prompt("S", {"a", "b"}, {}, 5).rendered_text);
  EXPECT_NE(build_question_prompt("S", {"x"}, {{"a — b", "c"}}, 5).rendered_text,
            build_question_prompt("S", {"x"}, {{"a", "b — c"}}, 5).rendered_text);
}

}  // namespace
}  // namespace catalyst
