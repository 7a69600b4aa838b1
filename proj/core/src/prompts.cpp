#include "catalyst/prompts.hpp"

#include "catalyst/text.hpp"
#include "prompt_templates.hpp"

namespace catalyst {

std::string_view template_source(TemplateId id) noexcept {
  return id == TemplateId::Summarize ? detail::summarize_template_v1() : detail::generate_questions_template_v1();
}

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    std::size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    std::size_t close = tmpl.find('}', open);
    if (close == std::string_view::npos) throw Error(ErrorCode::InvalidPrompt, "unterminated placeholder in template");
    std::string name(tmpl.substr(open + 1, close - open - 1));
    auto it = values.find(name);
    if (it == values.end()) throw Error(ErrorCode::InvalidPrompt, "unbound template placeholder {" + name + "}");
    out += it->second;
    pos = close + 1;
  }
  return out;
}

std::string escape_line(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    // The em dash separates relation endpoints, so a literal one is escaped.
    if (s.substr(i, 3) == "\xE2\x80\x94") {
      out += "\\\xE2\x80\x94";
      i += 2;
      continue;
    }
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_line(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      char n = s[++i];
      out.push_back(n == 'n' ? '\n' : n == 'r' ? '\r' : n);
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

PromptRequest build_summary_prompt(std::string_view raw_text, std::size_t target_words, std::size_t max_input_chars) {
  std::string_view body = text::trim(raw_text);
  if (body.empty()) throw Error(ErrorCode::EmptyText, "nothing to summarize");
  if (target_words == 0) throw Error(ErrorCode::InvalidPrompt, "target word count must be positive");

  bool truncated = false;
  if (body.size() > max_input_chars) {
    truncated = true;
    std::string_view head = body.substr(0, max_input_chars);
    std::size_t cut = head.size();
    // Keep the head up to the last whitespace; the next byte being whitespace
    // means the budget already ends on a word boundary.
    if (!text::is_space(body[head.size()])) {
      std::size_t ws = head.find_last_of(" \t\n\r\f\v");
      if (ws != std::string_view::npos) {
        cut = ws;
      } else {
        while (cut > 0 && (static_cast<unsigned char>(head[cut]) & 0xC0) == 0x80) --cut;
      }
    }
    body = text::trim(head.substr(0, cut));
  }

  PromptRequest req;
  req.template_id = TemplateId::Summarize;
  req.rendered_text = render_template(template_source(TemplateId::Summarize),
                                      {{"target_words", std::to_string(target_words)}, {"raw_text", std::string(body)}});
  // Enough room for the requested length plus slack.
  req.params.max_output_tokens = static_cast<std::uint32_t>(std::min<std::size_t>(target_words * 2 + 64, 8192));
  req.params.temperature = 0.3;
  req.truncated = truncated;
  return req;
}

PromptRequest build_question_prompt(std::string_view summary, const std::vector<std::string>& concepts,
                                    const std::vector<std::pair<std::string, std::string>>& relations,
                                    std::size_t n) {
  if (concepts.empty()) throw Error(ErrorCode::EmptyConcepts, "question prompts need at least one concept");
  if (n == 0) throw Error(ErrorCode::InvalidPrompt, "question count must be positive");

  std::string concept_lines;
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    if (i) concept_lines += '\n';
    concept_lines += "- " + escape_line(concepts[i]);
  }
  std::string relations_section;
  if (!relations.empty()) {
    relations_section = "\nRELATIONS:\n";
    for (const auto& [a, b] : relations) {
      relations_section += "- " + escape_line(a) + " — " + escape_line(b) + "\n";
    }
  }

  PromptRequest req;
  req.template_id = TemplateId::GenerateQuestions;
  req.rendered_text = render_template(template_source(TemplateId::GenerateQuestions),
                                      {{"n", std::to_string(n)},
                                       {"summary", std::string(text::trim(summary))},
                                       {"concepts", concept_lines},
                                       {"relations_section", relations_section}});
  req.params.temperature = 0.7;
  req.params.max_output_tokens = static_cast<std::uint32_t>(std::min<std::size_t>(96 * n + 64, 8192));
  return req;
}

std::string rerequest_instruction(std::size_t n) {
  return "\n\nReturn exactly " + std::to_string(n) + " numbered questions.";
}

}  // namespace catalyst
