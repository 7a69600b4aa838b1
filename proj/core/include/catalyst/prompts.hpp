#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catalyst/llm.hpp"

namespace catalyst {

inline constexpr std::size_t kDefaultMaxInputChars = 60'000;

// Raw template text (versioned resource files compiled into the library).
std::string_view template_source(TemplateId id) noexcept;

// Substitutes {name} placeholders. Every placeholder in the template must be
// bound; unknown ones raise InvalidPrompt. Substituted values are not rescanned.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

// Escapes backslash, line breaks and the em dash so a value fits on one
// prompt line and cannot forge a relation separator.
std::string escape_line(std::string_view s);
std::string unescape_line(std::string_view s);

// Raw text longer than `max_input_chars` bytes is cut at the last word
// boundary inside the budget and the request is flagged `truncated`.
PromptRequest build_summary_prompt(std::string_view raw_text, std::size_t target_words,
                                   std::size_t max_input_chars = kDefaultMaxInputChars);

// Relations render as "A — B" lines under a RELATIONS heading; with no
// relations the section is left out.
PromptRequest build_question_prompt(std::string_view summary, const std::vector<std::string>& concepts,
                                    const std::vector<std::pair<std::string, std::string>>& relations,
                                    std::size_t n);

// Appended to a question prompt when the first completion could not be parsed.
std::string rerequest_instruction(std::size_t n);

}  // namespace catalyst
