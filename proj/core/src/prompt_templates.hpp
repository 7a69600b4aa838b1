#pragma once

#include <string_view>

// Generated at configure time from core/resources/prompts/*.txt.
namespace catalyst::detail {

std::string_view summarize_template_v1() noexcept;
std::string_view generate_questions_template_v1() noexcept;

}  // namespace catalyst::detail
