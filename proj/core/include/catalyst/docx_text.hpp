#pragma once

#include <string>
#include <string_view>

namespace catalyst::docx {

// Extracts the body text of a WordprocessingML package: one line per
// paragraph, tabs as spaces, explicit breaks as line breaks. Throws
// Error(UnreadableFile) for damaged archives or missing word/document.xml.
std::string extract_text(std::string_view bytes);

}  // namespace catalyst::docx
