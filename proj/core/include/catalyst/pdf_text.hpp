#pragma once

#include <string>
#include <string_view>

namespace catalyst::pdf {

// Extracts the text of every page in reading order as UTF-8. Visual lines
// become '\n'-separated lines with whitespace normalized. Handles classic and
// compressed object storage, Flate/ASCII85/ASCIIHex streams, ToUnicode maps,
// simple-font encodings and form XObjects. Throws Error(UnreadableFile) when
// the bytes are not a parseable PDF; returns "" for a PDF without text.
std::string extract_text(std::string_view bytes);

}  // namespace catalyst::pdf
