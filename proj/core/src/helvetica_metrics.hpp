#pragma once

#include <array>
#include <cstdint>

namespace catalyst::detail {

// Advance widths (1/1000 em) of Helvetica for character codes 32..126, from
// the Adobe core font metrics.
inline constexpr std::array<std::uint16_t, 95> kHelveticaAscii = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278,  // ' '..'/'
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556,                                // '0'..'9'
    278, 278, 584, 584, 584, 556, 1015,                                              // ':'..'@'
    667, 667, 722, 722, 667, 611, 778, 722, 278, 500, 667, 556, 833,                 // 'A'..'M'
    722, 778, 667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611,                 // 'N'..'Z'
    278, 278, 278, 469, 556, 333,                                                    // '['..'`'
    556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500, 222, 833,                 // 'a'..'m'
    556, 556, 556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500,                 // 'n'..'z'
    334, 260, 334, 584,                                                              // '{'..'~'
};

// Same for Helvetica-Bold.
inline constexpr std::array<std::uint16_t, 95> kHelveticaBoldAscii = {
    278, 333, 474, 556, 556, 889, 722, 238, 333, 333, 389, 584, 278, 333, 278, 278,
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 333, 333, 584, 584, 584, 611,
    975, 722, 722, 722, 722, 667, 611, 778, 722, 278, 556, 722, 611, 833, 722, 778,
    667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, 333, 278, 333, 584, 556,
    333, 556, 611, 556, 611, 556, 333, 611, 611, 278, 278, 556, 278, 889, 611, 611,
    611, 611, 389, 556, 333, 611, 556, 778, 556, 556, 500, 389, 280, 389, 584,
};

// Width of a WinAnsi code in Helvetica. Codes outside ASCII use typical
// values for their glyph class.
inline constexpr std::uint16_t helvetica_width(unsigned char code, bool bold = false) noexcept {
  if (code >= 32 && code <= 126) return bold ? kHelveticaBoldAscii[code - 32] : kHelveticaAscii[code - 32];
  switch (code) {
    case 0x85: return 1000;  // ellipsis
    case 0x91: case 0x92: return 222;
    case 0x93: case 0x94: return 333;
    case 0x95: return 350;
    case 0x97: return 1000;  // em dash
    case 0xA0: return 278;
    default: return bold ? 611 : 556;
  }
}

}  // namespace catalyst::detail
