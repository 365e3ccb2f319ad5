#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace clstk {

using Codepoint = char32_t;

// Decodes UTF-8 into scalar values. Throws InvalidEncoding on malformed
// bytes, overlong forms, or surrogate codepoints.
std::vector<Codepoint> utf8_decode(std::string_view text);

std::string utf8_encode(const std::vector<Codepoint>& cps);
std::string utf8_encode(Codepoint cp);

// Canonical composition for the supported Indic blocks (NFC over the
// decomposition pairs those blocks actually contain), BOM/ZWJ/ZWNJ removal,
// whitespace-run collapse, and trim.
std::string normalize_text(std::string_view text);

// Whitespace tokenization of a normalized string.
std::vector<std::string> split_words(std::string_view text);

}  // namespace clstk
