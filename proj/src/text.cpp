#include "clstk/text.hpp"

#include <array>
#include <sstream>
#include <utility>

#include "clstk/error.hpp"

namespace clstk {

std::vector<Codepoint> utf8_decode(std::string_view text) {
  std::vector<Codepoint> out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int len;
    Codepoint cp;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      throw InvalidEncoding("bad lead byte at offset " + std::to_string(i));
    }
    if (i + len > text.size())
      throw InvalidEncoding("truncated sequence at offset " + std::to_string(i));
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80)
        throw InvalidEncoding("bad continuation byte at offset " +
                              std::to_string(i + k));
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr std::array<Codepoint, 4> kMin = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len - 1])
      throw InvalidEncoding("overlong encoding at offset " + std::to_string(i));
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      throw InvalidEncoding("invalid scalar value at offset " + std::to_string(i));
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode(Codepoint cp) {
  std::string s;
  if (cp < 0x80) {
    s += static_cast<char>(cp);
  } else if (cp < 0x800) {
    s += static_cast<char>(0xC0 | (cp >> 6));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    s += static_cast<char>(0xE0 | (cp >> 12));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    s += static_cast<char>(0xF0 | (cp >> 18));
    s += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return s;
}

std::string utf8_encode(const std::vector<Codepoint>& cps) {
  std::string s;
  for (Codepoint cp : cps) s += utf8_encode(cp);
  return s;
}

namespace {

// Canonical decompositions occurring in the six supported Indic blocks.
// Pairs marked composing take part in recomposition; the nukta letters are
// composition exclusions and stay decomposed under NFC.
struct Decomp {
  Codepoint cp, first, second;
  bool composes;
};

constexpr Decomp kDecomps[] = {
    // Devanagari (all composition exclusions)
    {0x0929, 0x0928, 0x093C, false}, {0x0931, 0x0930, 0x093C, false},
    {0x0934, 0x0933, 0x093C, false}, {0x0958, 0x0915, 0x093C, false},
    {0x0959, 0x0916, 0x093C, false}, {0x095A, 0x0917, 0x093C, false},
    {0x095B, 0x091C, 0x093C, false}, {0x095C, 0x0921, 0x093C, false},
    {0x095D, 0x0922, 0x093C, false}, {0x095E, 0x092B, 0x093C, false},
    {0x095F, 0x092F, 0x093C, false},
    // Bengali
    {0x09CB, 0x09C7, 0x09BE, true},  {0x09CC, 0x09C7, 0x09D7, true},
    {0x09DC, 0x09A1, 0x09BC, false}, {0x09DD, 0x09A2, 0x09BC, false},
    {0x09DF, 0x09AF, 0x09BC, false},
    // Odia
    {0x0B48, 0x0B47, 0x0B56, true},  {0x0B4B, 0x0B47, 0x0B3E, true},
    {0x0B4C, 0x0B47, 0x0B57, true},  {0x0B5C, 0x0B21, 0x0B3C, false},
    {0x0B5D, 0x0B22, 0x0B3C, false},
    // Tamil
    {0x0B94, 0x0B92, 0x0BD7, true},  {0x0BCA, 0x0BC6, 0x0BBE, true},
    {0x0BCB, 0x0BC7, 0x0BBE, true},  {0x0BCC, 0x0BC6, 0x0BD7, true},
    // Telugu
    {0x0C48, 0x0C46, 0x0C56, true},
};

bool is_space(Codepoint cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0x0C ||
         cp == 0x0B || cp == 0x00A0;
}

}  // namespace

std::string normalize_text(std::string_view text) {
  std::vector<Codepoint> cps = utf8_decode(text);

  // Strip BOM / ZWJ / ZWNJ anywhere.
  std::vector<Codepoint> kept;
  kept.reserve(cps.size());
  for (Codepoint cp : cps) {
    if (cp == 0xFEFF || cp == 0x200D || cp == 0x200C) continue;
    kept.push_back(cp);
  }

  // Canonical decompose (single pass suffices: no nested decompositions in
  // the table above).
  std::vector<Codepoint> dec;
  dec.reserve(kept.size());
  for (Codepoint cp : kept) {
    bool found = false;
    for (const auto& d : kDecomps) {
      if (d.cp == cp) {
        dec.push_back(d.first);
        dec.push_back(d.second);
        found = true;
        break;
      }
    }
    if (!found) dec.push_back(cp);
  }

  // Recompose non-excluded pairs.
  std::vector<Codepoint> comp;
  comp.reserve(dec.size());
  for (size_t i = 0; i < dec.size(); ++i) {
    if (!comp.empty() && i < dec.size()) {
      bool composed = false;
      for (const auto& d : kDecomps) {
        if (d.composes && comp.back() == d.first && dec[i] == d.second) {
          comp.back() = d.cp;
          composed = true;
          break;
        }
      }
      if (composed) continue;
    }
    comp.push_back(dec[i]);
  }

  // Collapse whitespace runs, trim.
  std::vector<Codepoint> out;
  out.reserve(comp.size());
  bool pending_space = false;
  for (Codepoint cp : comp) {
    if (is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(cp);
  }
  return utf8_encode(out);
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n') {
      if (!cur.empty()) words.push_back(std::exchange(cur, {}));
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

}  // namespace clstk
