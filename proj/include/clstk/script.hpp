#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "clstk/text.hpp"

namespace clstk {

enum class ScriptId {
  Devanagari,
  Bengali,
  Gujarati,
  Odia,
  Tamil,
  Telugu,
  Latin,
  Mixed,
  Unknown,
};

std::string to_string(ScriptId s);

struct ScriptBlock {
  Codepoint first;
  Codepoint last;
  ScriptId script;
};

// Contiguous Unicode block per supported Indic script. The same ranges ship
// as data/script_blocks.tsv; load() reads that format for overrides.
class ScriptTable {
 public:
  static const ScriptTable& builtin();
  static ScriptTable load(const std::string& path);

  ScriptId block_of(Codepoint cp) const;
  const std::vector<ScriptBlock>& blocks() const { return blocks_; }

 private:
  std::vector<ScriptBlock> blocks_;
};

enum class AksharaKind { ConsonantCluster, IndependentVowel, Digit, Symbol };

struct Akshara {
  std::vector<Codepoint> codepoints;
  AksharaKind kind;
};

// Structural role of a codepoint within its Brahmic block.
enum class CharClass {
  Consonant,
  IndepVowel,
  CombiningSign,  // matra, nukta, anusvara, visarga, candrabindu, length mark
  Virama,
  Digit,
  Symbol,
};

CharClass classify_codepoint(Codepoint cp, ScriptId script);

// Script of a normalized token, judged on letter codepoints only. Digits,
// danda, and ASCII punctuation are script-neutral.
ScriptId detect_script(std::string_view token);

// Orthographic-syllable segmentation. Consonant+virama chains bind into one
// cluster; dependent signs attach to the preceding cluster. Concatenating
// the aksharas reproduces the input exactly.
std::vector<Akshara> segment_aksharas(std::string_view word, ScriptId script);

}  // namespace clstk
