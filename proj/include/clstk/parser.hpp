#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "clstk/g2p.hpp"
#include "clstk/inventory.hpp"
#include "clstk/script.hpp"

namespace clstk {

enum class LanguageId { Hi, Mr, Bn, Gu, Or, Ta, Te, En };

std::string to_string(LanguageId lang);
LanguageId language_from_code(const std::string& code);
ScriptId script_of(LanguageId lang);
// Devanagari resolves to Hindi unless Marathi is requested explicitly.
LanguageId default_language_of(ScriptId script);

// Named post-rule passes, applied in table order.
enum class PostRule {
  NuktaSubstitution,
  AnusvaraAssimilation,
  VisargaExpansion,
  SchwaDeletion,
  GeminateCorrection,
};

PostRule post_rule_from_name(const std::string& name);
std::string to_string(PostRule rule);

enum class EntryFlag {
  Cons,
  Dead,  // consonant with no inherent vowel (e.g. khanda ta)
  Vowel,
  Matra,
  Virama,
  Anusvara,
  Candrabindu,
  Visarga,
  Nukta,
  Digit,
  Punct,
  Reject,
};

struct RuleEntry {
  std::vector<std::string> labels;
  EntryFlag flag;
};

// Per-language grapheme->phone table plus post-rule declarations, loaded
// from data/rules/<lang>.tsv.
class RuleTable {
 public:
  static RuleTable load(const std::string& path, const ClsInventory& inv);

  LanguageId language() const { return language_; }
  ScriptId script() const { return script_; }
  const std::vector<PostRule>& post_rules() const { return post_rules_; }
  bool schwa_final() const { return schwa_final_; }

  const RuleEntry* lookup(Codepoint cp) const;
  // Nukta substitution target for a base consonant codepoint, or empty.
  std::string nukta_label(Codepoint base) const;

  const std::unordered_map<Codepoint, RuleEntry>& entries() const {
    return entries_;
  }

 private:
  LanguageId language_ = LanguageId::Hi;
  ScriptId script_ = ScriptId::Devanagari;
  bool schwa_final_ = false;
  std::vector<PostRule> post_rules_;
  std::unordered_map<Codepoint, RuleEntry> entries_;
  std::unordered_map<Codepoint, std::string> nukta_map_;
};

class RuleSet {
 public:
  static RuleSet load_dir(const std::string& dir,
                          const ClsInventory& inv = ClsInventory::bundled());
  static const RuleSet& bundled();

  bool has(LanguageId lang) const;
  const RuleTable& table(LanguageId lang) const;

 private:
  std::unordered_map<int, RuleTable> tables_;
};

// Grapheme -> CLS phones for one native-script word.
std::vector<ClsPhone> parse_word(const std::string& word,
                                 std::optional<LanguageId> lang = {},
                                 const RuleSet& rules = RuleSet::bundled(),
                                 const ClsInventory& inv =
                                     ClsInventory::bundled());

// Post-rule pipeline, iterated to a fixed point. `enabled` restricts the
// table-declared rules to a subset; unknown names throw UnknownRuleName.
std::vector<ClsPhone> apply_post_rules(
    std::vector<ClsPhone> phones, const RuleTable& table,
    const std::optional<std::vector<std::string>>& enabled = {},
    const ClsInventory& inv = ClsInventory::bundled());

// Onset-maximal syllabification; one vowel nucleus per syllable.
std::vector<std::vector<ClsPhone>> syllabify(
    const std::vector<ClsPhone>& phones);

struct ParsedWord {
  std::string word;
  std::vector<ClsPhone> phones;
  bool via_cmu_bridge = false;  // Latin token routed through english-g2p
  bool lexical = false;         // g2p resolved from the lexicon
};

struct ParseIssue {
  size_t word_index;
  std::string word;
  std::string message;
};

struct ParseTextResult {
  std::vector<ParsedWord> words;
  std::vector<ParseIssue> issues;
};

// Whitespace tokenization with per-token routing: Latin tokens through
// english-g2p + the CMU bridge, Indic tokens through parse_word. In strict
// mode the first per-word error propagates; otherwise failed words are
// skipped and reported.
ParseTextResult parse_text(const std::string& text,
                           std::optional<LanguageId> lang = {},
                           bool strict = true,
                           const RuleSet& rules = RuleSet::bundled(),
                           const G2p& g2p = G2p::bundled(),
                           const CmuBridge& bridge = CmuBridge::bundled(),
                           const ClsInventory& inv = ClsInventory::bundled());

}  // namespace clstk
