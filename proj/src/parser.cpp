#include "clstk/parser.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clstk/error.hpp"
#include "clstk/text.hpp"

namespace clstk {

std::string to_string(LanguageId lang) {
  switch (lang) {
    case LanguageId::Hi: return "hi";
    case LanguageId::Mr: return "mr";
    case LanguageId::Bn: return "bn";
    case LanguageId::Gu: return "gu";
    case LanguageId::Or: return "or";
    case LanguageId::Ta: return "ta";
    case LanguageId::Te: return "te";
    case LanguageId::En: return "en";
  }
  return "??";
}

LanguageId language_from_code(const std::string& code) {
  if (code == "hi") return LanguageId::Hi;
  if (code == "mr") return LanguageId::Mr;
  if (code == "bn") return LanguageId::Bn;
  if (code == "gu") return LanguageId::Gu;
  if (code == "or") return LanguageId::Or;
  if (code == "ta") return LanguageId::Ta;
  if (code == "te") return LanguageId::Te;
  if (code == "en") return LanguageId::En;
  throw FormatError("unknown language code '" + code + "'");
}

ScriptId script_of(LanguageId lang) {
  switch (lang) {
    case LanguageId::Hi:
    case LanguageId::Mr: return ScriptId::Devanagari;
    case LanguageId::Bn: return ScriptId::Bengali;
    case LanguageId::Gu: return ScriptId::Gujarati;
    case LanguageId::Or: return ScriptId::Odia;
    case LanguageId::Ta: return ScriptId::Tamil;
    case LanguageId::Te: return ScriptId::Telugu;
    case LanguageId::En: return ScriptId::Latin;
  }
  return ScriptId::Unknown;
}

LanguageId default_language_of(ScriptId script) {
  switch (script) {
    case ScriptId::Devanagari: return LanguageId::Hi;
    case ScriptId::Bengali: return LanguageId::Bn;
    case ScriptId::Gujarati: return LanguageId::Gu;
    case ScriptId::Odia: return LanguageId::Or;
    case ScriptId::Tamil: return LanguageId::Ta;
    case ScriptId::Telugu: return LanguageId::Te;
    case ScriptId::Latin: return LanguageId::En;
    default: throw UnsupportedScript(to_string(script));
  }
}

PostRule post_rule_from_name(const std::string& name) {
  if (name == "NuktaSubstitution") return PostRule::NuktaSubstitution;
  if (name == "AnusvaraAssimilation") return PostRule::AnusvaraAssimilation;
  if (name == "VisargaExpansion") return PostRule::VisargaExpansion;
  if (name == "SchwaDeletion") return PostRule::SchwaDeletion;
  if (name == "GeminateCorrection") return PostRule::GeminateCorrection;
  throw UnknownRuleName(name);
}

std::string to_string(PostRule rule) {
  switch (rule) {
    case PostRule::NuktaSubstitution: return "NuktaSubstitution";
    case PostRule::AnusvaraAssimilation: return "AnusvaraAssimilation";
    case PostRule::VisargaExpansion: return "VisargaExpansion";
    case PostRule::SchwaDeletion: return "SchwaDeletion";
    case PostRule::GeminateCorrection: return "GeminateCorrection";
  }
  return "?";
}

namespace {

EntryFlag flag_from_name(const std::string& name) {
  if (name == "cons") return EntryFlag::Cons;
  if (name == "dead") return EntryFlag::Dead;
  if (name == "vowel") return EntryFlag::Vowel;
  if (name == "matra") return EntryFlag::Matra;
  if (name == "virama") return EntryFlag::Virama;
  if (name == "anusvara") return EntryFlag::Anusvara;
  if (name == "candrabindu") return EntryFlag::Candrabindu;
  if (name == "visarga") return EntryFlag::Visarga;
  if (name == "nukta") return EntryFlag::Nukta;
  if (name == "digit") return EntryFlag::Digit;
  if (name == "punct") return EntryFlag::Punct;
  if (name == "reject") return EntryFlag::Reject;
  throw FormatError("unknown rule flag '" + name + "'");
}

}  // namespace

RuleTable RuleTable::load(const std::string& path, const ClsInventory& inv) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  RuleTable t;
  std::string line;
  int lineno = 0;
  bool saw_version = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "clstk-rules") {
        saw_version = true;
      } else if (key == "lang") {
        std::string code;
        ss >> code;
        t.language_ = language_from_code(code);
        t.script_ = script_of(t.language_);
      } else if (key == "post") {
        std::string name;
        while (ss >> name) t.post_rules_.push_back(post_rule_from_name(name));
      } else if (key == "schwa") {
        std::string mode;
        ss >> mode;
        t.schwa_final_ = (mode == "final");
      } else if (key == "nukta") {
        std::string hex, label;
        ss >> hex >> label;
        if (!inv.has_label(label))
          throw FormatError(path + ":" + std::to_string(lineno) +
                            ": unknown label '" + label + "'");
        t.nukta_map_[static_cast<Codepoint>(std::stoul(hex, nullptr, 16))] =
            label;
      }
      // "#script" and comments are informational
      continue;
    }
    std::istringstream ss(line);
    std::string hex, labels_str, flag_str;
    if (!std::getline(ss, hex, '\t') || !std::getline(ss, labels_str, '\t') ||
        !std::getline(ss, flag_str, '\t'))
      throw FormatError(path + ":" + std::to_string(lineno));
    RuleEntry entry;
    entry.flag = flag_from_name(flag_str);
    if (labels_str != "-") {
      std::istringstream ls(labels_str);
      std::string label;
      while (ls >> label) {
        if (!inv.has_label(label))
          throw FormatError(path + ":" + std::to_string(lineno) +
                            ": unknown label '" + label + "'");
        entry.labels.push_back(label);
      }
    }
    t.entries_[static_cast<Codepoint>(std::stoul(hex, nullptr, 16))] =
        std::move(entry);
  }
  if (!saw_version) throw FormatError(path + ": missing format tag");
  return t;
}

const RuleEntry* RuleTable::lookup(Codepoint cp) const {
  auto it = entries_.find(cp);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string RuleTable::nukta_label(Codepoint base) const {
  auto it = nukta_map_.find(base);
  return it == nukta_map_.end() ? std::string() : it->second;
}

RuleSet RuleSet::load_dir(const std::string& dir, const ClsInventory& inv) {
  RuleSet set;
  for (const char* code : {"hi", "mr", "bn", "gu", "or", "ta", "te"}) {
    const std::string path = dir + "/" + code + ".tsv";
    RuleTable t = RuleTable::load(path, inv);
    set.tables_.emplace(static_cast<int>(t.language()), std::move(t));
  }
  return set;
}

const RuleSet& RuleSet::bundled() {
  static const RuleSet set = load_dir(default_data_dir() + "/rules");
  return set;
}

bool RuleSet::has(LanguageId lang) const {
  return tables_.count(static_cast<int>(lang)) != 0;
}

const RuleTable& RuleSet::table(LanguageId lang) const {
  auto it = tables_.find(static_cast<int>(lang));
  if (it == tables_.end())
    throw UnsupportedScript("no rule table for " + to_string(lang));
  return it->second;
}

namespace {

// Place-of-articulation buckets for anusvara assimilation.
const char* homorganic_nasal(const std::string& next) {
  static const std::unordered_map<std::string, const char*> kPlace = {
      {"k", "ng"},   {"kh", "ng"},  {"g", "ng"},   {"gh", "ng"},
      {"ng", "ng"},  {"kq", "ng"},  {"khq", "ng"}, {"gq", "ng"},
      {"c", "nj"},   {"ch", "nj"},  {"j", "nj"},   {"jh", "nj"},
      {"nj", "nj"},  {"tx", "nx"},  {"txh", "nx"}, {"dx", "nx"},
      {"dxh", "nx"}, {"nx", "nx"},  {"dxq", "nx"}, {"dxhq", "nx"},
      {"t", "n"},    {"th", "n"},   {"d", "n"},    {"dh", "n"},
      {"n", "n"},    {"p", "m"},    {"ph", "m"},   {"b", "m"},
      {"bh", "m"},   {"m", "m"},    {"f", "m"},
  };
  auto it = kPlace.find(next);
  return it == kPlace.end() ? nullptr : it->second;
}

bool apply_anusvara(std::vector<ClsPhone>& phones, const ClsInventory& inv) {
  bool changed = false;
  for (size_t i = 0; i + 1 < phones.size(); ++i) {
    if (phones[i].label != "mq") continue;
    if (const char* nasal = homorganic_nasal(phones[i + 1].label)) {
      phones[i] = inv.phone(nasal);
      changed = true;
    }
  }
  return changed;
}

bool apply_visarga(std::vector<ClsPhone>& phones, const ClsInventory& inv) {
  bool changed = false;
  for (auto& p : phones) {
    if (p.label == "hq") {
      p = inv.phone("h");
      changed = true;
    }
  }
  return changed;
}

size_t vowel_count(const std::vector<ClsPhone>& phones) {
  size_t n = 0;
  for (const auto& p : phones)
    if (p.is_vowel()) ++n;
  return n;
}

bool apply_schwa_deletion(std::vector<ClsPhone>& phones) {
  bool changed = false;
  // Word-final inherent vowel after a consonant, unless it is the only vowel.
  if (phones.size() >= 3 && phones.back().label == "a" &&
      !phones[phones.size() - 2].is_vowel() && vowel_count(phones) >= 2) {
    phones.pop_back();
    changed = true;
  }
  // Medial V C (a) C V -> V C C V.
  for (size_t i = phones.size(); i-- > 2;) {
    if (i + 2 >= phones.size()) continue;
    if (phones[i].label == "a" && !phones[i - 1].is_vowel() &&
        phones[i - 2].is_vowel() && !phones[i + 1].is_vowel() &&
        phones[i + 2].is_vowel()) {
      phones.erase(phones.begin() + static_cast<long>(i));
      changed = true;
    }
  }
  return changed;
}

bool apply_geminate(std::vector<ClsPhone>& phones) {
  bool changed = false;
  for (size_t i = phones.size(); i-- > 2;) {
    if (i < 2 || i >= phones.size()) continue;
    if (!phones[i].is_vowel() && phones[i] == phones[i - 1] &&
        phones[i] == phones[i - 2]) {
      phones.erase(phones.begin() + static_cast<long>(i));
      changed = true;
    }
  }
  return changed;
}

}  // namespace

std::vector<ClsPhone> apply_post_rules(
    std::vector<ClsPhone> phones, const RuleTable& table,
    const std::optional<std::vector<std::string>>& enabled,
    const ClsInventory& inv) {
  std::vector<PostRule> rules;
  if (enabled) {
    for (const auto& name : *enabled) {
      PostRule r = post_rule_from_name(name);  // throws on unknown names
      if (std::find(table.post_rules().begin(), table.post_rules().end(), r) !=
          table.post_rules().end())
        rules.push_back(r);
    }
  } else {
    rules = table.post_rules();
  }

  // Iterate to a fixed point so the pipeline is idempotent on its output.
  for (int pass = 0; pass < 16; ++pass) {
    bool changed = false;
    for (PostRule r : rules) {
      switch (r) {
        case PostRule::NuktaSubstitution:
          break;  // resolved during grapheme lookup
        case PostRule::AnusvaraAssimilation:
          changed |= apply_anusvara(phones, inv);
          break;
        case PostRule::VisargaExpansion:
          changed |= apply_visarga(phones, inv);
          break;
        case PostRule::SchwaDeletion:
          if (table.schwa_final()) changed |= apply_schwa_deletion(phones);
          break;
        case PostRule::GeminateCorrection:
          changed |= apply_geminate(phones);
          break;
      }
    }
    if (!changed) break;
  }
  return phones;
}

std::vector<ClsPhone> parse_word(const std::string& word,
                                 std::optional<LanguageId> lang,
                                 const RuleSet& rules,
                                 const ClsInventory& inv) {
  const ScriptId script = detect_script(word);
  if (script == ScriptId::Mixed || script == ScriptId::Unknown)
    throw UnsupportedScript(to_string(script) + " in '" + word + "'");
  LanguageId language = lang ? *lang : default_language_of(script);
  if (script_of(language) != script)
    throw UnsupportedScript("word '" + word + "' is " + to_string(script) +
                            ", not " + to_string(script_of(language)));
  const RuleTable& table = rules.table(language);

  std::vector<ClsPhone> out;
  std::vector<std::string> pending;  // consonant labels awaiting vowel decision
  Codepoint pending_cp = 0;
  bool pending_virama = false;
  bool pending_dead = false;

  auto flush = [&] {
    if (pending.empty()) return;
    for (const auto& label : pending) out.push_back(inv.phone(label));
    if (!pending_virama && !pending_dead) out.push_back(inv.phone("a"));
    pending.clear();
    pending_virama = false;
    pending_dead = false;
  };

  for (Codepoint cp : utf8_decode(word)) {
    const RuleEntry* e = table.lookup(cp);
    if (!e || e->flag == EntryFlag::Reject)
      throw UnmappedCodepoint(utf8_encode(cp) + " (U+" +
                              [cp] {
                                char buf[8];
                                std::snprintf(buf, sizeof buf, "%04X",
                                              static_cast<unsigned>(cp));
                                return std::string(buf);
                              }() +
                              ") in '" + word + "'");
    switch (e->flag) {
      case EntryFlag::Cons:
      case EntryFlag::Dead:
        flush();
        pending = e->labels;
        pending_cp = cp;
        pending_dead = (e->flag == EntryFlag::Dead);
        break;
      case EntryFlag::Vowel:
        flush();
        for (const auto& label : e->labels) out.push_back(inv.phone(label));
        break;
      case EntryFlag::Matra:
        if (pending.empty())
          throw OrphanCombiningMark("matra without base in '" + word + "'");
        for (const auto& label : pending) out.push_back(inv.phone(label));
        pending.clear();
        pending_virama = false;
        pending_dead = false;
        for (const auto& label : e->labels) out.push_back(inv.phone(label));
        break;
      case EntryFlag::Virama:
        if (pending.empty())
          throw OrphanCombiningMark("virama without base in '" + word + "'");
        pending_virama = true;
        break;
      case EntryFlag::Nukta: {
        if (pending.empty())
          throw OrphanCombiningMark("nukta without base in '" + word + "'");
        const std::string sub = table.nukta_label(pending_cp);
        if (!sub.empty()) pending = {sub};
        break;
      }
      case EntryFlag::Anusvara:
      case EntryFlag::Candrabindu:
      case EntryFlag::Visarga:
        flush();
        for (const auto& label : e->labels) out.push_back(inv.phone(label));
        break;
      case EntryFlag::Digit:
      case EntryFlag::Punct:
        throw UnmappedCodepoint("non-letter " + utf8_encode(cp) + " in '" +
                                word + "'");
      case EntryFlag::Reject:
        break;  // unreachable
    }
  }
  flush();
  return apply_post_rules(std::move(out), table, {}, inv);
}

std::vector<std::vector<ClsPhone>> syllabify(
    const std::vector<ClsPhone>& phones) {
  if (phones.empty()) throw NoNucleus("empty phone sequence");
  if (vowel_count(phones) == 0) throw NoNucleus("no vowel phone");
  std::vector<std::vector<ClsPhone>> syllables;
  std::vector<ClsPhone> cur;
  size_t remaining_vowels = vowel_count(phones);
  for (const auto& p : phones) {
    cur.push_back(p);
    if (p.is_vowel()) {
      --remaining_vowels;
      if (remaining_vowels > 0) {
        // Onset-maximal: all consonants up to the next vowel start the next
        // syllable, so close this one right after its nucleus.
        syllables.push_back(std::move(cur));
        cur.clear();
      }
    }
  }
  if (!cur.empty()) syllables.push_back(std::move(cur));
  return syllables;
}

ParseTextResult parse_text(const std::string& text,
                           std::optional<LanguageId> lang, bool strict,
                           const RuleSet& rules, const G2p& g2p,
                           const CmuBridge& bridge, const ClsInventory& inv) {
  ParseTextResult result;
  const auto words = split_words(text);
  for (size_t i = 0; i < words.size(); ++i) {
    try {
      ParsedWord pw;
      pw.word = words[i];
      const ScriptId script = detect_script(words[i]);
      if (script == ScriptId::Latin) {
        pw.via_cmu_bridge = true;
        pw.lexical = g2p.is_lexical(words[i]);
        pw.phones = bridge.cmu_to_cls(g2p.g2p(words[i]));
      } else {
        std::optional<LanguageId> word_lang;
        if (lang && script_of(*lang) == script) word_lang = lang;
        pw.phones = parse_word(words[i], word_lang, rules, inv);
      }
      result.words.push_back(std::move(pw));
    } catch (const Error& e) {
      if (strict) throw;
      result.issues.push_back({i, words[i], e.what()});
    }
  }
  return result;
}

}  // namespace clstk
