#include "clstk/script.hpp"

#include <fstream>
#include <sstream>

#include "clstk/error.hpp"

namespace clstk {

std::string to_string(ScriptId s) {
  switch (s) {
    case ScriptId::Devanagari: return "Devanagari";
    case ScriptId::Bengali: return "Bengali";
    case ScriptId::Gujarati: return "Gujarati";
    case ScriptId::Odia: return "Odia";
    case ScriptId::Tamil: return "Tamil";
    case ScriptId::Telugu: return "Telugu";
    case ScriptId::Latin: return "Latin";
    case ScriptId::Mixed: return "Mixed";
    case ScriptId::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {

ScriptId script_from_name(const std::string& name) {
  if (name == "Devanagari") return ScriptId::Devanagari;
  if (name == "Bengali") return ScriptId::Bengali;
  if (name == "Gujarati") return ScriptId::Gujarati;
  if (name == "Odia") return ScriptId::Odia;
  if (name == "Tamil") return ScriptId::Tamil;
  if (name == "Telugu") return ScriptId::Telugu;
  throw FormatError("unknown script name '" + name + "'");
}

bool is_latin_letter(Codepoint cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
  // Latin-1 letters, minus multiplication/division signs.
  if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;
  return false;
}

bool is_neutral(Codepoint cp) {
  if (cp >= '0' && cp <= '9') return true;
  if (cp == 0x0964 || cp == 0x0965) return true;  // danda, double danda
  if (cp < 0x80 && !is_latin_letter(cp) && !(cp >= '0' && cp <= '9'))
    return true;  // ASCII punctuation and controls
  return false;
}

}  // namespace

const ScriptTable& ScriptTable::builtin() {
  static const ScriptTable table = [] {
    ScriptTable t;
    t.blocks_ = {
        {0x0900, 0x097F, ScriptId::Devanagari},
        {0x0980, 0x09FF, ScriptId::Bengali},
        {0x0A80, 0x0AFF, ScriptId::Gujarati},
        {0x0B00, 0x0B7F, ScriptId::Odia},
        {0x0B80, 0x0BFF, ScriptId::Tamil},
        {0x0C00, 0x0C7F, ScriptId::Telugu},
    };
    return t;
  }();
  return table;
}

ScriptTable ScriptTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  ScriptTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string a, b, name;
    if (!std::getline(ss, a, '\t') || !std::getline(ss, b, '\t') ||
        !std::getline(ss, name, '\t'))
      throw FormatError(path + ":" + std::to_string(lineno));
    t.blocks_.push_back({static_cast<Codepoint>(std::stoul(a, nullptr, 16)),
                         static_cast<Codepoint>(std::stoul(b, nullptr, 16)),
                         script_from_name(name)});
  }
  return t;
}

ScriptId ScriptTable::block_of(Codepoint cp) const {
  for (const auto& b : blocks_)
    if (cp >= b.first && cp <= b.last) return b.script;
  if (is_latin_letter(cp)) return ScriptId::Latin;
  return ScriptId::Unknown;
}

CharClass classify_codepoint(Codepoint cp, ScriptId script) {
  if (script == ScriptId::Latin) {
    if (is_latin_letter(cp)) return CharClass::Consonant;
    if (cp >= '0' && cp <= '9') return CharClass::Digit;
    return CharClass::Symbol;
  }
  const auto& table = ScriptTable::builtin();
  if (table.block_of(cp) != script) return CharClass::Symbol;
  Codepoint base = 0;
  for (const auto& b : table.blocks())
    if (b.script == script) base = b.first;
  const Codepoint off = cp - base;
  // Block layouts are parallel across the Brahmic scripts handled here.
  if (off <= 0x03) return CharClass::CombiningSign;  // candrabindu/anusvara/visarga
  if (off >= 0x04 && off <= 0x14) return CharClass::IndepVowel;
  if (off >= 0x15 && off <= 0x39) return CharClass::Consonant;
  if (off == 0x3C) return CharClass::CombiningSign;  // nukta
  if (off == 0x3D) return CharClass::Symbol;         // avagraha
  if (off >= 0x3E && off <= 0x4C) return CharClass::CombiningSign;  // matras
  if (off == 0x4D) return CharClass::Virama;
  if (off == 0x4E && script == ScriptId::Bengali)
    return CharClass::Consonant;  // khanda ta
  if (off >= 0x55 && off <= 0x57) return CharClass::CombiningSign;  // length marks
  if (off >= 0x58 && off <= 0x5F) return CharClass::Consonant;  // nukta letters
  if (off >= 0x60 && off <= 0x61) return CharClass::IndepVowel;  // vocalic RR/LL
  if (off >= 0x62 && off <= 0x63) return CharClass::CombiningSign;
  if (off >= 0x66 && off <= 0x6F) return CharClass::Digit;
  if (off == 0x71 && script == ScriptId::Odia) return CharClass::Consonant;
  return CharClass::Symbol;
}

ScriptId detect_script(std::string_view token) {
  const auto cps = utf8_decode(token);
  const auto& table = ScriptTable::builtin();
  bool saw_supported = false;
  bool saw_unknown = false;
  ScriptId found = ScriptId::Unknown;
  int distinct = 0;
  for (Codepoint cp : cps) {
    if (is_neutral(cp)) continue;
    if (is_latin_letter(cp)) {
      if (found != ScriptId::Latin || !saw_supported) {
        if (saw_supported && found != ScriptId::Latin) ++distinct;
        if (!saw_supported) distinct = 1;
        found = ScriptId::Latin;
        saw_supported = true;
      }
      continue;
    }
    ScriptId s = table.block_of(cp);
    if (s == ScriptId::Unknown) {
      saw_unknown = true;
      continue;
    }
    // Indic digits inside a block are shared numerals; still treat as neutral
    // for identification.
    if (classify_codepoint(cp, s) == CharClass::Digit) continue;
    if (!saw_supported) {
      found = s;
      saw_supported = true;
      distinct = 1;
    } else if (s != found) {
      ++distinct;
      found = s;
    }
  }
  if (!saw_supported && !saw_unknown) throw EmptyInput("no letter codepoints");
  if (!saw_supported) return ScriptId::Unknown;
  if (distinct > 1 || (saw_supported && saw_unknown)) return ScriptId::Mixed;
  return found;
}

std::vector<Akshara> segment_aksharas(std::string_view word, ScriptId script) {
  if (script == ScriptId::Mixed || script == ScriptId::Unknown)
    throw UnsupportedScript(to_string(script));
  const auto cps = utf8_decode(word);
  std::vector<Akshara> out;
  bool cluster_open = false;     // current akshara can still accept signs
  bool after_virama = false;     // a following consonant joins the cluster
  for (Codepoint cp : cps) {
    const CharClass cls = classify_codepoint(cp, script);
    switch (cls) {
      case CharClass::Consonant:
        if (after_virama) {
          out.back().codepoints.push_back(cp);
          after_virama = false;
        } else {
          out.push_back({{cp}, AksharaKind::ConsonantCluster});
          cluster_open = true;
        }
        break;
      case CharClass::IndepVowel:
        out.push_back({{cp}, AksharaKind::IndependentVowel});
        cluster_open = true;
        after_virama = false;
        break;
      case CharClass::CombiningSign:
        if (!cluster_open)
          throw OrphanCombiningMark(utf8_encode(cp) + " in '" +
                                    std::string(word) + "'");
        out.back().codepoints.push_back(cp);
        after_virama = false;
        break;
      case CharClass::Virama:
        if (!cluster_open ||
            out.back().kind != AksharaKind::ConsonantCluster)
          throw OrphanCombiningMark("virama without consonant in '" +
                                    std::string(word) + "'");
        out.back().codepoints.push_back(cp);
        after_virama = true;
        break;
      case CharClass::Digit:
        out.push_back({{cp}, AksharaKind::Digit});
        cluster_open = false;
        after_virama = false;
        break;
      case CharClass::Symbol:
        out.push_back({{cp}, AksharaKind::Symbol});
        cluster_open = false;
        after_virama = false;
        break;
    }
  }
  return out;
}

}  // namespace clstk
