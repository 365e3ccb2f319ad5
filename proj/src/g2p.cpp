#include "clstk/g2p.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "clstk/error.hpp"
#include "clstk/inventory.hpp"

namespace clstk {

namespace {

bool valid_g2p_word(const std::string& word) {
  if (word.empty()) return false;
  bool has_letter = false;
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      has_letter = true;
    } else if (c != '\'' && c != '-') {
      return false;
    }
  }
  return has_letter;
}

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

G2p G2p::load(const std::string& lexicon_path, const std::string& fallback_path,
              const CmuBridge& bridge) {
  std::unordered_set<std::string> valid;
  for (const auto& l : bridge.cmu_labels()) valid.insert(l);

  G2p g;
  {
    std::ifstream in(lexicon_path);
    if (!in) throw FileNotFound(lexicon_path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == ';' || line[0] == '#') continue;
      std::istringstream ss(line);
      std::string word;
      ss >> word;
      // Alternate pronunciations carry a "(n)" suffix; first entry wins.
      if (auto paren = word.find('('); paren != std::string::npos)
        word = word.substr(0, paren);
      word = lower(word);
      std::vector<CmuPhone> phones;
      std::string raw;
      while (ss >> raw) {
        CmuPhone p = strip_stress(raw);
        if (!valid.count(p.label))
          throw FormatError(lexicon_path + ":" + std::to_string(lineno) +
                            ": unknown CMU phone '" + raw + "'");
        phones.push_back(std::move(p));
      }
      if (phones.empty())
        throw FormatError(lexicon_path + ":" + std::to_string(lineno));
      g.lexicon_.emplace(word, std::move(phones));  // keeps the first entry
    }
  }
  {
    std::ifstream in(fallback_path);
    if (!in) throw FileNotFound(fallback_path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::string pattern, phones_str, prio;
      if (!std::getline(ss, pattern, '\t') ||
          !std::getline(ss, phones_str, '\t') || !std::getline(ss, prio, '\t'))
        throw FormatError(fallback_path + ":" + std::to_string(lineno));
      LtsRule rule;
      rule.pattern = pattern;
      rule.priority = std::stoi(prio);
      std::istringstream ps(phones_str);
      std::string raw;
      while (ps >> raw) {
        CmuPhone p = strip_stress(raw);
        if (!valid.count(p.label))
          throw FormatError(fallback_path + ":" + std::to_string(lineno) +
                            ": unknown CMU phone '" + raw + "'");
        rule.phones.push_back(std::move(p));
      }
      g.rules_.push_back(std::move(rule));
    }
    std::stable_sort(g.rules_.begin(), g.rules_.end(),
                     [](const LtsRule& a, const LtsRule& b) {
                       if (a.pattern.size() != b.pattern.size())
                         return a.pattern.size() > b.pattern.size();
                       return a.priority > b.priority;
                     });
  }
  return g;
}

const G2p& G2p::bundled() {
  static const G2p g = load(default_data_dir() + "/en_lexicon.dict",
                            default_data_dir() + "/en_fallback.tsv");
  return g;
}

std::vector<CmuPhone> G2p::g2p(const std::string& word) const {
  if (!valid_g2p_word(word)) throw NonLatinInput("'" + word + "'");
  const std::string key = lower(word);
  auto it = lexicon_.find(key);
  if (it != lexicon_.end()) return it->second;
  return fallback(key);
}

bool G2p::is_lexical(const std::string& word) const {
  if (!valid_g2p_word(word)) throw NonLatinInput("'" + word + "'");
  return lexicon_.count(lower(word)) != 0;
}

std::vector<CmuPhone> G2p::fallback(const std::string& word) const {
  std::vector<CmuPhone> out;
  size_t i = 0;
  while (i < word.size()) {
    bool matched = false;
    for (const auto& rule : rules_) {
      if (word.compare(i, rule.pattern.size(), rule.pattern) == 0) {
        out.insert(out.end(), rule.phones.begin(), rule.phones.end());
        i += rule.pattern.size();
        matched = true;
        break;
      }
    }
    if (!matched) ++i;  // apostrophes/hyphens without a rule
  }
  if (out.empty()) out.push_back({"AH"});
  return out;
}

}  // namespace clstk
