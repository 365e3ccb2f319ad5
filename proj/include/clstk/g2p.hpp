#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "clstk/charmap.hpp"

namespace clstk {

// English word -> CMU phones. Pronouncing-dictionary lookup with a greedy
// longest-match letter-to-sound fallback, so the mapping is total over
// Latin-letter input.
class G2p {
 public:
  static G2p load(const std::string& lexicon_path,
                  const std::string& fallback_path,
                  const CmuBridge& bridge = CmuBridge::bundled());
  static const G2p& bundled();

  std::vector<CmuPhone> g2p(const std::string& word) const;
  bool is_lexical(const std::string& word) const;

  const std::map<std::string, std::vector<CmuPhone>>& lexicon() const {
    return lexicon_;
  }

 private:
  struct LtsRule {
    std::string pattern;
    std::vector<CmuPhone> phones;
    int priority;
  };

  std::vector<CmuPhone> fallback(const std::string& word) const;

  std::map<std::string, std::vector<CmuPhone>> lexicon_;
  std::vector<LtsRule> rules_;  // sorted longest pattern first
};

}  // namespace clstk
