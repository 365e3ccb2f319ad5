#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace clstk {

enum class PhoneCategory {
  ShortVowel,
  LongVowel,
  Diphthong,
  Consonant,
  Nasal,
  Semivowel,
  Fricative,
  SilenceOrBoundary,
};

struct ClsPhone {
  std::string label;
  PhoneCategory category = PhoneCategory::Consonant;
  bool language_specific = false;

  bool operator==(const ClsPhone& o) const { return label == o.label; }
  bool operator!=(const ClsPhone& o) const { return label != o.label; }

  bool is_vowel() const {
    return category == PhoneCategory::ShortVowel ||
           category == PhoneCategory::LongVowel ||
           category == PhoneCategory::Diphthong;
  }
};

// The CLS label inventory: one row per label with its compact character.
// The data file is the source of truth; duplicate labels or compact chars
// are fatal load errors.
class ClsInventory {
 public:
  static ClsInventory load(const std::string& path);
  // Inventory shipped with the toolkit (data/cls_inventory.tsv).
  static const ClsInventory& bundled();

  bool has_label(const std::string& label) const;
  const ClsPhone& phone(const std::string& label) const;
  char compact_of(const std::string& label) const;
  const ClsPhone& phone_of_compact(char c) const;
  bool has_compact(char c) const;

  const std::vector<ClsPhone>& phones() const { return phones_; }

 private:
  std::vector<ClsPhone> phones_;
  std::vector<char> compacts_;  // parallel to phones_
  std::unordered_map<std::string, size_t> by_label_;
  std::unordered_map<char, size_t> by_compact_;
};

// Directory holding the shipped data files. Honors the CLSTK_DATA
// environment variable, else the compiled-in default.
std::string default_data_dir();

}  // namespace clstk
