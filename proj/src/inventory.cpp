#include "clstk/inventory.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "clstk/error.hpp"

namespace clstk {

namespace {

PhoneCategory category_from_name(const std::string& name) {
  if (name == "ShortVowel") return PhoneCategory::ShortVowel;
  if (name == "LongVowel") return PhoneCategory::LongVowel;
  if (name == "Diphthong") return PhoneCategory::Diphthong;
  if (name == "Consonant") return PhoneCategory::Consonant;
  if (name == "Nasal") return PhoneCategory::Nasal;
  if (name == "Semivowel") return PhoneCategory::Semivowel;
  if (name == "Fricative") return PhoneCategory::Fricative;
  if (name == "SilenceOrBoundary") return PhoneCategory::SilenceOrBoundary;
  throw FormatError("unknown phone category '" + name + "'");
}

}  // namespace

std::string default_data_dir() {
  if (const char* env = std::getenv("CLSTK_DATA")) return env;
#ifdef CLSTK_DEFAULT_DATA_DIR
  return CLSTK_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

ClsInventory ClsInventory::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  ClsInventory inv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string label, cat, ls, compact;
    if (!std::getline(ss, label, '\t') || !std::getline(ss, cat, '\t') ||
        !std::getline(ss, ls, '\t') || !std::getline(ss, compact, '\t'))
      throw FormatError(path + ":" + std::to_string(lineno));
    if (compact.size() != 1)
      throw FormatError(path + ":" + std::to_string(lineno) +
                        ": compact form must be one character");
    if (inv.by_label_.count(label))
      throw FormatError(path + ": duplicate label '" + label + "'");
    if (inv.by_compact_.count(compact[0]))
      throw FormatError(path + ": duplicate compact char '" + compact + "'");
    ClsPhone p{label, category_from_name(cat), ls == "1"};
    inv.by_label_[label] = inv.phones_.size();
    inv.by_compact_[compact[0]] = inv.phones_.size();
    inv.phones_.push_back(std::move(p));
    inv.compacts_.push_back(compact[0]);
  }
  if (inv.phones_.empty()) throw FormatError(path + ": empty inventory");
  return inv;
}

const ClsInventory& ClsInventory::bundled() {
  static const ClsInventory inv =
      load(default_data_dir() + "/cls_inventory.tsv");
  return inv;
}

bool ClsInventory::has_label(const std::string& label) const {
  return by_label_.count(label) != 0;
}

const ClsPhone& ClsInventory::phone(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) throw UnknownLabel(label);
  return phones_[it->second];
}

char ClsInventory::compact_of(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) throw UnknownLabel(label);
  return compacts_[it->second];
}

const ClsPhone& ClsInventory::phone_of_compact(char c) const {
  auto it = by_compact_.find(c);
  if (it == by_compact_.end())
    throw UnknownCompactChar(std::string(1, c));
  return phones_[it->second];
}

bool ClsInventory::has_compact(char c) const {
  return by_compact_.count(c) != 0;
}

}  // namespace clstk
