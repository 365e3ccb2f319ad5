#include "clstk/charmap.hpp"

#include <fstream>
#include <sstream>

#include "clstk/error.hpp"
#include "clstk/text.hpp"

namespace clstk {

std::string to_compact(const std::vector<ClsPhone>& phones,
                       const ClsInventory& inv) {
  std::string out;
  out.reserve(phones.size());
  for (const auto& p : phones) out += inv.compact_of(p.label);
  return out;
}

std::vector<ClsPhone> from_compact(const ClsString& s,
                                   const ClsInventory& inv) {
  std::vector<ClsPhone> out;
  out.reserve(s.size());
  for (char c : s) out.push_back(inv.phone_of_compact(c));
  return out;
}

CmuPhone strip_stress(const std::string& raw) {
  if (!raw.empty() && raw.back() >= '0' && raw.back() <= '2')
    return {raw.substr(0, raw.size() - 1)};
  return {raw};
}

CmuBridge CmuBridge::load(const std::string& path, const ClsInventory& inv) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  CmuBridge bridge;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string cmu, cls;
    if (!std::getline(ss, cmu, '\t') || !std::getline(ss, cls, '\t'))
      throw FormatError(path + ":" + std::to_string(lineno));
    std::vector<ClsPhone> phones;
    std::istringstream labels(cls);
    std::string label;
    while (labels >> label) phones.push_back(inv.phone(label));
    if (phones.empty())
      throw FormatError(path + ":" + std::to_string(lineno) + ": no labels");
    if (bridge.map_.count(cmu))
      throw FormatError(path + ": duplicate CMU phone '" + cmu + "'");
    bridge.map_[cmu] = std::move(phones);
  }
  if (bridge.map_.size() != 39)
    throw FormatError(path + ": expected 39 CMU phones, found " +
                      std::to_string(bridge.map_.size()));
  return bridge;
}

const CmuBridge& CmuBridge::bundled() {
  static const CmuBridge bridge =
      load(default_data_dir() + "/cmu_to_cls.tsv", ClsInventory::bundled());
  return bridge;
}

std::vector<ClsPhone> CmuBridge::cmu_to_cls(
    const std::vector<CmuPhone>& phones) const {
  std::vector<ClsPhone> out;
  for (const auto& p : phones) {
    auto it = map_.find(p.label);
    if (it == map_.end()) throw UnknownCmuPhone(p.label);
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

std::vector<std::string> CmuBridge::cmu_labels() const {
  std::vector<std::string> out;
  out.reserve(map_.size());
  for (const auto& [k, v] : map_) out.push_back(k);
  return out;
}

}  // namespace clstk
