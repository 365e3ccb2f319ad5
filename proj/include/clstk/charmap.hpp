#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "clstk/inventory.hpp"

namespace clstk {

// Compact one-character-per-phone string form of a CLS phone sequence.
using ClsString = std::string;

std::string to_compact(const std::vector<ClsPhone>& phones,
                       const ClsInventory& inv = ClsInventory::bundled());

std::vector<ClsPhone> from_compact(
    const ClsString& s, const ClsInventory& inv = ClsInventory::bundled());

struct CmuPhone {
  std::string label;  // stress digit already stripped

  bool operator==(const CmuPhone& o) const { return label == o.label; }
};

// Strips a trailing 0/1/2 stress digit if present.
CmuPhone strip_stress(const std::string& raw);

// CMU phone set -> CLS bridge, table-driven over exactly 39 phones.
class CmuBridge {
 public:
  static CmuBridge load(const std::string& path, const ClsInventory& inv);
  static const CmuBridge& bundled();

  std::vector<ClsPhone> cmu_to_cls(const std::vector<CmuPhone>& phones) const;
  size_t size() const { return map_.size(); }
  std::vector<std::string> cmu_labels() const;

 private:
  std::unordered_map<std::string, std::vector<ClsPhone>> map_;
};

}  // namespace clstk
