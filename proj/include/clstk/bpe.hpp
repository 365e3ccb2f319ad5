#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace clstk {

// Greedy most-frequent-pair byte-pair encoding over word-internal symbol
// sequences. A zero-merge model is exactly character-unit tokenization.
class BpeModel {
 public:
  static constexpr int kFormatVersion = 1;
  static constexpr uint32_t kUnkId = 0;

  // The word-boundary marker fused onto each word's final symbol.
  static const std::string& boundary_marker();

  static BpeModel train(const std::vector<std::string>& corpus,
                        size_t vocab_size);

  std::vector<uint32_t> encode(const std::string& text) const;

  struct DecodeResult {
    std::string text;
    bool lossy = false;  // true when UNK ids were decoded to a placeholder
  };
  DecodeResult decode(const std::vector<uint32_t>& ids) const;

  const std::vector<std::pair<std::string, std::string>>& merges() const {
    return merges_;
  }
  const std::string& token(uint32_t id) const;
  size_t vocab_size() const { return tokens_.size(); }

  void save(const std::string& path) const;
  static BpeModel load(const std::string& path);

 private:
  uint32_t id_of(const std::string& token) const;
  std::vector<std::string> word_symbols(const std::string& word) const;

  std::vector<std::pair<std::string, std::string>> merges_;
  std::vector<std::string> tokens_;  // index = id; id 0 reserved for UNK
  std::unordered_map<std::string, uint32_t> ids_;
  size_t vocab_size_target_ = 0;
};

}  // namespace clstk
