#include "clstk/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "clstk/error.hpp"
#include "clstk/text.hpp"

namespace clstk {

namespace {

constexpr char kEscape = '\x1B';
const std::string kUnkToken = "<unk>";
const std::string kPlaceholder = "\xEF\xBF\xBD";  // U+FFFD

// Escape literal boundary-marker characters in input text.
std::string escape_marker(const std::string& word) {
  const std::string& marker = BpeModel::boundary_marker();
  std::string out;
  size_t i = 0;
  while (i < word.size()) {
    if (word.compare(i, marker.size(), marker) == 0) {
      out += kEscape;
      out += marker;
      i += marker.size();
    } else {
      out += word[i++];
    }
  }
  return out;
}

std::string unescape_marker(const std::string& word) {
  const std::string& marker = BpeModel::boundary_marker();
  std::string out;
  size_t i = 0;
  while (i < word.size()) {
    if (word[i] == kEscape &&
        word.compare(i + 1, marker.size(), marker) == 0) {
      out += marker;
      i += 1 + marker.size();
    } else {
      out += word[i++];
    }
  }
  return out;
}

}  // namespace

const std::string& BpeModel::boundary_marker() {
  static const std::string marker = "\xE2\x9F\x82";  // U+27C2
  return marker;
}

std::vector<std::string> BpeModel::word_symbols(const std::string& word) const {
  std::vector<std::string> syms;
  const std::string escaped = escape_marker(word);
  for (Codepoint cp : utf8_decode(escaped)) syms.push_back(utf8_encode(cp));
  // Re-join escape prefixes with their marker so the escape is atomic.
  for (size_t i = 0; i + 1 < syms.size();) {
    if (syms[i] == std::string(1, kEscape)) {
      syms[i] += syms[i + 1];
      syms.erase(syms.begin() + static_cast<long>(i) + 1);
    } else {
      ++i;
    }
  }
  if (!syms.empty()) syms.back() += boundary_marker();
  return syms;
}

BpeModel BpeModel::train(const std::vector<std::string>& corpus,
                         size_t vocab_size) {
  // Word frequencies across the corpus.
  std::map<std::string, size_t> word_freq;
  for (const auto& line : corpus)
    for (const auto& w : split_words(line)) word_freq[w] += 1;
  if (word_freq.empty()) throw EmptyCorpus("no words in corpus");

  BpeModel model;
  model.vocab_size_target_ = vocab_size;
  std::vector<std::pair<std::vector<std::string>, size_t>> words;
  std::map<std::string, bool> base;
  for (const auto& [w, freq] : word_freq) {
    auto syms = model.word_symbols(w);
    for (const auto& s : syms) base[s] = true;
    words.emplace_back(std::move(syms), freq);
  }
  if (vocab_size <= base.size())
    throw VocabTooSmall("vocab_size " + std::to_string(vocab_size) +
                        " <= base symbol count " +
                        std::to_string(base.size()));

  model.tokens_.push_back(kUnkToken);
  for (const auto& [s, _] : base) model.tokens_.push_back(s);

  while (model.tokens_.size() - 1 < vocab_size) {
    std::map<std::pair<std::string, std::string>, size_t> pair_count;
    for (const auto& [syms, freq] : words)
      for (size_t i = 0; i + 1 < syms.size(); ++i)
        pair_count[{syms[i], syms[i + 1]}] += freq;
    // Max count; ties break to the lexicographically smallest pair, which
    // std::map iteration order gives us for free.
    const std::pair<std::string, std::string>* best = nullptr;
    size_t best_count = 0;
    for (const auto& [pair, count] : pair_count) {
      if (count > best_count) {
        best = &pair;
        best_count = count;
      }
    }
    if (!best || best_count < 2) break;
    const auto merge = *best;
    model.merges_.push_back(merge);
    model.tokens_.push_back(merge.first + merge.second);
    for (auto& [syms, freq] : words) {
      for (size_t i = 0; i + 1 < syms.size();) {
        if (syms[i] == merge.first && syms[i + 1] == merge.second) {
          syms[i] += syms[i + 1];
          syms.erase(syms.begin() + static_cast<long>(i) + 1);
        } else {
          ++i;
        }
      }
    }
  }
  for (uint32_t id = 0; id < model.tokens_.size(); ++id)
    model.ids_[model.tokens_[id]] = id;
  return model;
}

uint32_t BpeModel::id_of(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnkId : it->second;
}

const std::string& BpeModel::token(uint32_t id) const {
  if (id >= tokens_.size())
    throw UnknownTokenId(std::to_string(id));
  return tokens_[id];
}

std::vector<uint32_t> BpeModel::encode(const std::string& text) const {
  std::vector<uint32_t> out;
  for (const auto& w : split_words(text)) {
    auto syms = word_symbols(w);
    for (const auto& merge : merges_) {
      for (size_t i = 0; i + 1 < syms.size();) {
        if (syms[i] == merge.first && syms[i + 1] == merge.second) {
          syms[i] += syms[i + 1];
          syms.erase(syms.begin() + static_cast<long>(i) + 1);
        } else {
          ++i;
        }
      }
    }
    for (const auto& s : syms) out.push_back(id_of(s));
  }
  return out;
}

BpeModel::DecodeResult BpeModel::decode(const std::vector<uint32_t>& ids) const {
  DecodeResult result;
  std::string flat;
  for (uint32_t id : ids) {
    const std::string& tok = token(id);  // throws UnknownTokenId
    if (id == kUnkId) {
      flat += kPlaceholder;
      result.lossy = true;
    } else {
      flat += tok;
    }
  }
  // Split words at unescaped boundary markers.
  const std::string& marker = boundary_marker();
  std::string word;
  size_t i = 0;
  while (i < flat.size()) {
    if (flat[i] == kEscape && flat.compare(i + 1, marker.size(), marker) == 0) {
      word += kEscape;
      word.append(marker);
      i += 1 + marker.size();
    } else if (flat.compare(i, marker.size(), marker) == 0) {
      if (!result.text.empty()) result.text += " ";
      result.text += unescape_marker(word);
      word.clear();
      i += marker.size();
    } else {
      word += flat[i++];
    }
  }
  if (!word.empty()) {
    if (!result.text.empty()) result.text += " ";
    result.text += unescape_marker(word);
  }
  return result;
}

void BpeModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FileNotFound(path);
  out << "#clstk-bpe v" << kFormatVersion << "\n";
  out << "target " << vocab_size_target_ << "\n";
  out << "tokens " << tokens_.size() << "\n";
  for (const auto& t : tokens_) out << t << "\n";
  out << "merges " << merges_.size() << "\n";
  for (const auto& [a, b] : merges_) out << a << "\t" << b << "\n";
}

BpeModel BpeModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("#clstk-bpe v", 0) != 0)
    throw ModelFormatError(path + ": bad header");
  BpeModel m;
  std::string key;
  size_t n = 0;
  in >> key >> m.vocab_size_target_;
  if (key != "target") throw ModelFormatError(path);
  in >> key >> n;
  if (key != "tokens") throw ModelFormatError(path);
  std::getline(in, line);
  for (size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ModelFormatError(path);
    m.tokens_.push_back(line);
  }
  in >> key >> n;
  if (key != "merges") throw ModelFormatError(path);
  std::getline(in, line);
  for (size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ModelFormatError(path);
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ModelFormatError(path);
    m.merges_.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  for (uint32_t id = 0; id < m.tokens_.size(); ++id) m.ids_[m.tokens_[id]] = id;
  return m;
}

}  // namespace clstk
