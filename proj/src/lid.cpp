#include "clstk/lid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "clstk/error.hpp"
#include "clstk/text.hpp"

namespace clstk {

FeatureCounts extract_features(const std::string& cls_text,
                               const FeatureConfig& config) {
  const auto words = split_words(cls_text);
  if (words.empty()) throw EmptyInput("no tokens in sentence");
  FeatureCounts counts;
  for (const auto& w : words) {
    for (int n = config.char_ngram_min; n <= config.char_ngram_max; ++n) {
      if (n <= 0 || static_cast<size_t>(n) > w.size()) continue;
      for (size_t i = 0; i + n <= w.size(); ++i)
        counts["c:" + w.substr(i, n)] += 1.0;
    }
  }
  for (int n = config.word_ngram_min; n <= config.word_ngram_max; ++n) {
    if (n <= 0 || static_cast<size_t>(n) > words.size()) continue;
    for (size_t i = 0; i + n <= words.size(); ++i) {
      std::string gram = "w:" + words[i];
      for (size_t k = 1; k < static_cast<size_t>(n); ++k)
        gram += "_" + words[i + k];
      counts[gram] += 1.0;
    }
  }
  return counts;
}

namespace {

double tf_weight(double count, bool sublinear) {
  return sublinear ? 1.0 + std::log(count) : count;
}

}  // namespace

LidModel LidModel::train(
    const std::vector<std::pair<std::string, LanguageId>>& corpus,
    const FeatureConfig& config, double alpha) {
  if (corpus.empty()) throw EmptyCorpus("no training sentences");
  std::set<LanguageId> langs;
  for (const auto& [text, lang] : corpus) langs.insert(lang);
  if (langs.size() < 2)
    throw DegenerateCorpus("need at least two languages, got " +
                           std::to_string(langs.size()));

  LidModel m;
  m.alpha_ = alpha;
  m.config_ = config;
  m.languages_.assign(langs.begin(), langs.end());
  std::unordered_map<int, size_t> lang_index;
  for (size_t i = 0; i < m.languages_.size(); ++i)
    lang_index[static_cast<int>(m.languages_[i])] = i;

  // Per-sentence counts, document frequencies, vocabulary.
  std::vector<FeatureCounts> sentence_counts;
  sentence_counts.reserve(corpus.size());
  std::map<std::string, size_t> df;  // ordered for deterministic indexing
  for (const auto& [text, lang] : corpus) {
    FeatureCounts counts = extract_features(text, config);
    for (const auto& [feat, c] : counts) df[feat] += 1;
    sentence_counts.push_back(std::move(counts));
  }
  const double n_docs = static_cast<double>(corpus.size());
  m.idf_.reserve(df.size());
  for (const auto& [feat, d] : df) {
    m.feature_vocab_[feat] = m.idf_.size();
    m.idf_.push_back(std::log((1.0 + n_docs) / (1.0 + d)) + 1.0);
  }

  // TF-IDF weighted class-conditional sums.
  std::vector<std::vector<double>> sums(
      m.languages_.size(), std::vector<double>(m.idf_.size(), 0.0));
  std::vector<double> class_count(m.languages_.size(), 0.0);
  for (size_t s = 0; s < corpus.size(); ++s) {
    const size_t c = lang_index[static_cast<int>(corpus[s].second)];
    class_count[c] += 1.0;
    for (const auto& [feat, count] : sentence_counts[s]) {
      const size_t t = m.feature_vocab_[feat];
      sums[c][t] += tf_weight(count, config.sublinear_tf) * m.idf_[t];
    }
  }

  m.log_priors_.resize(m.languages_.size());
  for (size_t c = 0; c < m.languages_.size(); ++c)
    m.log_priors_[c] = std::log(class_count[c] / n_docs);

  m.log_likelihoods_.assign(m.languages_.size(),
                            std::vector<double>(m.idf_.size(), 0.0));
  for (size_t c = 0; c < m.languages_.size(); ++c) {
    double total = 0.0;
    for (double v : sums[c]) total += v;
    const double denom = total + alpha * static_cast<double>(m.idf_.size());
    for (size_t t = 0; t < m.idf_.size(); ++t)
      m.log_likelihoods_[c][t] = std::log((sums[c][t] + alpha) / denom);
  }
  m.check_valid();
  return m;
}

std::pair<LanguageId, std::vector<double>> LidModel::predict(
    const std::string& cls_text) const {
  const FeatureCounts counts = extract_features(cls_text, config_);
  std::vector<double> scores = log_priors_;
  for (const auto& [feat, count] : counts) {
    auto it = feature_vocab_.find(feat);
    if (it == feature_vocab_.end()) continue;  // OOV features carry no evidence
    const double w = tf_weight(count, config_.sublinear_tf) * idf_[it->second];
    for (size_t c = 0; c < languages_.size(); ++c)
      scores[c] += w * log_likelihoods_[c][it->second];
  }
  // Log-sum-exp normalization.
  const double mx = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double s : scores) z += std::exp(s - mx);
  std::vector<double> posterior(scores.size());
  for (size_t c = 0; c < scores.size(); ++c)
    posterior[c] = std::exp(scores[c] - mx) / z;
  size_t best = 0;
  for (size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = c;
  return {languages_[best], std::move(posterior)};
}

void LidModel::check_valid() const {
  double total = 0.0;
  for (double lp : log_priors_) {
    if (!std::isfinite(lp)) throw ModelFormatError("non-finite prior");
    total += std::exp(lp);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ModelFormatError("priors do not sum to 1");
  for (const auto& row : log_likelihoods_) {
    if (row.size() != idf_.size())
      throw ModelFormatError("likelihood row size mismatch");
    for (double v : row)
      if (!std::isfinite(v)) throw ModelFormatError("non-finite likelihood");
  }
}

void LidModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FileNotFound(path);
  out.precision(17);
  out << "#clstk-lid v" << kFormatVersion << "\n";
  out << "config " << config_.char_ngram_min << " " << config_.char_ngram_max
      << " " << config_.word_ngram_min << " " << config_.word_ngram_max << " "
      << (config_.sublinear_tf ? 1 : 0) << "\n";
  out << "alpha " << alpha_ << "\n";
  out << "languages";
  for (auto l : languages_) out << " " << to_string(l);
  out << "\npriors";
  for (double p : log_priors_) out << " " << p;
  out << "\nvocab " << feature_vocab_.size() << "\n";
  std::vector<const std::string*> by_index(feature_vocab_.size());
  for (const auto& [feat, idx] : feature_vocab_) by_index[idx] = &feat;
  for (size_t i = 0; i < by_index.size(); ++i)
    out << *by_index[i] << "\t" << idf_[i] << "\n";
  for (size_t c = 0; c < languages_.size(); ++c) {
    out << "likelihoods " << to_string(languages_[c]);
    for (double v : log_likelihoods_[c]) out << " " << v;
    out << "\n";
  }
}

LidModel LidModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  LidModel m;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#clstk-lid v", 0) != 0)
    throw ModelFormatError(path + ": bad header");
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "config") {
      int sub = 0;
      ss >> m.config_.char_ngram_min >> m.config_.char_ngram_max >>
          m.config_.word_ngram_min >> m.config_.word_ngram_max >> sub;
      m.config_.sublinear_tf = sub != 0;
    } else if (key == "alpha") {
      ss >> m.alpha_;
    } else if (key == "languages") {
      std::string code;
      while (ss >> code) m.languages_.push_back(language_from_code(code));
    } else if (key == "priors") {
      double p;
      while (ss >> p) m.log_priors_.push_back(p);
    } else if (key == "vocab") {
      size_t n = 0;
      ss >> n;
      m.idf_.resize(n);
      for (size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw ModelFormatError(path);
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ModelFormatError(path);
        m.feature_vocab_[line.substr(0, tab)] = i;
        m.idf_[i] = std::stod(line.substr(tab + 1));
      }
    } else if (key == "likelihoods") {
      std::string code;
      ss >> code;
      std::vector<double> row;
      row.reserve(m.idf_.size());
      double v;
      while (ss >> v) row.push_back(v);
      m.log_likelihoods_.push_back(std::move(row));
    } else if (!key.empty()) {
      throw ModelFormatError(path + ": unknown key '" + key + "'");
    }
  }
  if (m.log_likelihoods_.size() != m.languages_.size())
    throw ModelFormatError(path + ": likelihood rows != languages");
  m.check_valid();
  return m;
}

}  // namespace clstk
