#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "clstk/parser.hpp"

namespace clstk {

struct FeatureConfig {
  int char_ngram_min = 1;
  int char_ngram_max = 3;
  int word_ngram_min = 1;
  int word_ngram_max = 2;
  bool sublinear_tf = false;
};

// Sparse feature counts, keyed by namespaced feature name ("c:..."/"w:...").
using FeatureCounts = std::map<std::string, double>;

// Character n-grams within words (with boundary markers) plus word n-grams.
FeatureCounts extract_features(const std::string& cls_text,
                               const FeatureConfig& config);

// Multinomial naive Bayes over TF-IDF features of compact CLS text.
class LidModel {
 public:
  static constexpr int kFormatVersion = 1;

  static LidModel train(
      const std::vector<std::pair<std::string, LanguageId>>& corpus,
      const FeatureConfig& config, double alpha = 1.0);

  // Returns the argmax language and the full posterior (ordered as
  // languages()). Ties break to the earlier language in declared order.
  std::pair<LanguageId, std::vector<double>> predict(
      const std::string& cls_text) const;

  const std::vector<LanguageId>& languages() const { return languages_; }
  const FeatureConfig& config() const { return config_; }

  void save(const std::string& path) const;
  static LidModel load(const std::string& path);

 private:
  void check_valid() const;

  std::vector<LanguageId> languages_;
  std::vector<double> log_priors_;
  std::unordered_map<std::string, size_t> feature_vocab_;
  std::vector<double> idf_;
  // log_likelihoods_[lang][feature]
  std::vector<std::vector<double>> log_likelihoods_;
  double alpha_ = 1.0;
  FeatureConfig config_;
};

}  // namespace clstk
