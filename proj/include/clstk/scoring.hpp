#pragma once

#include <map>
#include <string>
#include <vector>

#include "clstk/parser.hpp"

namespace clstk {

struct WerReport {
  size_t substitutions = 0;
  size_t deletions = 0;
  size_t insertions = 0;
  size_t ref_words = 0;
  double wer = 0.0;
  std::map<LanguageId, double> per_language;
  double average = 0.0;
};

// Minimum-edit-distance alignment, unit costs. On equal cost the traceback
// prefers substitution over insertion over deletion.
WerReport compute_wer(const std::vector<std::string>& ref_words,
                      const std::vector<std::string>& hyp_words);

// Same contract at codepoint level; whitespace counts as a symbol.
double compute_cer(const std::string& ref, const std::string& hyp);

// Unweighted mean over languages, optionally excluding some (the Avg-2
// convention).
double average_score(const std::map<LanguageId, double>& per_language,
                     const std::vector<LanguageId>& exclude = {});

}  // namespace clstk
