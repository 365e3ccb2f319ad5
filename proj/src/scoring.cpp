#include "clstk/scoring.hpp"

#include <algorithm>

#include "clstk/error.hpp"
#include "clstk/text.hpp"

namespace clstk {

namespace {

enum class Op : uint8_t { Match, Sub, Ins, Del };

template <typename Seq>
WerReport align(const Seq& ref, const Seq& hyp) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<size_t>> d(n + 1, std::vector<size_t>(m + 1, 0));
  std::vector<std::vector<Op>> op(n + 1, std::vector<Op>(m + 1, Op::Match));
  for (size_t i = 1; i <= n; ++i) {
    d[i][0] = i;
    op[i][0] = Op::Del;
  }
  for (size_t j = 1; j <= m; ++j) {
    d[0][j] = j;
    op[0][j] = Op::Ins;
  }
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      if (ref[i - 1] == hyp[j - 1]) {
        d[i][j] = d[i - 1][j - 1];
        op[i][j] = Op::Match;
        continue;
      }
      const size_t sub = d[i - 1][j - 1] + 1;
      const size_t ins = d[i][j - 1] + 1;
      const size_t del = d[i - 1][j] + 1;
      // Tie-break: substitution, then insertion, then deletion.
      if (sub <= ins && sub <= del) {
        d[i][j] = sub;
        op[i][j] = Op::Sub;
      } else if (ins <= del) {
        d[i][j] = ins;
        op[i][j] = Op::Ins;
      } else {
        d[i][j] = del;
        op[i][j] = Op::Del;
      }
    }
  }
  WerReport r;
  r.ref_words = n;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    switch (op[i][j]) {
      case Op::Match: --i; --j; break;
      case Op::Sub: ++r.substitutions; --i; --j; break;
      case Op::Ins: ++r.insertions; --j; break;
      case Op::Del: ++r.deletions; --i; break;
    }
  }
  r.wer = static_cast<double>(r.substitutions + r.deletions + r.insertions) /
          static_cast<double>(n);
  return r;
}

}  // namespace

WerReport compute_wer(const std::vector<std::string>& ref_words,
                      const std::vector<std::string>& hyp_words) {
  if (ref_words.empty()) throw EmptyReference("empty reference");
  return align(ref_words, hyp_words);
}

double compute_cer(const std::string& ref, const std::string& hyp) {
  const auto r = utf8_decode(ref);
  if (r.empty()) throw EmptyReference("empty reference");
  return align(r, utf8_decode(hyp)).wer;
}

double average_score(const std::map<LanguageId, double>& per_language,
                     const std::vector<LanguageId>& exclude) {
  double total = 0.0;
  size_t n = 0;
  for (const auto& [lang, score] : per_language) {
    if (std::find(exclude.begin(), exclude.end(), lang) != exclude.end())
      continue;
    total += score;
    ++n;
  }
  if (n == 0) throw EmptyInput("no languages to average");
  return total / static_cast<double>(n);
}

}  // namespace clstk
