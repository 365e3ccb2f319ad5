#include "clstk/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "clstk/error.hpp"
#include "clstk/text.hpp"

namespace clstk {

namespace {

std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> cols;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      cols.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cols.push_back(cur);
  return cols;
}

}  // namespace

std::vector<UtteranceRecord> ingest_manifest(const std::string& path,
                                             bool transcript_mode) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  std::vector<UtteranceRecord> records;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    UtteranceRecord rec;
    if (transcript_mode) {
      const auto sep = line.find_first_of(" \t");
      if (sep == std::string::npos)
        throw FormatError(path + ":" + std::to_string(lineno) +
                          ": expected 'utt_id text'");
      rec.utt_id = line.substr(0, sep);
      rec.native_text = normalize_text(line.substr(sep + 1));
    } else {
      const auto cols = split_tsv(line);
      if (cols.size() != 4)
        throw FormatError(path + ":" + std::to_string(lineno) + ": expected " +
                          "4 tab-separated columns, got " +
                          std::to_string(cols.size()));
      rec.utt_id = cols[0];
      rec.audio_path = cols[1];
      if (!cols[2].empty() && cols[2] != "-")
        rec.language = language_from_code(cols[2]);
      rec.native_text = normalize_text(cols[3]);
    }
    if (!seen.insert(rec.utt_id).second)
      throw DuplicateUttId(rec.utt_id + " at " + path + ":" +
                           std::to_string(lineno));
    records.push_back(std::move(rec));
  }
  return records;
}

EmitReport emit_dual_targets(const std::vector<UtteranceRecord>& records,
                             const std::string& native_path,
                             const std::string& cls_path, const RuleSet& rules,
                             const G2p& g2p, const CmuBridge& bridge,
                             const ClsInventory& inv) {
  EmitReport report;
  std::ostringstream native_out, cls_out;
  for (const auto& rec : records) {
    try {
      const ParseTextResult parsed = parse_text(
          rec.native_text, rec.language, /*strict=*/true, rules, g2p, bridge,
          inv);
      std::string cls_line;
      size_t latin_words = 0, latin_lexical = 0;
      for (const auto& pw : parsed.words) {
        if (!cls_line.empty()) cls_line += " ";
        cls_line += to_compact(pw.phones, inv);
        if (pw.via_cmu_bridge) {
          ++latin_words;
          if (pw.lexical) ++latin_lexical;
        }
      }
      native_out << rec.utt_id << " " << rec.native_text << "\n";
      cls_out << rec.utt_id << " " << cls_line << "\n";
      ++report.emitted;
      report.latin_words += latin_words;
      report.latin_lexical += latin_lexical;
    } catch (const Error& e) {
      report.failures.emplace_back(rec.utt_id, e.what());
    }
  }
  // Atomic write: temp file then rename.
  for (const auto& [path, content] :
       {std::pair{native_path, native_out.str()},
        std::pair{cls_path, cls_out.str()}}) {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw FileNotFound(tmp);
      out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
      throw FileNotFound("rename to " + path + " failed");
  }
  return report;
}

std::vector<RecoveredUtterance> recover_native(
    const std::vector<std::pair<std::string, ClsString>>& cls_hypotheses,
    const LidModel& lid,
    const std::map<LanguageId, const TranslitModel*>& translit_models,
    const std::string& placeholder) {
  for (LanguageId lang : lid.languages()) {
    auto it = translit_models.find(lang);
    if (it == translit_models.end() || it->second == nullptr)
      throw MissingTranslitModel(to_string(lang));
  }
  std::vector<RecoveredUtterance> out;
  out.reserve(cls_hypotheses.size());
  for (const auto& [utt_id, cls_text] : cls_hypotheses) {
    RecoveredUtterance rec;
    rec.utt_id = utt_id;
    try {
      const auto [lang, posterior] = lid.predict(cls_text);
      rec.language = lang;
      size_t lang_idx = 0;
      for (size_t i = 0; i < lid.languages().size(); ++i)
        if (lid.languages()[i] == lang) lang_idx = i;
      rec.posterior = posterior[lang_idx];
      const TranslitModel* model = translit_models.at(lang);
      auto text = model->transliterate_text(cls_text, placeholder);
      rec.native_text = text.text;
      rec.failed = !text.issues.empty();
    } catch (const Error&) {
      rec.language = lid.languages().front();
      rec.posterior = 0.0;
      rec.native_text = placeholder;
      rec.failed = true;
    }
    out.push_back(std::move(rec));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RecoveredUtterance& a, const RecoveredUtterance& b) {
                     return a.utt_id < b.utt_id;
                   });
  return out;
}

}  // namespace clstk
