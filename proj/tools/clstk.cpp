// clstk: command-line front end for the CLS text-processing toolkit.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clstk/bpe.hpp"
#include "clstk/charmap.hpp"
#include "clstk/error.hpp"
#include "clstk/g2p.hpp"
#include "clstk/lid.hpp"
#include "clstk/manifest.hpp"
#include "clstk/parser.hpp"
#include "clstk/scoring.hpp"
#include "clstk/text.hpp"
#include "clstk/translit.hpp"

using json = nlohmann::json;
using namespace clstk;

namespace {

struct GlobalOpts {
  std::string lang;
  std::string rules_dir;
  std::string model;
  std::string format = "tsv";
  bool strict = true;
};

std::optional<LanguageId> opt_lang(const GlobalOpts& g) {
  if (g.lang.empty()) return {};
  return language_from_code(g.lang);
}

std::vector<std::string> gather_lines(const std::vector<std::string>& args,
                                      const std::string& input_path) {
  std::vector<std::string> lines;
  if (!input_path.empty()) {
    std::ifstream in(input_path);
    if (!in) throw FileNotFound(input_path);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) lines.push_back(line);
  }
  if (!args.empty()) {
    std::string joined;
    for (const auto& a : args) {
      if (!joined.empty()) joined += " ";
      joined += a;
    }
    lines.push_back(joined);
  }
  if (lines.empty()) throw EmptyInput("no input text (args or --input)");
  return lines;
}

std::string join_labels(const std::vector<ClsPhone>& phones) {
  std::string out;
  for (const auto& p : phones) {
    if (!out.empty()) out += " ";
    out += p.label;
  }
  return out;
}

// ------------------------------------------------------------------ parse

int cmd_parse(const GlobalOpts& g, const std::vector<std::string>& args,
              const std::string& input_path, bool compact_out) {
  json jout = json::array();
  int status = 0;
  for (const auto& line : gather_lines(args, input_path)) {
    const auto r = parse_text(normalize_text(line), opt_lang(g), g.strict);
    for (const auto& w : r.words) {
      if (g.format == "json") {
        json jw;
        jw["word"] = w.word;
        jw["labels"] = json::array();
        for (const auto& p : w.phones) jw["labels"].push_back(p.label);
        jw["compact"] = to_compact(w.phones);
        jw["via_cmu_bridge"] = w.via_cmu_bridge;
        if (w.via_cmu_bridge) jw["lexical"] = w.lexical;
        jout.push_back(jw);
      } else {
        std::cout << w.word << "\t"
                  << (compact_out ? to_compact(w.phones)
                                  : join_labels(w.phones))
                  << "\n";
      }
    }
    for (const auto& issue : r.issues) {
      std::cerr << "warning: word " << issue.word_index << " '" << issue.word
                << "': " << issue.message << "\n";
      status = 1;
    }
  }
  if (g.format == "json") std::cout << jout.dump(2) << "\n";
  return status;
}

// ---------------------------------------------------------------- compact

int cmd_compact(const GlobalOpts& g, const std::vector<std::string>& args,
                bool decode) {
  if (args.empty()) throw EmptyInput("no labels given");
  if (decode) {
    // Compact strings back to space-separated labels.
    for (const auto& a : args)
      std::cout << join_labels(from_compact(a)) << "\n";
  } else {
    std::vector<ClsPhone> phones;
    for (const auto& a : args)
      phones.push_back(ClsInventory::bundled().phone(a));
    std::cout << to_compact(phones) << "\n";
  }
  (void)g;
  return 0;
}

// -------------------------------------------------------------------- g2p

int cmd_g2p(const GlobalOpts& g, const std::vector<std::string>& args,
            const std::string& input_path) {
  const auto& g2p = G2p::bundled();
  const auto& bridge = CmuBridge::bundled();
  json jout = json::array();
  for (const auto& line : gather_lines(args, input_path)) {
    for (const auto& w : split_words(line)) {
      const auto cmu = g2p.g2p(w);
      const auto cls = bridge.cmu_to_cls(cmu);
      std::string cmu_str;
      for (const auto& p : cmu) {
        if (!cmu_str.empty()) cmu_str += " ";
        cmu_str += p.label;
      }
      if (g.format == "json") {
        json jw;
        jw["word"] = w;
        jw["cmu"] = cmu_str;
        jw["labels"] = join_labels(cls);
        jw["compact"] = to_compact(cls);
        jw["lexical"] = g2p.is_lexical(w);
        jout.push_back(jw);
      } else {
        std::cout << w << "\t" << cmu_str << "\t" << to_compact(cls) << "\n";
      }
    }
  }
  if (g.format == "json") std::cout << jout.dump(2) << "\n";
  return 0;
}

// -------------------------------------------------------------------- lid

std::vector<std::pair<std::string, LanguageId>> read_lid_corpus(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  std::vector<std::pair<std::string, LanguageId>> corpus;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError(path + ":" + std::to_string(lineno) +
                        ": expected 'lang<TAB>cls text'");
    corpus.emplace_back(line.substr(tab + 1),
                        language_from_code(line.substr(0, tab)));
  }
  return corpus;
}

int cmd_lid_train(const GlobalOpts& g, const std::string& input_path,
                  const FeatureConfig& config, double alpha) {
  if (g.model.empty()) throw FormatError("--model is required");
  const auto model = LidModel::train(read_lid_corpus(input_path), config,
                                     alpha);
  model.save(g.model);
  std::cerr << "trained on " << model.languages().size() << " languages\n";
  return 0;
}

int cmd_lid_predict(const GlobalOpts& g, const std::vector<std::string>& args,
                    const std::string& input_path) {
  if (g.model.empty()) throw FormatError("--model is required");
  const auto model = LidModel::load(g.model);
  json jout = json::array();
  for (const auto& line : gather_lines(args, input_path)) {
    const auto [lang, post] = model.predict(line);
    if (g.format == "json") {
      json jw;
      jw["text"] = line;
      jw["language"] = to_string(lang);
      for (size_t c = 0; c < post.size(); ++c)
        jw["posterior"][to_string(model.languages()[c])] = post[c];
      jout.push_back(jw);
    } else {
      std::cout << to_string(lang);
      for (size_t c = 0; c < post.size(); ++c)
        std::cout << "\t" << to_string(model.languages()[c]) << "="
                  << post[c];
      std::cout << "\n";
    }
  }
  if (g.format == "json") std::cout << jout.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- translit

std::vector<TranslitTrainRecord> read_parallel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  std::vector<TranslitTrainRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError(path + ":" + std::to_string(lineno) +
                        ": expected 'cls<TAB>native'");
    out.push_back({line.substr(0, tab), normalize_text(line.substr(tab + 1))});
  }
  return out;
}

int cmd_translit_train(const GlobalOpts& g, const std::string& input_path,
                       int order, int beam) {
  if (g.model.empty()) throw FormatError("--model is required");
  if (g.lang.empty()) throw FormatError("--lang is required");
  const auto model = TranslitModel::train(read_parallel(input_path),
                                          language_from_code(g.lang), order,
                                          beam);
  model.save(g.model);
  return 0;
}

int cmd_translit(const GlobalOpts& g, const std::vector<std::string>& args,
                 const std::string& input_path, int nbest) {
  if (g.model.empty()) throw FormatError("--model is required");
  const auto model = TranslitModel::load(g.model);
  int status = 0;
  json jout = json::array();
  for (const auto& line : gather_lines(args, input_path)) {
    if (nbest > 1) {
      for (const auto& w : split_words(line)) {
        auto hyps = model.transliterate_word(w);
        if (hyps.size() > static_cast<size_t>(nbest))
          hyps.resize(static_cast<size_t>(nbest));
        if (g.format == "json") {
          json jw;
          jw["cls"] = w;
          for (const auto& h : hyps)
            jw["hypotheses"].push_back(
                {{"native", h.native_word}, {"score", h.score}});
          jout.push_back(jw);
        } else {
          for (const auto& h : hyps)
            std::cout << w << "\t" << h.native_word << "\t" << h.score
                      << "\n";
        }
      }
    } else {
      const auto r = model.transliterate_text(line);
      if (g.strict && !r.issues.empty())
        throw Error("transliteration failed for " +
                    std::to_string(r.issues.size()) + " word(s): " +
                    r.issues[0].second);
      if (g.format == "json") {
        json jw;
        jw["cls"] = line;
        jw["native"] = r.text;
        jout.push_back(jw);
      } else {
        std::cout << r.text << "\n";
      }
      for (const auto& [idx, msg] : r.issues) {
        std::cerr << "warning: word " << idx << ": " << msg << "\n";
        status = 1;
      }
    }
  }
  if (g.format == "json") std::cout << jout.dump(2) << "\n";
  return status;
}

// -------------------------------------------------------------------- bpe

int cmd_bpe_train(const GlobalOpts& g, const std::string& input_path,
                  size_t vocab_size) {
  if (g.model.empty()) throw FormatError("--model is required");
  std::ifstream in(input_path);
  if (!in) throw FileNotFound(input_path);
  std::vector<std::string> corpus;
  std::string line;
  while (std::getline(in, line)) corpus.push_back(line);
  const auto model = BpeModel::train(corpus, vocab_size);
  model.save(g.model);
  std::cerr << "vocab " << model.vocab_size() << ", " << model.merges().size()
            << " merges\n";
  return 0;
}

int cmd_bpe_encode(const GlobalOpts& g, const std::vector<std::string>& args,
                   const std::string& input_path) {
  if (g.model.empty()) throw FormatError("--model is required");
  const auto model = BpeModel::load(g.model);
  for (const auto& line : gather_lines(args, input_path)) {
    const auto ids = model.encode(line);
    for (size_t i = 0; i < ids.size(); ++i)
      std::cout << (i ? " " : "") << ids[i];
    std::cout << "\n";
  }
  return 0;
}

int cmd_bpe_decode(const GlobalOpts& g, const std::vector<std::string>& args,
                   const std::string& input_path) {
  if (g.model.empty()) throw FormatError("--model is required");
  const auto model = BpeModel::load(g.model);
  int status = 0;
  for (const auto& line : gather_lines(args, input_path)) {
    std::vector<uint32_t> ids;
    std::istringstream ss(line);
    uint32_t id;
    while (ss >> id) ids.push_back(id);
    const auto r = model.decode(ids);
    std::cout << r.text << "\n";
    if (r.lossy) {
      std::cerr << "warning: unknown ids decoded to placeholder\n";
      status = 1;
    }
  }
  return status;
}

// -------------------------------------------------------- emission/recovery

int cmd_emit_dual(const GlobalOpts& g, const std::string& input_path,
                  const std::string& native_out, const std::string& cls_out) {
  const auto records = ingest_manifest(input_path);
  const auto report = emit_dual_targets(records, native_out, cls_out);
  if (g.format == "json") {
    json j;
    j["emitted"] = report.emitted;
    j["latin_words"] = report.latin_words;
    j["latin_lexical"] = report.latin_lexical;
    for (const auto& [id, why] : report.failures)
      j["failures"].push_back({{"utt_id", id}, {"error", why}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::cerr << "emitted " << report.emitted << " of " << records.size()
              << " utterances; " << report.latin_words << " latin words ("
              << report.latin_lexical << " lexical)\n";
    for (const auto& [id, why] : report.failures)
      std::cerr << "skipped " << id << ": " << why << "\n";
  }
  if (g.strict && !report.failures.empty()) return 1;
  return 0;
}

int cmd_recover(const GlobalOpts& g, const std::string& input_path,
                const std::string& lid_path,
                const std::vector<std::string>& translit_specs) {
  const auto lid = LidModel::load(lid_path);
  std::map<LanguageId, TranslitModel> owned;
  for (const auto& spec : translit_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw FormatError("--translit-model expects lang=path, got '" + spec +
                        "'");
    owned.emplace(language_from_code(spec.substr(0, eq)),
                  TranslitModel::load(spec.substr(eq + 1)));
  }
  std::map<LanguageId, const TranslitModel*> models;
  for (const auto& [lang, m] : owned) models.emplace(lang, &m);

  std::ifstream in(input_path);
  if (!in) throw FileNotFound(input_path);
  std::vector<std::pair<std::string, ClsString>> hyps;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string::npos)
      throw FormatError(input_path + ":" + std::to_string(lineno) +
                        ": expected 'utt_id cls_text'");
    hyps.emplace_back(line.substr(0, sep), line.substr(sep + 1));
  }
  const auto out = recover_native(hyps, lid, models);
  int status = 0;
  for (const auto& r : out) {
    std::cout << r.utt_id << "\t" << to_string(r.language) << "\t"
              << r.native_text << "\t" << r.posterior << "\n";
    if (r.failed) status = 1;
  }
  (void)g;
  return status;
}

// ------------------------------------------------------------------ score

std::map<std::string, std::string> read_transcripts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto sep = line.find_first_of(" \t");
    const std::string id =
        sep == std::string::npos ? line : line.substr(0, sep);
    const std::string text =
        sep == std::string::npos ? "" : line.substr(sep + 1);
    if (!out.emplace(id, text).second)
      throw DuplicateUttId(id + " at " + path + ":" + std::to_string(lineno));
  }
  return out;
}

int cmd_score(const GlobalOpts& g, const std::string& ref_path,
              const std::string& hyp_path, bool cer,
              const std::string& utt2lang_path,
              const std::vector<std::string>& exclude) {
  const auto refs = read_transcripts(ref_path);
  const auto hyps = read_transcripts(hyp_path);
  std::map<std::string, std::string> utt2lang;
  if (!utt2lang_path.empty()) utt2lang = read_transcripts(utt2lang_path);

  size_t errors = 0, total = 0;
  std::map<LanguageId, std::pair<size_t, size_t>> by_lang;  // errors, total
  for (const auto& [id, ref_text] : refs) {
    auto it = hyps.find(id);
    const std::string hyp_text = it == hyps.end() ? "" : it->second;
    size_t e, n;
    if (cer) {
      const auto r = utf8_decode(ref_text);
      if (r.empty()) throw EmptyReference(id);
      const double rate = compute_cer(ref_text, hyp_text);
      n = r.size();
      e = static_cast<size_t>(rate * static_cast<double>(n) + 0.5);
    } else {
      const auto ref_words = split_words(ref_text);
      if (ref_words.empty()) throw EmptyReference(id);
      const auto r = compute_wer(ref_words, split_words(hyp_text));
      e = r.substitutions + r.deletions + r.insertions;
      n = r.ref_words;
    }
    errors += e;
    total += n;
    if (auto lit = utt2lang.find(id); lit != utt2lang.end()) {
      const LanguageId lang = language_from_code(lit->second);
      by_lang[lang].first += e;
      by_lang[lang].second += n;
    }
  }
  const double overall =
      100.0 * static_cast<double>(errors) / static_cast<double>(total);

  std::map<LanguageId, double> per_language;
  for (const auto& [lang, en] : by_lang)
    per_language[lang] =
        100.0 * static_cast<double>(en.first) / static_cast<double>(en.second);
  std::vector<LanguageId> excl;
  for (const auto& code : exclude) excl.push_back(language_from_code(code));

  if (g.format == "json") {
    json j;
    j[cer ? "cer" : "wer"] = overall;
    for (const auto& [lang, v] : per_language)
      j["per_language"][to_string(lang)] = v;
    if (!per_language.empty()) {
      j["average"] = average_score(per_language);
      if (!excl.empty()) j["average_excluding"] = average_score(per_language,
                                                               excl);
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (cer ? "cer" : "wer") << "\t" << overall << "\n";
    for (const auto& [lang, v] : per_language)
      std::cout << to_string(lang) << "\t" << v << "\n";
    if (!per_language.empty()) {
      std::cout << "avg\t" << average_score(per_language) << "\n";
      if (!excl.empty())
        std::cout << "avg-excl\t" << average_score(per_language, excl)
                  << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CLS toolkit for Indian-language multilingual ASR text "
               "processing"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--lang", g.lang, "Language code (hi mr bn gu or ta te en)");
  app.add_option("--rules-dir", g.rules_dir,
                 "Data directory override (rules, inventory, lexicon)");
  app.add_option("--model", g.model, "Model file to read or write");
  app.add_option("--format", g.format, "Output format: tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}));
  app.add_flag("--strict,!--report", g.strict,
               "Fail on the first bad word (default) or report and continue");

  std::vector<std::string> args;
  std::string input_path, native_out, cls_out, lid_path, ref_path, hyp_path;
  std::string utt2lang_path;
  std::vector<std::string> translit_specs, exclude;
  bool compact_out = false, decode = false, cer = false;
  int order = 5, beam = 8, nbest = 1;
  size_t vocab_size = 0;
  double alpha = 1.0;
  FeatureConfig fc;

  auto* parse = app.add_subcommand("parse", "Native text to CLS labels");
  parse->add_option("text", args);
  parse->add_option("--input", input_path);
  parse->add_flag("--compact", compact_out, "Print compact form");

  auto* compact = app.add_subcommand("compact",
                                     "Labels to compact form and back");
  compact->add_option("labels", args);
  compact->add_flag("--decode", decode, "Compact string back to labels");

  auto* g2p = app.add_subcommand("g2p", "English words to CMU + CLS phones");
  g2p->add_option("text", args);
  g2p->add_option("--input", input_path);

  auto* lid_train = app.add_subcommand("lid-train",
                                       "Train the language identifier");
  lid_train->add_option("--input", input_path)->required();
  lid_train->add_option("--alpha", alpha);
  lid_train->add_option("--char-min", fc.char_ngram_min);
  lid_train->add_option("--char-max", fc.char_ngram_max);
  lid_train->add_option("--word-min", fc.word_ngram_min);
  lid_train->add_option("--word-max", fc.word_ngram_max);

  auto* lid_predict = app.add_subcommand("lid-predict",
                                         "Identify language of CLS text");
  lid_predict->add_option("text", args);
  lid_predict->add_option("--input", input_path);

  auto* tr_train = app.add_subcommand("translit-train",
                                      "Train a CLS-to-native model");
  tr_train->add_option("--input", input_path)->required();
  tr_train->add_option("--order", order);
  tr_train->add_option("--beam", beam);

  auto* translit = app.add_subcommand("translit",
                                      "CLS text back to native script");
  translit->add_option("text", args);
  translit->add_option("--input", input_path);
  translit->add_option("--nbest", nbest);

  auto* bpe_train = app.add_subcommand("bpe-train", "Learn BPE merges");
  bpe_train->add_option("--input", input_path)->required();
  bpe_train->add_option("--vocab-size", vocab_size)->required();

  auto* bpe_encode = app.add_subcommand("bpe-encode", "Text to token ids");
  bpe_encode->add_option("text", args);
  bpe_encode->add_option("--input", input_path);

  auto* bpe_decode = app.add_subcommand("bpe-decode", "Token ids to text");
  bpe_decode->add_option("ids", args);
  bpe_decode->add_option("--input", input_path);

  auto* emit = app.add_subcommand("emit-dual",
                                  "Manifest to aligned native + CLS targets");
  emit->add_option("--input", input_path)->required();
  emit->add_option("--native-out", native_out)->required();
  emit->add_option("--cls-out", cls_out)->required();

  auto* recover = app.add_subcommand("recover",
                                     "CLS hypotheses to native text");
  recover->add_option("--input", input_path)->required();
  recover->add_option("--lid-model", lid_path)->required();
  recover->add_option("--translit-model", translit_specs,
                      "lang=path, repeatable")->required();

  auto* score = app.add_subcommand("score", "WER/CER between transcripts");
  score->add_option("--ref", ref_path)->required();
  score->add_option("--hyp", hyp_path)->required();
  score->add_flag("--cer", cer);
  score->add_option("--utt2lang", utt2lang_path,
                    "utt_id to language map for per-language rates");
  score->add_option("--exclude", exclude,
                    "Languages to drop from the secondary average");

  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version exit clean, usage errors -> 2
  }

  if (!g.rules_dir.empty()) setenv("CLSTK_DATA", g.rules_dir.c_str(), 1);

  try {
    if (*parse) return cmd_parse(g, args, input_path, compact_out);
    if (*compact) return cmd_compact(g, args, decode);
    if (*g2p) return cmd_g2p(g, args, input_path);
    if (*lid_train) return cmd_lid_train(g, input_path, fc, alpha);
    if (*lid_predict) return cmd_lid_predict(g, args, input_path);
    if (*tr_train) return cmd_translit_train(g, input_path, order, beam);
    if (*translit) return cmd_translit(g, args, input_path, nbest);
    if (*bpe_train) return cmd_bpe_train(g, input_path, vocab_size);
    if (*bpe_encode) return cmd_bpe_encode(g, args, input_path);
    if (*bpe_decode) return cmd_bpe_decode(g, args, input_path);
    if (*emit) return cmd_emit_dual(g, input_path, native_out, cls_out);
    if (*recover) return cmd_recover(g, input_path, lid_path, translit_specs);
    if (*score)
      return cmd_score(g, ref_path, hyp_path, cer, utt2lang_path, exclude);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
