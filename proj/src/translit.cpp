#include "clstk/translit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "clstk/error.hpp"
#include "clstk/script.hpp"
#include "clstk/text.hpp"

namespace clstk {

// ---------------------------------------------------------------- CharLm

CharLm::CharLm(int order, const std::vector<Codepoint>& vocab)
    : order_(order), vocab_(vocab) {
  if (std::find(vocab_.begin(), vocab_.end(), kEnd) == vocab_.end())
    vocab_.push_back(kEnd);
  std::sort(vocab_.begin(), vocab_.end());
  vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
  for (Codepoint c : vocab_) in_vocab_[c] = true;
}

void CharLm::add_word(const std::vector<Codepoint>& word) {
  std::vector<Codepoint> seq(static_cast<size_t>(order_ - 1), kBos);
  seq.insert(seq.end(), word.begin(), word.end());
  seq.push_back(kEnd);
  for (size_t i = static_cast<size_t>(order_ - 1); i < seq.size(); ++i) {
    for (int k = 0; k < order_; ++k) {
      std::u32string hist(seq.begin() + static_cast<long>(i) - k,
                          seq.begin() + static_cast<long>(i));
      Bucket& b = ngrams_[hist];
      b.counts[seq[i]] += 1.0;
      b.total += 1.0;
    }
  }
}

double CharLm::prob(const std::vector<Codepoint>& history,
                    Codepoint next) const {
  std::u32string h;
  const size_t max_h = static_cast<size_t>(order_ - 1);
  const size_t start = history.size() > max_h ? history.size() - max_h : 0;
  h.assign(history.begin() + static_cast<long>(start), history.end());

  // Witten-Bell interpolation down to a uniform base over the closed vocab.
  double p = 1.0 / static_cast<double>(vocab_.size());
  for (size_t len = 0; len <= h.size(); ++len) {
    const std::u32string sub = h.substr(h.size() - len);
    auto it = ngrams_.find(sub);
    if (it == ngrams_.end()) continue;
    const Bucket& b = it->second;
    const double types = static_cast<double>(b.counts.size());
    auto cit = b.counts.find(next);
    const double cnt = cit == b.counts.end() ? 0.0 : cit->second;
    p = (cnt + types * p) / (b.total + types);
  }
  return p;
}

double CharLm::log_prob(const std::vector<Codepoint>& history,
                        Codepoint next) const {
  return std::log(std::max(prob(history, next), 1e-300));
}

std::vector<std::u32string> CharLm::observed_histories() const {
  std::vector<std::u32string> out;
  out.reserve(ngrams_.size());
  for (const auto& [h, b] : ngrams_) out.push_back(h);
  return out;
}

void CharLm::save(std::ostream& out) const {
  out << "order " << order_ << "\n";
  out << "vocab";
  for (Codepoint c : vocab_) out << " " << static_cast<uint32_t>(c);
  out << "\n";
  out.precision(17);
  for (const auto& [h, b] : ngrams_) {
    out << "ngram";
    for (Codepoint c : h) out << " " << static_cast<uint32_t>(c);
    out << " :";
    for (const auto& [c, cnt] : b.counts)
      out << " " << static_cast<uint32_t>(c) << " " << cnt;
    out << "\n";
  }
  out << "endlm\n";
}

CharLm CharLm::load(std::istream& in) {
  CharLm lm;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "order") {
      ss >> lm.order_;
    } else if (key == "vocab") {
      uint32_t c;
      while (ss >> c) {
        lm.vocab_.push_back(static_cast<Codepoint>(c));
        lm.in_vocab_[static_cast<Codepoint>(c)] = true;
      }
    } else if (key == "ngram") {
      std::u32string h;
      std::string tok;
      while (ss >> tok && tok != ":")
        h.push_back(static_cast<Codepoint>(std::stoul(tok)));
      Bucket b;
      uint32_t c;
      double cnt;
      while (ss >> c >> cnt) {
        b.counts[static_cast<Codepoint>(c)] = cnt;
        b.total += cnt;
      }
      lm.ngrams_[h] = std::move(b);
    } else if (key == "endlm") {
      return lm;
    } else if (!key.empty()) {
      throw ModelFormatError("unexpected LM key '" + key + "'");
    }
  }
  throw ModelFormatError("truncated LM section");
}

// ---------------------------------------------------------- inverse rules

namespace {

// Fallback chain for labels absent from a language's script, so candidate
// generation is total over the inventory.
const std::map<std::string, std::string>& fallback_chain() {
  static const std::map<std::string, std::string> chain = {
      {"ae", "e"},   {"e", "ee"},     {"o", "oo"},    {"rq", "i"},
      {"kh", "k"},   {"gh", "g"},     {"g", "k"},     {"ch", "c"},
      {"jh", "j"},   {"j", "c"},      {"txh", "tx"},  {"dxh", "dx"},
      {"dx", "tx"},  {"th", "t"},     {"dh", "d"},    {"d", "t"},
      {"ph", "p"},   {"bh", "b"},     {"b", "p"},     {"kq", "k"},
      {"khq", "kh"}, {"gq", "g"},     {"z", "j"},     {"f", "ph"},
      {"dxq", "dx"}, {"dxhq", "dxh"}, {"ng", "n"},    {"nj", "n"},
      {"nx", "n"},   {"zh", "lx"},    {"lx", "l"},    {"rx", "r"},
      {"sx", "sh"},  {"sh", "s"},     {"hq", "h"},    {"mq", "m"},
  };
  return chain;
}

const char* nasal_place(const std::string& label) {
  static const std::map<std::string, const char*> kPlace = {
      {"k", "ng"},   {"kh", "ng"},  {"g", "ng"},   {"gh", "ng"},
      {"kq", "ng"},  {"khq", "ng"}, {"gq", "ng"},  {"c", "nj"},
      {"ch", "nj"},  {"j", "nj"},   {"jh", "nj"},  {"tx", "nx"},
      {"txh", "nx"}, {"dx", "nx"},  {"dxh", "nx"}, {"dxq", "nx"},
      {"dxhq", "nx"},{"t", "n"},    {"th", "n"},   {"d", "n"},
      {"dh", "n"},   {"p", "m"},    {"ph", "m"},   {"b", "m"},
      {"bh", "m"},   {"f", "m"},
  };
  auto it = kPlace.find(label);
  return it == kPlace.end() ? nullptr : it->second;
}

}  // namespace

InverseRules build_inverse_rules(const RuleTable& table,
                                 const ClsInventory& inv) {
  InverseRules ir;
  ir.schwa_final = table.schwa_final();
  Codepoint nukta_cp = 0;
  for (const auto& [cp, e] : table.entries()) {
    if (e.flag == EntryFlag::Nukta) nukta_cp = cp;
    if (e.flag == EntryFlag::Virama) ir.virama = cp;
  }
  for (const auto& [cp, e] : table.entries()) {
    if (e.labels.size() != 1) continue;
    const std::string& label = e.labels[0];
    switch (e.flag) {
      case EntryFlag::Vowel:
        ir.indep_vowel[label].push_back(std::u32string(1, cp));
        break;
      case EntryFlag::Matra:
        ir.matra[label].push_back(std::u32string(1, cp));
        break;
      case EntryFlag::Cons:
      case EntryFlag::Dead:
        ir.consonant[label].push_back(std::u32string(1, cp));
        break;
      case EntryFlag::Anusvara:
      case EntryFlag::Candrabindu:
        ir.nasal_signs.push_back(cp);
        break;
      case EntryFlag::Visarga:
        ir.visarga_signs.push_back(cp);
        break;
      default:
        break;
    }
  }
  // Nukta pairs (normalized text keeps these decomposed).
  if (nukta_cp != 0) {
    for (const auto& [cp, e] : table.entries()) {
      (void)e;
      const std::string sub = table.nukta_label(cp);
      if (!sub.empty()) {
        std::u32string s(1, cp);
        s.push_back(nukta_cp);
        ir.consonant[sub].push_back(std::move(s));
      }
    }
  }
  for (auto* m : {&ir.indep_vowel, &ir.matra, &ir.consonant})
    for (auto& [label, cands] : *m) std::sort(cands.begin(), cands.end());
  std::sort(ir.nasal_signs.begin(), ir.nasal_signs.end());
  std::sort(ir.visarga_signs.begin(), ir.visarga_signs.end());

  // Close missing labels over the fallback chain; totality over the
  // inventory is a load-time guarantee.
  for (const auto& p : inv.phones()) {
    if (p.label == "sil") continue;
    auto covered = [&](const std::string& l) {
      if (p.is_vowel())
        return ir.indep_vowel.count(l) != 0 || ir.matra.count(l) != 0;
      return ir.consonant.count(l) != 0;
    };
    std::string cur = p.label;
    int hops = 0;
    while (!covered(cur)) {
      auto it = fallback_chain().find(cur);
      if (it == fallback_chain().end() || ++hops > 10)
        throw ModelFormatError("no inverse rule reachable for label '" +
                               p.label + "'");
      cur = it->second;
    }
    if (cur != p.label) {
      if (p.is_vowel()) {
        if (ir.indep_vowel.count(cur))
          ir.indep_vowel[p.label] = ir.indep_vowel[cur];
        if (ir.matra.count(cur)) ir.matra[p.label] = ir.matra[cur];
      } else if (ir.consonant.count(cur)) {
        ir.consonant[p.label] = ir.consonant[cur];
      }
    }
  }
  return ir;
}

// ------------------------------------------------------------- decoding

namespace {

struct State {
  std::u32string emitted;
  std::u32string pending;  // consonant grapheme awaiting vowel decision
  double score = 0.0;
};

}  // namespace

TranslitModel TranslitModel::train(
    const std::vector<TranslitTrainRecord>& parallel, LanguageId lang,
    int lm_order, int beam, const RuleSet& rules, const ClsInventory& inv) {
  if (parallel.empty()) throw EmptyCorpus("no parallel records");
  if (lm_order < 2 || lm_order > 7)
    throw FormatError("lm_order must be in [2,7]");
  const RuleTable& table = rules.table(lang);

  TranslitModel m;
  m.language_ = lang;
  m.beam_ = beam;
  m.inv_ = &inv;
  m.inverse_ = build_inverse_rules(table, inv);

  std::vector<Codepoint> vocab;
  for (const auto& [cp, e] : table.entries())
    if (e.flag != EntryFlag::Reject) vocab.push_back(cp);
  std::vector<std::vector<Codepoint>> words;
  words.reserve(parallel.size());
  for (const auto& rec : parallel) {
    if (rec.cls_word.empty() || rec.native_word.empty())
      throw FormatError("empty record in parallel corpus");
    if (detect_script(rec.native_word) != script_of(lang))
      throw ScriptMismatch("'" + rec.native_word + "' is not " +
                           to_string(script_of(lang)));
    auto cps = utf8_decode(rec.native_word);
    for (Codepoint c : cps) vocab.push_back(c);
    words.push_back(std::move(cps));
  }
  m.lm_ = CharLm(lm_order, vocab);
  for (const auto& w : words) m.lm_.add_word(w);
  return m;
}

std::vector<TranslitHypothesis> TranslitModel::transliterate_word(
    const ClsString& cls_word, int beam_override) const {
  if (cls_word.empty()) throw EmptyInput("empty CLS word");
  const int beam_width = beam_override > 0 ? beam_override : beam_;
  const std::vector<ClsPhone> phones = from_compact(cls_word, *inv_);
  const int order = lm_.order();

  auto score_append = [&](const State& s, const std::u32string& added) {
    double delta = 0.0;
    std::vector<Codepoint> ctx(static_cast<size_t>(order - 1), CharLm::kBos);
    ctx.insert(ctx.end(), s.emitted.begin(), s.emitted.end());
    for (Codepoint c : added) {
      delta += lm_.log_prob(ctx, c);
      ctx.push_back(c);
    }
    return delta;
  };
  auto extend = [&](std::vector<State>& out, const State& s,
                    const std::u32string& emit, std::u32string new_pending) {
    State ns;
    ns.emitted = s.emitted + emit;
    ns.pending = std::move(new_pending);
    ns.score = s.score + score_append(s, emit);
    out.push_back(std::move(ns));
  };

  std::vector<State> beam_states{State{}};
  for (size_t pi = 0; pi < phones.size(); ++pi) {
    const ClsPhone& p = phones[pi];
    if (p.label == "sil") continue;
    std::vector<State> next;
    for (const State& s : beam_states) {
      if (p.is_vowel()) {
        if (!s.pending.empty()) {
          if (p.label == "a") {
            extend(next, s, s.pending, {});  // inherent vowel, bare consonant
          } else if (auto it = inverse_.matra.find(p.label);
                     it != inverse_.matra.end()) {
            for (const auto& mg : it->second)
              extend(next, s, s.pending + mg, {});
          }
          // Explicit-virama + independent vowel alternative.
          if (auto iv = inverse_.indep_vowel.find(p.label);
              iv != inverse_.indep_vowel.end() && inverse_.virama) {
            for (const auto& vg : iv->second)
              extend(next, s, s.pending + std::u32string(1, inverse_.virama) +
                                  vg, {});
          }
        } else if (auto iv = inverse_.indep_vowel.find(p.label);
                   iv != inverse_.indep_vowel.end()) {
          for (const auto& vg : iv->second) extend(next, s, vg, {});
        }
      } else {
        // Nasal/visarga sign options.
        const bool next_is_cons =
            pi + 1 < phones.size() && !phones[pi + 1].is_vowel();
        const bool sign_ok =
            p.label == "mq" ||
            (next_is_cons && nasal_place(phones[pi + 1].label) &&
             nasal_place(phones[pi + 1].label) == p.label);
        std::u32string flush;  // sign attaches after a completed akshara
        if (!s.pending.empty() && inverse_.virama)
          flush = s.pending + std::u32string(1, inverse_.virama);
        if (sign_ok && (!s.emitted.empty() || !flush.empty())) {
          for (Codepoint sign : inverse_.nasal_signs)
            extend(next, s, flush + std::u32string(1, sign), {});
        }
        if ((p.label == "hq" || p.label == "h") &&
            (!s.emitted.empty() || !flush.empty())) {
          for (Codepoint sign : inverse_.visarga_signs)
            extend(next, s, flush + std::u32string(1, sign), {});
        }
        if (auto it = inverse_.consonant.find(p.label);
            it != inverse_.consonant.end()) {
          for (const auto& cg : it->second) {
            if (s.pending.empty()) {
              extend(next, s, {}, cg);
            } else {
              if (inverse_.virama)
                extend(next, s, s.pending + std::u32string(1, inverse_.virama),
                       cg);
              if (inverse_.schwa_final)  // medial deleted schwa
                extend(next, s, s.pending, cg);
            }
          }
        }
      }
    }
    if (next.empty())
      throw UnknownCompactChar("no candidates for label '" + p.label + "'");
    // Merge duplicate states, keep the best-scoring.
    std::sort(next.begin(), next.end(), [](const State& a, const State& b) {
      if (a.emitted != b.emitted) return a.emitted < b.emitted;
      if (a.pending != b.pending) return a.pending < b.pending;
      return a.score > b.score;
    });
    std::vector<State> merged;
    for (auto& s : next) {
      if (!merged.empty() && merged.back().emitted == s.emitted &&
          merged.back().pending == s.pending)
        continue;
      merged.push_back(std::move(s));
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const State& a, const State& b) {
                       return a.score > b.score;
                     });
    if (merged.size() > static_cast<size_t>(beam_width))
      merged.resize(static_cast<size_t>(beam_width));
    beam_states = std::move(merged);
  }

  // Final flush plus end-of-word probability.
  std::vector<State> finals;
  for (const State& s : beam_states) {
    if (s.pending.empty()) {
      finals.push_back(s);
    } else {
      if (inverse_.virama)
        extend(finals, s, s.pending + std::u32string(1, inverse_.virama), {});
      extend(finals, s, s.pending, {});  // bare final consonant
    }
  }
  for (State& s : finals) {
    std::vector<Codepoint> ctx(static_cast<size_t>(order - 1), CharLm::kBos);
    ctx.insert(ctx.end(), s.emitted.begin(), s.emitted.end());
    s.score += lm_.log_prob(ctx, CharLm::kEnd);
  }
  std::sort(finals.begin(), finals.end(), [](const State& a, const State& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.emitted < b.emitted;
  });
  std::vector<TranslitHypothesis> out;
  for (const State& s : finals) {
    std::string native =
        utf8_encode(std::vector<Codepoint>(s.emitted.begin(), s.emitted.end()));
    if (std::any_of(out.begin(), out.end(), [&](const TranslitHypothesis& h) {
          return h.native_word == native;
        }))
      continue;
    out.push_back({std::move(native), s.score});
    if (out.size() >= static_cast<size_t>(beam_width)) break;
  }
  if (out.empty()) throw EmptyInput("no hypothesis for '" + cls_word + "'");
  return out;
}

TranslitModel::TextResult TranslitModel::transliterate_text(
    const ClsString& cls_text, const std::string& placeholder) const {
  TextResult result;
  const auto words = split_words(cls_text);
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) result.text += " ";
    try {
      result.text += transliterate_word(words[i])[0].native_word;
    } catch (const Error& e) {
      result.text += placeholder;
      result.issues.emplace_back(i, e.what());
    }
  }
  return result;
}

// ---------------------------------------------------------- serialization

void TranslitModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FileNotFound(path);
  out << "#clstk-translit v" << kFormatVersion << "\n";
  out << "lang " << to_string(language_) << "\n";
  out << "beam " << beam_ << "\n";
  out << "schwa " << (inverse_.schwa_final ? 1 : 0) << "\n";
  out << "virama " << static_cast<uint32_t>(inverse_.virama) << "\n";
  auto dump = [&](const char* kind, const auto& m) {
    for (const auto& [label, cands] : m)
      for (const auto& g : cands) {
        out << "rule " << kind << " " << label;
        for (Codepoint c : g) out << " " << static_cast<uint32_t>(c);
        out << "\n";
      }
  };
  dump("iv", inverse_.indep_vowel);
  dump("ma", inverse_.matra);
  dump("co", inverse_.consonant);
  for (Codepoint c : inverse_.nasal_signs)
    out << "sign nasal " << static_cast<uint32_t>(c) << "\n";
  for (Codepoint c : inverse_.visarga_signs)
    out << "sign visarga " << static_cast<uint32_t>(c) << "\n";
  lm_.save(out);
}

TranslitModel TranslitModel::load(const std::string& path,
                                  const RuleSet& rules,
                                  const ClsInventory& inv) {
  (void)rules;
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  TranslitModel m;
  m.inv_ = &inv;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#clstk-translit v", 0) != 0)
    throw ModelFormatError(path + ": bad header");
  while (in.peek() != EOF) {
    auto pos = in.tellg();
    if (!std::getline(in, line)) break;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "lang") {
      std::string code;
      ss >> code;
      m.language_ = language_from_code(code);
    } else if (key == "beam") {
      ss >> m.beam_;
    } else if (key == "schwa") {
      int v;
      ss >> v;
      m.inverse_.schwa_final = v != 0;
    } else if (key == "virama") {
      uint32_t v;
      ss >> v;
      m.inverse_.virama = static_cast<Codepoint>(v);
    } else if (key == "rule") {
      std::string kind, label;
      ss >> kind >> label;
      std::u32string g;
      uint32_t c;
      while (ss >> c) g.push_back(static_cast<Codepoint>(c));
      if (kind == "iv") m.inverse_.indep_vowel[label].push_back(g);
      else if (kind == "ma") m.inverse_.matra[label].push_back(g);
      else if (kind == "co") m.inverse_.consonant[label].push_back(g);
      else throw ModelFormatError(path + ": bad rule kind");
    } else if (key == "sign") {
      std::string kind;
      uint32_t c;
      ss >> kind >> c;
      if (kind == "nasal")
        m.inverse_.nasal_signs.push_back(static_cast<Codepoint>(c));
      else
        m.inverse_.visarga_signs.push_back(static_cast<Codepoint>(c));
    } else if (key == "order") {
      in.seekg(pos);
      m.lm_ = CharLm::load(in);
    } else if (!key.empty()) {
      throw ModelFormatError(path + ": unknown key '" + key + "'");
    }
  }
  return m;
}

}  // namespace clstk
