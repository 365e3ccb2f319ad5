#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "clstk/error.hpp"
#include "clstk/g2p.hpp"

using namespace clstk;

namespace {
std::string join(const std::vector<CmuPhone>& phones) {
  std::string out;
  for (const auto& p : phones) {
    if (!out.empty()) out += " ";
    out += p.label;
  }
  return out;
}
}  // namespace

TEST_CASE("lexicon lookup strips stress and keeps first pronunciation") {
  const auto& g = G2p::bundled();
  CHECK(join(g.g2p("a")) == "AH");
  CHECK(join(g.g2p("action")) == "AE K SH AH N");
  CHECK(g.is_lexical("action"));
  CHECK(g.is_lexical("ACTION"));  // case-insensitive
  CHECK(join(g.g2p("Action")) == join(g.g2p("action")));
}

TEST_CASE("fallback handles out-of-lexicon words") {
  const auto& g = G2p::bundled();
  CHECK_FALSE(g.is_lexical("zzqx"));
  CHECK(!g.g2p("zzqx").empty());
}

TEST_CASE("fallback prefers longer patterns") {
  const auto& g = G2p::bundled();
  // "-tion" should engage the multi-letter rule, not letter-by-letter.
  const auto phones = g.g2p("blation");
  const std::string s = join(phones);
  CHECK(s.find("SH AH N") != std::string::npos);
}

TEST_CASE("invalid words are rejected") {
  const auto& g = G2p::bundled();
  CHECK_THROWS_AS(g.g2p(""), NonLatinInput);
  CHECK_THROWS_AS(g.g2p("क"), NonLatinInput);
  CHECK_THROWS_AS(g.g2p("ab1"), NonLatinInput);
  CHECK_THROWS_AS(g.g2p("--"), NonLatinInput);  // no letters
  CHECK_NOTHROW(g.g2p("it's"));
  CHECK_NOTHROW(g.g2p("co-op"));
}

TEST_CASE("g2p output always maps through the CMU bridge") {
  const auto& g = G2p::bundled();
  const auto& bridge = CmuBridge::bundled();
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<int> len(1, 10);
  std::uniform_int_distribution<int> letter(0, 25);
  for (int trial = 0; trial < 500; ++trial) {
    std::string w;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) w += static_cast<char>('a' + letter(rng));
    CAPTURE(w);
    const auto phones = g.g2p(w);
    REQUIRE(!phones.empty());
    CHECK_NOTHROW(bridge.cmu_to_cls(phones));
  }
}

TEST_CASE("every lexicon entry maps through the bridge") {
  const auto& g = G2p::bundled();
  const auto& bridge = CmuBridge::bundled();
  for (const auto& [word, phones] : g.lexicon()) {
    CAPTURE(word);
    CHECK_NOTHROW(bridge.cmu_to_cls(phones));
  }
}
