#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "psylex/error.hpp"
#include "psylex/lexicon.hpp"
#include "temp_dir.hpp"

using namespace psylex;
using psylex::testing::TempDir;

TEST_CASE("category names round-trip") {
  const std::pair<LexiconCategory, std::string_view> table[] = {
      {LexiconCategory::PositiveEmotion, "positive"},
      {LexiconCategory::NegativeEmotion, "negative"},
      {LexiconCategory::PsychologicalTerm, "psych"},
      {LexiconCategory::SelfReference, "self"},
      {LexiconCategory::OtherReference, "other"},
      {LexiconCategory::StopWord, "stop"},
      {LexiconCategory::PosAdjective, "adjective"},
      {LexiconCategory::PosNoun, "noun"},
      {LexiconCategory::PosVerb, "verb"},
  };
  for (auto [category, name] : table) {
    CHECK(to_string(category) == name);
    CHECK(lexicon_category_from(name) == category);
  }
  CHECK_FALSE(lexicon_category_from("emoji").has_value());
}

TEST_CASE("lexicon trims, dedups and sorts entries") {
  Lexicon lex("demo", LexiconCategory::PositiveEmotion,
              {" 好 ", "开心", "开心", "\t高兴\n", ""});
  CHECK(lex.size() == 3);
  CHECK(lex.duplicates_dropped() == 1);
  CHECK(lex.contains("好"));
  CHECK(lex.contains("开心"));
  CHECK(lex.contains("高兴"));
  CHECK_FALSE(lex.contains(" 好 "));
  CHECK_FALSE(lex.contains(""));
  CHECK(std::is_sorted(lex.entries().begin(), lex.entries().end()));
}

TEST_CASE("spec dedup example: two entries, one duplicate") {
  Lexicon lex("demo", LexiconCategory::PositiveEmotion, {"好", "开心", "开心"});
  CHECK(lex.size() == 2);
  CHECK(lex.duplicates_dropped() == 1);
}

TEST_CASE("an empty lexicon is an error") {
  CHECK_THROWS_AS(
      Lexicon("empty", LexiconCategory::StopWord, std::vector<std::string>{}),
      Error);
  CHECK_THROWS_AS(Lexicon("blank", LexiconCategory::StopWord, {"", "  "}),
                  Error);
}

TEST_CASE("wordlist files support comments and blank lines") {
  TempDir dir;
  auto path = dir.write("words.txt",
                        "# a comment\n"
                        "好\n"
                        "\n"
                        "  开心  \n"
                        "# another\n"
                        "难过\r\n");
  auto words = load_wordlist(path);
  REQUIRE(words.size() == 3);
  CHECK(words[0] == "好");
  CHECK(words[1] == "开心");
  CHECK(words[2] == "难过");
}

TEST_CASE("wordlist strips a UTF-8 byte-order mark") {
  TempDir dir;
  auto path = dir.write("bom.txt", "\xEF\xBB\xBF好\n");
  auto words = load_wordlist(path);
  REQUIRE(words.size() == 1);
  CHECK(words[0] == "好");
}

TEST_CASE("wordlist rejects invalid UTF-8 with the byte offset") {
  TempDir dir;
  auto path = dir.write("bad.txt", "ok\n\xFF\xFE\n");
  try {
    load_wordlist(path);
    FAIL("expected an error");
  } catch (const Error& e) {
    std::string message = e.what();
    CHECK(message.find("byte") != std::string::npos);
    CHECK(message.find("bad.txt") != std::string::npos);
  }
}

TEST_CASE("wordlist errors on missing or empty files") {
  TempDir dir;
  CHECK_THROWS_AS(load_wordlist(dir.path() / "absent.txt"), Error);
  auto path = dir.write("only_comments.txt", "# nothing\n\n");
  CHECK_THROWS_AS(load_wordlist(path), Error);
}

TEST_CASE("load_lexicon names the lexicon after the file stem") {
  TempDir dir;
  auto path = dir.write("negative.txt", "难过\n伤心\n");
  Lexicon lex = load_lexicon(path, LexiconCategory::NegativeEmotion);
  CHECK(lex.name() == "negative");
  CHECK(lex.category() == LexiconCategory::NegativeEmotion);
  CHECK(lex.size() == 2);

  Lexicon named = load_lexicon(path, LexiconCategory::NegativeEmotion, "my");
  CHECK(named.name() == "my");
}

TEST_CASE("reference lexicon sizes load exactly") {
  // Same scale as the shipped negative-emotion and psychological lists.
  TempDir dir;
  {
    std::ofstream out(dir.path() / "negative.txt", std::ios::binary);
    for (int i = 0; i < 4370; ++i) out << "negword" << i << "\n";
  }
  {
    std::ofstream out(dir.path() / "psych.txt", std::ios::binary);
    for (int i = 0; i < 3453; ++i) out << "term" << i << "\n";
  }
  CHECK(load_lexicon(dir.path() / "negative.txt",
                     LexiconCategory::NegativeEmotion)
            .size() == 4370);
  CHECK(load_lexicon(dir.path() / "psych.txt",
                     LexiconCategory::PsychologicalTerm)
            .size() == 3453);
}

TEST_CASE("count_category matches single tokens") {
  Lexicon neg("neg", LexiconCategory::NegativeEmotion, {"难过", "伤心"});
  CHECK(count_category({}, neg) == 0);
  CHECK(count_category({"难过"}, neg) == 1);
  CHECK(count_category({"难过", "难过", "开心"}, neg) == 2);
  CHECK(count_category({"开心"}, neg) == 0);
}

TEST_CASE("count_category equals a brute-force membership scan "
          "for single-token entries") {
  Lexicon lex("x", LexiconCategory::PositiveEmotion, {"a", "bb", "c"});
  std::vector<std::vector<std::string>> cases = {
      {},
      {"a"},
      {"a", "a", "a"},
      {"bb", "c", "d", "a"},
      {"d", "e"},
      {"c", "c", "bb", "bb", "a"},
  };
  for (const auto& tokens : cases) {
    std::size_t expected = 0;
    for (const auto& token : tokens) expected += lex.contains(token);
    CHECK(count_category(tokens, lex) == expected);
  }
}

TEST_CASE("multi-token phrases match joined adjacent tokens") {
  Lexicon lex("psych", LexiconCategory::PsychologicalTerm, {"我自己"});
  // The segmenter may split the phrase; the window rule still finds it.
  CHECK(count_category({"我", "自己"}, lex) == 2);  // both positions covered
  CHECK(count_category({"我", "很", "自己"}, lex) == 0);  // not adjacent
  CHECK(count_category({"我自己"}, lex) == 1);
}

TEST_CASE("phrase windows cover up to four tokens") {
  Lexicon four("l4", LexiconCategory::PsychologicalTerm, {"abcd"});
  CHECK(count_category({"a", "b", "c", "d"}, four) == 4);
  Lexicon five("l5", LexiconCategory::PsychologicalTerm, {"abcde"});
  CHECK(count_category({"a", "b", "c", "d", "e"}, five) == 0);
}

TEST_CASE("overlapping matches never double-count a position") {
  Lexicon lex("x", LexiconCategory::NegativeEmotion, {"ab", "bc", "b"});
  // Tokens a b c: windows a·b, b·c and b all match; 3 positions covered.
  CHECK(count_category({"a", "b", "c"}, lex) == 3);
  // Count can never exceed the token count.
  CHECK(count_category({"b"}, lex) == 1);
}

TEST_CASE("count is bounded by the token count") {
  Lexicon lex("x", LexiconCategory::NegativeEmotion, {"a", "ab", "abc"});
  std::vector<std::string> tokens = {"a", "b", "c"};
  CHECK(count_category(tokens, lex) <= tokens.size());
}

TEST_CASE("concatenating sequences never lowers a count") {
  Lexicon lex("x", LexiconCategory::NegativeEmotion, {"ab", "c"});
  std::vector<std::string> left = {"a", "b"};
  std::vector<std::string> right = {"c", "d"};
  std::vector<std::string> both = {"a", "b", "c", "d"};
  std::size_t left_count = count_category(left, lex);
  std::size_t right_count = count_category(right, lex);
  std::size_t total = count_category(both, lex);
  CHECK(total >= left_count);
  CHECK(total >= right_count);
}

TEST_CASE("count_categories routes counts to the right fields") {
  std::vector<Lexicon> lexicons;
  lexicons.emplace_back("self", LexiconCategory::SelfReference,
                        std::vector<std::string>{"我"});
  lexicons.emplace_back("neg", LexiconCategory::NegativeEmotion,
                        std::vector<std::string>{"难过"});
  lexicons.emplace_back("pos", LexiconCategory::PositiveEmotion,
                        std::vector<std::string>{"开心"});
  lexicons.emplace_back("stop", LexiconCategory::StopWord,
                        std::vector<std::string>{"很"});

  CategoryCounts empty = count_categories({}, lexicons);
  CHECK(empty == CategoryCounts{});

  CategoryCounts counts = count_categories({"我", "难过"}, lexicons);
  CHECK(counts.self_refs == 1);
  CHECK(counts.negative == 1);
  CHECK(counts.positive == 0);
  CHECK(counts.psych_terms == 0);

  CategoryCounts repeated = count_categories({"难过", "难过", "开心"}, lexicons);
  CHECK(repeated.negative == 2);
  CHECK(repeated.positive == 1);

  // Stop words are removed upstream and contribute to no category.
  CategoryCounts stops = count_categories({"很", "很"}, lexicons);
  CHECK(stops == CategoryCounts{});
}

TEST_CASE("a word in two lexicons counts in both categories") {
  std::vector<Lexicon> lexicons;
  lexicons.emplace_back("neg", LexiconCategory::NegativeEmotion,
                        std::vector<std::string>{"痛苦"});
  lexicons.emplace_back("psych", LexiconCategory::PsychologicalTerm,
                        std::vector<std::string>{"痛苦"});
  CategoryCounts counts = count_categories({"痛苦"}, lexicons);
  CHECK(counts.negative == 1);
  CHECK(counts.psych_terms == 1);
}

TEST_CASE("pos-tag lexicons fill the pos count fields") {
  std::vector<Lexicon> lexicons;
  lexicons.emplace_back("adj", LexiconCategory::PosAdjective,
                        std::vector<std::string>{"好冷"});
  lexicons.emplace_back("noun", LexiconCategory::PosNoun,
                        std::vector<std::string>{"天气"});
  lexicons.emplace_back("verb", LexiconCategory::PosVerb,
                        std::vector<std::string>{"出门"});
  CategoryCounts counts =
      count_categories({"天气", "好冷", "出门", "出门"}, lexicons);
  CHECK(counts.adjectives == 1);
  CHECK(counts.nouns == 1);
  CHECK(counts.verbs == 2);
}

TEST_CASE("counts are invariant under lexicon entry order") {
  std::vector<std::string> tokens = {"a", "b", "c", "a"};
  Lexicon forward("f", LexiconCategory::PositiveEmotion, {"a", "b", "c"});
  Lexicon backward("b", LexiconCategory::PositiveEmotion, {"c", "b", "a"});
  CHECK(count_category(tokens, forward) == count_category(tokens, backward));
}
