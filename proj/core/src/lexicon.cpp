#include "psylex/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "psylex/error.hpp"
#include "psylex/unicode.hpp"

namespace psylex {

namespace {

std::string trim(const std::string& raw) {
  std::u32string cps = utf8_decode_lenient(raw);
  std::size_t begin = 0;
  std::size_t end = cps.size();
  while (begin < end && is_space(cps[begin])) ++begin;
  while (end > begin && is_space(cps[end - 1])) --end;
  return utf8_encode(cps.substr(begin, end - begin));
}

}  // namespace

std::string_view to_string(LexiconCategory category) {
  switch (category) {
    case LexiconCategory::PositiveEmotion: return "positive";
    case LexiconCategory::NegativeEmotion: return "negative";
    case LexiconCategory::PsychologicalTerm: return "psych";
    case LexiconCategory::SelfReference: return "self";
    case LexiconCategory::OtherReference: return "other";
    case LexiconCategory::StopWord: return "stop";
    case LexiconCategory::PosAdjective: return "adjective";
    case LexiconCategory::PosNoun: return "noun";
    case LexiconCategory::PosVerb: return "verb";
  }
  return "unknown";
}

std::optional<LexiconCategory> lexicon_category_from(std::string_view name) {
  if (name == "positive") return LexiconCategory::PositiveEmotion;
  if (name == "negative") return LexiconCategory::NegativeEmotion;
  if (name == "psych") return LexiconCategory::PsychologicalTerm;
  if (name == "self") return LexiconCategory::SelfReference;
  if (name == "other") return LexiconCategory::OtherReference;
  if (name == "stop") return LexiconCategory::StopWord;
  if (name == "adjective") return LexiconCategory::PosAdjective;
  if (name == "noun") return LexiconCategory::PosNoun;
  if (name == "verb") return LexiconCategory::PosVerb;
  return std::nullopt;
}

Lexicon::Lexicon(std::string name, LexiconCategory category,
                 std::vector<std::string> entries)
    : name_(std::move(name)), category_(category) {
  for (std::string& raw : entries) {
    std::string entry = trim(raw);
    if (entry.empty()) continue;
    if (set_.insert(entry).second) {
      ordered_.push_back(std::move(entry));
    } else {
      ++duplicates_;
    }
  }
  if (ordered_.empty()) {
    throw Error("lexicon '" + name_ + "' has no entries");
  }
  std::sort(ordered_.begin(), ordered_.end());
}

bool Lexicon::contains(std::string_view entry) const {
  return set_.find(entry) != set_.end();
}

std::vector<std::string> load_wordlist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open word list '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string contents = buf.str();
  if (contents.size() >= 3 && contents[0] == '\xEF' && contents[1] == '\xBB' &&
      contents[2] == '\xBF') {
    contents.erase(0, 3);
  }
  try {
    utf8_decode(contents);
  } catch (const Error& e) {
    throw Error("word list '" + path.string() + "': " + e.what());
  }

  std::vector<std::string> lines;
  std::istringstream stream(contents);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    lines.push_back(std::move(entry));
  }
  if (lines.empty()) {
    throw Error("word list '" + path.string() + "' has no entries");
  }
  return lines;
}

Lexicon load_lexicon(const std::filesystem::path& path, LexiconCategory category,
                     std::string name) {
  if (name.empty()) name = path.stem().string();
  return Lexicon(std::move(name), category, load_wordlist(path));
}

std::size_t count_category(const std::vector<std::string>& tokens,
                           const Lexicon& lexicon) {
  std::vector<char> covered(tokens.size(), 0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string joined;
    for (std::size_t w = 1; w <= kMaxPhraseTokens && i + w <= tokens.size();
         ++w) {
      joined += tokens[i + w - 1];
      if (lexicon.contains(joined)) {
        std::fill(covered.begin() + static_cast<std::ptrdiff_t>(i),
                  covered.begin() + static_cast<std::ptrdiff_t>(i + w),
                  char{1});
      }
    }
  }
  return static_cast<std::size_t>(
      std::count(covered.begin(), covered.end(), char{1}));
}

CategoryCounts count_categories(const std::vector<std::string>& tokens,
                                const std::vector<Lexicon>& lexicons) {
  CategoryCounts counts;
  for (const Lexicon& lex : lexicons) {
    std::size_t n = count_category(tokens, lex);
    switch (lex.category()) {
      case LexiconCategory::PositiveEmotion: counts.positive += n; break;
      case LexiconCategory::NegativeEmotion: counts.negative += n; break;
      case LexiconCategory::PsychologicalTerm: counts.psych_terms += n; break;
      case LexiconCategory::SelfReference: counts.self_refs += n; break;
      case LexiconCategory::OtherReference: counts.other_refs += n; break;
      case LexiconCategory::PosAdjective: counts.adjectives += n; break;
      case LexiconCategory::PosNoun: counts.nouns += n; break;
      case LexiconCategory::PosVerb: counts.verbs += n; break;
      case LexiconCategory::StopWord: break;
    }
  }
  return counts;
}

}  // namespace psylex
