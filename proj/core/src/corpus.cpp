#include "psylex/corpus.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "psylex/error.hpp"
#include "psylex/unicode.hpp"

namespace psylex {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kCanonicalFields[] = {"id",        "author_id", "text",
                                            "posted_at", "post_type", "label"};

bool parse_int(std::string_view s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

int days_in_month(int year, int month) {
  static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[month - 1];
}

bool blank_text(const std::string& text) {
  for (char32_t cp : utf8_decode_lenient(text)) {
    if (!is_space(cp)) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(PostType type) {
  return type == PostType::Original ? "original" : "forward";
}

std::string_view to_string(Label label) {
  return label == Label::Suicidal ? "suicidal" : "non_suicidal";
}

std::optional<PostType> post_type_from(std::string_view name) {
  if (name == "original") return PostType::Original;
  if (name == "forward") return PostType::Forward;
  return std::nullopt;
}

std::optional<Label> label_from(std::string_view name) {
  if (name == "suicidal") return Label::Suicidal;
  if (name == "non_suicidal") return Label::NonSuicidal;
  return std::nullopt;
}

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
  // YYYY-MM-DDTHH:MM
  if (text.size() != 16 || text[4] != '-' || text[7] != '-' ||
      text[10] != 'T' || text[13] != ':') {
    return std::nullopt;
  }
  Timestamp ts;
  if (!parse_int(text.substr(0, 4), ts.year) ||
      !parse_int(text.substr(5, 2), ts.month) ||
      !parse_int(text.substr(8, 2), ts.day) ||
      !parse_int(text.substr(11, 2), ts.hour) ||
      !parse_int(text.substr(14, 2), ts.minute)) {
    return std::nullopt;
  }
  if (!ts.valid()) return std::nullopt;
  return ts;
}

std::string Timestamp::to_string() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d", year, month, day,
                hour, minute);
  return std::string(buf);
}

bool Timestamp::valid() const {
  if (year < 1 || year > 9999) return false;
  if (month < 1 || month > 12) return false;
  if (day < 1 || day > days_in_month(year, month)) return false;
  if (hour < 0 || hour > 23) return false;
  if (minute < 0 || minute > 59) return false;
  return true;
}

Corpus::Corpus(std::vector<Post> posts) : posts_(std::move(posts)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(posts_.size());
  for (const Post& post : posts_) {
    if (post.id.empty()) throw Error("post with empty id");
    if (!seen.insert(post.id).second) {
      throw Error("duplicate post id '" + post.id + "'");
    }
    if (!post.posted_at.valid()) {
      throw Error("post '" + post.id + "' has invalid timestamp");
    }
    if (blank_text(post.text)) {
      throw Error("post '" + post.id + "' has blank text");
    }
    if (post.label == Label::Suicidal) {
      ++counts_.suicidal;
    } else if (post.label == Label::NonSuicidal) {
      ++counts_.non_suicidal;
    }
  }
}

std::pair<std::size_t, std::size_t> class_counts(const Corpus& corpus) {
  for (const Post& post : corpus) {
    if (!post.label) {
      throw Error("unlabeled post '" + post.id + "' in class_counts");
    }
  }
  return {corpus.labeled_counts().suicidal, corpus.labeled_counts().non_suicidal};
}

namespace {

// Resolves the record key for a canonical field under the schema mapping.
const std::string& field_key(const FieldSchema& schema, const std::string& canonical) {
  auto it = schema.find(canonical);
  return it == schema.end() ? canonical : it->second;
}

std::optional<std::string> take_string(const json& rec, const std::string& key) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

IngestResult ingest_stream(std::istream& in, const FieldSchema& schema) {
  for (const auto& [canonical, key] : schema) {
    bool known = false;
    for (const char* f : kCanonicalFields) known = known || canonical == f;
    if (!known) throw ConfigError("unknown canonical field '" + canonical + "' in schema");
    (void)key;
  }

  IngestResult result;
  std::vector<Post> posts;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 0;
  std::size_t record_count = 0;
  std::string line;

  const std::string id_key = field_key(schema, "id");
  const std::string author_key = field_key(schema, "author_id");
  const std::string text_key = field_key(schema, "text");
  const std::string time_key = field_key(schema, "posted_at");
  const std::string type_key = field_key(schema, "post_type");
  const std::string label_key = field_key(schema, "label");

  auto fail = [&](std::size_t ln, std::string msg) {
    result.errors.push_back({ln, std::move(msg)});
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++record_count;

    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
      fail(line_no, "not a valid record object");
      continue;
    }

    auto id = take_string(rec, id_key);
    auto author = take_string(rec, author_key);
    auto text = take_string(rec, text_key);
    auto time_str = take_string(rec, time_key);
    auto type_str = take_string(rec, type_key);
    if (!id || id->empty()) {
      fail(line_no, "missing or empty field '" + id_key + "'");
      continue;
    }
    if (!author) {
      fail(line_no, "missing field '" + author_key + "'");
      continue;
    }
    if (!text) {
      fail(line_no, "missing field '" + text_key + "'");
      continue;
    }
    if (!time_str) {
      fail(line_no, "missing field '" + time_key + "'");
      continue;
    }
    auto ts = Timestamp::parse(*time_str);
    if (!ts) {
      fail(line_no, "invalid timestamp '" + *time_str + "'");
      continue;
    }
    if (!type_str) {
      fail(line_no, "missing field '" + type_key + "'");
      continue;
    }
    auto type = post_type_from(*type_str);
    if (!type) {
      fail(line_no, "unknown post_type '" + *type_str + "'");
      continue;
    }
    std::optional<Label> label;
    if (auto it = rec.find(label_key); it != rec.end() && !it->is_null()) {
      if (!it->is_string()) {
        fail(line_no, "label must be a string");
        continue;
      }
      label = label_from(it->get<std::string>());
      if (!label) {
        fail(line_no, "unknown label '" + it->get<std::string>() + "'");
        continue;
      }
    }
    if (!seen_ids.insert(*id).second) {
      fail(line_no, "duplicate post id '" + *id + "'");
      continue;
    }
    if (blank_text(*text)) {
      ++result.dropped_blank;
      continue;
    }
    posts.push_back(Post{std::move(*id), std::move(*author), std::move(*text),
                         *ts, *type, label});
  }

  if (record_count > 0 && result.errors.size() * 2 > record_count) {
    std::ostringstream msg;
    msg << result.errors.size() << " of " << record_count
        << " records malformed (first at line " << result.errors.front().line
        << ": " << result.errors.front().message << ")";
    throw Error(msg.str());
  }

  result.corpus = Corpus(std::move(posts));
  return result;
}

IngestResult ingest(const std::filesystem::path& path, const FieldSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file '" + path.string() + "'");
  return ingest_stream(in, schema);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Post& post : corpus) {
    json rec;
    rec["id"] = post.id;
    rec["author_id"] = post.author_id;
    rec["text"] = post.text;
    rec["posted_at"] = post.posted_at.to_string();
    rec["post_type"] = std::string(to_string(post.post_type));
    if (post.label) rec["label"] = std::string(to_string(*post.label));
    out << rec.dump() << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file '" + path.string() + "'");
  write_corpus(corpus, out);
}

}  // namespace psylex
