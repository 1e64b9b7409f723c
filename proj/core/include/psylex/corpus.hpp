#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace psylex {

enum class PostType { Original, Forward };
enum class Label { NonSuicidal, Suicidal };

std::string_view to_string(PostType type);
std::string_view to_string(Label label);
std::optional<PostType> post_type_from(std::string_view name);
std::optional<Label> label_from(std::string_view name);

/// Minute-precision local wall-clock time, no timezone.
/// Canonical text form is "YYYY-MM-DDTHH:MM".
struct Timestamp {
  int year = 1970;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;

  static std::optional<Timestamp> parse(std::string_view text);
  std::string to_string() const;
  bool valid() const;

  /// Comparable calendar-day key (year*10000 + month*100 + day).
  int day_key() const { return year * 10000 + month * 100 + day; }

  auto operator<=>(const Timestamp&) const = default;
};

/// One social-media post. `text` is UTF-8; empty-text posts are dropped at
/// ingestion, so a Post inside a Corpus always has non-empty text.
struct Post {
  std::string id;
  std::string author_id;
  std::string text;
  Timestamp posted_at;
  PostType post_type = PostType::Original;
  std::optional<Label> label;

  bool operator==(const Post&) const = default;
};

struct ClassCounts {
  std::size_t suicidal = 0;
  std::size_t non_suicidal = 0;
};

/// Immutable ordered collection of posts. Iteration order is the input file
/// order, stable across runs.
class Corpus {
 public:
  Corpus() = default;

  /// Validates ids (non-empty, unique), timestamps and non-empty text.
  /// Throws Error on violation.
  explicit Corpus(std::vector<Post> posts);

  const std::vector<Post>& posts() const { return posts_; }
  std::size_t size() const { return posts_.size(); }
  bool empty() const { return posts_.empty(); }
  const Post& operator[](std::size_t i) const { return posts_[i]; }
  auto begin() const { return posts_.begin(); }
  auto end() const { return posts_.end(); }

  /// Counts over labeled posts only; unlabeled posts are not counted.
  const ClassCounts& labeled_counts() const { return counts_; }

  bool operator==(const Corpus& other) const { return posts_ == other.posts_; }

 private:
  std::vector<Post> posts_;
  ClassCounts counts_;
};

/// Exact class counts (suicidal, non_suicidal). Requires every post to be
/// labeled; throws Error naming the first unlabeled post id otherwise.
std::pair<std::size_t, std::size_t> class_counts(const Corpus& corpus);

struct RecordError {
  std::size_t line = 0;  // 1-based line number in the input file
  std::string message;
};

struct IngestResult {
  Corpus corpus;
  std::size_t dropped_blank = 0;        // records dropped for blank text
  std::vector<RecordError> errors;      // malformed records that were skipped
};

/// Maps canonical field names (id, author_id, text, posted_at, post_type,
/// label) to the record keys actually used in the file.
using FieldSchema = std::map<std::string, std::string>;

/// Reads a line-delimited record file (one JSON object per line, UTF-8).
/// Blank-text records are dropped and counted; malformed records are
/// collected with their line numbers and ingestion continues. Throws Error
/// if the file is unreadable or if more than half of the records are
/// malformed.
IngestResult ingest(const std::filesystem::path& path,
                    const FieldSchema& schema = {});
IngestResult ingest_stream(std::istream& in, const FieldSchema& schema = {});

/// Writes a corpus in the canonical record format read back by ingest().
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

}  // namespace psylex
