#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mrlcast/errors.hpp"

namespace mrlcast {

// The tasks a target string can encode. SEG, TAG and LEMMA are the three
// morphological casts of the same sentence; the rest are sentence-level.
enum class Task { SEG, TAG, LEMMA, NER, QA, SENTIMENT };

// Which field rides along with each morpheme form in a morphological target.
enum class MorphMode { SEG, TAG, LEMMA };

const char* to_string(Task t);
const char* to_string(MorphMode m);
// Accepts the CLI spellings: seg, pos, lemma, ner, qa, sentiment.
std::optional<Task> task_from(std::string_view name);
MorphMode morph_mode_of(Task t);  // throws ConfigError for non-morph tasks

// One segmented unit of a surface word. The form is the unit as written,
// the lemma its dictionary form. Tags live in a TagSet; the literal "UNK"
// is reserved for decode recovery and is never a tagset member.
struct Morpheme {
  std::string form;
  std::string tag;
  std::string lemma;

  bool operator==(const Morpheme&) const = default;
};

// A named closed label inventory. Labels are unique, non-empty, free of
// whitespace, and may not include the reserved "UNK".
class TagSet {
 public:
  TagSet(std::string name, std::vector<std::string> labels);

  // The 17-label universal POS inventory.
  static TagSet universal_pos();
  // Entity types used by the bundled NER fixtures.
  static TagSet default_entity_types();

  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool contains(std::string_view label) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::unordered_set<std::string> index_;
};

inline constexpr const char* kUnkLabel = "UNK";

// A surface token with its ordered morphemes. The surface is decoupled from
// the concatenation of forms: "babayit" carries [be, ha, bayit].
struct Word {
  std::string surface;
  std::vector<Morpheme> morphemes;

  bool operator==(const Word&) const = default;
};

struct Sentence {
  std::string id;
  std::string text;  // raw sentence text; empty means "join the surfaces"
  std::vector<Word> words;

  // Raw text if present, otherwise surfaces joined with single spaces.
  std::string raw_text() const;

  bool operator==(const Sentence&) const = default;
};

struct Corpus {
  std::vector<Sentence> sentences;

  bool operator==(const Corpus&) const = default;
};

// A named span occurrence. surface is the text as it appears; it is matched
// as a form, not as a position, so duplicates are meaningful.
struct Entity {
  std::string surface;
  std::string etype;

  bool operator==(const Entity&) const = default;
};

struct QAExample {
  std::string id;
  std::string context;
  std::string question;
  std::vector<std::string> answers;  // gold answers; first one is the target

  bool operator==(const QAExample&) const = default;
};

enum class SentimentLabel { positive, negative, neutral };

const char* to_string(SentimentLabel label);
std::optional<SentimentLabel> sentiment_label_from(std::string_view name);

struct SentimentExample {
  std::string id;
  std::string text;
  SentimentLabel label;

  bool operator==(const SentimentExample&) const = default;
};

// A single rule violation found in a sentence. Violations are data for the
// caller to act on; finding them is not a failure of validation itself.
struct Violation {
  std::size_t word_index;
  std::string field;  // "surface", "form", "tag", "lemma", "words", ...
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks structural invariants of one sentence against a tagset: at least
// one word, non-empty whitespace-free surfaces and fields, known tags.
ValidationResult validate_sentence(const Sentence& s, const TagSet& tags);

}  // namespace mrlcast
