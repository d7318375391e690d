#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrlcast/core.hpp"
#include "mrlcast/pair_record.hpp"

namespace mrlcast {

// Target-string delimiters and sentinels. The defaults are the wire format
// every other module assumes; change them only together with retraining.
//
// Escaping reserves the escape character plus every non-whitespace character
// used by morph_delim, tag_delim and entity_sep. A reserved character only
// ever appears in a well-formed target as part of a delimiter or directly
// after the escape character, which keeps decoding unambiguous no matter
// what text the forms contain.
struct CodecConfig {
  std::string morph_delim = "@@";
  std::string tag_delim = ">>";
  std::string entity_sep = " $$ ";
  std::string empty_entities_token = "<no_entities>";
  std::string sentiment_positive = "<extra_id_0>";
  std::string sentiment_negative = "<extra_id_1>";
  std::string sentiment_neutral = "<extra_id_2>";
  std::string qa_joiner = "\n";
  char escape_char = '\\';

  // Throws ConfigError when the fields cannot form a decodable format.
  void validate() const;

  // Non-whitespace characters of the three delimiters, deduplicated, in
  // first-appearance order. Does not include the escape character.
  std::string reserved_chars() const;

  std::string sentinel(SentimentLabel label) const;
  std::optional<SentimentLabel> label_of_sentinel(std::string_view text) const;

  // Stable short hash of every field, embedded in reports so that scores
  // can be traced to the exact format they were computed under.
  std::string fingerprint() const;

  bool operator==(const CodecConfig&) const = default;
};

enum class Strictness { strict, lenient };

// A defect found while decoding leniently, or an edit made by repair.
struct ParseNote {
  std::string kind;
  std::size_t offset = 0;
  std::string detail;
};

// escape makes arbitrary text safe to embed between delimiters; unescape
// inverts it. unescape throws CodecError on a dangling or invalid escape
// and on a bare reserved character.
std::string escape(std::string_view text, const CodecConfig& cfg);
std::string unescape(std::string_view text, const CodecConfig& cfg);

// Byte offsets of every unescaped occurrence of delim in text, scanning
// left to right and skipping escape pairs. Greedy: overlapping occurrences
// are consumed by the leftmost match.
std::vector<std::size_t> find_unescaped(std::string_view text,
                                        std::string_view delim,
                                        const CodecConfig& cfg);

// One decoded segment: the form plus the tag or lemma in label when the
// mode carries one (label is empty in SEG mode).
struct MorphUnit {
  std::string form;
  std::string label;

  bool operator==(const MorphUnit&) const = default;
};

// Per-word groups of decoded units. Lenient decoding may leave a group
// empty when every segment of a non-empty word was defective; the group
// still occupies its position for alignment.
struct MorphAnalysis {
  std::vector<std::vector<MorphUnit>> words;
  std::vector<ParseNote> notes;
};

// Renders one sentence as a target string: forms joined by morph_delim
// inside a word, words joined by single spaces, each form (and lemma)
// escaped. TAG and LEMMA attach the label after tag_delim.
std::string linearize_morph(const Sentence& s, MorphMode mode,
                            const CodecConfig& cfg);

// Decodes a target string back into per-word analyses. Strict mode throws
// CodecError at the first defect; lenient mode always returns, recording
// recovery steps as notes: empty segments are dropped, a segment without
// tag_delim becomes a form labeled UNK, a dangling trailing delimiter is
// dropped.
MorphAnalysis parse_morph(std::string_view text, MorphMode mode,
                          const CodecConfig& cfg, Strictness strictness);

// Entities joined by entity_sep, each as escape(surface) tag_delim type.
// An empty list becomes the empty-entities token.
std::string linearize_ner(const std::vector<Entity>& entities,
                          const CodecConfig& cfg);

struct NerParse {
  std::vector<Entity> entities;
  std::vector<ParseNote> notes;
};

// Splits on entity_sep, then on the last tag_delim of each chunk. A chunk
// without tag_delim is an error in strict mode and is dropped with a note
// in lenient mode. The empty-entities token (or, leniently, an empty
// string) decodes to no entities.
NerParse parse_ner(std::string_view text, const CodecConfig& cfg,
                   Strictness strictness);

// input = context, joiner, question; target = the first gold answer.
PairRecord linearize_qa(const QAExample& ex, const CodecConfig& cfg);

PairRecord linearize_sentiment(const SentimentExample& ex,
                               const CodecConfig& cfg);

struct SentimentParse {
  std::optional<SentimentLabel> label;  // nullopt = abstain
  std::vector<ParseNote> notes;
};

// Trims ASCII whitespace and matches a sentinel exactly. Anything else is
// an error in strict mode and an abstention in lenient mode.
SentimentParse parse_sentiment(std::string_view text, const CodecConfig& cfg,
                               Strictness strictness);

// Loads a config from JSON ({"morph_delim": "@@", ...}) or key=value lines;
// the format is sniffed from the first non-space character. Unknown keys
// are errors. Values in key=value files may use \n, \t, \\ escapes.
CodecConfig load_codec_config(const std::string& text);

}  // namespace mrlcast
