#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "mrlcast/core.hpp"
#include "mrlcast/pair_record.hpp"

namespace mrlcast {

// One token row as read from a treebank file: the columns the model uses
// plus the remaining six kept verbatim for the debug writer.
struct ConlluRow {
  std::string id;  // "3" or a range "1-3"
  std::string form;
  std::string lemma;
  std::string upos;
  std::array<std::string, 6> rest;  // xpos feats head deprel deps misc
};

struct ConlluSentenceDebug {
  std::vector<std::string> comments;
  std::vector<ConlluRow> rows;
};

struct CorpusViolation {
  std::string sentence_id;
  Violation violation;
};

// A parsed treebank: the corpus model, the raw rows for round-tripping,
// and any invariant violations found on the way in. Violations (unknown
// tags, mostly) are data; only structural damage is a read failure.
struct ConlluDocument {
  Corpus corpus;
  std::vector<ConlluSentenceDebug> debug;
  std::vector<CorpusViolation> violations;
};

// Reads CoNLL-U: '#' comments, 10 tab-separated columns, blank-line
// sentence breaks. A range row i-j contributes one word whose surface is
// the row's FORM and whose morphemes come from rows i..j; other rows
// become single-morpheme words. Sentence ids come from "# sent_id" when
// present, else the 1-based position. Throws ParseError (with the line
// number) on bad column counts, bad ranges, or duplicate sentence ids.
ConlluDocument read_conllu(std::istream& in, const TagSet& tags);

// Debug writer. write_conllu(read_conllu(f)) reads back to the same
// corpus; the ConlluDocument overload also preserves the opaque columns.
void write_conllu(const ConlluDocument& doc, std::ostream& out);
void write_conllu(const Corpus& corpus, std::ostream& out);

enum class NerLevel { token, morpheme };

const char* to_string(NerLevel level);

struct NerRecord {
  std::string id;
  std::string text;
  std::vector<Entity> entities;
};

struct NerDataset {
  NerLevel level = NerLevel::morpheme;
  std::vector<NerRecord> records;
};

// JSON-lines: {"id": ..., "text": ..., "entities": [{"surface", "type"}]}.
// Order and duplicates are preserved; entity surfaces need not occur in
// the text. Throws ParseError with the line number on malformed rows.
NerDataset read_ner(std::istream& in, NerLevel level);

struct QaReadResult {
  std::vector<QAExample> examples;
  std::size_t skipped_no_answer = 0;
};

// SQuAD-shaped JSON: data -> paragraphs -> {context, qas}. Answer spans
// are accepted and ignored; a qa entry with no answers is skipped and
// counted rather than read.
QaReadResult read_qa(std::istream& in);

// Tab-separated id, label, text. Labels must be positive, negative or
// neutral; anything else is a ParseError with the line number.
std::vector<SentimentExample> read_sentiment(std::istream& in);

// One {"id", "input", "target"} object per line, fields in that order.
// All records must share one task. Returns the number of lines written.
std::size_t write_pairs(const std::vector<PairRecord>& records,
                        std::ostream& out);

std::vector<PairRecord> read_pairs(std::istream& in, Task task);

// Model output interchange: one {"id", "output"} object per line.
struct Prediction {
  std::string id;
  std::string output;
};

std::vector<Prediction> read_predictions(std::istream& in);
std::size_t write_predictions(const std::vector<Prediction>& preds,
                              std::ostream& out);

// Rebuilds entities from BIO tags: a B-X opens a run, I-X extends it, O
// closes. Run forms are joined with single spaces. A stray I-X without an
// open run of type X opens one, matching common scorer behavior.
std::vector<Entity> bio_to_entities(
    const std::vector<std::pair<std::string, std::string>>& tagged_tokens);

}  // namespace mrlcast
