#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mrlcast/codec.hpp"
#include "mrlcast/core.hpp"

namespace mrlcast {

struct Support {
  std::int64_t gold_items = 0;
  std::int64_t pred_items = 0;
  std::int64_t matched_items = 0;
  std::int64_t examples = 0;
};

struct PerExample {
  std::string id;
  std::int64_t gold_items = 0;
  std::int64_t pred_items = 0;
  std::int64_t matched_items = 0;
  double precision = 0, recall = 0, f1 = 0;
  std::optional<double> em;
};

struct ClassScore {
  std::int64_t gold = 0, pred = 0, correct = 0;
  double precision = 0, recall = 0, f1 = 0;
};

// The shared result shape of every scorer. precision/recall/f1 are the
// headline numbers (micro-averaged for item scorers, means for QA, macro
// for classification); em and accuracy appear only where they apply.
struct MetricReport {
  std::string task;
  double precision = 0, recall = 0, f1 = 0;
  std::optional<double> em;
  std::optional<double> accuracy;
  Support support;
  std::vector<std::pair<std::string, ClassScore>> per_class;
  std::vector<PerExample> per_example;
  std::string config_fingerprint;

  nlohmann::ordered_json to_json() const;
};

inline double f1_of(double p, double r) {
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

// Aligned multiset overlap between gold sentences and predicted analyses.
// Word groups are paired by position within each sentence; each pair
// contributes the size of the multiset intersection of its items (forms in
// SEG mode, form+tag in TAG mode, form+lemma in LEMMA mode). Words without
// a counterpart count toward their own side only. Totals are integers and
// are divided exactly once, so the result is independent of sentence and
// item order. Throws DataError, listing ids, when predictions are missing.
MetricReport mset_scores(const Corpus& gold,
                         const std::map<std::string, MorphAnalysis>& preds,
                         MorphMode mode);

// Position-free entity matching: multisets of (surface, type) pairs, with
// surface whitespace collapsed to single spaces and trimmed. An entity
// with the right form and boundaries but wrong type does not match.
MetricReport ner_scores(
    const std::vector<std::pair<std::string, std::vector<Entity>>>& gold,
    const std::map<std::string, std::vector<Entity>>& preds);

// Unicode-lowercases, strips punctuation (category P*), collapses
// whitespace runs to single spaces and trims. No article stripping.
std::string normalize_answer(std::string_view text);

// SQuAD-style scoring: per example, exact match against any normalized
// gold answer and the best token-multiset F1 over the gold answers;
// corpus numbers are means over examples.
MetricReport qa_scores(const std::vector<QAExample>& gold,
                       const std::map<std::string, std::string>& preds);

// Single-label classification with abstention. An absent prediction is an
// abstention and can never be correct. Macro scores average over classes
// with any gold or predicted support. Throws DataError on length mismatch.
MetricReport classification_f1(
    const std::vector<std::string>& gold,
    const std::vector<std::optional<std::string>>& preds,
    const std::vector<std::string>& classes);

// Relative shrinkage of the error band, in percent: how much of the gap to
// a perfect 100 the new score closed. Both scores must lie in [0, 100];
// a perfect old score admits only a perfect new one.
double error_reduction(double old_score, double new_score);

// new_score - old_score, computed in millionths of a point so that
// two-decimal score deltas come out exact.
double score_delta(double old_score, double new_score);

}  // namespace mrlcast
