#include "mrlcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mrlcast {

namespace {

#include "unicode_tables.inc"

bool in_ranges(char32_t cp, const CpRange* ranges, std::size_t n) {
  const CpRange* end = ranges + n;
  const CpRange* it = std::lower_bound(
      ranges, end, cp, [](const CpRange& r, char32_t v) { return r.hi < v; });
  return it != end && it->lo <= cp;
}

bool is_unicode_punct(char32_t cp) {
  return in_ranges(cp, kPunctRanges,
                   sizeof(kPunctRanges) / sizeof(kPunctRanges[0]));
}

bool is_unicode_space(char32_t cp) {
  return in_ranges(cp, kSpaceRanges,
                   sizeof(kSpaceRanges) / sizeof(kSpaceRanges[0]));
}

char32_t to_lower(char32_t cp) {
  const CpMap* end = kLowerMap + sizeof(kLowerMap) / sizeof(kLowerMap[0]);
  const CpMap* it = std::lower_bound(
      kLowerMap, end, cp,
      [](const CpMap& m, char32_t v) { return m.from < v; });
  if (it != end && it->from == cp) return it->to;
  return cp;
}

// Decodes the next UTF-8 scalar; malformed bytes decode to themselves so
// normalization is total over arbitrary byte strings.
char32_t next_codepoint(std::string_view s, std::size_t& i) {
  unsigned char c = s[i];
  std::size_t len = 1;
  char32_t cp = c;
  if ((c & 0xe0) == 0xc0) { len = 2; cp = c & 0x1f; }
  else if ((c & 0xf0) == 0xe0) { len = 3; cp = c & 0x0f; }
  else if ((c & 0xf8) == 0xf0) { len = 4; cp = c & 0x07; }
  if (len > 1) {
    if (i + len > s.size()) { ++i; return c; }
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char cc = s[i + k];
      if ((cc & 0xc0) != 0x80) { ++i; return c; }
      cp = (cp << 6) | (cc & 0x3f);
    }
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xc0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xe0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else {
    out += static_cast<char>(0xf0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  }
}

using Counts = std::unordered_map<std::string, std::int64_t>;

std::int64_t intersect_size(const Counts& a, const Counts& b) {
  std::int64_t total = 0;
  for (const auto& [key, na] : a) {
    auto it = b.find(key);
    if (it != b.end()) total += std::min(na, it->second);
  }
  return total;
}

std::int64_t total_size(const Counts& c) {
  std::int64_t total = 0;
  for (const auto& [key, n] : c) total += n;
  return total;
}

// Collapses whitespace runs to single spaces and trims the ends; used for
// entity surfaces so spacing artifacts do not decide a match.
std::string collapse_ws(std::string_view s) {
  std::string out;
  bool pending = false;
  for (std::size_t i = 0; i < s.size();) {
    char32_t cp = next_codepoint(s, i);
    if (is_unicode_space(cp)) {
      if (!out.empty()) pending = true;
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    append_utf8(out, cp);
  }
  return out;
}

std::string item_key(const MorphUnit& unit, MorphMode mode) {
  if (mode == MorphMode::SEG) return unit.form;
  return unit.form + '\x1f' + unit.label;
}

std::string gold_item_key(const Morpheme& m, MorphMode mode) {
  switch (mode) {
    case MorphMode::SEG: return m.form;
    case MorphMode::TAG: return m.form + '\x1f' + m.tag;
    case MorphMode::LEMMA: return m.form + '\x1f' + m.lemma;
  }
  return m.form;
}

void finish_micro(MetricReport& report) {
  const Support& s = report.support;
  report.precision =
      s.pred_items == 0
          ? 0.0
          : static_cast<double>(s.matched_items) / s.pred_items;
  report.recall = s.gold_items == 0
                      ? 0.0
                      : static_cast<double>(s.matched_items) / s.gold_items;
  report.f1 = f1_of(report.precision, report.recall);
}

void sort_per_example(MetricReport& report) {
  std::sort(report.per_example.begin(), report.per_example.end(),
            [](const PerExample& a, const PerExample& b) { return a.id < b.id; });
}

}  // namespace

nlohmann::ordered_json MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["task"] = task;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  if (em) j["em"] = *em;
  if (accuracy) j["accuracy"] = *accuracy;
  j["support"] = {{"gold_items", support.gold_items},
                  {"pred_items", support.pred_items},
                  {"matched_items", support.matched_items},
                  {"examples", support.examples}};
  if (!per_class.empty()) {
    nlohmann::ordered_json pc;
    for (const auto& [name, cs] : per_class) {
      pc[name] = {{"gold", cs.gold},         {"pred", cs.pred},
                  {"correct", cs.correct},   {"precision", cs.precision},
                  {"recall", cs.recall},     {"f1", cs.f1}};
    }
    j["per_class"] = pc;
  }
  if (!per_example.empty()) {
    nlohmann::ordered_json pe = nlohmann::ordered_json::array();
    for (const PerExample& ex : per_example) {
      nlohmann::ordered_json e;
      e["id"] = ex.id;
      e["gold_items"] = ex.gold_items;
      e["pred_items"] = ex.pred_items;
      e["matched_items"] = ex.matched_items;
      e["precision"] = ex.precision;
      e["recall"] = ex.recall;
      e["f1"] = ex.f1;
      if (ex.em) e["em"] = *ex.em;
      pe.push_back(std::move(e));
    }
    j["per_example"] = pe;
  }
  j["config_fingerprint"] = config_fingerprint;
  return j;
}

MetricReport mset_scores(const Corpus& gold,
                         const std::map<std::string, MorphAnalysis>& preds,
                         MorphMode mode) {
  std::vector<std::string> missing;
  for (const Sentence& s : gold.sentences)
    if (!preds.count(s.id)) missing.push_back(s.id);
  if (!missing.empty()) {
    std::string msg = "missing predictions for ids:";
    for (const std::string& id : missing) msg += " " + id;
    throw DataError(msg);
  }

  MetricReport report;
  report.task = to_string(mode);
  for (const Sentence& s : gold.sentences) {
    const MorphAnalysis& pred = preds.at(s.id);
    PerExample ex;
    ex.id = s.id;
    std::size_t pairs = std::max(s.words.size(), pred.words.size());
    for (std::size_t w = 0; w < pairs; ++w) {
      Counts gold_counts, pred_counts;
      if (w < s.words.size())
        for (const Morpheme& m : s.words[w].morphemes)
          ++gold_counts[gold_item_key(m, mode)];
      if (w < pred.words.size())
        for (const MorphUnit& unit : pred.words[w])
          ++pred_counts[item_key(unit, mode)];
      ex.gold_items += total_size(gold_counts);
      ex.pred_items += total_size(pred_counts);
      ex.matched_items += intersect_size(gold_counts, pred_counts);
    }
    ex.precision = ex.pred_items == 0
                       ? 0.0
                       : static_cast<double>(ex.matched_items) / ex.pred_items;
    ex.recall = ex.gold_items == 0
                    ? 0.0
                    : static_cast<double>(ex.matched_items) / ex.gold_items;
    ex.f1 = f1_of(ex.precision, ex.recall);
    report.support.gold_items += ex.gold_items;
    report.support.pred_items += ex.pred_items;
    report.support.matched_items += ex.matched_items;
    ++report.support.examples;
    report.per_example.push_back(std::move(ex));
  }
  finish_micro(report);
  sort_per_example(report);
  return report;
}

MetricReport ner_scores(
    const std::vector<std::pair<std::string, std::vector<Entity>>>& gold,
    const std::map<std::string, std::vector<Entity>>& preds) {
  std::vector<std::string> missing;
  for (const auto& [id, entities] : gold)
    if (!preds.count(id)) missing.push_back(id);
  if (!missing.empty()) {
    std::string msg = "missing predictions for ids:";
    for (const std::string& id : missing) msg += " " + id;
    throw DataError(msg);
  }

  MetricReport report;
  report.task = "ner";
  for (const auto& [id, gold_entities] : gold) {
    Counts gold_counts, pred_counts;
    for (const Entity& e : gold_entities)
      ++gold_counts[collapse_ws(e.surface) + '\x1f' + e.etype];
    for (const Entity& e : preds.at(id))
      ++pred_counts[collapse_ws(e.surface) + '\x1f' + e.etype];
    PerExample ex;
    ex.id = id;
    ex.gold_items = total_size(gold_counts);
    ex.pred_items = total_size(pred_counts);
    ex.matched_items = intersect_size(gold_counts, pred_counts);
    ex.precision = ex.pred_items == 0
                       ? 0.0
                       : static_cast<double>(ex.matched_items) / ex.pred_items;
    ex.recall = ex.gold_items == 0
                    ? 0.0
                    : static_cast<double>(ex.matched_items) / ex.gold_items;
    ex.f1 = f1_of(ex.precision, ex.recall);
    report.support.gold_items += ex.gold_items;
    report.support.pred_items += ex.pred_items;
    report.support.matched_items += ex.matched_items;
    ++report.support.examples;
    report.per_example.push_back(std::move(ex));
  }
  finish_micro(report);
  sort_per_example(report);
  return report;
}

std::string normalize_answer(std::string_view text) {
  std::string out;
  bool pending = false;
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp = to_lower(next_codepoint(text, i));
    if (is_unicode_punct(cp)) continue;
    if (is_unicode_space(cp)) {
      if (!out.empty()) pending = true;
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    append_utf8(out, cp);
  }
  return out;
}

namespace {

Counts answer_tokens(std::string_view normalized) {
  Counts counts;
  std::size_t start = 0;
  while (start <= normalized.size()) {
    std::size_t end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) ++counts[std::string(normalized.substr(start, end - start))];
    start = end + 1;
  }
  return counts;
}

}  // namespace

MetricReport qa_scores(const std::vector<QAExample>& gold,
                       const std::map<std::string, std::string>& preds) {
  std::vector<std::string> missing;
  for (const QAExample& ex : gold)
    if (!preds.count(ex.id)) missing.push_back(ex.id);
  if (!missing.empty()) {
    std::string msg = "missing predictions for ids:";
    for (const std::string& id : missing) msg += " " + id;
    throw DataError(msg);
  }

  MetricReport report;
  report.task = "qa";
  double sum_p = 0, sum_r = 0, sum_f1 = 0, sum_em = 0;
  for (const QAExample& ex : gold) {
    std::string pred_norm = normalize_answer(preds.at(ex.id));
    Counts pred_tokens = answer_tokens(pred_norm);
    std::int64_t pred_total = total_size(pred_tokens);

    PerExample pe;
    pe.id = ex.id;
    bool em = false;
    double best_f1 = 0, best_p = 0, best_r = 0;
    std::int64_t best_gold = 0, best_match = 0;
    bool first = true;
    for (const std::string& answer : ex.answers) {
      std::string gold_norm = normalize_answer(answer);
      if (gold_norm == pred_norm) em = true;
      Counts gold_tokens = answer_tokens(gold_norm);
      std::int64_t gold_total = total_size(gold_tokens);
      double p, r, f;
      std::int64_t match = intersect_size(gold_tokens, pred_tokens);
      if (gold_total == 0 && pred_total == 0) {
        p = r = f = 1.0;  // both empty after normalization
      } else if (gold_total == 0 || pred_total == 0) {
        p = r = f = 0.0;
      } else {
        p = static_cast<double>(match) / pred_total;
        r = static_cast<double>(match) / gold_total;
        f = f1_of(p, r);
      }
      if (first || f > best_f1) {
        best_f1 = f;
        best_p = p;
        best_r = r;
        best_gold = gold_total;
        best_match = match;
        first = false;
      }
    }
    pe.gold_items = best_gold;
    pe.pred_items = pred_total;
    pe.matched_items = best_match;
    pe.precision = best_p;
    pe.recall = best_r;
    pe.f1 = best_f1;
    pe.em = em ? 1.0 : 0.0;
    sum_p += best_p;
    sum_r += best_r;
    sum_f1 += best_f1;
    sum_em += em ? 1.0 : 0.0;
    report.support.gold_items += best_gold;
    report.support.pred_items += pred_total;
    report.support.matched_items += best_match;
    ++report.support.examples;
    report.per_example.push_back(std::move(pe));
  }
  std::int64_t n = report.support.examples;
  if (n > 0) {
    report.precision = sum_p / n;
    report.recall = sum_r / n;
    report.f1 = sum_f1 / n;
    report.em = sum_em / n;
  } else {
    report.em = 0.0;
  }
  sort_per_example(report);
  return report;
}

MetricReport classification_f1(
    const std::vector<std::string>& gold,
    const std::vector<std::optional<std::string>>& preds,
    const std::vector<std::string>& classes) {
  if (gold.size() != preds.size())
    throw DataError("gold and prediction lists differ in length: " +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(preds.size()));

  MetricReport report;
  report.task = "classification";
  std::map<std::string, ClassScore> scores;
  for (const std::string& c : classes) scores[c];
  std::int64_t correct_total = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    scores[gold[i]].gold += 1;
    if (preds[i]) {
      auto it = scores.find(*preds[i]);
      if (it != scores.end()) it->second.pred += 1;
      if (*preds[i] == gold[i]) {
        scores[gold[i]].correct += 1;
        ++correct_total;
      }
    }
    // An abstention predicts nothing: no class gets credit.
  }

  double macro_p = 0, macro_r = 0, macro_f1 = 0;
  std::int64_t active = 0;
  for (const std::string& c : classes) {
    ClassScore& cs = scores[c];
    cs.precision =
        cs.pred == 0 ? 0.0 : static_cast<double>(cs.correct) / cs.pred;
    cs.recall = cs.gold == 0 ? 0.0 : static_cast<double>(cs.correct) / cs.gold;
    cs.f1 = f1_of(cs.precision, cs.recall);
    report.per_class.emplace_back(c, cs);
    if (cs.gold > 0 || cs.pred > 0) {
      macro_p += cs.precision;
      macro_r += cs.recall;
      macro_f1 += cs.f1;
      ++active;
    }
    report.support.gold_items += cs.gold;
    report.support.pred_items += cs.pred;
    report.support.matched_items += cs.correct;
  }
  report.support.examples = static_cast<std::int64_t>(gold.size());
  if (active > 0) {
    report.precision = macro_p / active;
    report.recall = macro_r / active;
    report.f1 = macro_f1 / active;
  }
  report.accuracy = gold.empty()
                        ? 0.0
                        : static_cast<double>(correct_total) / gold.size();
  return report;
}

double error_reduction(double old_score, double new_score) {
  if (!(old_score >= 0.0 && old_score <= 100.0) ||
      !(new_score >= 0.0 && new_score <= 100.0))
    throw std::invalid_argument("scores must lie in [0, 100]");
  double old_err = 100.0 - old_score;
  double new_err = 100.0 - new_score;
  if (old_err == 0.0) {
    if (new_err == 0.0) return 0.0;
    throw std::invalid_argument(
        "error reduction from a perfect score is undefined");
  }
  return 100.0 * (old_err - new_err) / old_err;
}

double score_delta(double old_score, double new_score) {
  // Millionths-of-a-point grid: keeps deltas of decimal scores exact
  // (95.53 - 78.6 is 16.93, not 16.93000000000001).
  long long old_u = std::llround(old_score * 1e6);
  long long new_u = std::llround(new_score * 1e6);
  return static_cast<double>(new_u - old_u) / 1e6;
}

}  // namespace mrlcast
