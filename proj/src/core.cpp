#include "mrlcast/core.hpp"

#include <algorithm>
#include <cctype>

namespace mrlcast {

namespace {

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

}  // namespace

const char* to_string(Task t) {
  switch (t) {
    case Task::SEG: return "seg";
    case Task::TAG: return "pos";
    case Task::LEMMA: return "lemma";
    case Task::NER: return "ner";
    case Task::QA: return "qa";
    case Task::SENTIMENT: return "sentiment";
  }
  return "?";
}

const char* to_string(MorphMode m) {
  switch (m) {
    case MorphMode::SEG: return "seg";
    case MorphMode::TAG: return "pos";
    case MorphMode::LEMMA: return "lemma";
  }
  return "?";
}

std::optional<Task> task_from(std::string_view name) {
  if (name == "seg") return Task::SEG;
  if (name == "pos") return Task::TAG;
  if (name == "lemma") return Task::LEMMA;
  if (name == "ner") return Task::NER;
  if (name == "qa") return Task::QA;
  if (name == "sentiment") return Task::SENTIMENT;
  return std::nullopt;
}

MorphMode morph_mode_of(Task t) {
  switch (t) {
    case Task::SEG: return MorphMode::SEG;
    case Task::TAG: return MorphMode::TAG;
    case Task::LEMMA: return MorphMode::LEMMA;
    default:
      throw ConfigError(std::string("task ") + to_string(t) +
                        " has no morphological mode");
  }
}

TagSet::TagSet(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
  if (labels_.empty())
    throw ConfigError("tagset '" + name_ + "' has no labels");
  for (const auto& label : labels_) {
    if (label.empty())
      throw ConfigError("tagset '" + name_ + "' contains an empty label");
    if (has_whitespace(label))
      throw ConfigError("tagset '" + name_ + "' label '" + label +
                        "' contains whitespace");
    if (label == kUnkLabel)
      throw ConfigError("tagset '" + name_ + "' may not contain the reserved "
                        "label UNK");
    if (!index_.insert(label).second)
      throw ConfigError("tagset '" + name_ + "' repeats label '" + label + "'");
  }
}

TagSet TagSet::universal_pos() {
  return TagSet("universal-pos",
                {"ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN",
                 "NUM", "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM",
                 "VERB", "X"});
}

TagSet TagSet::default_entity_types() {
  return TagSet("entity-types",
                {"PER", "ORG", "LOC", "GPE", "FAC", "EVE", "WOA", "ANG",
                 "DUC"});
}

bool TagSet::contains(std::string_view label) const {
  return index_.count(std::string(label)) > 0;
}

std::string Sentence::raw_text() const {
  if (!text.empty()) return text;
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i].surface;
  }
  return out;
}

const char* to_string(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::positive: return "positive";
    case SentimentLabel::negative: return "negative";
    case SentimentLabel::neutral: return "neutral";
  }
  return "?";
}

std::optional<SentimentLabel> sentiment_label_from(std::string_view name) {
  if (name == "positive") return SentimentLabel::positive;
  if (name == "negative") return SentimentLabel::negative;
  if (name == "neutral") return SentimentLabel::neutral;
  return std::nullopt;
}

ValidationResult validate_sentence(const Sentence& s, const TagSet& tags) {
  ValidationResult result;
  auto add = [&](std::size_t word, const char* field, std::string message) {
    result.violations.push_back({word, field, std::move(message)});
  };

  if (s.id.empty()) add(0, "id", "empty sentence id");
  if (s.words.empty()) {
    add(0, "words", "sentence has no words");
    return result;
  }
  for (std::size_t w = 0; w < s.words.size(); ++w) {
    const Word& word = s.words[w];
    if (word.surface.empty())
      add(w, "surface", "empty surface at word " + std::to_string(w));
    else if (has_whitespace(word.surface))
      add(w, "surface", "surface contains whitespace at word " +
                            std::to_string(w));
    if (word.morphemes.empty()) {
      add(w, "morphemes", "empty morphemes at word " + std::to_string(w));
      continue;
    }
    for (const Morpheme& m : word.morphemes) {
      if (m.form.empty())
        add(w, "form", "empty form at word " + std::to_string(w));
      else if (has_whitespace(m.form))
        add(w, "form", "form contains whitespace at word " +
                           std::to_string(w));
      if (m.tag.empty())
        add(w, "tag", "empty tag at word " + std::to_string(w));
      else if (has_whitespace(m.tag))
        add(w, "tag", "tag contains whitespace at word " + std::to_string(w));
      else if (!tags.contains(m.tag))
        add(w, "tag", "unknown tag '" + m.tag + "' at word " +
                          std::to_string(w));
      if (m.lemma.empty())
        add(w, "lemma", "empty lemma at word " + std::to_string(w));
      else if (has_whitespace(m.lemma))
        add(w, "lemma", "lemma contains whitespace at word " +
                            std::to_string(w));
    }
  }
  return result;
}

}  // namespace mrlcast
