#include "mrlcast/codec.hpp"

#include <algorithm>
#include <cctype>

#include "json.hpp"
#include "mrlcast/hash.hpp"

namespace mrlcast {

namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool has_ascii_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), is_ascii_space);
}

std::string_view trim_ascii(std::string_view s) {
  while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
  return s;
}

// Whitespace allowed inside a decoded piece: NER surfaces keep single
// spaces, everything else must be whitespace-free.
enum class WsPolicy { any, space_only, none };

struct PieceDecoder {
  const CodecConfig& cfg;
  std::string reserved;  // cached cfg.reserved_chars()

  bool is_reserved(char c) const {
    return reserved.find(c) != std::string::npos;
  }

  // Decodes piece, reporting defects either by throwing (strict) or by
  // appending to notes (lenient). base is the offset of piece in the full
  // input, so note and error offsets are absolute.
  std::string decode(std::string_view piece, std::size_t base,
                     WsPolicy ws_policy, Strictness strictness,
                     std::vector<ParseNote>* notes) const {
    std::string out;
    out.reserve(piece.size());
    auto defect = [&](std::size_t off, const char* kind) {
      if (strictness == Strictness::strict) throw CodecError(base + off, kind);
      notes->push_back({kind, base + off, std::string(piece)});
    };
    std::size_t i = 0;
    while (i < piece.size()) {
      char c = piece[i];
      if (c == cfg.escape_char) {
        if (i + 1 >= piece.size()) {
          defect(i, "dangling escape");
          ++i;
          continue;
        }
        char d = piece[i + 1];
        if (d != cfg.escape_char && !is_reserved(d))
          defect(i, "invalid escape");
        out += d;
        i += 2;
        continue;
      }
      if (is_reserved(c)) {
        defect(i, "unescaped reserved character");
        out += c;
        ++i;
        continue;
      }
      if (is_ascii_space(c) &&
          (ws_policy == WsPolicy::none ||
           (ws_policy == WsPolicy::space_only && c != ' '))) {
        defect(i, "whitespace in segment");
        out += c;
        ++i;
        continue;
      }
      out += c;
      ++i;
    }
    return out;
  }
};

struct Piece {
  std::string_view text;
  std::size_t offset;
};

// Cuts text at every unescaped occurrence of delim. The pieces between
// occurrences are returned with their offsets; a trailing occurrence
// yields a trailing empty piece.
std::vector<Piece> split_unescaped(std::string_view text,
                                   std::string_view delim,
                                   const CodecConfig& cfg) {
  std::vector<Piece> out;
  std::size_t start = 0;
  for (std::size_t cut : find_unescaped(text, delim, cfg)) {
    out.push_back({text.substr(start, cut - start), start});
    start = cut + delim.size();
  }
  out.push_back({text.substr(start), start});
  return out;
}

std::vector<Piece> split_on_char(std::string_view text, char sep) {
  std::vector<Piece> out;
  std::size_t start = 0;
  while (true) {
    std::size_t cut = text.find(sep, start);
    if (cut == std::string_view::npos) break;
    out.push_back({text.substr(start, cut - start), start});
    start = cut + 1;
  }
  out.push_back({text.substr(start), start});
  return out;
}

std::string decode_config_value(const std::string& raw, std::size_t line) {
  std::string out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '\\') {
      out += raw[i];
      continue;
    }
    if (i + 1 >= raw.size())
      throw ParseError(line, "dangling backslash in config value");
    char c = raw[++i];
    if (c == 'n') out += '\n';
    else if (c == 't') out += '\t';
    else if (c == '\\') out += '\\';
    else throw ParseError(line, std::string("unknown escape \\") + c +
                                    " in config value");
  }
  return out;
}

}  // namespace

void CodecConfig::validate() const {
  auto check_delim = [](const std::string& d, const char* name) {
    if (d.empty())
      throw ConfigError(std::string(name) + " must be non-empty");
    if (has_ascii_space(d))
      throw ConfigError(std::string(name) + " may not contain whitespace");
  };
  check_delim(morph_delim, "morph_delim");
  check_delim(tag_delim, "tag_delim");
  if (morph_delim == tag_delim)
    throw ConfigError("morph_delim and tag_delim must differ");
  if (morph_delim.find(tag_delim) != std::string::npos ||
      tag_delim.find(morph_delim) != std::string::npos)
    throw ConfigError("morph_delim and tag_delim may not contain each other");
  if (entity_sep.empty()) throw ConfigError("entity_sep must be non-empty");
  if (std::all_of(entity_sep.begin(), entity_sep.end(), is_ascii_space))
    throw ConfigError("entity_sep needs at least one non-whitespace "
                      "character");
  if (entity_sep == morph_delim || entity_sep == tag_delim)
    throw ConfigError("entity_sep must differ from the other delimiters");
  if (entity_sep.find(tag_delim) != std::string::npos ||
      tag_delim.find(entity_sep) != std::string::npos)
    throw ConfigError("entity_sep and tag_delim may not contain each other");
  if (empty_entities_token.empty())
    throw ConfigError("empty_entities_token must be non-empty");
  if (qa_joiner.empty()) throw ConfigError("qa_joiner must be non-empty");
  if (is_ascii_space(escape_char))
    throw ConfigError("escape_char may not be whitespace");
  std::string r = reserved_chars();
  if (r.find(escape_char) != std::string::npos)
    throw ConfigError("escape_char may not appear in a delimiter");
  const std::string* sentinels[] = {&sentiment_positive, &sentiment_negative,
                                    &sentiment_neutral};
  for (const std::string* s : sentinels) {
    if (s->empty()) throw ConfigError("sentiment sentinels must be non-empty");
    if (trim_ascii(*s) != *s)
      throw ConfigError("sentiment sentinels may not have surrounding "
                        "whitespace");
  }
  if (sentiment_positive == sentiment_negative ||
      sentiment_positive == sentiment_neutral ||
      sentiment_negative == sentiment_neutral)
    throw ConfigError("sentiment sentinels must be pairwise distinct");
}

std::string CodecConfig::reserved_chars() const {
  std::string out;
  for (const std::string* d : {&morph_delim, &tag_delim, &entity_sep}) {
    for (char c : *d) {
      if (is_ascii_space(c)) continue;
      if (out.find(c) == std::string::npos) out += c;
    }
  }
  return out;
}

std::string CodecConfig::sentinel(SentimentLabel label) const {
  switch (label) {
    case SentimentLabel::positive: return sentiment_positive;
    case SentimentLabel::negative: return sentiment_negative;
    case SentimentLabel::neutral: return sentiment_neutral;
  }
  return sentiment_neutral;
}

std::optional<SentimentLabel> CodecConfig::label_of_sentinel(
    std::string_view text) const {
  if (text == sentiment_positive) return SentimentLabel::positive;
  if (text == sentiment_negative) return SentimentLabel::negative;
  if (text == sentiment_neutral) return SentimentLabel::neutral;
  return std::nullopt;
}

std::string CodecConfig::fingerprint() const {
  std::string canon;
  auto put = [&](const char* key, std::string_view value) {
    canon += key;
    canon += '=';
    canon += value;
    canon += '\x1e';
  };
  put("morph_delim", morph_delim);
  put("tag_delim", tag_delim);
  put("entity_sep", entity_sep);
  put("empty_entities_token", empty_entities_token);
  put("sentiment_positive", sentiment_positive);
  put("sentiment_negative", sentiment_negative);
  put("sentiment_neutral", sentiment_neutral);
  put("qa_joiner", qa_joiner);
  put("escape_char", std::string(1, escape_char));
  return to_hex(fnv1a64(canon));
}

std::string escape(std::string_view text, const CodecConfig& cfg) {
  std::string reserved = cfg.reserved_chars();
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == cfg.escape_char || reserved.find(c) != std::string::npos)
      out += cfg.escape_char;
    out += c;
  }
  return out;
}

std::string unescape(std::string_view text, const CodecConfig& cfg) {
  PieceDecoder dec{cfg, cfg.reserved_chars()};
  return dec.decode(text, 0, WsPolicy::any, Strictness::strict, nullptr);
}

std::vector<std::size_t> find_unescaped(std::string_view text,
                                        std::string_view delim,
                                        const CodecConfig& cfg) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == cfg.escape_char) {
      i += 2;  // skip the pair; a dangling escape is the decoder's problem
      continue;
    }
    if (text.compare(i, delim.size(), delim) == 0) {
      out.push_back(i);
      i += delim.size();
      continue;
    }
    ++i;
  }
  return out;
}

std::string linearize_morph(const Sentence& s, MorphMode mode,
                            const CodecConfig& cfg) {
  std::string out;
  for (std::size_t w = 0; w < s.words.size(); ++w) {
    if (w) out += ' ';
    const Word& word = s.words[w];
    for (std::size_t m = 0; m < word.morphemes.size(); ++m) {
      if (m) out += cfg.morph_delim;
      const Morpheme& morph = word.morphemes[m];
      out += escape(morph.form, cfg);
      if (mode == MorphMode::TAG) {
        out += cfg.tag_delim;
        out += escape(morph.tag, cfg);
      } else if (mode == MorphMode::LEMMA) {
        out += cfg.tag_delim;
        out += escape(morph.lemma, cfg);
      }
    }
  }
  return out;
}

MorphAnalysis parse_morph(std::string_view text, MorphMode mode,
                          const CodecConfig& cfg, Strictness strictness) {
  MorphAnalysis result;
  PieceDecoder dec{cfg, cfg.reserved_chars()};
  auto defect = [&](std::size_t off, const char* kind, std::string_view ctx) {
    if (strictness == Strictness::strict) throw CodecError(off, kind);
    result.notes.push_back({kind, off, std::string(ctx)});
  };

  if (text.empty()) {
    defect(0, "empty output", text);
    return result;
  }
  for (const Piece& word : split_on_char(text, ' ')) {
    if (word.text.empty()) {
      defect(word.offset, "empty word", "");
      continue;
    }
    std::vector<MorphUnit> group;
    for (const Piece& seg : split_unescaped(word.text, cfg.morph_delim, cfg)) {
      std::size_t base = word.offset + seg.offset;
      if (seg.text.empty()) {
        defect(base, "empty segment", "");
        continue;
      }
      if (mode == MorphMode::SEG) {
        std::string form = dec.decode(seg.text, base, WsPolicy::none,
                                      strictness, &result.notes);
        if (form.empty()) {
          defect(base, "empty form", seg.text);
          continue;
        }
        group.push_back({std::move(form), ""});
        continue;
      }
      auto tpos = find_unescaped(seg.text, cfg.tag_delim, cfg);
      std::string_view form_part = seg.text;
      std::string label;
      if (tpos.empty()) {
        label = kUnkLabel;
        defect(base, "missing tag delimiter", seg.text);
      } else {
        form_part = seg.text.substr(0, tpos.front());
        std::string_view label_part =
            seg.text.substr(tpos.front() + cfg.tag_delim.size());
        std::size_t label_base = base + tpos.front() + cfg.tag_delim.size();
        if (label_part.empty()) {
          label = kUnkLabel;
          defect(base + tpos.front(), "dangling tag delimiter", seg.text);
        } else {
          label = dec.decode(label_part, label_base, WsPolicy::none,
                             strictness, &result.notes);
        }
      }
      if (form_part.empty()) {
        defect(base, "empty form", seg.text);
        continue;
      }
      std::string form = dec.decode(form_part, base, WsPolicy::none,
                                    strictness, &result.notes);
      if (form.empty()) {
        defect(base, "empty form", seg.text);
        continue;
      }
      group.push_back({std::move(form), std::move(label)});
    }
    // A word whose every segment was defective still holds its position.
    result.words.push_back(std::move(group));
  }
  return result;
}

std::string linearize_ner(const std::vector<Entity>& entities,
                          const CodecConfig& cfg) {
  if (entities.empty()) return cfg.empty_entities_token;
  std::string out;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (i) out += cfg.entity_sep;
    out += escape(entities[i].surface, cfg);
    out += cfg.tag_delim;
    out += escape(entities[i].etype, cfg);
  }
  return out;
}

NerParse parse_ner(std::string_view text, const CodecConfig& cfg,
                   Strictness strictness) {
  NerParse result;
  if (text == cfg.empty_entities_token) return result;
  if (text.empty() && strictness == Strictness::lenient) return result;
  PieceDecoder dec{cfg, cfg.reserved_chars()};
  auto defect = [&](std::size_t off, const char* kind, std::string_view ctx) {
    if (strictness == Strictness::strict) throw CodecError(off, kind);
    result.notes.push_back({kind, off, std::string(ctx)});
  };

  for (const Piece& chunk : split_unescaped(text, cfg.entity_sep, cfg)) {
    if (chunk.text.empty()) {
      defect(chunk.offset, "empty chunk", "");
      continue;
    }
    auto tpos = find_unescaped(chunk.text, cfg.tag_delim, cfg);
    if (tpos.empty()) {
      defect(chunk.offset, "missing tag delimiter", chunk.text);
      continue;
    }
    std::size_t cut = tpos.back();
    std::string_view surface_part = chunk.text.substr(0, cut);
    std::string_view label_part =
        chunk.text.substr(cut + cfg.tag_delim.size());
    if (surface_part.empty()) {
      defect(chunk.offset, "empty entity surface", chunk.text);
      continue;
    }
    if (label_part.empty()) {
      defect(chunk.offset + cut, "dangling tag delimiter", chunk.text);
      continue;
    }
    std::string surface = dec.decode(surface_part, chunk.offset,
                                     WsPolicy::space_only, strictness,
                                     &result.notes);
    std::string etype =
        dec.decode(label_part, chunk.offset + cut + cfg.tag_delim.size(),
                   WsPolicy::none, strictness, &result.notes);
    if (surface.empty() || etype.empty()) {
      defect(chunk.offset, "empty entity surface", chunk.text);
      continue;
    }
    result.entities.push_back({std::move(surface), std::move(etype)});
  }
  return result;
}

PairRecord linearize_qa(const QAExample& ex, const CodecConfig& cfg) {
  if (ex.answers.empty())
    throw DataError("qa example '" + ex.id + "' has no answers");
  PairRecord rec;
  rec.id = ex.id;
  rec.input = ex.context + cfg.qa_joiner + ex.question;
  rec.target = ex.answers.front();
  rec.task = Task::QA;
  return rec;
}

PairRecord linearize_sentiment(const SentimentExample& ex,
                               const CodecConfig& cfg) {
  PairRecord rec;
  rec.id = ex.id;
  rec.input = ex.text;
  rec.target = cfg.sentinel(ex.label);
  rec.task = Task::SENTIMENT;
  return rec;
}

SentimentParse parse_sentiment(std::string_view text, const CodecConfig& cfg,
                               Strictness strictness) {
  SentimentParse result;
  std::string_view trimmed = trim_ascii(text);
  result.label = cfg.label_of_sentinel(trimmed);
  if (!result.label) {
    if (strictness == Strictness::strict)
      throw CodecError(0, "unknown sentiment sentinel");
    result.notes.push_back(
        {"unknown sentiment sentinel", 0, std::string(text)});
  }
  return result;
}

CodecConfig load_codec_config(const std::string& text) {
  CodecConfig cfg;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& key = it.key();
      if (!it.value().is_string())
        throw ConfigError("config key '" + key + "' must be a string");
      std::string value = it.value().get<std::string>();
      if (key == "morph_delim") cfg.morph_delim = value;
      else if (key == "tag_delim") cfg.tag_delim = value;
      else if (key == "entity_sep") cfg.entity_sep = value;
      else if (key == "empty_entities_token") cfg.empty_entities_token = value;
      else if (key == "sentiment_positive") cfg.sentiment_positive = value;
      else if (key == "sentiment_negative") cfg.sentiment_negative = value;
      else if (key == "sentiment_neutral") cfg.sentiment_neutral = value;
      else if (key == "qa_joiner") cfg.qa_joiner = value;
      else if (key == "escape_char") {
        if (value.size() != 1)
          throw ConfigError("escape_char must be a single character");
        cfg.escape_char = value[0];
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } else {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string_view stripped = trim_ascii(line);
      if (stripped.empty() || stripped.front() == '#') {
        if (pos > text.size()) break;
        continue;
      }
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ParseError(line_no, "expected key=value");
      std::string key(trim_ascii(line.substr(0, eq)));
      std::string value = decode_config_value(line.substr(eq + 1), line_no);
      if (key == "morph_delim") cfg.morph_delim = value;
      else if (key == "tag_delim") cfg.tag_delim = value;
      else if (key == "entity_sep") cfg.entity_sep = value;
      else if (key == "empty_entities_token") cfg.empty_entities_token = value;
      else if (key == "sentiment_positive") cfg.sentiment_positive = value;
      else if (key == "sentiment_negative") cfg.sentiment_negative = value;
      else if (key == "sentiment_neutral") cfg.sentiment_neutral = value;
      else if (key == "qa_joiner") cfg.qa_joiner = value;
      else if (key == "escape_char") {
        if (value.size() != 1)
          throw ConfigError("escape_char must be a single character");
        cfg.escape_char = value[0];
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
      if (pos > text.size()) break;
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace mrlcast
