#include "mrlcast/grammar.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>

namespace mrlcast {

namespace {

bool is_ascii_ws_byte(unsigned char c) {
  return c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

constexpr int kClassContent = 0;
constexpr int kClassSpace = 1;
constexpr int kClassWs = 2;

// Maps bytes to character classes. Bytes that take part in delimiters,
// escapes or literal tokens get singleton classes; the rest fall into
// content, space or whitespace.
struct ClassRegistry {
  std::array<std::int16_t, 256> of;
  std::vector<std::string> names;

  ClassRegistry() {
    of.fill(kClassContent);
    names = {"content", "space", "whitespace"};
    of[static_cast<unsigned char>(' ')] = kClassSpace;
    for (int c = 0; c < 256; ++c)
      if (is_ascii_ws_byte(static_cast<unsigned char>(c)))
        of[c] = kClassWs;
  }

  int add(char ch) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (of[c] != kClassContent && of[c] != kClassWs) {
      // Space keeps its shared class; other repeats reuse their singleton.
      return of[c];
    }
    int id = static_cast<int>(names.size());
    if (id >= 64)
      throw ConfigError("too many distinct grammar characters");
    std::string name;
    if (c >= 0x21 && c < 0x7f) {
      name = "'";
      name += ch;
      name += "'";
    } else if (c == '\t') {
      name = "'\\t'";
    } else if (c == '\n') {
      name = "'\\n'";
    } else if (c == '\r') {
      name = "'\\r'";
    } else {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "0x%02x", c);
      name = buf;
    }
    names.push_back(name);
    of[c] = static_cast<std::int16_t>(id);
    return id;
  }

  void add_all(std::string_view s) {
    for (char c : s) add(c);
  }

  int n() const { return static_cast<int>(names.size()); }
};

// Tiny regular-expression layer over class masks; compiled via Thompson
// construction and determinized by subset construction.
struct Re {
  enum Kind { kEps, kClass, kCat, kAlt, kStar } kind;
  std::uint64_t mask = 0;
  std::shared_ptr<Re> a, b;
};
using ReP = std::shared_ptr<Re>;

ReP re_eps() { return std::make_shared<Re>(Re{Re::kEps}); }
ReP re_class(std::uint64_t mask) {
  auto r = std::make_shared<Re>(Re{Re::kClass});
  r->mask = mask;
  return r;
}
ReP re_cat(ReP a, ReP b) {
  auto r = std::make_shared<Re>(Re{Re::kCat});
  r->a = std::move(a);
  r->b = std::move(b);
  return r;
}
ReP re_alt(ReP a, ReP b) {
  auto r = std::make_shared<Re>(Re{Re::kAlt});
  r->a = std::move(a);
  r->b = std::move(b);
  return r;
}
ReP re_star(ReP a) {
  auto r = std::make_shared<Re>(Re{Re::kStar});
  r->a = std::move(a);
  return r;
}
ReP re_plus(ReP a) { return re_cat(a, re_star(a)); }

ReP re_lit(std::string_view s, const ClassRegistry& reg) {
  ReP out = re_eps();
  bool first = true;
  for (char c : s) {
    ReP cls = re_class(1ull << reg.of[static_cast<unsigned char>(c)]);
    out = first ? cls : re_cat(std::move(out), std::move(cls));
    first = false;
  }
  return out;
}

struct Nfa {
  struct State {
    std::vector<std::pair<std::uint64_t, int>> edges;
    std::vector<int> eps;
  };
  std::vector<State> states;

  int add() {
    states.emplace_back();
    return static_cast<int>(states.size()) - 1;
  }
};

struct Frag {
  int start, accept;
};

Frag build_nfa(const ReP& re, Nfa& nfa) {
  switch (re->kind) {
    case Re::kEps: {
      int s = nfa.add(), a = nfa.add();
      nfa.states[s].eps.push_back(a);
      return {s, a};
    }
    case Re::kClass: {
      int s = nfa.add(), a = nfa.add();
      nfa.states[s].edges.push_back({re->mask, a});
      return {s, a};
    }
    case Re::kCat: {
      Frag fa = build_nfa(re->a, nfa);
      Frag fb = build_nfa(re->b, nfa);
      nfa.states[fa.accept].eps.push_back(fb.start);
      return {fa.start, fb.accept};
    }
    case Re::kAlt: {
      Frag fa = build_nfa(re->a, nfa);
      Frag fb = build_nfa(re->b, nfa);
      int s = nfa.add(), a = nfa.add();
      nfa.states[s].eps.push_back(fa.start);
      nfa.states[s].eps.push_back(fb.start);
      nfa.states[fa.accept].eps.push_back(a);
      nfa.states[fb.accept].eps.push_back(a);
      return {s, a};
    }
    case Re::kStar: {
      Frag fa = build_nfa(re->a, nfa);
      int s = nfa.add(), a = nfa.add();
      nfa.states[s].eps.push_back(fa.start);
      nfa.states[s].eps.push_back(a);
      nfa.states[fa.accept].eps.push_back(fa.start);
      nfa.states[fa.accept].eps.push_back(a);
      return {s, a};
    }
  }
  throw std::logic_error("unreachable regex kind");
}

std::vector<int> closure(const Nfa& nfa, std::vector<int> set) {
  std::vector<int> stack = set;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int t : nfa.states[s].eps) {
      if (std::find(set.begin(), set.end(), t) == set.end()) {
        set.push_back(t);
        stack.push_back(t);
      }
    }
  }
  std::sort(set.begin(), set.end());
  return set;
}

}  // namespace

OutputGrammar::OutputGrammar(Task task, CodecConfig cfg)
    : task_(task), cfg_(std::move(cfg)) {}

OutputGrammar OutputGrammar::build(Task task, const CodecConfig& cfg) {
  cfg.validate();
  if (task == Task::QA)
    throw ConfigError("qa targets are free text and have no output grammar");

  OutputGrammar g(task, cfg);
  ClassRegistry reg;

  bool morph = task == Task::SEG || task == Task::TAG || task == Task::LEMMA;
  std::string reserved = cfg.reserved_chars();

  std::uint64_t escapable = 0;
  if (morph || task == Task::NER) {
    int esc = reg.add(cfg.escape_char);
    escapable |= 1ull << esc;
    for (char c : reserved) escapable |= 1ull << reg.add(c);
  }
  if (task == Task::NER) reg.add_all(cfg.empty_entities_token);
  if (task == Task::SENTIMENT) {
    reg.add_all(cfg.sentiment_positive);
    reg.add_all(cfg.sentiment_negative);
    reg.add_all(cfg.sentiment_neutral);
  }

  int n = reg.n();
  std::uint64_t all = (n == 64) ? ~0ull : ((1ull << n) - 1);
  std::uint64_t sp = 1ull << kClassSpace;
  std::uint64_t ws = 1ull << kClassWs;
  std::uint64_t esc_cls =
      (morph || task == Task::NER)
          ? (1ull << reg.of[static_cast<unsigned char>(cfg.escape_char)])
          : 0;
  // Plain text bytes: everything except whitespace, the escape character
  // and reserved delimiter characters.
  std::uint64_t content = all & ~sp & ~ws & ~esc_cls & ~escapable;

  ReP root;
  if (morph) {
    ReP piece = re_plus(re_alt(re_class(content),
                               re_cat(re_class(esc_cls), re_class(escapable))));
    ReP seg;
    if (task == Task::SEG) {
      seg = piece;
    } else {
      seg = re_cat(re_cat(piece, re_lit(cfg.tag_delim, reg)), piece);
    }
    ReP word = re_cat(seg, re_star(re_cat(re_lit(cfg.morph_delim, reg), seg)));
    root = re_cat(word, re_star(re_cat(re_class(sp), word)));
  } else if (task == Task::NER) {
    ReP piece = re_plus(re_alt(re_class(content),
                               re_cat(re_class(esc_cls), re_class(escapable))));
    ReP surf = re_plus(re_alt(re_class(content | sp),
                              re_cat(re_class(esc_cls), re_class(escapable))));
    ReP ent = re_cat(re_cat(surf, re_lit(cfg.tag_delim, reg)), piece);
    ReP list =
        re_cat(ent, re_star(re_cat(re_lit(cfg.entity_sep, reg), ent)));
    root = re_alt(re_lit(cfg.empty_entities_token, reg), std::move(list));
  } else {  // SENTIMENT
    // Trimmable padding: every ASCII whitespace byte, including ones that
    // were pulled into singleton classes by a sentinel literal.
    std::uint64_t pad_mask = sp | ws;
    for (int c = 0; c < 256; ++c)
      if (is_ascii_ws_byte(static_cast<unsigned char>(c)))
        pad_mask |= 1ull << reg.of[c];
    ReP pad = re_star(re_class(pad_mask));
    ReP lits = re_alt(re_lit(cfg.sentiment_positive, reg),
                      re_alt(re_lit(cfg.sentiment_negative, reg),
                             re_lit(cfg.sentiment_neutral, reg)));
    root = re_cat(pad, re_cat(std::move(lits), re_star(re_class(pad_mask))));
  }

  Nfa nfa;
  Frag frag = build_nfa(root, nfa);

  // Subset construction. State 0 is the dead state.
  g.class_of_ = reg.of;
  g.class_names_ = reg.names;
  g.trans_.assign(1, std::vector<std::int32_t>(n, 0));
  g.accepting_.assign(1, false);

  std::map<std::vector<int>, std::int32_t> ids;
  std::vector<std::vector<int>> sets;
  auto intern = [&](std::vector<int> set) -> std::int32_t {
    if (set.empty()) return 0;
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    std::int32_t id = static_cast<std::int32_t>(g.trans_.size());
    ids.emplace(set, id);
    sets.push_back(set);
    g.trans_.emplace_back(n, 0);
    g.accepting_.push_back(std::find(set.begin(), set.end(), frag.accept) !=
                           set.end());
    return id;
  };

  std::int32_t start = intern(closure(nfa, {frag.start}));
  g.start_ = start;
  for (std::size_t done = 0; done < sets.size(); ++done) {
    std::vector<int> set = sets[done];
    std::int32_t from = ids.at(set);
    for (int c = 0; c < n; ++c) {
      std::vector<int> next;
      for (int s : set)
        for (const auto& [mask, to] : nfa.states[s].edges)
          if (mask & (1ull << c))
            if (std::find(next.begin(), next.end(), to) == next.end())
              next.push_back(to);
      if (next.empty()) continue;
      g.trans_[from][c] = intern(closure(nfa, std::move(next)));
    }
  }
  return g;
}

std::vector<std::string> OutputGrammar::live_classes(
    std::int32_t state) const {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < class_names_.size(); ++c)
    if (trans_[state][c] != 0) out.push_back(class_names_[c]);
  return out;
}

OutputGrammar::Verdict OutputGrammar::validate(std::string_view text) const {
  std::int32_t state = start_;
  for (std::size_t i = 0; i < text.size(); ++i) {
    std::int32_t next =
        trans_[state][class_of_[static_cast<unsigned char>(text[i])]];
    if (next == 0) {
      Verdict v{false, i, live_classes(state)};
      if (accepting_[state]) v.expected.push_back("EOS");
      return v;
    }
    state = next;
  }
  if (accepting_[state]) return {true, text.size(), {}};
  return {false, text.size(), live_classes(state)};
}

std::vector<std::string> OutputGrammar::allowed_next(
    std::string_view prefix) const {
  std::int32_t state = start_;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    std::int32_t next =
        trans_[state][class_of_[static_cast<unsigned char>(prefix[i])]];
    if (next == 0) throw CodecError(i, "not a viable prefix");
    state = next;
  }
  std::vector<std::string> out = live_classes(state);
  if (accepting_[state]) out.push_back("EOS");
  return out;
}

std::string OutputGrammar::default_target() const {
  switch (task_) {
    case Task::SEG:
      return escape(kUnkLabel, cfg_);
    case Task::TAG:
    case Task::LEMMA:
      return escape(kUnkLabel, cfg_) + cfg_.tag_delim + escape(kUnkLabel, cfg_);
    case Task::NER:
      return cfg_.empty_entities_token;
    case Task::SENTIMENT:
      return cfg_.sentiment_neutral;
    default:
      return "";
  }
}

namespace {

// Strips whitespace that survived lenient decoding so the re-rendered
// string is guaranteed to validate. NER surfaces keep single spaces.
std::string scrub(const std::string& s, bool keep_spaces) {
  std::string out;
  for (char c : s) {
    if (c == ' ' && keep_spaces) {
      out += c;
    } else if (!is_ascii_ws_byte(static_cast<unsigned char>(c)) && c != ' ') {
      out += c;
    } else if (keep_spaces) {
      out += ' ';
    }
  }
  return out;
}

}  // namespace

OutputGrammar::RepairResult OutputGrammar::repair(std::string_view text) const {
  if (validate(text).accepted) return {std::string(text), {}};

  RepairResult result;
  if (task_ == Task::SEG || task_ == Task::TAG || task_ == Task::LEMMA) {
    MorphMode mode = morph_mode_of(task_);
    MorphAnalysis parsed =
        parse_morph(text, mode, cfg_, Strictness::lenient);
    result.edits = parsed.notes;
    std::string out;
    bool any_word = false;
    for (const auto& group : parsed.words) {
      std::string word;
      bool any_unit = false;
      for (const MorphUnit& unit : group) {
        std::string form = scrub(unit.form, false);
        if (form.empty()) {
          result.edits.push_back({"segment dropped", 0, unit.form});
          continue;
        }
        if (any_unit) word += cfg_.morph_delim;
        word += escape(form, cfg_);
        if (mode != MorphMode::SEG) {
          std::string label = scrub(unit.label, false);
          if (label.empty()) label = kUnkLabel;
          word += cfg_.tag_delim;
          word += escape(label, cfg_);
        }
        any_unit = true;
      }
      if (!any_unit) {
        result.edits.push_back({"word dropped", 0, ""});
        continue;
      }
      if (any_word) out += ' ';
      out += word;
      any_word = true;
    }
    if (!any_word) {
      result.text = default_target();
      result.edits.push_back({"default target", 0, ""});
    } else {
      result.text = out;
    }
    return result;
  }

  if (task_ == Task::NER) {
    NerParse parsed = parse_ner(text, cfg_, Strictness::lenient);
    result.edits = parsed.notes;
    std::vector<Entity> kept;
    for (const Entity& e : parsed.entities) {
      std::string surface = scrub(e.surface, true);
      std::string etype = scrub(e.etype, false);
      if (surface.empty() || etype.empty()) {
        result.edits.push_back({"entity dropped", 0, e.surface});
        continue;
      }
      kept.push_back({std::move(surface), std::move(etype)});
    }
    result.text = linearize_ner(kept, cfg_);
    return result;
  }

  // SENTIMENT: anything that does not match a sentinel becomes the default.
  SentimentParse parsed = parse_sentiment(text, cfg_, Strictness::lenient);
  result.edits = parsed.notes;
  if (parsed.label) {
    result.text = cfg_.sentinel(*parsed.label);
  } else {
    result.text = default_target();
    result.edits.push_back({"default target", 0, ""});
  }
  return result;
}

}  // namespace mrlcast
