#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mrlcast/codec.hpp"
#include "mrlcast/core.hpp"

namespace mrlcast {

// A deterministic byte-level acceptor for the well-formed target strings of
// one task, derived from a CodecConfig. The alphabet is partitioned into
// character classes: one class per delimiter or literal byte, the escape
// character, space, other whitespace, and a catch-all content class.
//
// Grammars exist for seg, pos, lemma, ner and sentiment targets. QA targets
// are free text and have no grammar; build() rejects Task::QA.
//
// validate agrees exactly with strict decoding in the codec: a string is
// accepted here if and only if the strict parser decodes it without error.
// The two are implemented independently and fuzz-tested against each other.
class OutputGrammar {
 public:
  static OutputGrammar build(Task task, const CodecConfig& cfg);

  struct Verdict {
    bool accepted;
    std::size_t offset = 0;                  // first dead byte when rejected
    std::vector<std::string> expected;       // viable classes at that point
  };

  Verdict validate(std::string_view text) const;

  // Character classes that could legally follow prefix, plus "EOS" when the
  // prefix is already a complete target. Throws CodecError when the prefix
  // itself is not viable.
  std::vector<std::string> allowed_next(std::string_view prefix) const;

  struct RepairResult {
    std::string text;
    std::vector<ParseNote> edits;
  };

  // Canonicalizes a defective string: accepted input comes back unchanged
  // with no edits; anything else is decoded leniently and re-rendered, with
  // empty segments dropped, missing labels filled with UNK, and wholly
  // unrecoverable input replaced by the task's default target. The result
  // always validates, and repairing twice equals repairing once.
  RepairResult repair(std::string_view text) const;

  // The fixed fallback emitted when nothing survives lenient decoding.
  std::string default_target() const;

  Task task() const { return task_; }
  const CodecConfig& config() const { return cfg_; }
  std::size_t state_count() const { return trans_.size(); }

 private:
  OutputGrammar(Task task, CodecConfig cfg);

  Task task_;
  CodecConfig cfg_;
  std::array<std::int16_t, 256> class_of_;
  std::vector<std::string> class_names_;
  std::vector<std::vector<std::int32_t>> trans_;  // [state][class] -> state
  std::vector<bool> accepting_;
  std::int32_t start_ = 0;  // state 0 is the dead state

  std::vector<std::string> live_classes(std::int32_t state) const;
};

}  // namespace mrlcast
