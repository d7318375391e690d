#pragma once

#include <string>

#include "mrlcast/core.hpp"

namespace mrlcast {

// One serialized training/eval pair. The task is carried in memory only;
// pair files are homogeneous and store just id, input and target.
struct PairRecord {
  std::string id;
  std::string input;
  std::string target;
  Task task;

  bool operator==(const PairRecord&) const = default;
};

}  // namespace mrlcast
