#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace llx::acceptance {

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Runs criteria 1-11 against the corpus directory. `only` selects a subset
// (empty = all). Each outcome is reported as soon as it is known.
std::vector<Outcome> run(const std::string& corpus_dir, const std::vector<int>& only = {},
                         const std::function<void(const Outcome&)>& report = nullptr);

std::string format(const Outcome& o);  // "PASS  4 oracle equivalence: ... (12.3 s)"

}  // namespace llx::acceptance
