// One PASS/FAIL line per acceptance criterion.
//   llx_acceptance [CORPUS_DIR] [criterion ids...]

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "acceptance.hpp"

#ifndef LLX_CORPUS_DIR
#define LLX_CORPUS_DIR "corpus"
#endif

int main(int argc, char** argv) {
  std::string dir = LLX_CORPUS_DIR;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (!a.empty() && a.find_first_not_of("0123456789") == std::string::npos)
      only.push_back(std::atoi(a.c_str()));
    else
      dir = a;
  }
  int failed = 0;
  llx::acceptance::run(dir, only, [&](const llx::acceptance::Outcome& o) {
    std::cout << llx::acceptance::format(o) << std::endl;
    failed += !o.pass;
  });
  std::cout << (failed ? "FAILED " + std::to_string(failed) : std::string("ALL PASSED")) << std::endl;
  return failed ? 1 : 0;
}
