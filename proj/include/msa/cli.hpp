#pragma once

// Single entry point behind the msa binary.  Exit codes: 0 success or
// positive verdict, 1 negative verdict, 2 usage or input error, 3 budget
// exceeded.

#include <iosfwd>
#include <string>
#include <vector>

namespace msa::cli {

enum ExitCode { Ok = 0, Negative = 1, Usage = 2, Budget = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct Captured {
  int code = 0;
  std::string out;
  std::string err;
};

// argv without the program name.
Captured run_captured(const std::vector<std::string>& args);

}  // namespace msa::cli
