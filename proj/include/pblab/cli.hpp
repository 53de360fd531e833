#ifndef PBLAB_CLI_HPP
#define PBLAB_CLI_HPP

// pullback_lab front end. Exit codes: 0 ok, 1 runtime failure, 2 usage or
// configuration error, 3 hypothesis violation or delay too strong, 4 a
// monitored inequality failed.

#include <iosfwd>

namespace pblab::cli {

enum ExitCode { ok = 0, failure = 1, usage = 2, hypothesis = 3, bound = 4 };

int run(int argc, const char* const* argv);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pblab::cli

#endif  // PBLAB_CLI_HPP
