#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lmfd::cli {

/// Exit codes: 0 success, 1 usage/I-O/parse failure, 2 too few sensors left
/// after threshold filtering.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitEmptyResult = 2;

/// Entry point of the `lmfd` tool. Subcommands: discover, synth, grammar,
/// eval, rank. Never throws; every error is reported on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmfd::cli
