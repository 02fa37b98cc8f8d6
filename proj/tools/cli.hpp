#pragma once

#include <iosfwd>

namespace mctail::cli {

// Parses argv, runs one subcommand, writes CSV (with header row) to `out`
// and diagnostics to `err`. Returns 0 on success, 2 on validation or parse
// failures, 3 when a `verify` check fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mctail::cli
