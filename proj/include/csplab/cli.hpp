#pragma once

// Command front end. Reports are "key: value" lines.
//
// Exit codes: 0 completed, 1 UNSAT / NP-complete style outcome, 2 input
// error.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

namespace csplab::cli {

struct Flags {
    std::optional<std::pair<int, int>> kl;
    std::optional<std::string> mode;
    bool oracle = false;
    std::string identities = "siggers";
    int arity = 0;  // 0: take it from the identity system
};

struct Report {
    int exit_code = 0;
    std::string text;
};

inline constexpr int kExitDone = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInputError = 2;

/// Parses "K,L". Throws ParameterError.
std::pair<int, int> parse_kl(const std::string& text);

/// Runs one of classify, solve, freesets, afin, polysearch, consistency,
/// oracle on already loaded file contents. Library errors become exit code 2
/// with an "error:" line.
Report run(const std::string& command, const std::string& template_text,
           const std::optional<std::string>& instance_text, const Flags& flags);

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace csplab::cli
