#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shiftcalc::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRefuted = 1;
inline constexpr int kDistinguished = 2;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;

/// Runs one command line (without the program name). The JSON report goes to
/// `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SHA-256 of a file's contents as lowercase hex.
std::string file_sha256(const std::string& path);

}  // namespace shiftcalc::cli
