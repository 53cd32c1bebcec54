#pragma once

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqavwc/coding.hpp"
#include "cqavwc/infoquant.hpp"
#include "cqavwc/lemmas.hpp"
#include "cqavwc/symmetrize.hpp"

namespace cqavwc::cli {

inline constexpr const char* kToolName = "cqavwc";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kResource = 3, kParse = 4 };

inline constexpr const char* kCsvHeader = "seed,t_seq,max_error,leakage_bits,covering_gap,rate_message,rate_total";

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e) noexcept;

/// Parses "0.03125" or "1/32".
double parse_fraction(const std::string& text);

nlohmann::json to_json(const SymmetrizabilityVerdict& v);
nlohmann::json to_json(const BoundReport& r, const CqavwcChannel& ch);
nlohmann::json to_json(const SecrecyExperimentReport& r, const CqavwcChannel& ch);
nlohmann::json to_json(const LemmaSweepReport& r);

/// One CSV row per state sequence, no header.
std::string csv_rows(const SecrecyExperimentReport& r, const CqavwcChannel& ch);

/// Full command-line entry point. The report goes to `out` (or --out), the
/// wall-clock line and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cqavwc::cli
