#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "orbitlab/shifts.hpp"
#include "orbitlab/symbols.hpp"
#include "orbitlab/toeplitz_ops.hpp"
#include "orbitlab/whc_construct.hpp"

namespace orbitlab::cli {

using json = nlohmann::json;

inline constexpr const char* schema_version = "1";
inline constexpr const char* tool_version = "0.1.0";

/// Exit codes: every record pass/evidence, a failed check or hypothesis, numerical failure, bad input.
enum ExitCode : int { ok = 0, hypothesis = 1, numerical = 2, usage = 3 };

using SymbolSpec = std::variant<SymbolSeries, Tridiag>;

/// "poly:c0,c1,..." | "tridiag:a,b,c" | "const:c" | "outer-from:<path>" | "builtin:<name>".
SymbolSpec parse_symbol(const std::string& text);
SymbolSeries parse_series(const std::string& text);

/// "kernel:w" | "e:j" | "random" | "random:d" | "csv:<path>", as a vector of length N.
ComplexVector parse_vector(const std::string& text, std::size_t N, std::uint64_t seed);

/// "cs" | "const:v" | "csv:<path>".
WeightSequence parse_weights(const std::string& text, long W, double p);

/// "log" = 1 + log(1+x) | "sqrt" = 1 + sqrt(x) | "pow:a" = (1+x)^a.
RateFn parse_rate(const std::string& text);

enum class ParamType { integer, real, text, list };

struct ParamSpec {
    std::string key;
    ParamType type;
    json fallback;  // null means required
    std::string help;
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<ParamSpec> params;
};

const std::vector<CommandSpec>& commands();
const CommandSpec& command(const std::string& name);

/// Descriptive anchor for every record name.
const std::string& anchor(const std::string& record);

struct JobSpec {
    std::string name;
    std::string command;
    json params = json::object();
    std::uint64_t seed = 0;
    std::optional<double> tol;
};

/// Fills defaults and checks every parameter against the command schema; unknown keys are rejected.
json validate(const JobSpec& job);

JobSpec job_from_json(const json& j);
/// A bare array of jobs or an object with a "jobs" array.
std::vector<JobSpec> load_job_file(const std::string& path);

struct JobResult {
    json report;
    int exit_code = ok;
};

JobResult run_job(const JobSpec& job, bool canonical);
/// Independent jobs on a pool of workers; results keep the input order.
std::vector<JobResult> run_jobs(const std::vector<JobSpec>& jobs, unsigned workers, bool canonical);
/// Single report document for a batch.
json merge_reports(const std::vector<JobResult>& results);
int merged_exit_code(const std::vector<JobResult>& results);

std::string render(const json& report);

}  // namespace orbitlab::cli
