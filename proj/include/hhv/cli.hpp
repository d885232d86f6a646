#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hhv::cli {

enum class Command { check, chain, search, report };
enum class OutputFormat { json, csv, human };

// Exit codes of `hhv`.
inline constexpr int exit_holds = 0;
inline constexpr int exit_violation = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numeric = 3;

struct RunConfig {
    Command command = Command::check;
    std::string check_class = "convex";
    std::string chain_id = "classic-hh";
    std::string f_text;
    std::string g_text;
    std::string phi_text = "x";
    double a = 0.0;
    double b = 1.0;
    std::size_t grid_x = 33;
    std::size_t grid_t = 17;
    std::size_t samples = 4096;
    std::uint64_t seed = 0;
    double quad_tol = 1e-10;
    std::optional<double> tolerance;  // defaults: 1e-9 for checks, 1e-8 for chains
    std::size_t budget = 100;
    std::size_t pairs = 16;
    std::string target = "log-convex";
    std::string family = "exp-of-poly";
    int degree = 1;
    double coeff_lo = -1.0;
    double coeff_hi = 1.0;
    std::string phi_family = "identity";
    int phi_degree = 2;
    OutputFormat format = OutputFormat::json;
    bool diagnostics = false;

    void validate() const;
};

/// Parses argv-style arguments (program name excluded), runs the command and
/// writes the report. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

const char* tool_version() noexcept;

}  // namespace hhv::cli
