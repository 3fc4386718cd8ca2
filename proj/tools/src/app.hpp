#ifndef TAKIFF_TOOLS_APP_HPP
#define TAKIFF_TOOLS_APP_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "takiff/dynamics.hpp"
#include "takiff/lie_data.hpp"
#include "takiff/phase.hpp"

namespace takiff::app
{

enum ExitCode : int
{
    ok = 0,
    internal_error = 1,
    config_error = 2,
    blowup = 3,
    solver_unavailable = 4,
    verify_failed = 5,
};

/// Invalid or inconsistent configuration; maps to exit 2.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Chart
{
    generic,
    sl2_rescaled,
};

enum class SolverKind
{
    factorized,
    jet,
    soliton,
};

struct SolverConfig
{
    SolverKind kind = SolverKind::jet;
    /// Explicit sample times; empty means the integrator grid 0, dt, ..., T.
    std::vector<double> times;
    /// Soliton parameters: kappa(v) directly, or from x_{0n}, x_{1n}.
    std::optional<std::vector<double>> kappa;
    std::optional<std::vector<double>> x0;
    std::optional<std::vector<double>> x1;
    int sign = 1;
};

struct RunConfig
{
    std::string algebra;
    RootData root_data;
    int order = 0;
    Chart chart = Chart::generic;
    /// Initial state in the generic chart.
    PhaseState initial;
    Scheme scheme = Scheme::rk4;
    double dt = 1e-3;
    double horizon = 1.0;
    std::optional<std::filesystem::path> trajectory_csv;
    std::optional<std::filesystem::path> diagnostics_json;
    std::optional<std::filesystem::path> report_json;
    std::vector<std::string> verify;
    std::uint64_t seed = 20240917;
    int verify_samples = 20;
    std::optional<SolverConfig> solver;
};

/// Builds a RunConfig from parsed JSON. Throws ConfigError.
RunConfig parse_config(const nlohmann::json &j);
/// Reads and parses a JSON file. Throws ConfigError.
RunConfig load_config(const std::filesystem::path &path);

/// Checks run by `verify`, in report order.
const std::vector<std::string> &verify_check_names();

/// Each command writes to the configured paths (stdout when unset) and
/// returns an ExitCode. Library exceptions are translated to exit codes.
int cmd_simulate(const RunConfig &cfg, std::ostream &out);
int cmd_solve(const RunConfig &cfg, std::ostream &out);
int cmd_verify(const RunConfig &cfg, std::ostream &out);

/// Fixed 17-significant-digit scientific notation ("%.16e").
std::string format_double(double x);

/// JSON serialization with every float printed by format_double.
std::string dump_json(const nlohmann::json &j, int indent = 2);

} // namespace takiff::app

#endif
