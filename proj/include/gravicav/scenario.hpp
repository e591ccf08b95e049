#ifndef GRAVICAV_SCENARIO_HPP
#define GRAVICAV_SCENARIO_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gravicav/analytic.hpp"
#include "gravicav/oracle.hpp"

// Scenario runner: parses a JSON configuration document, executes named
// experiments, writes CSV time series plus a JSON summary per scenario, and
// hosts the acceptance suite.
//
// Output contract: CSV data files are byte-identical across repeated runs
// (no timestamps, 17 significant digits, RFC-4180 quoting); wall time lives
// only in the JSON summary.

namespace gravicav::scenario {

enum class Kind { VacuumSqueezing, CoherentGw, SqueezedGw, ThermalCheck, OracleVerify, BchVerify };

/// Sample grid; interpreted as the accumulated Kerr phase F for
/// VacuumSqueezing and as time for every other kind.
struct TimeGrid {
    double start = 0.0;
    double end = 1.0;
    int samples = 2;
};

struct VacuumSqueezingParams {
    double alpha = 1.0;
    double damping = 1.0;
    double omega0 = 1.77e15;  // maps F back to a time column
    analytic::PhaseConvention convention = analytic::PhaseConvention::Corrected;
};

struct CoherentGwParams {
    double alpha = 1.0;
    double q = 0.02;
    double lambda = 5.0;
    double Omega = 1.0;
    int optical_dim = 24;
    int mode_dim = 64;
    analytic::CoherentVariant variant = analytic::CoherentVariant::ExactOverlap;
};

struct SqueezedGwParams {
    double alpha = 1.0;
    double q = 0.05;
    double xi0 = 1.0;
    double Omega = 1.0;
    int optical_dim = 24;
    int mode_dim = 48;
    analytic::SqueezedVariant variant = analytic::SqueezedVariant::ExactIdentity;
};

struct ThermalCheckParams {
    double Omega = 2.0 * M_PI * 10.0;  // rad/s
    double T = 1.0;                    // K
    double omega0 = 1.77e15;           // rad/s
    double epsilon_bound = 1e-40;
};

struct OracleVerifyParams {
    double alpha = 1.0;
    double q = 0.1;
    double Omega = 1.0;
    int optical_dim = 24;
    int mode_dim = 16;
    double tolerance = 1e-6;
};

struct BchVerifyParams {
    double q = 0.1;
    int optical_dim = 10;
    int mode_dim = 14;
    int pad = 12;
    double tolerance = 1e-7;
};

using ScenarioParams = std::variant<VacuumSqueezingParams, CoherentGwParams, SqueezedGwParams,
                                    ThermalCheckParams, OracleVerifyParams, BchVerifyParams>;

struct Scenario {
    std::string name;
    Kind kind = Kind::VacuumSqueezing;
    TimeGrid grid;
    std::string output_prefix;  // empty: derived from the name
    ScenarioParams params;
};

/// Parses a configuration document: either {"scenarios": [...]} or a bare
/// array. Missing parameters take the documented defaults. Throws ParseError
/// for malformed JSON and ValidationError (naming the field) for violated
/// preconditions.
std::vector<Scenario> parse_config(const std::string& text);

struct RunOptions {
    std::string output_dir = ".";
    bool write_files = true;
    std::optional<long> budget;
    oracle::Frame frame = oracle::Frame::Rotating;
    std::optional<analytic::PhaseConvention> convention;
    bool printed_variant = false;  // report the printed-formula variant in the analytic column
};

enum class Status { Pass, Warn, Fail };

struct RunSummary {
    std::string name;
    Status status = Status::Pass;
    std::map<std::string, double> metrics;
    std::map<std::string, double> tolerances;
    double runtime_s = 0.0;
    std::string message;
};

const char* status_name(Status s);

/// Executes one scenario; writes {prefix}.csv and {prefix}.json under
/// options.output_dir when write_files is set.
RunSummary run(const Scenario& sc, const RunOptions& options = {});

/// The complete acceptance suite, one summary per criterion.
std::vector<RunSummary> acceptance(const RunOptions& options = {});

/// 0 when every summary passed, 1 otherwise.
int exit_code(const std::vector<RunSummary>& summaries);

/// RFC-4180 field quoting (quotes only when the field needs it).
std::string csv_quote(const std::string& field);

/// Shortest round-trippable decimal with 17 significant digits.
std::string format_number(double v);

std::string summary_to_json(const RunSummary& s);

}  // namespace gravicav::scenario

#endif
