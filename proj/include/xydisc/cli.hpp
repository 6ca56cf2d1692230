#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "xydisc/lattice.hpp"

namespace xydisc {

enum class Command { criterion, lemma, dobrushin, gap, sample, compare, oracle, quasilocality };

std::string to_string(Command command);
Command parse_command(const std::string& name);

/// Raised for configurations that fail validation (exit status 2).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Resolved parameters of one invocation. List-valued fields span a sweep;
/// commands that run a single point take the sole element.
struct ExperimentConfig {
    Command command = Command::criterion;
    std::vector<int> d{2};
    std::vector<int> L{8};
    Boundary boundary = Boundary::periodic;
    std::vector<double> beta{1.0};
    std::vector<int> q{8};
    std::string offset = "default";  // north-centered, clock-aligned, default, or radians
    std::string model = "xy";        // sample: xy, clock, constrained
    std::string well = "east";       // sample, constrained model: starting well
    int sweeps = 10000;
    int burn_in = 1000;
    std::uint64_t seed = 1;
    std::vector<std::string> observables{"energy", "corr:1"};
    int atoms = 2;
    int restarts = 200;
    int m_per_arc = 16;
    int eta_grid = 64;
    int quad_points = 128;
    std::string base = "alternating";  // quasilocality: alternating or uniform
    std::vector<int> distances{1, 2, 3, 4, 5};
    std::string output;  // path prefix; <output>.csv and <output>.json
    int threads = 1;
};

void validate(const ExperimentConfig& config);

/// Partition selected by config.offset for the given q. "default" means
/// north-centered for the constrained model and quasilocality scans and
/// clock-aligned everywhere else.
ArcPartition resolve_partition(const ExperimentConfig& config, int q);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct RunReport {
    Table table;
    nlohmann::json summary;
    std::vector<std::string> warnings;
    std::size_t failed_points = 0;
};

/// Fixed float formatting used in every CSV cell (12 significant digits).
std::string format_number(double v);

/// Runs every point of a sweep. Points are deduplicated (with a warning),
/// executed independently, possibly concurrently, and merged in ascending
/// key order. A point that throws is recorded under summary["failed"].
struct SweepPoint {
    std::vector<double> key;
    std::vector<std::string> key_labels;
};

inline constexpr std::size_t kMaxSweepPoints = 10000;

RunReport sweep(std::vector<SweepPoint> points,
                const std::function<std::vector<std::vector<std::string>>(const SweepPoint&)>& run_point,
                std::vector<std::string> columns, int threads);

/// Dispatches to the owning module without touching the filesystem.
RunReport execute(const ExperimentConfig& config);

/// Resolved configuration as JSON, written into CSV headers and summaries.
nlohmann::json config_json(const ExperimentConfig& config);

/// CSV with a commented header carrying the resolved configuration.
void write_csv(std::ostream& out, const Table& table, const ExperimentConfig& config);

/// Output prefix: config.output, else $XYDISC_OUTPUT_DIR/<command>, else ./<command>.
std::string resolve_output(const ExperimentConfig& config);

/// Executes and writes <prefix>.csv and <prefix>.json. Returns the exit
/// status: 0 success, 2 validation error, 3 numeric failure.
int run(const ExperimentConfig& config, std::ostream& log);

/// Parses command-line flags (and an optional --config file, overridden by
/// flags) and runs. Returns the exit status.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xydisc
