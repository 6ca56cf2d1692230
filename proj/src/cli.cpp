#include "xydisc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "xydisc/criterion.hpp"
#include "xydisc/hamiltonian.hpp"
#include "xydisc/oracle.hpp"
#include "xydisc/sampler.hpp"

#ifndef XYDISC_VERSION
#define XYDISC_VERSION "0.0.0"
#endif

namespace xydisc {

namespace {

const std::map<std::string, Command> kCommands = {
    {"criterion", Command::criterion}, {"lemma", Command::lemma},     {"dobrushin", Command::dobrushin},
    {"gap", Command::gap},             {"sample", Command::sample},   {"compare", Command::compare},
    {"oracle", Command::oracle},       {"quasilocality", Command::quasilocality},
};

template <typename T>
void require_nonempty(const std::vector<T>& v, const char* name) {
    if (v.empty()) throw ValidationError(std::string("parameter list '") + name + "' is empty");
}

template <typename T>
const T& single(const std::vector<T>& v, const char* name) {
    require_nonempty(v, name);
    if (v.size() != 1) throw ValidationError(std::string("command takes a single value for '") + name + "'");
    return v.front();
}

std::string str(int v) { return std::to_string(v); }
std::string flag(bool v) { return v ? "1" : "0"; }

std::optional<int> correlation_displacement(const std::string& observable) {
    if (observable.rfind("corr:", 0) != 0) return std::nullopt;
    try {
        std::size_t used = 0;
        const int r = std::stoi(observable.substr(5), &used);
        if (used != observable.size() - 5) throw ValidationError("bad displacement");
        return r;
    } catch (const std::exception&) {
        throw ValidationError("malformed observable '" + observable + "' (expected corr:<r>)");
    }
}

DiscreteConfig quasilocality_labels(const ExperimentConfig& config, int L, int q) {
    std::vector<int> labels(L, 1);
    if (config.base == "alternating")
        for (int i = 0; i < L; ++i) labels[i] = i % 2 == 0 ? 1 : q / 2 + 1;
    return DiscreteConfig(q, std::move(labels));
}

std::vector<SweepPoint> product(const std::vector<std::vector<double>>& axes, const std::vector<std::string>& labels) {
    std::vector<SweepPoint> points{{{}, labels}};
    for (const auto& axis : axes) {
        std::vector<SweepPoint> next;
        for (const auto& p : points)
            for (double v : axis) {
                SweepPoint e = p;
                e.key.push_back(v);
                next.push_back(std::move(e));
            }
        points = std::move(next);
        if (points.size() > kMaxSweepPoints)
            throw ValidationError("sweep has more than " + std::to_string(kMaxSweepPoints) + " points");
    }
    return points;
}

template <typename T>
std::vector<double> as_doubles(const std::vector<T>& v) {
    return std::vector<double>(v.begin(), v.end());
}

RunReport run_criterion(const ExperimentConfig& c, bool numeric) {
    auto points = product({as_doubles(c.d), c.beta, as_doubles(c.q)}, {"d", "beta", "q"});
    const CbarSettings settings{c.eta_grid, c.quad_points};
    RunReport report = sweep(
        std::move(points),
        [&](const SweepPoint& p) {
            const int d = static_cast<int>(p.key[0]);
            const int q = static_cast<int>(p.key[2]);
            const CriterionReport r = numeric ? cbar_sum(d, p.key[1], q, settings) : criterion_report(d, p.key[1], q);
            return std::vector<std::vector<std::string>>{{str(r.d), format_number(r.beta), str(r.q),
                                                          format_number(r.analytic_bound), format_number(r.legacy_bound),
                                                          r.numeric_sum ? format_number(*r.numeric_sum) : "",
                                                          flag(r.certified)}};
        },
        {"d", "beta", "q", "analytic_bound", "legacy_bound", "numeric_sum", "certified"}, c.threads);

    nlohmann::json minimal = nlohmann::json::array();
    for (int d : c.d)
        for (double beta : c.beta)
            if (beta > 0.0) minimal.push_back({{"d", d}, {"beta", beta}, {"minimal_q", minimal_q(d, beta)}});
    report.summary["minimal_q"] = minimal;
    return report;
}

RunReport run_lemma(const ExperimentConfig& c) {
    const LemmaResult r = maximize_q(c.atoms, c.restarts, c.seed);
    RunReport report;
    report.table.columns = {"atom", "location", "weight"};
    for (std::size_t i = 0; i < r.best.locations.size(); ++i)
        report.table.rows.push_back({std::to_string(i), format_number(r.best.locations[i]), format_number(r.best.weights[i])});
    report.summary["best_value"] = r.value;
    report.summary["within_lemma_bound"] = r.value <= 1.0 + 1e-9;
    return report;
}

RunReport run_gap(const ExperimentConfig& c) {
    const BarrierScaling fit = barrier_scaling(c.q);
    RunReport report;
    report.table.columns = {"q", "well_energy", "barrier_energy", "barrier_height"};
    for (int q : fit.q) {
        const WellReport w = constrained_bond_extrema(q);
        report.table.rows.push_back({str(q), format_number(w.well_energy), format_number(w.barrier_energy),
                                     format_number(w.barrier_height)});
    }
    report.summary["slope"] = fit.slope;
    report.summary["intercept"] = fit.intercept;
    return report;
}

RunReport run_sample(const ExperimentConfig& c) {
    const Lattice lattice({single(c.d, "d"), single(c.L, "L"), c.boundary});
    const ModelParams params{single(c.beta, "beta"), single(c.q, "q")};
    params.validate();
    for (const auto& o : c.observables)
        if (auto r = correlation_displacement(o)) check_displacement(lattice, *r);

    const std::size_t n = lattice.site_count();
    std::vector<std::vector<double>> series(c.observables.size());
    std::optional<ArcPartition> partition;
    std::optional<DiscreteConfig> assigned;

    auto measure = [&](std::span<const double> a, double energy) {
        for (std::size_t k = 0; k < c.observables.size(); ++k) {
            const std::string& o = c.observables[k];
            double v = 0.0;
            if (o == "energy") {
                v = energy / static_cast<double>(n);
            } else if (o == "magnetization") {
                double mx = 0, my = 0;
                for (double t : a) {
                    mx += std::cos(t);
                    my += std::sin(t);
                }
                v = std::hypot(mx, my) / static_cast<double>(n);
            } else if (o == "m_ew") {
                v = east_west_order(ContinuousConfig(std::vector<double>(a.begin(), a.end())), *partition, *assigned);
            } else {
                v = correlation_value(lattice, a, *correlation_displacement(o));
            }
            series[k].push_back(v);
        }
    };

    RunReport report;
    if (c.model == "clock") {
        std::mt19937_64 init(c.seed);
        ClockChain chain(random_labels(n, params.q, init), c.seed);
        for (int s = 0; s < c.burn_in; ++s) heatbath_sweep_clock(chain, lattice, params);
        for (int s = 0; s < c.sweeps; ++s) {
            heatbath_sweep_clock(chain, lattice, params);
            measure(embed_clock(chain.config).angles(), clock_energy(lattice, chain.config, params));
        }
    } else {
        std::optional<XYChain> chain;
        double max_width = std::numbers::pi;
        double width = kDefaultProposalWidth;
        if (c.model == "constrained") {
            partition = resolve_partition(c, params.q);
            if (lattice.boundary() == Boundary::periodic && lattice.side() % 2 != 0)
                throw ValidationError("alternating labels need an even side on a periodic lattice");
            assigned = alternating_north_south(lattice, params.q);
            chain.emplace(well_configuration(*partition, *assigned, c.well == "east" ? 1 : -1), c.seed);
            max_width = partition->width();
            width = 0.5 * max_width;
        } else {
            std::mt19937_64 init(c.seed);
            chain.emplace(random_angles(n, init), c.seed);
        }
        auto step = [&](double w) {
            if (partition)
                constrained_sweep_xy(*chain, lattice, params, *partition, *assigned, w);
            else
                metropolis_sweep_xy(*chain, lattice, params, w);
        };
        width = tune_width(*chain, c.burn_in, width, max_width, step);
        const std::uint64_t accepted0 = chain->acceptance.accepted, proposed0 = chain->acceptance.proposed;
        for (int s = 0; s < c.sweeps; ++s) {
            step(width);
            measure(chain->config.angles(), xy_energy(lattice, chain->config, params));
        }
        report.summary["proposal_width"] = width;
        report.summary["acceptance_rate"] = static_cast<double>(chain->acceptance.accepted - accepted0) /
                                            static_cast<double>(chain->acceptance.proposed - proposed0);
    }

    report.table.columns = {"sweep"};
    for (const auto& o : c.observables) report.table.columns.push_back(o);
    for (int s = 0; s < c.sweeps; ++s) {
        std::vector<std::string> row{std::to_string(s)};
        for (const auto& v : series) row.push_back(format_number(v[s]));
        report.table.rows.push_back(std::move(row));
    }
    nlohmann::json obs = nlohmann::json::object();
    for (std::size_t k = 0; k < series.size(); ++k) {
        const ObservableSeries s = make_series(c.observables[k], series[k]);
        obs[c.observables[k]] = {{"mean", s.mean}, {"std_error", s.std_error}, {"batch_size", s.batch_size},
                                 {"batches", s.batch_means.size()}};
    }
    report.summary["observables"] = obs;
    return report;
}

RunReport run_compare(const ExperimentConfig& c) {
    auto points = product({as_doubles(c.d), as_doubles(c.L), c.beta, as_doubles(c.q)}, {"d", "L", "beta", "q"});
    return sweep(
        std::move(points),
        [&](const SweepPoint& p) {
            const Lattice lattice({static_cast<int>(p.key[0]), static_cast<int>(p.key[1]), c.boundary});
            const ModelParams params{p.key[2], static_cast<int>(p.key[3])};
            const RunSettings settings{c.burn_in, c.sweeps, c.seed, kDefaultBatches};
            const DiscretisationComparison r = compare_discretisations(params, lattice, settings);
            return std::vector<std::vector<std::string>>{
                {str(lattice.dimension()), str(lattice.side()), format_number(params.beta), str(params.q),
                 flag(r.certified), format_number(r.projected.mean), format_number(r.projected.std_error),
                 format_number(r.clock.mean), format_number(r.clock.std_error), format_number(r.difference.value),
                 format_number(r.difference.std_error)}};
        },
        {"d", "L", "beta", "q", "certified", "projected", "projected_se", "clock", "clock_se", "difference",
         "combined_se"},
        c.threads);
}

RunReport run_oracle(const ExperimentConfig& c) {
    auto points = product({as_doubles(c.L), c.beta, as_doubles(c.q)}, {"L", "beta", "q"});
    return sweep(
        std::move(points),
        [&](const SweepPoint& p) {
            const ExactComparison r = compare_exact(static_cast<int>(p.key[0]), static_cast<int>(p.key[2]), p.key[1],
                                                    c.m_per_arc, c.boundary);
            return std::vector<std::vector<std::string>>{{str(r.L), format_number(r.beta), str(r.q), str(c.m_per_arc),
                                                          format_number(r.type1), format_number(r.type2),
                                                          format_number(r.difference)}};
        },
        {"L", "beta", "q", "m_per_arc", "type1", "type2", "difference"}, c.threads);
}

RunReport run_quasilocality(const ExperimentConfig& c) {
    auto points = product({as_doubles(c.L), c.beta, as_doubles(c.q)}, {"L", "beta", "q"});
    return sweep(
        std::move(points),
        [&](const SweepPoint& p) {
            const int L = static_cast<int>(p.key[0]);
            const int q = static_cast<int>(p.key[2]);
            const auto scan = quasilocality_scan(resolve_partition(c, q), p.key[1], c.m_per_arc,
                                                 quasilocality_labels(c, L, q), c.distances);
            std::vector<std::vector<std::string>> rows;
            for (const auto& pt : scan)
                rows.push_back({str(L), format_number(p.key[1]), str(q), str(pt.distance), format_number(pt.total_variation)});
            return rows;
        },
        {"L", "beta", "q", "distance", "total_variation"}, c.threads);
}

}  // namespace

std::string to_string(Command command) {
    for (const auto& [name, c] : kCommands)
        if (c == command) return name;
    return "unknown";
}

Command parse_command(const std::string& name) {
    const auto it = kCommands.find(name);
    if (it == kCommands.end()) throw ValidationError("unknown command '" + name + "'");
    return it->second;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ArcPartition resolve_partition(const ExperimentConfig& config, int q) {
    const std::string& o = config.offset;
    if (o == "north-centered") return ArcPartition::north_centered(q);
    if (o == "clock-aligned") return ArcPartition::clock_aligned(q);
    if (o == "default") {
        const bool north = config.command == Command::quasilocality ||
                           (config.command == Command::sample && config.model == "constrained");
        return north ? ArcPartition::north_centered(q) : ArcPartition::clock_aligned(q);
    }
    try {
        std::size_t used = 0;
        const double value = std::stod(o, &used);
        if (used != o.size()) throw ValidationError("trailing characters");
        return ArcPartition(q, value);
    } catch (const std::exception&) {
        throw ValidationError("offset must be north-centered, clock-aligned, default or a number of radians, got '" + o + "'");
    }
}

void validate(const ExperimentConfig& c) {
    require_nonempty(c.d, "d");
    require_nonempty(c.L, "L");
    require_nonempty(c.beta, "beta");
    require_nonempty(c.q, "q");
    for (int d : c.d)
        if (d < 1 || d > 8) throw ValidationError("d must lie in [1, 8]");
    for (int L : c.L)
        if (L < 1) throw ValidationError("L must be >= 1");
    for (double b : c.beta)
        if (!(b >= 0.0) || !std::isfinite(b)) throw ValidationError("beta must be finite and >= 0");
    for (int q : c.q)
        if (q < 2) throw ValidationError("q must be >= 2");
    if (c.threads < 1) throw ValidationError("threads must be >= 1");
    (void)resolve_partition(c, c.q.front());

    switch (c.command) {
    case Command::criterion:
        break;
    case Command::dobrushin:
        if (c.eta_grid < 8) throw ValidationError("eta_grid must be >= 8");
        if (c.quad_points < 16) throw ValidationError("quad_points must be >= 16");
        break;
    case Command::lemma:
        if (c.atoms < 2) throw ValidationError("atoms must be >= 2");
        if (c.restarts < 1) throw ValidationError("restarts must be >= 1");
        break;
    case Command::gap:
        if (c.q.size() < 3) throw ValidationError("gap fit needs at least 3 values of q");
        for (int q : c.q)
            if (q < 4 || q % 2 != 0) throw ValidationError("gap needs even q >= 4");
        if (!std::is_sorted(c.q.begin(), c.q.end())) throw ValidationError("q list must be ascending");
        break;
    case Command::sample: {
        single(c.d, "d");
        single(c.L, "L");
        single(c.beta, "beta");
        single(c.q, "q");
        if (c.model != "xy" && c.model != "clock" && c.model != "constrained")
            throw ValidationError("model must be xy, clock or constrained");
        if (c.well != "east" && c.well != "west") throw ValidationError("well must be east or west");
        if (c.model == "constrained" && c.q.front() % 2 != 0)
            throw ValidationError("constrained model needs even q");
        if (c.sweeps < static_cast<int>(kDefaultBatches)) throw ValidationError("sweeps must be >= 32");
        if (c.burn_in < 0) throw ValidationError("burn_in must be >= 0");
        if (c.observables.empty()) throw ValidationError("no observables requested");
        for (const auto& o : c.observables) {
            if (o == "energy" || o == "magnetization") continue;
            if (o == "m_ew") {
                if (c.model != "constrained") throw ValidationError("m_ew is only defined for the constrained model");
                continue;
            }
            if (!correlation_displacement(o)) throw ValidationError("unknown observable '" + o + "'");
        }
        break;
    }
    case Command::compare:
        if (c.sweeps < static_cast<int>(kDefaultBatches)) throw ValidationError("sweeps must be >= 32");
        if (c.burn_in < 0) throw ValidationError("burn_in must be >= 0");
        break;
    case Command::oracle:
        if (c.m_per_arc < 16) throw ValidationError("m_per_arc must be >= 16");
        break;
    case Command::quasilocality:
        if (c.m_per_arc < 16) throw ValidationError("m_per_arc must be >= 16");
        if (c.base != "alternating" && c.base != "uniform") throw ValidationError("base must be alternating or uniform");
        if (c.base == "alternating")
            for (int q : c.q)
                if (q % 2 != 0) throw ValidationError("alternating base labels need even q");
        require_nonempty(c.distances, "distances");
        for (int L : c.L)
            for (int r : c.distances)
                if (r < 1 || 2 * r >= L) throw ValidationError("distances must satisfy 1 <= r < L/2");
        break;
    }
}

RunReport sweep(std::vector<SweepPoint> points,
                const std::function<std::vector<std::vector<std::string>>(const SweepPoint&)>& run_point,
                std::vector<std::string> columns, int threads) {
    if (points.empty()) throw ValidationError("sweep has no points");
    if (points.size() > kMaxSweepPoints)
        throw ValidationError("sweep has more than " + std::to_string(kMaxSweepPoints) + " points");

    RunReport report;
    std::sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) { return a.key < b.key; });
    const std::size_t before = points.size();
    points.erase(std::unique(points.begin(), points.end(),
                             [](const SweepPoint& a, const SweepPoint& b) { return a.key == b.key; }),
                 points.end());
    if (points.size() != before)
        report.warnings.push_back("removed " + std::to_string(before - points.size()) + " duplicate parameter tuple(s)");

    struct Outcome {
        std::vector<std::vector<std::string>> rows;
        std::string error;
        bool ok = false;
    };
    std::vector<Outcome> outcomes(points.size());
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < points.size(); i += stride) {
            try {
                outcomes[i].rows = run_point(points[i]);
                outcomes[i].ok = true;
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), points.size());
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::future<void>> futures;
        for (std::size_t t = 0; t < workers; ++t) futures.push_back(std::async(std::launch::async, work, t, workers));
        for (auto& f : futures) f.get();
    }

    report.table.columns = std::move(columns);
    nlohmann::json failed = nlohmann::json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (outcomes[i].ok) {
            for (auto& row : outcomes[i].rows) report.table.rows.push_back(std::move(row));
            continue;
        }
        nlohmann::json point = nlohmann::json::object();
        for (std::size_t k = 0; k < points[i].key.size(); ++k) point[points[i].key_labels[k]] = points[i].key[k];
        failed.push_back({{"point", point}, {"error", outcomes[i].error}});
        ++report.failed_points;
    }
    report.summary["points"] = points.size();
    report.summary["failed"] = failed;
    return report;
}

RunReport execute(const ExperimentConfig& config) {
    validate(config);
    switch (config.command) {
    case Command::criterion:
        return run_criterion(config, false);
    case Command::dobrushin:
        return run_criterion(config, true);
    case Command::lemma:
        return run_lemma(config);
    case Command::gap:
        return run_gap(config);
    case Command::sample:
        return run_sample(config);
    case Command::compare:
        return run_compare(config);
    case Command::oracle:
        return run_oracle(config);
    case Command::quasilocality:
        return run_quasilocality(config);
    }
    throw ValidationError("unhandled command");
}

nlohmann::json config_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["command"] = to_string(c.command);
    switch (c.command) {
    case Command::lemma:
        j["atoms"] = c.atoms;
        j["restarts"] = c.restarts;
        j["seed"] = c.seed;
        return j;
    case Command::gap:
        j["q"] = c.q;
        return j;
    default:
        break;
    }
    j["d"] = c.d;
    j["L"] = c.L;
    j["boundary"] = to_string(c.boundary);
    j["beta"] = c.beta;
    j["q"] = c.q;
    j["offset"] = c.offset;
    if (c.command == Command::dobrushin) {
        j["eta_grid"] = c.eta_grid;
        j["quad_points"] = c.quad_points;
    }
    if (c.command == Command::sample || c.command == Command::compare) {
        j["model"] = c.model;
        j["well"] = c.well;
        j["sweeps"] = c.sweeps;
        j["burn_in"] = c.burn_in;
        j["seed"] = c.seed;
        j["observables"] = c.observables;
    }
    if (c.command == Command::oracle || c.command == Command::quasilocality) j["m_per_arc"] = c.m_per_arc;
    if (c.command == Command::quasilocality) {
        j["base"] = c.base;
        j["distances"] = c.distances;
    }
    return j;
}

void write_csv(std::ostream& out, const Table& table, const ExperimentConfig& config) {
    out << "# xydisc " << XYDISC_VERSION << "\n";
    const nlohmann::json j = config_json(config);
    for (const auto& [key, value] : j.items()) out << "# " << key << " = " << value.dump() << "\n";
    for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? "," : "") << table.columns[k];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
        out << "\n";
    }
}

std::string resolve_output(const ExperimentConfig& config) {
    if (!config.output.empty()) return config.output;
    const char* dir = std::getenv("XYDISC_OUTPUT_DIR");
    const std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : std::filesystem::path(".");
    return (base / to_string(config.command)).string();
}

int run(const ExperimentConfig& config, std::ostream& log) {
    try {
        validate(config);
    } catch (const std::invalid_argument& e) {
        log << "validation error: " << e.what() << "\n";
        return 2;
    }

    const std::string prefix = resolve_output(config);
    std::ofstream csv(prefix + ".csv", std::ios::binary);
    std::ofstream json(prefix + ".json", std::ios::binary);
    if (!csv || !json) {
        log << "error: cannot write output files at '" << prefix << ".{csv,json}'\n";
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    try {
        report = execute(config);
    } catch (const std::invalid_argument& e) {
        log << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        log << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    write_csv(csv, report.table, config);
    nlohmann::json summary = report.summary;
    summary["parameters"] = config_json(config);
    summary["version"] = XYDISC_VERSION;
    summary["seed"] = config.seed;
    summary["wall_time_seconds"] = seconds;
    summary["warnings"] = report.warnings;
    summary["rows"] = report.table.rows.size();
    json << summary.dump(2) << "\n";
    for (const auto& w : report.warnings) log << "warning: " << w << "\n";
    if (!csv || !json) {
        log << "error: failed while writing outputs\n";
        return 2;
    }
    log << "wrote " << prefix << ".csv (" << report.table.rows.size() << " rows) and " << prefix << ".json\n";
    if (report.failed_points > 0) {
        log << report.failed_points << " sweep point(s) failed; see summary\n";
        return 3;
    }
    return 0;
}

namespace {

std::vector<int> parse_range(const std::string& text) {
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(std::stoi(item));
    if (parts.size() < 2 || parts.size() > 3) throw ValidationError("range must be a:b or a:b:step");
    const int step = parts.size() == 3 ? parts[2] : 1;
    if (step < 1 || parts[0] > parts[1]) throw ValidationError("range must be ascending with positive step");
    std::vector<int> out;
    for (int v = parts[0]; v <= parts[1]; v += step) out.push_back(v);
    return out;
}

ExperimentConfig defaults_for(Command command) {
    ExperimentConfig c;
    c.command = command;
    switch (command) {
    case Command::gap:
        c.q = {8, 16, 32, 64};
        break;
    case Command::oracle:
        c.boundary = Boundary::open;
        c.q = {8, 16, 32};
        break;
    case Command::quasilocality:
        c.L = {13};
        c.beta = {0.3};
        break;
    case Command::sample:
    case Command::compare:
        c.L = {16};
        break;
    default:
        break;
    }
    return c;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discretisations of the XY model: Gibbsianness criteria, samplers and exact chain oracles", "xydisc"};
    app.set_config("--config", "", "Structured text (TOML/INI) configuration; flags override file values");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", XYDISC_VERSION);

    std::map<Command, ExperimentConfig> configs;
    std::map<Command, std::string> q_ranges, boundaries;
    std::map<Command, CLI::App*> subs;

    const std::map<Command, std::string> help = {
        {Command::criterion, "Analytic and legacy Gibbsianness bounds over a (d, beta, q) grid"},
        {Command::dobrushin, "Numeric constrained Dobrushin sums against the analytic bound"},
        {Command::lemma, "Numerically maximise Q(rho) over atomic measures"},
        {Command::gap, "Constrained double-well barrier heights and their log-log slope in q"},
        {Command::sample, "Run one Markov chain (xy, clock or constrained) and record observables"},
        {Command::compare, "Projected XY chain versus clock chain nearest-neighbour correlations"},
        {Command::oracle, "Exact type-1 versus type-2 chain correlations"},
        {Command::quasilocality, "Dependence of the middle image label on a distant label flip"},
    };

    for (const auto& [name, command] : kCommands) {
        configs[command] = defaults_for(command);
        boundaries[command] = to_string(configs[command].boundary);
        ExperimentConfig& c = configs[command];
        CLI::App* s = app.add_subcommand(name, help.at(command));
        subs[command] = s;
        auto lattice_opts = [&] {
            s->add_option("--L", c.L, "Side length(s)")->delimiter(',')->capture_default_str();
            s->add_option("--boundary", boundaries[command], "periodic or open")->capture_default_str();
        };
        auto out_opts = [&] {
            s->add_option("--output,-o", c.output, "Output prefix (writes <prefix>.csv and <prefix>.json)");
        };
        auto q_opts = [&] {
            s->add_option("--q,--q-list", c.q, "State count(s)")->delimiter(',')->capture_default_str();
        };
        auto beta_opt = [&] { s->add_option("--beta", c.beta, "Inverse temperature(s)")->delimiter(',')->capture_default_str(); };
        auto threads_opt = [&] { s->add_option("--threads", c.threads, "Concurrent sweep points")->capture_default_str(); };
        auto chain_opts = [&] {
            s->add_option("--sweeps", c.sweeps, "Measurement sweeps")->capture_default_str();
            s->add_option("--burn_in,--burn-in", c.burn_in, "Burn-in sweeps (proposal width tuned here)")->capture_default_str();
            s->add_option("--seed", c.seed, "Random seed")->capture_default_str();
        };
        switch (command) {
        case Command::criterion:
        case Command::dobrushin:
            s->add_option("--d", c.d, "Dimension(s)")->delimiter(',')->capture_default_str();
            beta_opt();
            q_opts();
            s->add_option("--q-range", q_ranges[command], "Inclusive q range a:b[:step]");
            if (command == Command::dobrushin) {
                s->add_option("--eta_grid,--eta-grid", c.eta_grid, "Conditioning angles per arc")->capture_default_str();
                s->add_option("--quad_points,--quad-points", c.quad_points, "Midpoint nodes per arc")->capture_default_str();
            }
            threads_opt();
            break;
        case Command::lemma:
            s->add_option("--atoms", c.atoms, "Number of atoms")->capture_default_str();
            s->add_option("--restarts", c.restarts, "Random restarts")->capture_default_str();
            s->add_option("--seed", c.seed, "Random seed")->capture_default_str();
            break;
        case Command::gap:
            q_opts();
            break;
        case Command::sample:
            s->add_option("--model", c.model, "xy, clock or constrained")->capture_default_str();
            s->add_option("--d", c.d, "Dimension")->capture_default_str();
            lattice_opts();
            beta_opt();
            q_opts();
            s->add_option("--offset", c.offset, "north-centered, clock-aligned, default or radians")->capture_default_str();
            s->add_option("--well", c.well, "Starting well of the constrained model: east or west")->capture_default_str();
            chain_opts();
            s->add_option("--observables", c.observables, "energy, magnetization, m_ew, corr:<r>")->delimiter(',')->capture_default_str();
            break;
        case Command::compare:
            s->add_option("--d", c.d, "Dimension(s)")->delimiter(',')->capture_default_str();
            lattice_opts();
            beta_opt();
            q_opts();
            chain_opts();
            threads_opt();
            break;
        case Command::oracle:
            lattice_opts();
            beta_opt();
            q_opts();
            s->add_option("--m_per_arc,--m-per-arc", c.m_per_arc, "Quadrature nodes per arc")->capture_default_str();
            threads_opt();
            break;
        case Command::quasilocality:
            lattice_opts();
            beta_opt();
            q_opts();
            s->add_option("--m_per_arc,--m-per-arc", c.m_per_arc, "Quadrature nodes per arc")->capture_default_str();
            s->add_option("--offset", c.offset, "north-centered, clock-aligned, default or radians")->capture_default_str();
            s->add_option("--base", c.base, "Base labels: alternating or uniform")->capture_default_str();
            s->add_option("--distances", c.distances, "Flip distances")->delimiter(',')->capture_default_str();
            threads_opt();
            break;
        }
        out_opts();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    for (auto& [command, sub] : subs) {
        if (!sub->parsed()) continue;
        ExperimentConfig& c = configs[command];
        try {
            c.boundary = parse_boundary(boundaries[command]);
            if (!q_ranges[command].empty()) c.q = parse_range(q_ranges[command]);
        } catch (const std::exception& e) {
            err << "validation error: " << e.what() << "\n";
            return 2;
        }
        return run(c, err);
    }
    err << "no command given\n";
    return 2;
}

}  // namespace xydisc
