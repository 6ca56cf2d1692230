#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "xydisc/hamiltonian.hpp"
#include "xydisc/lattice.hpp"
#include "xydisc/stats.hpp"

namespace xydisc {

struct AcceptanceStats {
    std::uint64_t accepted = 0;
    std::uint64_t proposed = 0;

    double rate() const { return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed); }
};

/// One Markov chain: configuration, generator and counters. A chain is
/// single-threaded; replicas with distinct seeds are independent.
template <typename Config>
struct ChainState {
    ChainState(Config initial, std::uint64_t seed) : config(std::move(initial)), rng_seed(seed), rng(seed) {}

    Config config;
    std::uint64_t sweep_count = 0;
    std::uint64_t rng_seed;
    std::mt19937_64 rng;
    AcceptanceStats acceptance;
};

using XYChain = ChainState<ContinuousConfig>;
using ClockChain = ChainState<DiscreteConfig>;

inline constexpr double kDefaultProposalWidth = std::numbers::pi / 2.0;
inline constexpr int kDefaultBurnIn = 1000;
inline constexpr int kDefaultSweeps = 10000;

ContinuousConfig random_angles(std::size_t sites, std::mt19937_64& rng);
DiscreteConfig random_labels(std::size_t sites, int q, std::mt19937_64& rng);

/// Systematic-scan Metropolis sweep with proposals theta + U(-width, width).
void metropolis_sweep_xy(XYChain& chain, const Lattice& lattice, const ModelParams& params, double width);

/// Resamples every site from its exact single-site conditional.
void heatbath_sweep_clock(ClockChain& chain, const Lattice& lattice, const ModelParams& params);

/// True when every angle lies in its assigned arc.
bool satisfies_constraint(const ContinuousConfig& config, const ArcPartition& partition,
                          const DiscreteConfig& assigned);

/// Metropolis sweep of the XY model conditioned on the discretisation image:
/// proposals leaving the assigned arc are rejected. With `verify` set, the
/// constraint is re-checked after the sweep and a violation throws.
void constrained_sweep_xy(XYChain& chain, const Lattice& lattice, const ModelParams& params,
                          const ArcPartition& partition, const DiscreteConfig& assigned, double width,
                          bool verify = false);

/// Runs `sweeps` sweeps of `sweep(width)` adjusting the width toward 50%
/// acceptance every 50 sweeps, clamped to [1e-4, max_width]. Returns the
/// frozen width to use for measurement.
template <typename Sweep>
double tune_width(XYChain& chain, int sweeps, double width, double max_width, Sweep&& sweep) {
    AcceptanceStats window;
    for (int s = 0; s < sweeps; ++s) {
        const AcceptanceStats before = chain.acceptance;
        sweep(width);
        window.accepted += chain.acceptance.accepted - before.accepted;
        window.proposed += chain.acceptance.proposed - before.proposed;
        if ((s + 1) % 50 == 0 && window.proposed > 0) {
            const double rate = window.rate();
            width *= std::clamp(rate / 0.5, 0.5, 2.0);
            width = std::clamp(width, 1e-4, max_width);
            window = {};
        }
    }
    return width;
}

/// Mean signed east-west deviation of constrained spins from their arc
/// midpoints, in units of the half arc width. Spins whose arc midpoint lies
/// in the upper half plane count westward deviation (increasing angle) as
/// negative, the others as positive, so that both constrained ground states
/// of alternating North/South labels map coherently to -1 (West) and +1 (East).
double east_west_order(const ContinuousConfig& config, const ArcPartition& partition,
                       const DiscreteConfig& assigned);

/// Configuration sitting at the East (sign = +1) or West (sign = -1) edge of
/// every assigned arc, pulled inward by `inset` half-widths so that the
/// excluded upper endpoints are avoided.
ContinuousConfig well_configuration(const ArcPartition& partition, const DiscreteConfig& assigned, int sign,
                                    double inset = 1e-3);

/// Translation- and axis-averaged <s_i . s_{i + r e_k}> of one configuration.
double correlation_value(const Lattice& lattice, std::span<const double> angles, int r);

/// Series of correlation_value over a stream of stationary samples.
ObservableSeries two_point_correlation(const Lattice& lattice, std::span<const ContinuousConfig> samples, int r,
                                       std::size_t batches = kDefaultBatches);
ObservableSeries two_point_correlation(const Lattice& lattice, std::span<const DiscreteConfig> samples, int r,
                                       std::size_t batches = kDefaultBatches);

/// Throws unless r is a usable displacement on this lattice.
void check_displacement(const Lattice& lattice, int r);

struct RunSettings {
    int burn_in = kDefaultBurnIn;
    int sweeps = kDefaultSweeps;
    std::uint64_t seed = 1;
    std::size_t batches = kDefaultBatches;
};

struct DiscretisationComparison {
    ObservableSeries projected;  // route 1: XY chain, every sample mapped through T
    ObservableSeries clock;      // route 2: clock chain
    Difference difference;       // projected - clock
    std::vector<double> projected_label_frequency;
    std::vector<double> clock_label_frequency;
    bool certified = false;
    double proposal_width = 0.0;
};

/// Nearest-neighbour label-embedded correlation under the image measure
/// (clock-aligned partition) and under the clock model, from independent chains.
DiscretisationComparison compare_discretisations(const ModelParams& params, const Lattice& lattice,
                                                 const RunSettings& settings);

struct BistabilityRun {
    std::vector<double> west;  // m_EW per sweep, chain started in the West well
    std::vector<double> east;
    std::size_t burn_in = 0;   // leading entries recorded while the width was tuned
    double ks_distance = 0.0;  // between the post-burn-in parts
};

/// Two constrained chains under alternating North/South labels, started in
/// opposite wells; m_EW is recorded every sweep including burn-in.
BistabilityRun run_bistability(const Lattice& lattice, int q, double beta, const RunSettings& settings);

}  // namespace xydisc
