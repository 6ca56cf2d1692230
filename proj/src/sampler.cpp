#include "xydisc/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "xydisc/criterion.hpp"

namespace xydisc {

namespace {

constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

void check_width(double width) {
    if (!(width > 0.0 && width <= std::numbers::pi)) throw std::invalid_argument("proposal width must lie in (0, pi]");
}

void check_chain(const Lattice& lattice, std::size_t size) {
    if (size != lattice.site_count()) throw std::invalid_argument("chain configuration does not match lattice");
}

}  // namespace

ContinuousConfig random_angles(std::size_t sites, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    std::vector<double> a(sites);
    for (auto& v : a) v = u(rng);
    return ContinuousConfig(std::move(a));
}

DiscreteConfig random_labels(std::size_t sites, int q, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> u(1, q);
    std::vector<int> l(sites);
    for (auto& v : l) v = u(rng);
    return DiscreteConfig(q, std::move(l));
}

void metropolis_sweep_xy(XYChain& chain, const Lattice& lattice, const ModelParams& params, double width) {
    params.validate();
    check_width(width);
    check_chain(lattice, chain.config.size());
    std::uniform_real_distribution<double> step(-width, width);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < lattice.site_count(); ++i) {
        const Vec2 h = local_field(lattice, chain.config.angles(), i);
        const double old_angle = chain.config[i];
        const double new_angle = old_angle + step(chain.rng);
        const double delta_h =
            -params.beta * ((std::cos(new_angle) - std::cos(old_angle)) * h.x + (std::sin(new_angle) - std::sin(old_angle)) * h.y);
        ++chain.acceptance.proposed;
        if (delta_h <= 0.0 || unit(chain.rng) < std::exp(-delta_h)) {
            chain.config.set(i, new_angle);
            ++chain.acceptance.accepted;
        }
    }
    ++chain.sweep_count;
}

void heatbath_sweep_clock(ClockChain& chain, const Lattice& lattice, const ModelParams& params) {
    params.validate();
    check_chain(lattice, chain.config.size());
    if (chain.config.q() != params.q) throw std::invalid_argument("chain q differs from model q");
    const int q = params.q;
    std::vector<double> cs(q), sn(q), weight(q);
    for (int k = 0; k < q; ++k) {
        cs[k] = std::cos(kTwoPi * k / q);
        sn[k] = std::sin(kTwoPi * k / q);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < lattice.site_count(); ++i) {
        double hx = 0.0, hy = 0.0;
        for (std::size_t j : lattice.neighbours(i)) {
            hx += cs[chain.config[j] - 1];
            hy += sn[chain.config[j] - 1];
        }
        const double hmax = std::hypot(hx, hy);
        double total = 0.0;
        for (int k = 0; k < q; ++k) {
            weight[k] = std::exp(params.beta * (cs[k] * hx + sn[k] * hy - hmax));
            total += weight[k];
        }
        double u = unit(chain.rng) * total;
        int pick = q - 1;
        for (int k = 0; k < q; ++k) {
            u -= weight[k];
            if (u < 0.0) {
                pick = k;
                break;
            }
        }
        chain.config.set(i, pick + 1);
        ++chain.acceptance.proposed;
        ++chain.acceptance.accepted;
    }
    ++chain.sweep_count;
}

bool satisfies_constraint(const ContinuousConfig& config, const ArcPartition& partition,
                          const DiscreteConfig& assigned) {
    if (config.size() != assigned.size()) return false;
    for (std::size_t i = 0; i < config.size(); ++i)
        if (!partition.contains(assigned[i], config[i])) return false;
    return true;
}

void constrained_sweep_xy(XYChain& chain, const Lattice& lattice, const ModelParams& params,
                          const ArcPartition& partition, const DiscreteConfig& assigned, double width, bool verify) {
    params.validate();
    check_width(width);
    check_chain(lattice, chain.config.size());
    if (assigned.q() != partition.q()) throw std::invalid_argument("assigned labels do not match partition");
    if (chain.sweep_count == 0 && !satisfies_constraint(chain.config, partition, assigned))
        throw std::invalid_argument("initial state violates the arc constraint");

    std::uniform_real_distribution<double> step(-width, width);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < lattice.site_count(); ++i) {
        const double old_angle = chain.config[i];
        const double new_angle = normalize_angle(old_angle + step(chain.rng));
        ++chain.acceptance.proposed;
        if (!partition.contains(assigned[i], new_angle)) continue;
        const Vec2 h = local_field(lattice, chain.config.angles(), i);
        const double delta_h =
            -params.beta * ((std::cos(new_angle) - std::cos(old_angle)) * h.x + (std::sin(new_angle) - std::sin(old_angle)) * h.y);
        if (delta_h <= 0.0 || unit(chain.rng) < std::exp(-delta_h)) {
            chain.config.set(i, new_angle);
            ++chain.acceptance.accepted;
        }
    }
    ++chain.sweep_count;
    if (verify && !satisfies_constraint(chain.config, partition, assigned))
        throw std::logic_error("constrained sweep left its arc assignment");
}

double east_west_order(const ContinuousConfig& config, const ArcPartition& partition, const DiscreteConfig& assigned) {
    if (config.size() != assigned.size() || config.size() == 0)
        throw std::invalid_argument("configuration and labels must be non-empty and of equal size");
    const double half = 0.5 * partition.width();
    double sum = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        const double mid = partition.midpoint(assigned[i]);
        const double orientation = std::sin(mid) > 1e-12 ? -1.0 : 1.0;
        sum += orientation * wrapped_difference(config[i], mid) / half;
    }
    return sum / static_cast<double>(config.size());
}

ContinuousConfig well_configuration(const ArcPartition& partition, const DiscreteConfig& assigned, int sign,
                                    double inset) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("well sign must be +1 (East) or -1 (West)");
    const double half = 0.5 * partition.width();
    std::vector<double> angles(assigned.size());
    for (std::size_t i = 0; i < assigned.size(); ++i) {
        const double mid = partition.midpoint(assigned[i]);
        const double orientation = std::sin(mid) > 1e-12 ? -1.0 : 1.0;
        angles[i] = mid + sign * orientation * half * (1.0 - inset);
    }
    return ContinuousConfig(std::move(angles));
}

void check_displacement(const Lattice& lattice, int r) {
    if (r < 0) throw std::invalid_argument("displacement must be non-negative");
    if (lattice.boundary() == Boundary::periodic && 2 * r > lattice.side())
        throw std::invalid_argument("displacement " + std::to_string(r) + " exceeds L/2 on a periodic lattice");
    if (lattice.boundary() == Boundary::open && r >= lattice.side())
        throw std::invalid_argument("displacement " + std::to_string(r) + " leaves the open box");
}

double correlation_value(const Lattice& lattice, std::span<const double> angles, int r) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < lattice.site_count(); ++i) {
        for (int axis = 0; axis < lattice.dimension(); ++axis) {
            if (auto j = lattice.translate(i, axis, r)) {
                sum += std::cos(angles[i] - angles[*j]);
                ++pairs;
            }
        }
    }
    return sum / static_cast<double>(pairs);
}

ObservableSeries two_point_correlation(const Lattice& lattice, std::span<const ContinuousConfig> samples, int r,
                                       std::size_t batches) {
    check_displacement(lattice, r);
    std::vector<double> values;
    values.reserve(samples.size());
    for (const auto& s : samples) {
        check_chain(lattice, s.size());
        values.push_back(correlation_value(lattice, s.angles(), r));
    }
    return make_series("corr_r" + std::to_string(r), std::move(values), batches);
}

ObservableSeries two_point_correlation(const Lattice& lattice, std::span<const DiscreteConfig> samples, int r,
                                       std::size_t batches) {
    check_displacement(lattice, r);
    std::vector<double> values;
    values.reserve(samples.size());
    for (const auto& s : samples) {
        check_chain(lattice, s.size());
        values.push_back(correlation_value(lattice, embed_clock(s).angles(), r));
    }
    return make_series("corr_r" + std::to_string(r), std::move(values), batches);
}

DiscretisationComparison compare_discretisations(const ModelParams& params, const Lattice& lattice,
                                                 const RunSettings& settings) {
    params.validate();
    check_displacement(lattice, 1);
    if (settings.sweeps < 1 || settings.burn_in < 0) throw std::invalid_argument("invalid sweep counts");
    const int q = params.q;
    const ArcPartition partition = ArcPartition::clock_aligned(q);
    const double n = static_cast<double>(lattice.site_count());

    DiscretisationComparison out;
    out.certified = is_certified(analytic_bound(lattice.dimension(), params.beta, q));
    out.projected_label_frequency.assign(q, 0.0);
    out.clock_label_frequency.assign(q, 0.0);

    std::mt19937_64 init(settings.seed);
    XYChain xy(random_angles(lattice.site_count(), init), settings.seed);
    const double width = tune_width(xy, settings.burn_in, kDefaultProposalWidth, std::numbers::pi,
                                    [&](double w) { metropolis_sweep_xy(xy, lattice, params, w); });
    out.proposal_width = width;
    std::vector<double> projected, embedded(lattice.site_count());
    projected.reserve(settings.sweeps);
    for (int s = 0; s < settings.sweeps; ++s) {
        metropolis_sweep_xy(xy, lattice, params, width);
        for (std::size_t i = 0; i < lattice.site_count(); ++i) {
            const int label = partition.arc_of(xy.config[i]);
            embedded[i] = clock_angle(q, label);
            out.projected_label_frequency[label - 1] += 1.0;
        }
        projected.push_back(correlation_value(lattice, embedded, 1));
    }

    std::mt19937_64 init2(settings.seed + kSeedStride);
    ClockChain clock(random_labels(lattice.site_count(), q, init2), settings.seed + kSeedStride);
    for (int s = 0; s < settings.burn_in; ++s) heatbath_sweep_clock(clock, lattice, params);
    std::vector<double> clocked;
    clocked.reserve(settings.sweeps);
    for (int s = 0; s < settings.sweeps; ++s) {
        heatbath_sweep_clock(clock, lattice, params);
        for (std::size_t i = 0; i < lattice.site_count(); ++i) {
            embedded[i] = clock_angle(q, clock.config[i]);
            out.clock_label_frequency[clock.config[i] - 1] += 1.0;
        }
        clocked.push_back(correlation_value(lattice, embedded, 1));
    }

    for (int k = 0; k < q; ++k) {
        out.projected_label_frequency[k] /= n * settings.sweeps;
        out.clock_label_frequency[k] /= n * settings.sweeps;
    }
    out.projected = make_series("projected_nn", std::move(projected), settings.batches);
    out.clock = make_series("clock_nn", std::move(clocked), settings.batches);
    out.difference = difference(out.projected, out.clock);
    return out;
}

BistabilityRun run_bistability(const Lattice& lattice, int q, double beta, const RunSettings& settings) {
    if (lattice.boundary() == Boundary::periodic && lattice.side() % 2 != 0)
        throw std::invalid_argument("alternating labels need a bipartite lattice (even side when periodic)");
    const ModelParams params{beta, q};
    params.validate();
    const ArcPartition partition = ArcPartition::north_centered(q);
    const DiscreteConfig labels = alternating_north_south(lattice, q);

    BistabilityRun out;
    out.burn_in = static_cast<std::size_t>(settings.burn_in);
    auto run = [&](int sign, std::uint64_t seed, std::vector<double>& record) {
        XYChain chain(well_configuration(partition, labels, sign), seed);
        record.push_back(east_west_order(chain.config, partition, labels));
        const double width = tune_width(chain, settings.burn_in, 0.5 * partition.width(), partition.width(), [&](double w) {
            constrained_sweep_xy(chain, lattice, params, partition, labels, w);
            record.push_back(east_west_order(chain.config, partition, labels));
        });
        for (int s = 0; s < settings.sweeps; ++s) {
            constrained_sweep_xy(chain, lattice, params, partition, labels, width);
            record.push_back(east_west_order(chain.config, partition, labels));
        }
    };
    run(-1, settings.seed, out.west);
    run(+1, settings.seed + kSeedStride, out.east);
    // drop the initial state and the tuning sweeps
    const auto skip = static_cast<std::ptrdiff_t>(out.burn_in + 1);
    out.ks_distance = ks_distance(std::vector<double>(out.west.begin() + skip, out.west.end()),
                                  std::vector<double>(out.east.begin() + skip, out.east.end()));
    out.burn_in += 1;
    return out;
}

}  // namespace xydisc
