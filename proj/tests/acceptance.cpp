// Acceptance run: one PASS/FAIL line per criterion, each with its runtime budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "xydisc/criterion.hpp"
#include "xydisc/hamiltonian.hpp"
#include "xydisc/oracle.hpp"
#include "xydisc/sampler.hpp"
#include "xydisc/stats.hpp"

using namespace xydisc;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;
std::set<int> selected;  // empty: run every criterion

void criterion(int id, const std::string& name, double budget_seconds, const std::function<void(Outcome&)>& body) {
    if (!selected.empty() && !selected.count(id)) return;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream budget;
    budget << "runtime " << seconds << " s > " << budget_seconds << " s";
    o.check(seconds < budget_seconds, budget.str());
    if (!o.pass) ++failures;
    std::printf("%s %d %s:%s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    criterion(1, "criterion table", 1.0, [](Outcome& o) {
        const double a = analytic_bound(2, 1.0, 16);
        const double legacy = legacy_bound(2, 1.0, 16);
        const int qmin = minimal_q(2, 1.0);
        o.detail << " analytic(2,1,16)=" << fmt(a) << " legacy(2,1,16)=" << fmt(legacy) << " minimal_q(2,1)=" << qmin;
        o.check(std::abs(a - 0.15224) <= 1e-5, "analytic bound");
        o.check(std::abs(legacy - 4.2699) <= 1e-3, "legacy bound");
        o.check(qmin == 7, "minimal q");
    });

    criterion(2, "lemma oracle", 10.0, [](Outcome& o) {
        for (int n : {2, 3, 5}) {
            const LemmaResult r = maximize_q(n, 200, 7);
            o.detail << " max(n=" << n << ")=" << fmt(r.value);
            o.check(r.value >= 1.0 - 1e-6 && r.value <= 1.0 + 1e-9, "max value for n=" + std::to_string(n));
            if (n == 2) {
                const auto& b = r.best;
                const bool shape = b.locations.size() == 2 && std::abs(b.locations[0] + 1.0) < 1e-6 &&
                                   std::abs(b.locations[1] - 1.0) < 1e-6 && std::abs(b.weights[0] - 0.5) < 1e-4 &&
                                   std::abs(b.weights[1] - 0.5) < 1e-4;
                o.check(shape, "n=2 maximiser at +-1 with weights 1/2");
            }
        }
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> loc(-1.0, 1.0), unit(0.0, 1.0);
        std::uniform_int_distribution<int> atoms(1, 12);
        double worst = 0.0;
        for (int t = 0; t < 100000; ++t) {
            AtomicMeasure rho;
            const int n = atoms(rng);
            double total = 0.0;
            for (int k = 0; k < n; ++k) {
                rho.locations.push_back(t % 3 == 0 ? (unit(rng) < 0.5 ? -1.0 : 1.0) : loc(rng));
                rho.weights.push_back(unit(rng) + 1e-9);
                total += rho.weights.back();
            }
            for (double& w : rho.weights) w /= total;
            worst = std::max(worst, q_functional(rho));
        }
        o.detail << " random max=" << fmt(worst);
        o.check(worst <= 1.0 + 1e-12, "random measures exceed 1");
    });

    criterion(3, "Dobrushin consistency", 120.0, [](Outcome& o) {
        double worst_gap = -1e300;
        for (int d : {1, 2})
            for (double beta : {0.1, 0.5, 1.0})
                for (int q : {4, 8, 16}) {
                    const CriterionReport r = cbar_sum(d, beta, q);
                    worst_gap = std::max(worst_gap, *r.numeric_sum - r.analytic_bound);
                    o.check(*r.numeric_sum <= r.analytic_bound + 1e-3,
                            "numeric_sum above bound at d=" + std::to_string(d) + " beta=" + fmt(beta) + " q=" + std::to_string(q));
                }
        const double zero = *cbar_sum(2, 0.0, 8).numeric_sum;
        o.detail << " max(numeric-analytic)=" << fmt(worst_gap) << " numeric_sum(beta=0)=" << zero;
        o.check(zero == 0.0, "beta=0 sum not exactly 0");
    });

    criterion(4, "barrier scaling", 1.0, [](Outcome& o) {
        const std::vector<int> qs{8, 16, 32, 64};
        const BarrierScaling fit = barrier_scaling(qs);
        const double b8 = constrained_bond_extrema(8).barrier_height;
        o.detail << " slope=" << fmt(fit.slope) << " barrier(q=8)=" << fmt(b8);
        o.check(fit.slope >= -2.05 && fit.slope <= -1.95, "slope");
        o.check(std::abs(b8 - 0.29289) <= 1e-5 + 1e-6, "q=8 barrier");
        o.check(std::abs(b8 - (1.0 - std::cos(std::numbers::pi / 4))) <= 1e-6, "q=8 closed form");
    });

    criterion(5, "oracle agreement", 10.0, [](Outcome& o) {
        double worst = 0.0;
        for (Boundary b : {Boundary::open, Boundary::periodic}) {
            const ExactResult e = enumerate_clock(Lattice({1, 4, b}), 4, 0.7);
            const ExactResult t = chain_transfer_type2(4, 4, 0.7, b);
            worst = std::max({worst, std::abs(e.log_partition - t.log_partition), std::abs(e.mean_energy - t.mean_energy)});
            for (const auto& [r, c] : e.correlations) worst = std::max(worst, std::abs(c - t.correlations.at(r)));
        }
        double ising = 0.0;
        for (double beta : {0.1, 0.7, 1.0, 2.5}) {
            const ExactResult e = enumerate_clock(Lattice({1, 2, Boundary::open}), 2, beta);
            ising = std::max(ising, std::abs(e.correlations.at(1) - std::tanh(beta)));
        }
        o.detail << " enum-vs-transfer=" << fmt(worst) << " |corr-tanh|=" << fmt(ising);
        o.check(worst <= 1e-10, "enumeration vs transfer");
        o.check(ising <= 1e-12, "tanh beta");
    });

    criterion(6, "MCMC validity", 300.0, [](Outcome& o) {
        // heat bath on the 2x2 open q=4 clock model against exact enumeration
        const Lattice square({2, 2, Boundary::open});
        const ModelParams clock{1.0, 4};
        const int states = 256;
        std::vector<double> probs(states);
        double z = 0.0;
        for (int s = 0; s < states; ++s) {
            std::vector<int> labels(4);
            for (int i = 0, v = s; i < 4; ++i, v /= 4) labels[3 - i] = v % 4 + 1;
            probs[s] = std::exp(-clock_energy(square, DiscreteConfig(4, labels), clock));
            z += probs[s];
        }
        for (double& p : probs) p /= z;
        std::mt19937_64 init(11);
        ClockChain chain(random_labels(4, 4, init), 11);
        for (int s = 0; s < 1000; ++s) heatbath_sweep_clock(chain, square, clock);
        std::vector<std::size_t> counts(states, 0);
        const int steps = 1000000, thin = 8;
        for (int s = 0; s < steps; ++s) {
            heatbath_sweep_clock(chain, square, clock);
            if (s % thin) continue;
            int index = 0;
            for (int l : chain.config.labels()) index = 4 * index + (l - 1);
            ++counts[index];
        }
        const ChiSquareResult chi = chi_square_test(counts, probs);
        o.detail << " chi2=" << fmt(chi.statistic) << " dof=" << chi.dof << " crit99=" << fmt(chi.critical_99)
                 << " p=" << fmt(chi.p_value);
        o.check(chi.passes_99, "chi-square at 99%");

        const Lattice chain16({1, 16, Boundary::open});
        const ModelParams xy{1.0, 2};
        std::mt19937_64 init_xy(5);
        XYChain walker(random_angles(16, init_xy), 5);
        const double width = tune_width(walker, kDefaultBurnIn, kDefaultProposalWidth, std::numbers::pi,
                                        [&](double w) { metropolis_sweep_xy(walker, chain16, xy, w); });
        std::vector<double> corr;
        for (int s = 0; s < 100000; ++s) {
            metropolis_sweep_xy(walker, chain16, xy, width);
            corr.push_back(correlation_value(chain16, walker.config.angles(), 1));
        }
        const ObservableSeries series = make_series("corr:1", corr);
        const double target = std::cyl_bessel_i(1.0, 1.0) / std::cyl_bessel_i(0.0, 1.0);
        const double z_score = (series.mean - target) / series.std_error;
        o.detail << " xy corr=" << fmt(series.mean) << "+-" << fmt(series.std_error) << " target=" << fmt(target)
                 << " z=" << fmt(z_score);
        o.check(std::abs(z_score) < 3.0, "XY nearest-neighbour correlation within 3 s.e.");
    });

    criterion(7, "discretisation comparison", 600.0, [](Outcome& o) {
        std::vector<double> diffs;
        for (int q : {8, 16, 32}) diffs.push_back(compare_exact(8, q, 1.0, 16).difference);
        const double ratio = diffs[2] / diffs[0];
        o.detail << " exact diffs=" << fmt(diffs[0]) << "," << fmt(diffs[1]) << "," << fmt(diffs[2])
                 << " ratio=" << fmt(ratio);
        o.check(diffs[0] > diffs[1] && diffs[1] > diffs[2], "strict decrease over q");
        o.check(ratio < 0.25, "ratio below 1/4");

        const DiscretisationComparison c =
            compare_discretisations({0.5, 16}, Lattice({2, 16, Boundary::periodic}), RunSettings{});
        const double z = c.difference.value / c.difference.std_error;
        o.detail << " mcmc projected=" << fmt(c.projected.mean) << " clock=" << fmt(c.clock.mean)
                 << " diff=" << fmt(c.difference.value) << "+-" << fmt(c.difference.std_error) << " z=" << fmt(z);
        // snapping both angles of a bond to arc centres scales the correlation by roughly sinc^2(pi/q)
        const double sinc = std::sin(std::numbers::pi / 16) / (std::numbers::pi / 16);
        o.detail << " projection-bias estimate=" << fmt(c.clock.mean * (sinc * sinc - 1.0));
        o.check(std::abs(z) < 3.0, "MCMC routes within 3 combined s.e.");
    });

    criterion(8, "bistability", 600.0, [](Outcome& o) {
        const Lattice square({2, 16, Boundary::periodic});
        const BistabilityRun cold = run_bistability(square, 8, 256.0, RunSettings{});
        const auto [west_lo, west_hi] = std::minmax_element(cold.west.begin(), cold.west.end());
        const auto [east_lo, east_hi] = std::minmax_element(cold.east.begin(), cold.east.end());
        o.detail << " beta=256 west in [" << fmt(*west_lo) << "," << fmt(*west_hi) << "] east in [" << fmt(*east_lo)
                 << "," << fmt(*east_hi) << "]";
        o.check(*west_hi < -0.5, "West chain left its well");
        o.check(*east_lo > 0.5, "East chain left its well");

        const BistabilityRun warm = run_bistability(square, 8, 5.0, RunSettings{});
        o.detail << " beta=5 KS=" << fmt(warm.ks_distance);
        o.check(warm.ks_distance < 0.2, "beta=5 wells do not overlap");
    });

    criterion(9, "quasilocality contrast", 60.0, [](Outcome& o) {
        const int q = 8, L = 13;
        std::vector<int> labels(L);
        for (int i = 0; i < L; ++i) labels[i] = i % 2 == 0 ? 1 : q / 2 + 1;
        const DiscreteConfig base(q, labels);
        const ArcPartition partition = ArcPartition::north_centered(q);
        const std::vector<int> distances{1, 2, 3, 4, 5};
        const auto warm = quasilocality_scan(partition, 0.3, 16, base, distances);
        const auto cold = quasilocality_scan(partition, 64.0, 16, base, distances);
        bool decreasing = true;
        for (std::size_t k = 1; k < warm.size(); ++k) decreasing = decreasing && warm[k].total_variation < warm[k - 1].total_variation;
        const double tail = warm.back().total_variation;
        const double contrast = cold.back().total_variation / tail;
        o.detail << " tv(beta=0.3,r=5)=" << fmt(tail) << " tv(beta=64,r=5)=" << fmt(cold.back().total_variation)
                 << " ratio=" << fmt(contrast);
        o.check(decreasing, "beta=0.3 scan not strictly decreasing");
        o.check(tail < 1e-3, "terminal variation");
        o.check(contrast >= 10.0, "contrast below 10x");
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
