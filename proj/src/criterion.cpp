#include "xydisc/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace xydisc {

namespace {

constexpr double kPi = std::numbers::pi;

void check_common(int d, double beta, int q) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and >= 0");
    if (q < 2) throw std::invalid_argument("q must be >= 2");
}

double sin_squared(double x) {
    const double s = std::sin(x);
    return s * s;
}

}  // namespace

bool is_certified(double bound) { return bound < 1.0 - kCertificationMargin; }

double analytic_bound(int d, double beta, int q) {
    check_common(d, beta, q);
    return 2.0 * d * beta * sin_squared(kPi / q);
}

double sphere_bound(int d, double beta, double psi) {
    check_common(d, beta, 2);
    if (!(psi > 0.0 && psi <= kPi)) throw std::invalid_argument("psi must lie in (0, pi]");
    return 2.0 * d * beta * sin_squared(psi);
}

double legacy_bound(int d, double beta, int q) {
    check_common(d, beta, q);
    return 4.0 * d * kPi * beta * std::exp(beta) / q;
}

int minimal_q(int d, double beta) {
    check_common(d, beta, 2);
    for (int q = 2;; ++q) {
        if (is_certified(analytic_bound(d, beta, q))) return q;
        if (q == std::numeric_limits<int>::max()) throw std::overflow_error("minimal q exceeds int range");
    }
}

double diam_bound(double beta, int q) {
    check_common(1, beta, q);
    const double chord = 2.0 * std::sin(kPi / q);
    return beta * chord * chord;
}

CriterionReport criterion_report(int d, double beta, int q) {
    CriterionReport r;
    r.d = d;
    r.beta = beta;
    r.q = q;
    r.analytic_bound = analytic_bound(d, beta, q);
    r.legacy_bound = legacy_bound(d, beta, q);
    r.certified = is_certified(r.analytic_bound);
    return r;
}

void AtomicMeasure::validate(double lo, double hi) const {
    if (locations.empty() || locations.size() != weights.size())
        throw std::invalid_argument("atomic measure needs matching, non-empty locations and weights");
    double total = 0.0;
    for (std::size_t i = 0; i < locations.size(); ++i) {
        if (!(locations[i] >= lo && locations[i] <= hi)) throw std::invalid_argument("atom location outside interval");
        if (!(weights[i] > 0.0)) throw std::invalid_argument("atom weight must be positive");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("atom weights must sum to 1");
}

double q_functional(const AtomicMeasure& rho) {
    double sum = 0.0;
    const std::size_t n = rho.locations.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            sum += rho.weights[a] * rho.weights[b] * std::abs(rho.locations[a] - rho.locations[b]);
    return sum;
}

namespace {

// Q restricted to one location is convex (a weighted sum of |x - x_k|), so
// its maximum over [lo, hi] sits at an endpoint.
bool ascend_locations(std::vector<double>& x, const std::vector<double>& w, double lo, double hi) {
    bool moved = false;
    for (std::size_t l = 0; l < x.size(); ++l) {
        auto pull = [&](double at) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k)
                if (k != l) s += w[k] * std::abs(at - x[k]);
            return s;
        };
        const double current = pull(x[l]);
        const double left = pull(lo), right = pull(hi);
        const double target = left >= right ? lo : hi;
        if (std::max(left, right) > current + 1e-15 && x[l] != target) {
            x[l] = target;
            moved = true;
        }
    }
    return moved;
}

// Moving mass t from atom b to atom a changes Q by
// 2t(g_a - g_b) - 2t^2 A_ab with g = A w.
bool ascend_weights(const std::vector<double>& x, std::vector<double>& w) {
    bool moved = false;
    const std::size_t n = x.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            double ga = 0.0, gb = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                ga += std::abs(x[a] - x[k]) * w[k];
                gb += std::abs(x[b] - x[k]) * w[k];
            }
            const double slope = 2.0 * (ga - gb);
            const double curv = 2.0 * std::abs(x[a] - x[b]);
            const double t_min = -w[a], t_max = w[b];
            double t;
            if (curv > 0.0) {
                t = std::clamp(slope / (2.0 * curv), t_min, t_max);
            } else {
                t = slope > 0.0 ? t_max : (slope < 0.0 ? t_min : 0.0);
            }
            const double gain = slope * t - curv * t * t;
            if (gain > 1e-16) {
                w[a] += t;
                w[b] -= t;
                moved = true;
            }
        }
    }
    return moved;
}

}  // namespace

LemmaResult maximize_q(int n_atoms, int restarts, std::uint64_t seed, double lo, double hi) {
    if (n_atoms < 2) throw std::invalid_argument("maximize_q needs at least 2 atoms");
    if (restarts < 1) throw std::invalid_argument("maximize_q needs at least one restart");
    if (!(lo < hi)) throw std::invalid_argument("maximize_q needs lo < hi");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> loc(lo, hi);
    std::exponential_distribution<double> gamma1(1.0);

    LemmaResult best;
    best.value = -1.0;
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> x(n_atoms), w(n_atoms);
        for (auto& v : x) v = loc(rng);
        for (auto& v : w) v = gamma1(rng) + 1e-3;
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& v : w) v /= total;

        for (int pass = 0; pass < 1000; ++pass) {
            const bool a = ascend_locations(x, w, lo, hi);
            const bool b = ascend_weights(x, w);
            if (!a && !b) break;
        }

        AtomicMeasure candidate;
        for (int i = 0; i < n_atoms; ++i) {
            if (w[i] <= 0.0) continue;  // atoms drained by pair moves
            candidate.locations.push_back(x[i]);
            candidate.weights.push_back(w[i]);
        }
        const double value = q_functional(candidate);
        if (value > best.value) {
            best.value = value;
            best.best = std::move(candidate);
        }
    }

    // present atoms in ascending location order
    std::vector<std::size_t> order(best.best.locations.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return best.best.locations[i] < best.best.locations[j]; });
    AtomicMeasure sorted;
    for (std::size_t i : order) {
        sorted.locations.push_back(best.best.locations[i]);
        sorted.weights.push_back(best.best.weights[i]);
    }
    best.best = std::move(sorted);
    return best;
}

double cbar_estimate(double beta, int q, int arc_label, const CbarSettings& settings) {
    check_common(1, beta, q);
    if (arc_label < 1 || arc_label > q) throw std::out_of_range("arc label out of range");
    if (settings.eta_grid < 8) throw std::invalid_argument("eta grid needs at least 8 points");
    if (settings.quad_points < 16) throw std::invalid_argument("quadrature needs at least 16 points per arc");

    const double width = 2.0 * kPi / q;
    const int n = settings.quad_points;
    const int g = settings.eta_grid;
    std::vector<double> sigma(n);
    for (int k = 0; k < n; ++k) sigma[k] = width * (arc_label - 1) + (k + 0.5) * width / n;

    // Arc-restricted densities normalised against the uniform prior become
    // discrete probability vectors on the midpoint nodes; the integral of
    // |p - p_bar| is then their l1 distance.
    std::vector<double> densities(static_cast<std::size_t>(g) * n);
    double best = 0.0;
    for (int m = 0; m < q; ++m) {
        for (int a = 0; a < g; ++a) {
            const double eta = width * m + width * a / (g - 1);
            double* p = &densities[static_cast<std::size_t>(a) * n];
            double norm = 0.0;
            for (int k = 0; k < n; ++k) {
                p[k] = std::exp(beta * (std::cos(sigma[k] - eta) - 1.0));
                norm += p[k];
            }
            if (!(norm > 0.0) || !std::isfinite(norm)) throw std::runtime_error("arc normaliser is not finite");
            for (int k = 0; k < n; ++k) p[k] /= norm;
        }
        for (int a = 0; a < g; ++a) {
            const double* pa = &densities[static_cast<std::size_t>(a) * n];
            for (int b = a + 1; b < g; ++b) {
                const double* pb = &densities[static_cast<std::size_t>(b) * n];
                double l1 = 0.0;
                for (int k = 0; k < n; ++k) l1 += std::abs(pa[k] - pb[k]);
                best = std::max(best, l1);
            }
        }
    }
    return 0.5 * best;
}

CriterionReport cbar_sum(int d, double beta, int q, const CbarSettings& settings) {
    CriterionReport r = criterion_report(d, beta, q);
    r.numeric_sum = 2.0 * d * cbar_estimate(beta, q, 1, settings);
    return r;
}

}  // namespace xydisc
