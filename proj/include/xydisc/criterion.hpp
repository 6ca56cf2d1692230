#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace xydisc {

/// A bound certifies Gibbsianness of the discretised measure when it is
/// strictly below 1. Values within this margin of 1 count as the boundary
/// and are not certified, so that exact boundary cases like
/// 4*sin^2(pi/6) = 1 are not certified through rounding.
inline constexpr double kCertificationMargin = 1e-12;

bool is_certified(double bound);

/// 2*d*beta*sin^2(pi/q): the fineness criterion for q equal arcs.
double analytic_bound(int d, double beta, int q);

/// 2*d*beta*sin^2(psi) for a partition of a sphere whose cells subtend at
/// most the half-angle psi.
double sphere_bound(int d, double beta, double psi);

/// Earlier high-field estimate 4*d*pi*beta*e^beta/q, kept for comparison.
double legacy_bound(int d, double beta, int q);

/// Smallest q with analytic_bound(d, beta, q) certified.
int minimal_q(int d, double beta);

/// j-diameter of an arc, beta*(2*sin(pi/q))^2. Summed over the 2d
/// neighbours and compared against 4 it reproduces analytic_bound < 1.
double diam_bound(double beta, int q);

struct CriterionReport {
    int d = 1;
    double beta = 0.0;
    int q = 2;
    double analytic_bound = 0.0;
    double legacy_bound = 0.0;
    bool certified = false;
    std::optional<double> numeric_sum;
};

CriterionReport criterion_report(int d, double beta, int q);

/// Probability measure on a finite set of points.
struct AtomicMeasure {
    std::vector<double> locations;
    std::vector<double> weights;

    /// Throws unless locations lie in [lo, hi], weights are positive and sum
    /// to 1 within 1e-12.
    void validate(double lo = -1.0, double hi = 1.0) const;
};

/// Q(rho) = sum_a sum_b w_a w_b |x_a - x_b|.
double q_functional(const AtomicMeasure& rho);

struct LemmaResult {
    AtomicMeasure best;
    double value = 0.0;
};

/// Maximises Q over measures with `n_atoms` atoms in [lo, hi] by random
/// restarts followed by coordinate ascent on locations and on pairs of
/// weights. `restarts` random starting points are drawn from `seed`.
LemmaResult maximize_q(int n_atoms, int restarts, std::uint64_t seed, double lo = -1.0, double hi = 1.0);

struct CbarSettings {
    int eta_grid = 64;     // conditioning angles per arc (endpoints included)
    int quad_points = 128; // composite midpoint nodes on the constrained arc
};

/// Grid estimate (from below) of the constrained Dobrushin coefficient
/// between nearest neighbours: half the supremum, over arc_label's
/// constraint and pairs (eta, eta_bar) sharing a common arc, of
///   integral over the arc of |p_eta - p_eta_bar| d sigma / (2 pi)
/// with p_eta the arc-restricted density proportional to e^{beta cos(sigma - eta)}.
double cbar_estimate(double beta, int q, int arc_label, const CbarSettings& settings = {});

/// Report with numeric_sum = 2d * cbar_estimate (all nearest-neighbour
/// entries coincide by translation and rotation symmetry).
CriterionReport cbar_sum(int d, double beta, int q, const CbarSettings& settings = {});

}  // namespace xydisc
