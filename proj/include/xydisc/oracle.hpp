#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "xydisc/lattice.hpp"

namespace xydisc {

/// Exact (or exact-up-to-quadrature) equilibrium quantities of a finite
/// system. The a-priori measure is normalised, so log_partition of the
/// clock model is log(q^-N * sum_sigma e^{-H}).
struct ExactResult {
    double log_partition = 0.0;
    double mean_energy = 0.0;
    /// displacement -> translation- and axis-averaged <s_i . s_{i+r}>
    std::map<int, double> correlations;
};

/// Largest state space enumerate_clock accepts.
inline constexpr double kMaxEnumeratedStates = 1e7;

/// Sums over all q^N label configurations.
ExactResult enumerate_clock(const Lattice& lattice, int q, double beta);

/// Clock chain via its q x q transfer matrix, computed in log space.
ExactResult chain_transfer_type2(int L, int q, double beta, Boundary boundary);

enum class ArcQuadrature { gauss_legendre, midpoint };

/// Nodes and weights of the angle grid used by the type-1 oracle: m nodes
/// strictly inside each arc of `partition`, weights summing to 1.
struct ArcGrid {
    std::vector<double> angle;
    std::vector<double> weight;
    std::vector<int> label;
};

ArcGrid arc_grid(const ArcPartition& partition, int m_per_arc, ArcQuadrature rule = ArcQuadrature::gauss_legendre);

/// XY chain on the q*m angle grid; correlations are of the projected labels
/// embedded at their clock angles, i.e. of the image measure T mu. The
/// energy and partition function are those of the XY chain.
ExactResult chain_transfer_type1(int L, int q, double beta, int m_per_arc, Boundary boundary,
                                 ArcQuadrature rule = ArcQuadrature::gauss_legendre);

/// Conditional law of one image label given all other image labels.
struct ConditionalTable {
    std::size_t site = 0;
    DiscreteConfig given;
    std::vector<double> distribution;  // index k-1 holds P(label k)
};

/// Exact-up-to-quadrature conditional of the image label at `site` on an
/// open chain of length labels.size(), obtained from arc-restricted transfer
/// operators. The entry of `labels` at `site` is ignored.
ConditionalTable image_conditional(const ArcPartition& partition, double beta, int m_per_arc,
                                   const DiscreteConfig& labels, std::size_t site,
                                   ArcQuadrature rule = ArcQuadrature::gauss_legendre);

double total_variation(std::span<const double> p, std::span<const double> r);

struct QuasilocalityPoint {
    int distance = 0;
    double total_variation = 0.0;
};

/// For each distance r, the largest total variation between the middle-site
/// conditionals before and after changing the label at middle + r to any
/// other label.
std::vector<QuasilocalityPoint> quasilocality_scan(const ArcPartition& partition, double beta, int m_per_arc,
                                                   const DiscreteConfig& base_labels, std::span<const int> distances,
                                                   ArcQuadrature rule = ArcQuadrature::gauss_legendre);

struct ExactComparison {
    int L = 0;
    int q = 0;
    double beta = 0.0;
    double type1 = 0.0;  // nearest-neighbour label-embedded correlation of T mu
    double type2 = 0.0;  // nearest-neighbour correlation of the clock model
    double difference = 0.0;
};

ExactComparison compare_exact(int L, int q, double beta, int m_per_arc, Boundary boundary = Boundary::open);

}  // namespace xydisc
