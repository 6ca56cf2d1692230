#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace xydisc {

inline constexpr std::size_t kDefaultBatches = 32;
inline constexpr std::size_t kMinBatches = 16;

/// Per-sweep measurements of one observable with a batch-means error bar.
struct ObservableSeries {
    std::string name;
    std::vector<double> values;
    std::vector<double> batch_means;
    std::size_t batch_size = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// Splits `values` into `batches` equal batches (dropping the leading
/// remainder) and estimates the mean and its standard error from the batch means.
ObservableSeries make_series(std::string name, std::vector<double> values, std::size_t batches = kDefaultBatches);

/// Pools independent replicas by concatenating their batch means.
ObservableSeries merge_replicas(std::span<const ObservableSeries> replicas);

struct Difference {
    double value = 0.0;
    double std_error = 0.0;  // combined, sqrt(se_a^2 + se_b^2)
};

Difference difference(const ObservableSeries& a, const ObservableSeries& b);

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    double critical_99 = 0.0;
    bool passes_99 = false;
};

/// Pearson goodness of fit of `counts` against `probabilities`. Cells with
/// expected count below `min_expected` are pooled into one cell.
ChiSquareResult chi_square_test(std::span<const std::size_t> counts, std::span<const double> probabilities,
                                double min_expected = 5.0);

}  // namespace xydisc
