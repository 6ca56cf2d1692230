#include "xydisc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace xydisc {

namespace {

void summarise(ObservableSeries& s) {
    const double n = static_cast<double>(s.batch_means.size());
    s.mean = std::accumulate(s.batch_means.begin(), s.batch_means.end(), 0.0) / n;
    double var = 0.0;
    for (double m : s.batch_means) var += (m - s.mean) * (m - s.mean);
    var /= (n - 1.0);
    s.std_error = std::sqrt(var / n);
}

}  // namespace

ObservableSeries make_series(std::string name, std::vector<double> values, std::size_t batches) {
    if (batches < kMinBatches) throw std::invalid_argument("batch means need at least 16 batches");
    if (values.size() < batches) throw std::invalid_argument("fewer samples than batches");
    ObservableSeries s;
    s.name = std::move(name);
    s.batch_size = values.size() / batches;
    const std::size_t skip = values.size() - s.batch_size * batches;
    s.batch_means.resize(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        const auto first = values.begin() + static_cast<std::ptrdiff_t>(skip + b * s.batch_size);
        s.batch_means[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(s.batch_size), 0.0) /
                           static_cast<double>(s.batch_size);
    }
    s.values = std::move(values);
    summarise(s);
    return s;
}

ObservableSeries merge_replicas(std::span<const ObservableSeries> replicas) {
    if (replicas.empty()) throw std::invalid_argument("nothing to merge");
    ObservableSeries merged;
    merged.name = replicas.front().name;
    merged.batch_size = replicas.front().batch_size;
    for (const auto& r : replicas) {
        if (r.batch_size != merged.batch_size) throw std::invalid_argument("replicas use different batch sizes");
        merged.values.insert(merged.values.end(), r.values.begin(), r.values.end());
        merged.batch_means.insert(merged.batch_means.end(), r.batch_means.begin(), r.batch_means.end());
    }
    summarise(merged);
    return merged;
}

Difference difference(const ObservableSeries& a, const ObservableSeries& b) {
    return {a.mean - b.mean, std::hypot(a.std_error, b.std_error)};
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS distance needs two non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double best = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        best = std::max(best, std::abs(i / na - j / nb));
    }
    return best;
}

ChiSquareResult chi_square_test(std::span<const std::size_t> counts, std::span<const double> probabilities,
                                double min_expected) {
    if (counts.size() != probabilities.size() || counts.empty())
        throw std::invalid_argument("counts and probabilities must have equal, non-zero length");
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    if (total <= 0.0) throw std::invalid_argument("no observations");

    ChiSquareResult r;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    int cells = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double e = probabilities[k] * total;
        const double o = static_cast<double>(counts[k]);
        if (e < min_expected) {
            pooled_obs += o;
            pooled_exp += e;
            continue;
        }
        r.statistic += (o - e) * (o - e) / e;
        ++cells;
    }
    if (pooled_exp > 0.0) {
        r.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++cells;
    }
    r.dof = cells - 1;
    if (r.dof < 1) throw std::invalid_argument("chi-square test needs at least two cells");
    const boost::math::chi_squared dist(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    r.critical_99 = boost::math::quantile(dist, 0.99);
    r.passes_99 = r.statistic <= r.critical_99;
    return r;
}

}  // namespace xydisc
