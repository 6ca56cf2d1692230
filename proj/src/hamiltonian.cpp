#include "xydisc/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace xydisc {

void ModelParams::validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and >= 0");
    if (q < 2) throw std::invalid_argument("q must be >= 2");
}

double bond_term(double a, double b) { return std::cos(a - b); }

double xy_energy(const Lattice& lattice, const ContinuousConfig& config, const ModelParams& params) {
    params.validate();
    if (config.size() != lattice.site_count())
        throw std::invalid_argument("configuration has " + std::to_string(config.size()) + " sites, lattice has " +
                                    std::to_string(lattice.site_count()));
    double sum = 0.0;
    for (const Bond& b : lattice.bonds()) sum += bond_term(config[b.a], config[b.b]);
    return -params.beta * sum;
}

double clock_energy(const Lattice& lattice, const DiscreteConfig& labels, const ModelParams& params) {
    params.validate();
    if (labels.q() != params.q) throw std::invalid_argument("label configuration q differs from model q");
    if (labels.size() != lattice.site_count()) throw std::invalid_argument("configuration size does not match lattice");
    // cos depends only on the label difference mod q
    std::vector<double> table(params.q);
    for (int k = 0; k < params.q; ++k) table[k] = std::cos(kTwoPi * k / params.q);
    double sum = 0.0;
    for (const Bond& b : lattice.bonds()) {
        const int diff = ((labels[b.a] - labels[b.b]) % params.q + params.q) % params.q;
        sum += table[diff];
    }
    return -params.beta * sum;
}

Vec2 local_field(const Lattice& lattice, std::span<const double> angles, std::size_t site) {
    Vec2 field;
    for (std::size_t j : lattice.neighbours(site)) {
        field.x += std::cos(angles[j]);
        field.y += std::sin(angles[j]);
    }
    return field;
}

Vec2 local_field(const Lattice& lattice, const ContinuousConfig& config, std::size_t site) {
    if (site >= lattice.site_count()) throw std::out_of_range("site index out of range");
    return local_field(lattice, config.angles(), site);
}

double constrained_bond_energy(double north, double south) { return -std::cos(north - south); }

WellReport constrained_bond_extrema(int q) {
    if (q < 3) throw std::invalid_argument("constrained double well needs q >= 3");
    if (q % 2 != 0)
        throw std::invalid_argument("odd q: South is not an arc midpoint of the north-centered partition");

    const double pi = std::numbers::pi;
    const double half = pi / q;
    WellReport r;
    r.q = q;
    // -cos(delta) on the strip |delta - pi| <= 2*pi/q is maximal on the ridge
    // delta = pi and minimal at the two corners |delta - pi| = 2*pi/q.
    r.west_well = {pi / 2 + half, 3 * pi / 2 - half};
    r.east_well = {pi / 2 - half, 3 * pi / 2 + half};
    r.well_energy = std::cos(2 * half);
    r.barrier_energy = 1.0;
    r.barrier_height = 1.0 - std::cos(2 * half);
    return r;
}

BarrierScaling barrier_scaling(std::span<const int> q_list) {
    if (q_list.size() < 3) throw std::invalid_argument("barrier scaling fit needs at least 3 values of q");
    for (std::size_t i = 0; i < q_list.size(); ++i) {
        if (q_list[i] < 4 || q_list[i] % 2 != 0) throw std::invalid_argument("barrier scaling needs even q >= 4");
        if (i > 0 && q_list[i] < q_list[i - 1]) throw std::invalid_argument("q list must be ascending");
    }
    BarrierScaling out;
    double sx = 0, sy = 0;
    for (int q : q_list) {
        const double h = constrained_bond_extrema(q).barrier_height;
        out.q.push_back(q);
        out.barrier_height.push_back(h);
        sx += std::log(q);
        sy += std::log(h);
    }
    const double n = static_cast<double>(q_list.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < out.q.size(); ++i) {
        const double dx = std::log(out.q[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(out.barrier_height[i]) - my);
    }
    if (sxx < 1e-14) throw std::invalid_argument("degenerate fit: all q values are equal");
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    return out;
}

}  // namespace xydisc
