#include "xydisc/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace xydisc {

double normalize_angle(double angle) {
    if (!std::isfinite(angle)) throw std::invalid_argument("non-finite angle");
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi - kAngleTolerance) r = 0.0;
    return r;
}

double wrapped_difference(double a, double b) {
    double d = std::remainder(a - b, kTwoPi);
    if (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}

std::string to_string(Boundary boundary) {
    return boundary == Boundary::periodic ? "periodic" : "open";
}

Boundary parse_boundary(const std::string& text) {
    if (text == "periodic") return Boundary::periodic;
    if (text == "open") return Boundary::open;
    throw std::invalid_argument("unknown boundary '" + text + "' (expected periodic or open)");
}

Lattice::Lattice(LatticeSpec spec) : spec_(spec) {
    if (spec.dimension < 1) throw std::invalid_argument("lattice dimension must be >= 1");
    if (spec.side < 1) throw std::invalid_argument("lattice side must be >= 1");
    if (spec.side == 1 && spec.boundary == Boundary::periodic)
        throw std::invalid_argument("periodic lattice with side 1 would consist of self-loops");

    const double count = std::pow(static_cast<double>(spec.side), spec.dimension);
    if (count > 1e8) throw std::invalid_argument("lattice too large");
    site_count_ = static_cast<std::size_t>(count);

    neighbours_.resize(site_count_);
    for (std::size_t i = 0; i < site_count_; ++i) {
        for (int axis = 0; axis < spec.dimension; ++axis) {
            if (auto j = translate(i, axis, 1)) {
                bonds_.push_back({i, *j});
                neighbours_[i].push_back(*j);
                neighbours_[*j].push_back(i);
            }
        }
    }
}

Site Lattice::site(std::size_t index) const {
    Site s;
    s.coords.assign(spec_.dimension, 0);
    for (int k = spec_.dimension - 1; k >= 0; --k) {
        s.coords[k] = static_cast<int>(index % spec_.side);
        index /= spec_.side;
    }
    return s;
}

std::size_t Lattice::index_of(const Site& site) const {
    if (static_cast<int>(site.coords.size()) != spec_.dimension)
        throw std::invalid_argument("site dimension mismatch");
    std::size_t index = 0;
    for (int c : site.coords) {
        if (spec_.boundary == Boundary::periodic) {
            c %= spec_.side;
            if (c < 0) c += spec_.side;
        } else if (c < 0 || c >= spec_.side) {
            throw std::out_of_range("site outside open box");
        }
        index = index * spec_.side + static_cast<std::size_t>(c);
    }
    return index;
}

std::optional<std::size_t> Lattice::translate(std::size_t index, int axis, int steps) const {
    std::size_t stride = 1;
    for (int k = spec_.dimension - 1; k > axis; --k) stride *= spec_.side;
    const int c = static_cast<int>((index / stride) % spec_.side);
    int moved = c + steps;
    if (spec_.boundary == Boundary::periodic) {
        moved %= spec_.side;
        if (moved < 0) moved += spec_.side;
    } else if (moved < 0 || moved >= spec_.side) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(static_cast<long long>(index) +
                                    static_cast<long long>(moved - c) * static_cast<long long>(stride));
}

int Lattice::sublattice(std::size_t index) const {
    int sum = 0;
    for (int k = 0; k < spec_.dimension; ++k) {
        sum += static_cast<int>(index % spec_.side);
        index /= spec_.side;
    }
    return sum % 2;
}

ArcPartition::ArcPartition(int q, double offset) : q_(q) {
    if (q < 2) throw std::invalid_argument("arc partition needs q >= 2");
    offset_ = normalize_angle(offset);
}

ArcPartition ArcPartition::north_centered(int q) {
    if (q < 2) throw std::invalid_argument("arc partition needs q >= 2");
    return ArcPartition(q, std::numbers::pi / 2.0 - std::numbers::pi / q);
}

ArcPartition ArcPartition::clock_aligned(int q) {
    if (q < 2) throw std::invalid_argument("arc partition needs q >= 2");
    return ArcPartition(q, -std::numbers::pi / q);
}

int ArcPartition::arc_of(double angle) const {
    const double t = normalize_angle(angle - offset_);
    const double x = t / width();
    // Snap onto a lower endpoint when rounding left us just below it.
    const double nearest = std::round(x);
    double cell = std::floor(x);
    if (std::abs(x - nearest) < 1e-11) cell = nearest;
    int l = static_cast<int>(cell);
    l = ((l % q_) + q_) % q_;
    return l + 1;
}

double ArcPartition::lower(int label) const {
    if (label < 1 || label > q_) throw std::out_of_range("arc label out of range");
    return offset_ + width() * (label - 1);
}

double ArcPartition::midpoint(int label) const {
    return normalize_angle(lower(label) + 0.5 * width());
}

bool ArcPartition::contains(int label, double angle) const { return arc_of(angle) == label; }

double ArcPartition::prior_mass(int label) const {
    if (label < 1 || label > q_) throw std::out_of_range("arc label out of range");
    return 1.0 / q_;
}

ContinuousConfig::ContinuousConfig(std::vector<double> angles) : angles_(std::move(angles)) {
    for (double& a : angles_) a = normalize_angle(a);
}

ContinuousConfig ContinuousConfig::constant(std::size_t sites, double angle) {
    return ContinuousConfig(std::vector<double>(sites, angle));
}

DiscreteConfig::DiscreteConfig(int q, std::vector<int> labels) : q_(q), labels_(std::move(labels)) {
    if (q < 2) throw std::invalid_argument("discrete config needs q >= 2");
    for (int l : labels_)
        if (l < 1 || l > q_) throw std::out_of_range("label " + std::to_string(l) + " outside [1, q]");
}

void DiscreteConfig::set(std::size_t i, int label) {
    if (label < 1 || label > q_) throw std::out_of_range("label outside [1, q]");
    labels_[i] = label;
}

DiscreteConfig discretise(const ArcPartition& partition, const ContinuousConfig& config) {
    std::vector<int> labels(config.size());
    for (std::size_t i = 0; i < config.size(); ++i) labels[i] = partition.arc_of(config[i]);
    return DiscreteConfig(partition.q(), std::move(labels));
}

ContinuousConfig representative(const ArcPartition& partition, const DiscreteConfig& labels) {
    if (labels.q() != partition.q()) throw std::invalid_argument("label count does not match partition");
    std::vector<double> angles(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) angles[i] = partition.midpoint(labels[i]);
    return ContinuousConfig(std::move(angles));
}

double clock_angle(int q, int label) {
    if (label < 1 || label > q) throw std::out_of_range("clock label out of range");
    return kTwoPi * (label - 1) / q;
}

ContinuousConfig embed_clock(const DiscreteConfig& labels) {
    std::vector<double> angles(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) angles[i] = clock_angle(labels.q(), labels[i]);
    return ContinuousConfig(std::move(angles));
}

DiscreteConfig alternating_north_south(const Lattice& lattice, int q) {
    if (q < 2 || q % 2 != 0) throw std::invalid_argument("alternating North/South labels need even q");
    std::vector<int> labels(lattice.site_count());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = lattice.sublattice(i) == 0 ? 1 : q / 2 + 1;
    return DiscreteConfig(q, std::move(labels));
}

}  // namespace xydisc
