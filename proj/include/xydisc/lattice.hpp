#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace xydisc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angles closer than this to 2*pi after reduction are snapped to 0.
inline constexpr double kAngleTolerance = 1e-12;

/// Reduces an angle to [0, 2*pi).
double normalize_angle(double angle);

/// Signed difference a - b wrapped into (-pi, pi].
double wrapped_difference(double a, double b);

enum class Boundary { periodic, open };

std::string to_string(Boundary boundary);
Boundary parse_boundary(const std::string& text);

struct LatticeSpec {
    int dimension = 1;
    int side = 1;
    Boundary boundary = Boundary::open;
};

struct Site {
    std::vector<int> coords;
    friend bool operator==(const Site&, const Site&) = default;
};

struct Bond {
    std::size_t a;
    std::size_t b;
};

/// Finite box or torus in Z^d. Sites are stored in lexicographic order with
/// the first coordinate most significant.
///
/// The bond list is a multiset: a periodic torus of side 2 links each
/// neighbouring pair twice (once directly, once through the wrap), so the
/// bond count is d*L^d for every periodic torus.
class Lattice {
public:
    explicit Lattice(LatticeSpec spec);

    const LatticeSpec& spec() const { return spec_; }
    int dimension() const { return spec_.dimension; }
    int side() const { return spec_.side; }
    Boundary boundary() const { return spec_.boundary; }

    std::size_t site_count() const { return site_count_; }
    std::span<const Bond> bonds() const { return bonds_; }
    /// Neighbours of a site, repeated according to bond multiplicity.
    std::span<const std::size_t> neighbours(std::size_t index) const { return neighbours_[index]; }

    Site site(std::size_t index) const;
    std::size_t index_of(const Site& site) const;

    /// Site reached by moving `steps` along `axis`; empty when it leaves an open box.
    std::optional<std::size_t> translate(std::size_t index, int axis, int steps) const;

    /// 0 or 1 according to the parity of the coordinate sum.
    int sublattice(std::size_t index) const;

private:
    LatticeSpec spec_;
    std::size_t site_count_ = 0;
    std::vector<Bond> bonds_;
    std::vector<std::vector<std::size_t>> neighbours_;
};

/// Partition of the circle into q equal half-open arcs
/// [offset + 2*pi*(l-1)/q, offset + 2*pi*l/q), l = 1..q.
///
/// The offset is stored reduced to [0, 2*pi); both presets below need
/// offsets outside [0, 2*pi/q).
class ArcPartition {
public:
    ArcPartition(int q, double offset = 0.0);

    /// Offset pi/2 - pi/q: North (and South, for even q) are arc midpoints.
    static ArcPartition north_centered(int q);
    /// Offset -pi/q: the midpoint of arc l is the clock angle 2*pi*(l-1)/q.
    static ArcPartition clock_aligned(int q);

    int q() const { return q_; }
    double offset() const { return offset_; }
    double width() const { return kTwoPi / q_; }

    int arc_of(double angle) const;
    double midpoint(int label) const;
    /// Lower endpoint of the arc, not reduced mod 2*pi.
    double lower(int label) const;
    bool contains(int label, double angle) const;

    /// Uniform a-priori arc mass, 1/q for every label.
    double prior_mass(int label) const;

private:
    int q_;
    double offset_;
};

class ContinuousConfig {
public:
    ContinuousConfig() = default;
    explicit ContinuousConfig(std::vector<double> angles);
    static ContinuousConfig constant(std::size_t sites, double angle);

    std::size_t size() const { return angles_.size(); }
    double operator[](std::size_t i) const { return angles_[i]; }
    void set(std::size_t i, double angle) { angles_[i] = normalize_angle(angle); }
    std::span<const double> angles() const { return angles_; }

private:
    std::vector<double> angles_;
};

class DiscreteConfig {
public:
    DiscreteConfig() = default;
    DiscreteConfig(int q, std::vector<int> labels);

    int q() const { return q_; }
    std::size_t size() const { return labels_.size(); }
    int operator[](std::size_t i) const { return labels_[i]; }
    void set(std::size_t i, int label);
    std::span<const int> labels() const { return labels_; }

    friend bool operator==(const DiscreteConfig&, const DiscreteConfig&) = default;

private:
    int q_ = 2;
    std::vector<int> labels_;
};

DiscreteConfig discretise(const ArcPartition& partition, const ContinuousConfig& config);

/// Places every site at the midpoint of its labelled arc.
ContinuousConfig representative(const ArcPartition& partition, const DiscreteConfig& labels);

/// Clock angle 2*pi*(label-1)/q.
double clock_angle(int q, int label);

/// Embeds clock labels as continuous spins at their clock angles.
ContinuousConfig embed_clock(const DiscreteConfig& labels);

/// Labels alternating between the North arc (label 1 of the north-centered
/// partition) and the South arc (label q/2 + 1) by sublattice.
DiscreteConfig alternating_north_south(const Lattice& lattice, int q);

}  // namespace xydisc
