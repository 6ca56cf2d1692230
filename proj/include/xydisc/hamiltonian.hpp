#pragma once

#include <span>
#include <vector>

#include "xydisc/lattice.hpp"

namespace xydisc {

/// Inverse temperature and state count. beta multiplies the energy at
/// evaluation; bond terms stay dimensionless.
struct ModelParams {
    double beta = 0.0;
    int q = 2;

    void validate() const;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Dot product of the unit vectors at angles a and b.
double bond_term(double a, double b);

/// H = -beta * sum over bonds of cos(theta_i - theta_j).
double xy_energy(const Lattice& lattice, const ContinuousConfig& config, const ModelParams& params);

/// Same Hamiltonian with spins at the clock angles 2*pi*(k-1)/q.
double clock_energy(const Lattice& lattice, const DiscreteConfig& labels, const ModelParams& params);

/// Sum of neighbouring unit vectors. The single-site conditional density is
/// proportional to exp(beta * s(theta) . field).
Vec2 local_field(const Lattice& lattice, const ContinuousConfig& config, std::size_t site);
Vec2 local_field(const Lattice& lattice, std::span<const double> angles, std::size_t site);

struct AnglePair {
    double north = 0.0;
    double south = 0.0;
};

/// Two-minimum structure of a single bond whose ends are constrained to the
/// North and South arcs of the north-centered partition. Energies are per
/// bond in units of beta.
struct WellReport {
    int q = 0;
    AnglePair west_well;  // North-West / South-West corner
    AnglePair east_well;  // North-East / South-East corner
    double well_energy = 0.0;
    double barrier_energy = 0.0;
    double barrier_height = 0.0;
};

/// Bond energy -cos(theta_n - theta_s).
double constrained_bond_energy(double north, double south);

WellReport constrained_bond_extrema(int q);

struct BarrierScaling {
    std::vector<int> q;
    std::vector<double> barrier_height;
    double slope = 0.0;      // d log(barrier) / d log(q)
    double intercept = 0.0;
};

BarrierScaling barrier_scaling(std::span<const int> q_list);

}  // namespace xydisc
