#pragma once

#include <iosfwd>
#include <variant>

#include "xydisc/lattice.hpp"

namespace xydisc {

/// Spin configuration together with the geometry and partition it refers to.
///
/// On disk: a short text header
///
///     xydisc-config 1
///     d 2
///     L 4
///     boundary periodic
///     q 8
///     offset 0.39269908169872414
///     kind angles            (or: labels)
///     count 16
///     end
///
/// followed by `count` little-endian values in site lexicographic order:
/// float64 radians for angles, uint32 for labels.
struct StoredConfig {
    LatticeSpec spec;
    ArcPartition partition{2};
    std::variant<ContinuousConfig, DiscreteConfig> config;
};

void write_config(std::ostream& out, const StoredConfig& stored);
StoredConfig read_config(std::istream& in);

}  // namespace xydisc
