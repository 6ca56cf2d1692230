#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "xydisc/config_io.hpp"
#include "xydisc/lattice.hpp"

using namespace xydisc;
using std::numbers::pi;

namespace {

std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// direct enumeration: every site, every axis, forward neighbour if it exists
std::size_t enumerate_bonds(int d, int L, Boundary b) {
    std::size_t count = 0;
    const std::size_t n = ipow(L, d);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rest = i;
        for (int axis = 0; axis < d; ++axis) {
            const int c = static_cast<int>(rest % L);
            rest /= L;
            if (b == Boundary::periodic || c + 1 < L) ++count;
        }
    }
    return count;
}

}  // namespace

TEST_CASE("lattice sizes and bond multisets") {
    const Lattice torus({2, 3, Boundary::periodic});
    CHECK(torus.site_count() == 9);
    CHECK(torus.bonds().size() == 18);

    const Lattice chain({1, 4, Boundary::open});
    CHECK(chain.site_count() == 4);
    CHECK(chain.bonds().size() == 3);

    const Lattice doubled({2, 2, Boundary::periodic});
    CHECK(doubled.site_count() == 4);
    CHECK(doubled.bonds().size() == 8);
    CHECK(doubled.neighbours(0).size() == 4);  // two neighbours, each reached twice
}

TEST_CASE("bond count formulas against enumeration") {
    for (int d = 1; d <= 3; ++d)
        for (int L = 1; L <= 8; ++L)
            for (Boundary b : {Boundary::periodic, Boundary::open}) {
                if (b == Boundary::periodic && L == 1) continue;
                const Lattice lattice({d, L, b});
                const std::size_t formula =
                    b == Boundary::periodic ? d * ipow(L, d) : d * ipow(L, d - 1) * static_cast<std::size_t>(L - 1);
                CAPTURE(d);
                CAPTURE(L);
                CHECK(lattice.site_count() == ipow(L, d));
                CHECK(lattice.bonds().size() == formula);
                CHECK(enumerate_bonds(d, L, b) == formula);
            }
}

TEST_CASE("lattice rejects invalid specs") {
    CHECK_THROWS_AS(Lattice({1, 1, Boundary::periodic}), std::invalid_argument);
    CHECK_THROWS_AS(Lattice({0, 4, Boundary::open}), std::invalid_argument);
    CHECK_THROWS_AS(Lattice({2, 0, Boundary::open}), std::invalid_argument);
    CHECK_NOTHROW(Lattice({1, 1, Boundary::open}));
}

TEST_CASE("sites are lexicographic and translation wraps") {
    const Lattice lattice({2, 3, Boundary::periodic});
    CHECK(lattice.site(0).coords == std::vector<int>{0, 0});
    CHECK(lattice.site(1).coords == std::vector<int>{0, 1});
    CHECK(lattice.site(3).coords == std::vector<int>{1, 0});
    for (std::size_t i = 0; i < lattice.site_count(); ++i) CHECK(lattice.index_of(lattice.site(i)) == i);
    CHECK(lattice.translate(lattice.index_of({{2, 2}}), 0, 1) == lattice.index_of({{0, 2}}));
    CHECK(lattice.translate(0, 1, -1) == lattice.index_of({{0, 2}}));

    const Lattice open({1, 4, Boundary::open});
    CHECK_FALSE(open.translate(3, 0, 1).has_value());
    CHECK_FALSE(open.translate(0, 0, -1).has_value());
}

TEST_CASE("arc_of examples and half-open convention") {
    const ArcPartition p4(4, 0.0);
    CHECK(p4.arc_of(0.0) == 1);
    CHECK(p4.arc_of(pi) == 3);
    CHECK(p4.arc_of(pi / 2) == 2);
    CHECK(p4.arc_of(2 * pi - 1e-9) == 4);
    CHECK(p4.arc_of(2 * pi) == 1);
    CHECK(p4.arc_of(-pi / 2) == 4);

    const ArcPartition north(8, pi / 2 - pi / 8);
    CHECK(north.arc_of(pi / 2) == 1);
    CHECK(ArcPartition::north_centered(8).arc_of(3 * pi / 2) == 5);
}

TEST_CASE("arc midpoints") {
    const ArcPartition p4(4, 0.0);
    CHECK(p4.midpoint(1) == doctest::Approx(pi / 4));
    CHECK(p4.midpoint(4) == doctest::Approx(7 * pi / 4));
    CHECK(ArcPartition(6, -pi / 6).midpoint(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS(p4.midpoint(0));
    CHECK_THROWS(p4.midpoint(5));
    for (int q : {2, 3, 7, 16})
        for (int l = 1; l <= q; ++l) {
            CHECK(ArcPartition(q, 0.3).arc_of(ArcPartition(q, 0.3).midpoint(l)) == l);
            CHECK(ArcPartition::clock_aligned(q).midpoint(l) == doctest::Approx(clock_angle(q, l)).epsilon(1e-12));
        }
}

TEST_CASE("partition property for random angles") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    for (int q : {2, 5, 8, 16}) {
        const ArcPartition p(q, 0.37);
        std::vector<int> counts(q, 0);
        const int n = 100000;
        for (int t = 0; t < n; ++t) {
            const double a = angle(rng);
            int matches = 0;
            for (int l = 1; l <= q; ++l) matches += p.contains(l, a) ? 1 : 0;
            CHECK(matches == 1);
            ++counts[p.arc_of(a) - 1];
        }
        for (int c : counts) CHECK(std::abs(static_cast<double>(c) / n - 1.0 / q) <= 5e-3);
        CHECK(p.prior_mass(1) == doctest::Approx(1.0 / q));
    }
}

TEST_CASE("discretise examples and round trip") {
    const ArcPartition p4(4, 0.0);
    const DiscreteConfig ones = discretise(p4, ContinuousConfig::constant(5, pi / 4));
    CHECK(ones == DiscreteConfig(4, std::vector<int>(5, 1)));

    const ArcPartition north = ArcPartition::north_centered(8);
    const DiscreteConfig ns = discretise(north, ContinuousConfig({pi / 2, 3 * pi / 2, pi / 2, 3 * pi / 2}));
    CHECK(ns == DiscreteConfig(8, {1, 5, 1, 5}));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int q = 2 + trial % 30;
        const ArcPartition p(q, 0.01 * trial);
        std::uniform_int_distribution<int> label(1, q);
        std::vector<int> labels(17);
        for (int& l : labels) l = label(rng);
        const DiscreteConfig c(q, labels);
        CHECK(discretise(p, representative(p, c)) == c);
    }
}

TEST_CASE("discretise commutes with rotation by one arc") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    const int q = 8;
    const ArcPartition p(q, 0.2);
    std::vector<double> a(50), rotated(50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = angle(rng);
        rotated[i] = a[i] + 2 * pi / q;
    }
    const DiscreteConfig base = discretise(p, ContinuousConfig(a));
    const DiscreteConfig shifted = discretise(p, ContinuousConfig(rotated));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(shifted[i] == base[i] % q + 1);
}

TEST_CASE("configurations normalise and validate") {
    const ContinuousConfig c({-pi / 2, 2 * pi, 7 * pi});
    CHECK(c[0] == doctest::Approx(3 * pi / 2));
    CHECK(c[1] == 0.0);
    CHECK(c[2] == doctest::Approx(pi));
    for (double a : c.angles()) CHECK((a >= 0.0 && a < 2 * pi));
    CHECK_THROWS(DiscreteConfig(4, {1, 5}));
    CHECK_THROWS(DiscreteConfig(4, {0}));
    CHECK(wrapped_difference(0.1, 2 * pi - 0.1) == doctest::Approx(0.2));
}

TEST_CASE("alternating North/South labels") {
    const Lattice lattice({2, 4, Boundary::periodic});
    const DiscreteConfig labels = alternating_north_south(lattice, 8);
    for (std::size_t i = 0; i < lattice.site_count(); ++i)
        CHECK(labels[i] == (lattice.sublattice(i) == 0 ? 1 : 5));
    for (const Bond& b : lattice.bonds()) CHECK(labels[b.a] != labels[b.b]);
    CHECK_THROWS(alternating_north_south(lattice, 7));
}

TEST_CASE("configuration files round trip") {
    StoredConfig angles{{2, 3, Boundary::periodic}, ArcPartition::north_centered(8),
                        ContinuousConfig({0.1, 1.2, 2.3, 3.4, 4.5, 5.6, 0.0, 1e-17, 6.2})};
    std::stringstream buffer;
    write_config(buffer, angles);
    const StoredConfig back = read_config(buffer);
    CHECK(back.spec.dimension == 2);
    CHECK(back.spec.side == 3);
    CHECK(back.spec.boundary == Boundary::periodic);
    CHECK(back.partition.q() == 8);
    CHECK(back.partition.offset() == angles.partition.offset());
    const auto& a = std::get<ContinuousConfig>(back.config);
    const auto& orig = std::get<ContinuousConfig>(angles.config);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == orig[i]);

    StoredConfig labels{{1, 4, Boundary::open}, ArcPartition(4), DiscreteConfig(4, {1, 2, 3, 4})};
    std::stringstream b2;
    write_config(b2, labels);
    CHECK(std::get<DiscreteConfig>(read_config(b2).config) == std::get<DiscreteConfig>(labels.config));

    std::stringstream bad("not a config\n");
    CHECK_THROWS(read_config(bad));
    StoredConfig mismatch{{1, 4, Boundary::open}, ArcPartition(4), DiscreteConfig(4, {1, 2})};
    std::stringstream b3;
    CHECK_THROWS(write_config(b3, mismatch));
}
