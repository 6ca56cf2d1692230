#include "xydisc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <boost/math/special_functions/legendre.hpp>

namespace xydisc {

namespace {

void check_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and >= 0");
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite intermediate in ") + what);
}

int max_displacement(int L, Boundary boundary) { return boundary == Boundary::periodic ? L / 2 : L - 1; }

/// Single-spin state space of a chain: node angles entering the energy, a
/// normalised prior weight per node, and the angle at which the node is
/// observed in correlations.
struct NodeSet {
    std::vector<double> x;
    std::vector<double> w;
    std::vector<double> y;

    std::size_t size() const { return x.size(); }
};

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// K_ab = exp(beta (cos(x_a - x_b) - 1)); the shift is returned to the
/// partition function as beta per bond.
Matrix shifted_kernel(const NodeSet& nodes, double beta) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Matrix k(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) k(a, b) = std::exp(beta * (std::cos(nodes.x[a] - nodes.x[b]) - 1.0));
    return k;
}

/// Divides by the largest magnitude and accumulates its log.
void renormalize(Vector& v, double& log_scale) {
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0) return;
    require_finite(m, "transfer renormalisation");
    v /= m;
    log_scale += std::log(m);
}

ExactResult solve_open(const NodeSet& nodes, int L, double beta) {
    const Matrix k = shifted_kernel(nodes, beta);
    const auto n = static_cast<Eigen::Index>(nodes.size());
    const Vector w = Eigen::Map<const Vector>(nodes.w.data(), n);
    Vector cy(n), sy(n);
    Matrix c(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        cy(a) = std::cos(nodes.y[a]);
        sy(a) = std::sin(nodes.y[a]);
        for (Eigen::Index b = 0; b < n; ++b) c(a, b) = k(a, b) * std::cos(nodes.x[a] - nodes.x[b]);
    }

    std::vector<Vector> left(L), right(L);
    std::vector<double> lscale(L, 0.0), rscale(L, 0.0);
    left[0] = w;
    renormalize(left[0], lscale[0]);
    for (int i = 1; i < L; ++i) {
        left[i] = w.cwiseProduct(k * left[i - 1]);
        lscale[i] = lscale[i - 1];
        renormalize(left[i], lscale[i]);
    }
    right[L - 1] = Vector::Ones(n);
    for (int i = L - 2; i >= 0; --i) {
        right[i] = k * w.cwiseProduct(right[i + 1]);
        rscale[i] = rscale[i + 1];
        renormalize(right[i], rscale[i]);
    }
    std::vector<double> norm(L);
    for (int i = 0; i < L; ++i) norm[i] = left[i].dot(right[i]);

    ExactResult out;
    out.log_partition = lscale[0] + rscale[0] + std::log(norm[0]) + beta * (L - 1);
    require_finite(out.log_partition, "log partition");

    double bond_sum = 0.0;
    for (int i = 0; i + 1 < L; ++i) {
        const double num = left[i].dot(c * w.cwiseProduct(right[i + 1]));
        bond_sum += num * std::exp(rscale[i + 1] - rscale[i]) / norm[i];
    }
    out.mean_energy = -beta * bond_sum;

    const int rmax = L - 1;
    std::vector<double> acc(rmax + 1, 0.0);
    for (int i = 0; i < L; ++i) {
        for (const Vector* f : {&cy, &sy}) {
            Vector v = left[i].cwiseProduct(*f);
            double s = 0.0;
            for (int j = i + 1; j < L; ++j) {
                v = w.cwiseProduct(k * v);
                renormalize(v, s);
                const double val = v.cwiseProduct(*f).dot(right[j]) / norm[j];
                acc[j - i] += val * std::exp(lscale[i] + s - lscale[j]);
            }
        }
    }
    out.correlations[0] = 1.0;
    for (int r = 1; r <= rmax; ++r) out.correlations[r] = acc[r] / (L - r);
    return out;
}

ExactResult solve_periodic(const NodeSet& nodes, int L, double beta) {
    const Matrix k = shifted_kernel(nodes, beta);
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Vector sqw(n), cy(n), sy(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        sqw(a) = std::sqrt(nodes.w[a]);
        cy(a) = std::cos(nodes.y[a]);
        sy(a) = std::sin(nodes.y[a]);
    }
    const Matrix m = sqw.asDiagonal() * k * sqw.asDiagonal();
    Matrix c(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) c(a, b) = m(a, b) * std::cos(nodes.x[a] - nodes.x[b]);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    if (eig.info() != Eigen::Success) throw std::runtime_error("transfer matrix eigendecomposition failed");
    const Vector lam = eig.eigenvalues();
    const Matrix& u = eig.eigenvectors();
    const double top = lam.cwiseAbs().maxCoeff();
    require_finite(top, "transfer spectrum");
    const Vector ratio = lam / top;
    auto powers = [&](int p) {
        Vector out(n);
        for (Eigen::Index a = 0; a < n; ++a) out(a) = std::pow(ratio(a), p);
        return out;
    };
    const Vector pL = powers(L);
    const double trace = pL.sum();

    ExactResult out;
    out.log_partition = std::log(trace) + L * std::log(top) + beta * L;
    require_finite(out.log_partition, "log partition");

    const Matrix ct = u.transpose() * c * u;
    const double per_bond = ct.diagonal().dot(powers(L - 1)) / (top * trace);
    out.mean_energy = -beta * L * per_bond;

    const Matrix ft_c = u.transpose() * cy.asDiagonal() * u;
    const Matrix ft_s = u.transpose() * sy.asDiagonal() * u;
    for (int r = 0; r <= L / 2; ++r) {
        const Vector pr = powers(r), prest = powers(L - r);
        double total = 0.0;
        for (const Matrix* f : {&ft_c, &ft_s})
            total += (prest.asDiagonal() * *f * pr.asDiagonal()).cwiseProduct(f->transpose()).sum();
        out.correlations[r] = total / trace;
    }
    out.correlations[0] = 1.0;
    return out;
}

ExactResult solve_chain(const NodeSet& nodes, int L, double beta, Boundary boundary) {
    if (L < 1) throw std::invalid_argument("chain length must be >= 1");
    if (boundary == Boundary::periodic && L < 2) throw std::invalid_argument("periodic chain needs L >= 2");
    return boundary == Boundary::periodic ? solve_periodic(nodes, L, beta) : solve_open(nodes, L, beta);
}

double log_sum_exp(std::span<const double> v) {
    const double m = *std::max_element(v.begin(), v.end());
    if (m == -std::numeric_limits<double>::infinity()) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

}  // namespace

ExactResult enumerate_clock(const Lattice& lattice, int q, double beta) {
    check_beta(beta);
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    const std::size_t n = lattice.site_count();
    if (std::pow(static_cast<double>(q), static_cast<double>(n)) > kMaxEnumeratedStates)
        throw std::invalid_argument("state space q^N exceeds " + std::to_string(static_cast<long long>(kMaxEnumeratedStates)));

    std::vector<double> cs(q);
    for (int k = 0; k < q; ++k) cs[k] = std::cos(kTwoPi * k / q);
    const auto bonds = lattice.bonds();
    const int rmax = max_displacement(lattice.side(), lattice.boundary());

    // displacement pairs in the same order as the lattice averages them
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(rmax + 1);
    for (int r = 0; r <= rmax; ++r)
        for (std::size_t i = 0; i < n; ++i)
            for (int axis = 0; axis < lattice.dimension(); ++axis)
                if (auto j = lattice.translate(i, axis, r)) pairs[r].push_back({i, *j});

    std::vector<int> s(n, 0);
    const double shift = beta * static_cast<double>(bonds.size());
    double z = 0.0, e_acc = 0.0;
    std::vector<double> c_acc(rmax + 1, 0.0);
    auto diff_cos = [&](std::size_t a, std::size_t b) { return cs[((s[a] - s[b]) % q + q) % q]; };
    while (true) {
        double bond_sum = 0.0;
        for (const Bond& b : bonds) bond_sum += diff_cos(b.a, b.b);
        const double weight = std::exp(beta * bond_sum - shift);
        z += weight;
        e_acc += weight * (-beta * bond_sum);
        for (int r = 0; r <= rmax; ++r) {
            double cr = 0.0;
            for (const auto& [a, b] : pairs[r]) cr += diff_cos(a, b);
            c_acc[r] += weight * cr / static_cast<double>(pairs[r].size());
        }
        std::size_t pos = 0;
        while (pos < n && ++s[pos] == q) s[pos++] = 0;
        if (pos == n) break;
    }

    ExactResult out;
    out.log_partition = std::log(z) + shift - static_cast<double>(n) * std::log(static_cast<double>(q));
    out.mean_energy = e_acc / z;
    for (int r = 0; r <= rmax; ++r) out.correlations[r] = c_acc[r] / z;
    return out;
}

ExactResult chain_transfer_type2(int L, int q, double beta, Boundary boundary) {
    check_beta(beta);
    if (q < 2 || q > 512) throw std::invalid_argument("q must lie in [2, 512]");
    if (L > 10000) throw std::invalid_argument("chain length must be <= 10^4");
    NodeSet nodes;
    for (int k = 1; k <= q; ++k) {
        nodes.x.push_back(clock_angle(q, k));
        nodes.w.push_back(1.0 / q);
    }
    nodes.y = nodes.x;
    return solve_chain(nodes, L, beta, boundary);
}

ArcGrid arc_grid(const ArcPartition& partition, int m_per_arc, ArcQuadrature rule) {
    if (m_per_arc < 1) throw std::invalid_argument("need at least one node per arc");
    std::vector<double> unit, unit_w;  // nodes on (0, 1) with weights summing to 1
    if (rule == ArcQuadrature::midpoint) {
        for (int k = 0; k < m_per_arc; ++k) {
            unit.push_back((k + 0.5) / m_per_arc);
            unit_w.push_back(1.0 / m_per_arc);
        }
    } else {
        std::vector<double> zeros = boost::math::legendre_p_zeros<double>(m_per_arc);
        std::vector<double> roots;
        for (double z : zeros) {
            roots.push_back(z);
            if (z != 0.0) roots.push_back(-z);
        }
        std::sort(roots.begin(), roots.end());
        for (double z : roots) {
            const double dp = boost::math::legendre_p_prime<double>(m_per_arc, z);
            unit.push_back(0.5 * (z + 1.0));
            unit_w.push_back(1.0 / ((1.0 - z * z) * dp * dp));  // half the [-1, 1] weight
        }
    }
    ArcGrid grid;
    const double width = partition.width();
    for (int l = 1; l <= partition.q(); ++l) {
        for (std::size_t k = 0; k < unit.size(); ++k) {
            grid.angle.push_back(normalize_angle(partition.lower(l) + unit[k] * width));
            grid.weight.push_back(unit_w[k] / partition.q());
            grid.label.push_back(l);
        }
    }
    return grid;
}

ExactResult chain_transfer_type1(int L, int q, double beta, int m_per_arc, Boundary boundary, ArcQuadrature rule) {
    check_beta(beta);
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    if (m_per_arc < 16) throw std::invalid_argument("type-1 oracle needs m_per_arc >= 16");
    const ArcGrid grid = arc_grid(ArcPartition::clock_aligned(q), m_per_arc, rule);
    NodeSet nodes;
    nodes.x = grid.angle;
    nodes.w = grid.weight;
    for (int l : grid.label) nodes.y.push_back(clock_angle(q, l));
    return solve_chain(nodes, L, beta, boundary);
}

ConditionalTable image_conditional(const ArcPartition& partition, double beta, int m_per_arc,
                                   const DiscreteConfig& labels, std::size_t site, ArcQuadrature rule) {
    check_beta(beta);
    const int q = partition.q();
    if (labels.q() != q) throw std::invalid_argument("labels do not match partition");
    const std::size_t L = labels.size();
    if (site >= L) throw std::out_of_range("conditioning site outside chain");

    const ArcGrid grid = arc_grid(partition, m_per_arc, rule);
    const int m = static_cast<int>(grid.angle.size()) / q;
    auto node = [&](int label, int k) { return static_cast<std::size_t>((label - 1) * m + k); };

    // log-domain messages restricted to one arc each
    using Message = std::vector<double>;
    auto start = [&](int label) {
        Message v(m);
        for (int k = 0; k < m; ++k) v[k] = std::log(grid.weight[node(label, k)]);
        return v;
    };
    auto step = [&](const Message& from, int from_label, int to_label) {
        Message to(m), terms(m);
        for (int b = 0; b < m; ++b) {
            const double xb = grid.angle[node(to_label, b)];
            for (int a = 0; a < m; ++a) terms[a] = from[a] + beta * std::cos(grid.angle[node(from_label, a)] - xb);
            to[b] = std::log(grid.weight[node(to_label, b)]) + log_sum_exp(terms);
            require_finite(to[b], "constrained transfer");
        }
        return to;
    };

    std::optional<Message> left;
    for (std::size_t i = 0; i < site; ++i) left = i == 0 ? start(labels[0]) : step(*left, labels[i - 1], labels[i]);
    std::optional<Message> right;
    for (std::size_t i = L - 1; i > site; --i)
        right = i == L - 1 ? start(labels[L - 1]) : step(*right, labels[i + 1], labels[i]);

    std::vector<double> log_z(q);
    Message terms(m);
    for (int label = 1; label <= q; ++label) {
        Message here = start(label);
        if (left) {
            Message in = step(*left, labels[site - 1], label);
            here = in;
        }
        if (right) {
            // right message already carries its own prior weights
            Message joint(m);
            for (int b = 0; b < m; ++b) {
                const double xb = grid.angle[node(label, b)];
                for (int c = 0; c < m; ++c) terms[c] = (*right)[c] + beta * std::cos(xb - grid.angle[node(labels[site + 1], c)]);
                joint[b] = here[b] + log_sum_exp(terms);
            }
            here = joint;
        }
        log_z[label - 1] = log_sum_exp(here);
        require_finite(log_z[label - 1], "conditional normaliser");
    }

    const double total = log_sum_exp(log_z);
    ConditionalTable table;
    table.site = site;
    table.given = labels;
    table.distribution.resize(q);
    for (int k = 0; k < q; ++k) table.distribution[k] = std::exp(log_z[k] - total);
    return table;
}

double total_variation(std::span<const double> p, std::span<const double> r) {
    if (p.size() != r.size()) throw std::invalid_argument("distributions differ in size");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - r[i]);
    return 0.5 * s;
}

std::vector<QuasilocalityPoint> quasilocality_scan(const ArcPartition& partition, double beta, int m_per_arc,
                                                   const DiscreteConfig& base_labels, std::span<const int> distances,
                                                   ArcQuadrature rule) {
    const std::size_t L = base_labels.size();
    if (L < 3) throw std::invalid_argument("quasilocality scan needs a chain of length >= 3");
    const std::size_t middle = L / 2;
    const ConditionalTable base = image_conditional(partition, beta, m_per_arc, base_labels, middle, rule);

    std::vector<QuasilocalityPoint> out;
    for (int r : distances) {
        if (r < 1 || 2 * r >= static_cast<int>(L)) throw std::invalid_argument("flip distance must satisfy 1 <= r < L/2");
        const std::size_t far = middle + static_cast<std::size_t>(r);
        double worst = 0.0;
        for (int label = 1; label <= partition.q(); ++label) {
            if (label == base_labels[far]) continue;
            DiscreteConfig flipped = base_labels;
            flipped.set(far, label);
            const ConditionalTable t = image_conditional(partition, beta, m_per_arc, flipped, middle, rule);
            worst = std::max(worst, total_variation(base.distribution, t.distribution));
        }
        out.push_back({r, worst});
    }
    return out;
}

ExactComparison compare_exact(int L, int q, double beta, int m_per_arc, Boundary boundary) {
    if (max_displacement(L, boundary) < 1) throw std::invalid_argument("chain too short for a nearest-neighbour correlation");
    ExactComparison c;
    c.L = L;
    c.q = q;
    c.beta = beta;
    c.type1 = chain_transfer_type1(L, q, beta, m_per_arc, boundary).correlations.at(1);
    c.type2 = chain_transfer_type2(L, q, beta, boundary).correlations.at(1);
    c.difference = std::abs(c.type1 - c.type2);
    return c;
}

}  // namespace xydisc
