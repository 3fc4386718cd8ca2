// Independent reference computations used only by the tests. Nothing here
// calls the library routine it is meant to check.
#ifndef TAKIFF_TESTS_ORACLES_HPP
#define TAKIFF_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "takiff/jet.hpp"
#include "takiff/lie_data.hpp"
#include "takiff/phase.hpp"

namespace takiff::oracle
{

/// Full polynomial product, then truncation at `order`.
inline std::vector<double> schoolbook_product(const std::vector<double> &a, const std::vector<double> &b,
                                              std::size_t order)
{
    std::vector<double> full(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            full[i + j] += a[i] * b[j];
        }
    }
    full.resize(order + 1);
    return full;
}

/// Calls `visit(sigma)` for every sigma in Z_+^n with sum_i i*sigma_i = n
/// (sigma[i-1] is the multiplicity of part i).
inline void for_each_partition(int n, const std::function<void(const std::vector<int> &)> &visit)
{
    std::vector<int> sigma(static_cast<std::size_t>(std::max(n, 1)), 0);
    std::function<void(int, int)> rec = [&](int part, int remaining) {
        if (part == 0) {
            if (remaining == 0) {
                visit(sigma);
            }
            return;
        }
        for (int m = 0; m * part <= remaining; ++m) {
            sigma[static_cast<std::size_t>(part - 1)] = m;
            rec(part - 1, remaining - m * part);
        }
        sigma[static_cast<std::size_t>(part - 1)] = 0;
    };
    if (n == 0) {
        visit({});
        return;
    }
    rec(n, n);
}

/// (exp sum_k a_k v^k)_l = e^{a_0} sum_{sigma |- l} prod_i a_i^{sigma_i} / sigma_i!.
inline double exp_coeff_by_partitions(const std::vector<double> &a, int l)
{
    double total = 0.0;
    for_each_partition(l, [&](const std::vector<int> &sigma) {
        double term = 1.0;
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            term *= std::pow(a[i + 1], sigma[i]) / std::tgamma(sigma[i] + 1.0);
        }
        total += term;
    });
    return std::exp(a[0]) * total;
}

/// Trace along the (k*M)-th superdiagonal of a dense matrix.
inline double superdiagonal_trace(const Eigen::MatrixXd &d, int offset)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i + offset < d.cols(); ++i) {
        s += d(i, i + offset);
    }
    return s;
}

/// Dense Lax matrix built directly from the coefficient definition.
inline Eigen::MatrixXd dense_from_coefficients(const CoeffState &cs, const RootData &rd)
{
    const auto &rep = rd.representation();
    const int m = rep.dim;
    const int nb = cs.order + 1;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nb * m, nb * m);
    for (int k = 0; k < nb; ++k) {
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < rd.cartan_dim(); ++i) {
            x += cs.y(i, k) * rep.cartan[i];
        }
        for (int a = 0; a < rd.num_roots(); ++a) {
            x += cs.b(a, k) * (rep.raising[a] + rep.lowering[a]);
        }
        for (int r = 0; r + k < nb; ++r) {
            d.block(r * m, (r + k) * m, m, m) = x;
        }
    }
    return d;
}

/// f_{k,l} via the dense (N+1)M matrix power.
inline double conserved_dense(const CoeffState &cs, const RootData &rd, int k, int degree)
{
    const Eigen::MatrixXd d = dense_from_coefficients(cs, rd);
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d.rows(), d.cols());
    for (int i = 0; i < degree; ++i) {
        p = p * d;
    }
    return superdiagonal_trace(p, k * rd.representation().dim);
}

/// Sum over partitions form of the Takiff equations of motion for dp_i(n).
inline double dp_by_partitions(const PhaseState &ps, const RootData &rd, int i, int n)
{
    const Eigen::MatrixXd big_q = rd.pairing * ps.q;
    double s = 0.0;
    for (int a = 0; a < rd.num_roots(); ++a) {
        std::vector<double> row(static_cast<std::size_t>(big_q.cols()));
        for (Eigen::Index k = 0; k < big_q.cols(); ++k) {
            row[static_cast<std::size_t>(k)] = big_q(a, k);
        }
        s -= rd.pairing(a, i) * exp_coeff_by_partitions(row, n);
    }
    return s;
}

class Sampler
{
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

    std::vector<double> coeffs(std::size_t order, double bound)
    {
        std::vector<double> c(order + 1);
        for (auto &x : c) {
            x = uniform(-bound, bound);
        }
        return c;
    }

    Jet jet(std::size_t order, double bound) { return Jet(coeffs(order, bound)); }

    /// Jet whose constant term lies in [lo, hi].
    Jet unit_jet(std::size_t order, double lo, double hi, double bound)
    {
        Jet j = jet(order, bound);
        j[0] = uniform(lo, hi);
        return j;
    }

    Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols, double bound)
    {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            m(i) = uniform(-bound, bound);
        }
        return m;
    }

    PhaseState phase(const RootData &rd, int order, double bound)
    {
        return PhaseState{order, matrix(rd.cartan_dim(), order + 1, bound), matrix(rd.cartan_dim(), order + 1, bound)};
    }

private:
    std::mt19937_64 gen_;
};

/// Second time derivative by the 5-point central stencil.
inline double second_derivative(const std::function<double(double)> &f, double t, double h)
{
    return (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) / (12 * h * h);
}

} // namespace takiff::oracle

#endif
