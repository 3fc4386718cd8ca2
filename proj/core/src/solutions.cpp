#include "takiff/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "takiff/errors.hpp"

namespace takiff
{

JetSolutionSample jet_lift(const BaseSolution &base, const Eigen::MatrixXd &x, const Eigen::MatrixXd &z, double t)
{
    if (x.rows() != z.rows() || x.cols() != z.cols() || x.cols() < 1) {
        throw InvalidArgument("jet_lift: initial positions and momenta must share a nonempty shape");
    }
    std::vector<Jet> xs;
    std::vector<Jet> zs;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        xs.push_back(row_jet(x, i));
        zs.push_back(row_jet(z, i));
    }
    const JetPhase out = base(t, xs, zs);
    if (out.q.size() != xs.size() || out.p.size() != xs.size()) {
        throw InvalidArgument("jet_lift: base solution returned the wrong number of coordinates");
    }
    JetSolutionSample s{t, Eigen::MatrixXd(x.rows(), x.cols()), Eigen::MatrixXd(x.rows(), x.cols())};
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index n = 0; n < x.cols(); ++n) {
            s.q(i, n) = out.q[static_cast<std::size_t>(i)].coeff(static_cast<std::size_t>(n));
            s.p(i, n) = out.p[static_cast<std::size_t>(i)].coeff(static_cast<std::size_t>(n));
        }
    }
    return s;
}

namespace sl2
{

Point base(double t, const Jet &x0, const Jet &z0)
{
    const Jet b2 = exp(2.0 * x0);
    const Jet beta = sqrt_unit(z0 * z0 + b2);
    const Hyperbolics h = hyperbolics(t * beta);
    const Jet ratio = z0 * inv(beta);
    const Jet q = x0 - log_unit(h.cosh - ratio * h.sinh);
    const Jet p = z0 - b2 * h.sinh * inv(beta * h.cosh - z0 * h.sinh);
    return Point{q, p};
}

BaseSolution base_solution()
{
    return [](double t, std::span<const Jet> x0, std::span<const Jet> z0) {
        if (x0.size() != 1 || z0.size() != 1) {
            throw InvalidArgument("sl2 base solution takes exactly one coordinate");
        }
        Point pt = base(t, x0[0], z0[0]);
        return JetPhase{{std::move(pt.q)}, {std::move(pt.p)}};
    };
}

CoeffState factorized(double t, const CoeffState &cs0)
{
    if (cs0.y.rows() != 1 || cs0.b.rows() != 1 || cs0.y.cols() != cs0.order + 1 || cs0.b.cols() != cs0.order + 1) {
        throw InvalidArgument("sl2::factorized: expects an sl(2) coefficient state");
    }
    if (!(cs0.b(0, 0) > 0.0)) {
        throw NonPositiveLeadingCoefficient("sl2::factorized: b(0) must be positive");
    }
    const double root2 = std::sqrt(2.0);
    const Jet y = row_jet(cs0.y, 0) * (1.0 / root2);
    const Jet b = row_jet(cs0.b, 0);
    const Jet beta = sqrt_unit(y * y + b * b);
    const Hyperbolics h = hyperbolics(t * beta);
    const Jet denom_inv = inv(beta * h.cosh - y * h.sinh);
    const Jet yt = y - b * b * h.sinh * denom_inv;
    const Jet bt = b * beta * denom_inv;

    CoeffState out = cs0;
    for (int n = 0; n <= cs0.order; ++n) {
        out.y(0, n) = root2 * yt[static_cast<std::size_t>(n)];
        out.b(0, n) = bt[static_cast<std::size_t>(n)];
    }
    return out;
}

} // namespace sl2

namespace
{

// Dense square matrix over the truncated ring.
class JetMatrix
{
public:
    JetMatrix(int dim, std::size_t order) : dim_(dim), data_(static_cast<std::size_t>(dim * dim), Jet(order)) {}

    static JetMatrix identity(int dim, std::size_t order)
    {
        JetMatrix m(dim, order);
        for (int i = 0; i < dim; ++i) {
            m(i, i) = Jet::constant(order, 1.0);
        }
        return m;
    }

    int dim() const { return dim_; }
    Jet &operator()(int r, int c) { return data_[static_cast<std::size_t>(r * dim_ + c)]; }
    const Jet &operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * dim_ + c)]; }

    JetMatrix &operator*=(double s)
    {
        for (auto &j : data_) {
            j *= s;
        }
        return *this;
    }

    JetMatrix &operator+=(const JetMatrix &o)
    {
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += o.data_[i];
        }
        return *this;
    }

    friend JetMatrix operator*(const JetMatrix &a, const JetMatrix &b)
    {
        const std::size_t order = a.data_.front().order();
        JetMatrix c(a.dim_, order);
        for (int r = 0; r < a.dim_; ++r) {
            for (int k = 0; k < a.dim_; ++k) {
                const Jet &ark = a(r, k);
                for (int col = 0; col < a.dim_; ++col) {
                    c(r, col) += ark * b(k, col);
                }
            }
        }
        return c;
    }

    // Infinity norm of the constant-term matrix.
    double constant_norm() const
    {
        double worst = 0.0;
        for (int r = 0; r < dim_; ++r) {
            double row = 0.0;
            for (int c = 0; c < dim_; ++c) {
                row += std::abs((*this)(r, c)[0]);
            }
            worst = std::max(worst, row);
        }
        return worst;
    }

private:
    int dim_;
    std::vector<Jet> data_;
};

// Scaling and squaring with a fixed-length Taylor sum.
JetMatrix expm(JetMatrix a)
{
    const std::size_t order = a(0, 0).order();
    int squarings = 0;
    for (double norm = a.constant_norm(); norm > 0.25; norm *= 0.5) {
        ++squarings;
    }
    a *= std::ldexp(1.0, -squarings);

    JetMatrix sum = JetMatrix::identity(a.dim(), order);
    JetMatrix term = JetMatrix::identity(a.dim(), order);
    for (int k = 1; k <= 24; ++k) {
        term = term * a;
        term *= 1.0 / k;
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) {
        sum = sum * sum;
    }
    return sum;
}

Jet trace_product(const Eigen::MatrixXd &x, const JetMatrix &m)
{
    Jet s(m(0, 0).order());
    for (int r = 0; r < m.dim(); ++r) {
        for (int c = 0; c < m.dim(); ++c) {
            if (x(r, c) != 0.0) {
                s += x(r, c) * m(c, r);
            }
        }
    }
    return s;
}

} // namespace

BaseSolution type_a_base_solution(const RootData &rd)
{
    const auto &rep = rd.representation();
    if (!pairing_nonsingular(rd)) {
        throw SingularPairing("type_a_base_solution: pairing must be square and invertible");
    }
    const Eigen::MatrixXd pairing_inv = rd.pairing.inverse();

    return [rd, rep, pairing_inv](double t, std::span<const Jet> x0, std::span<const Jet> z0) {
        const int s = rd.cartan_dim();
        const int m = rep.dim;
        if (static_cast<int>(x0.size()) != s || static_cast<int>(z0.size()) != s) {
            throw InvalidArgument("type A base solution: wrong number of coordinates");
        }
        const std::size_t order = x0[0].order();

        JetMatrix l0(m, order);
        for (int i = 0; i < s; ++i) {
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) {
                    if (rep.cartan[i](r, c) != 0.0) {
                        l0(r, c) += rep.cartan[i](r, c) * z0[i];
                    }
                }
            }
        }
        for (int a = 0; a < rd.num_roots(); ++a) {
            Jet q_alpha(order);
            for (int i = 0; i < s; ++i) {
                q_alpha += rd.pairing(a, i) * x0[i];
            }
            const Jet b = exp(0.5 * q_alpha);
            const Eigen::MatrixXd ef = rep.raising[a] + rep.lowering[a];
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) {
                    if (ef(r, c) != 0.0) {
                        l0(r, c) += ef(r, c) * b;
                    }
                }
            }
        }

        JetMatrix scaled = l0;
        scaled *= -t;
        JetMatrix work = expm(scaled);

        // LDU without pivoting: the leading minors of exp(-t L0) are positive
        // because L0 is symmetric. `work` ends up holding U above the diagonal.
        std::vector<Jet> pivots;
        for (int k = 0; k < m; ++k) {
            const Jet d = work(k, k);
            if (!(d[0] > 0.0)) {
                throw NonPositiveLeadingCoefficient("type A base solution: nonpositive pivot");
            }
            const Jet d_inv = inv(d);
            for (int c = k + 1; c < m; ++c) {
                work(k, c) *= d_inv;
            }
            for (int r = k + 1; r < m; ++r) {
                const Jet factor = work(r, k);
                for (int c = k + 1; c < m; ++c) {
                    work(r, c) -= factor * work(k, c);
                }
            }
            pivots.push_back(d);
        }

        // theta_+ = D^{1/2} U and its inverse U^{-1} D^{-1/2}.
        JetMatrix theta(m, order);
        JetMatrix u_inv = JetMatrix::identity(m, order);
        std::vector<Jet> root_d;
        for (int k = 0; k < m; ++k) {
            root_d.push_back(sqrt_unit(pivots[k]));
        }
        for (int r = 0; r < m; ++r) {
            theta(r, r) = root_d[r];
            for (int c = r + 1; c < m; ++c) {
                theta(r, c) = root_d[r] * work(r, c);
            }
        }
        // Back substitution for the unit upper triangular inverse.
        for (int c = 0; c < m; ++c) {
            for (int r = c - 1; r >= 0; --r) {
                Jet acc(order);
                for (int k = r + 1; k <= c; ++k) {
                    acc += work(r, k) * u_inv(k, c);
                }
                u_inv(r, c) = -acc;
            }
        }
        JetMatrix theta_inv(m, order);
        for (int r = 0; r < m; ++r) {
            for (int c = r; c < m; ++c) {
                theta_inv(r, c) = u_inv(r, c) * inv(root_d[c]);
            }
        }

        const JetMatrix lt = theta * l0 * theta_inv;

        JetPhase out;
        for (int i = 0; i < s; ++i) {
            out.p.push_back(trace_product(rep.cartan[i], lt));
        }
        std::vector<Jet> big_q;
        for (int a = 0; a < rd.num_roots(); ++a) {
            big_q.push_back(2.0 * log_unit(trace_product(rep.lowering[a], lt)));
        }
        for (int i = 0; i < s; ++i) {
            Jet qi(order);
            for (int a = 0; a < rd.num_roots(); ++a) {
                qi += pairing_inv(i, a) * big_q[static_cast<std::size_t>(a)];
            }
            out.q.push_back(std::move(qi));
        }
        return out;
    };
}

Jet soliton_kappa(const Jet &x0, const Jet &x1)
{
    const Jet c = 2.0 * exp(x0 - x1) - 1.0;
    if (!(c[0] > 1.0)) {
        throw InvalidArgument("soliton_kappa: need 2 exp(x_00 - x_10) - 1 > 1");
    }
    return 0.5 * log_unit(c + sqrt_unit(c * c - 1.0));
}

Jet soliton(int j, double t, const Jet &kappa, int sign)
{
    if (sign != 1 && sign != -1) {
        throw InvalidArgument("soliton: sign must be +1 or -1");
    }
    const Jet gamma = hyperbolics(kappa).sinh;
    const Jet phase = static_cast<double>(j) * kappa + (static_cast<double>(sign) * t) * gamma;
    const Jet sech = hyperbolics(phase).sech;
    return -log_unit(1.0 + gamma * gamma * sech * sech);
}

Eigen::MatrixXd soliton_positions(int first, int last, double t, const Jet &kappa, int sign)
{
    if (last < first) {
        throw InvalidArgument("soliton_positions: empty site range");
    }
    if (!(kappa[0] > 0.0)) {
        throw InvalidArgument("soliton_positions: kappa_0 must be positive");
    }
    const auto len = static_cast<Eigen::Index>(kappa.order() + 1);
    std::vector<Jet> r;
    for (int i = first; i <= last; ++i) {
        r.push_back(soliton(i, t, kappa, sign));
    }
    // Extend until the tail is below double resolution.
    constexpr int max_tail = 1000000;
    for (int i = last + 1;; ++i) {
        Jet next = soliton(i, t, kappa, sign);
        double mag = 0.0;
        for (double c : next.coeffs()) {
            mag = std::max(mag, std::abs(c));
        }
        r.push_back(std::move(next));
        if (mag < 1e-18 && i > last + 8) {
            break;
        }
        if (i - last > max_tail) {
            throw InvalidArgument("soliton_positions: tail did not decay");
        }
    }
    Eigen::MatrixXd q(last - first + 1, len);
    Jet acc(kappa.order());
    for (auto i = static_cast<int>(r.size()) - 1; i >= 0; --i) {
        acc -= r[static_cast<std::size_t>(i)];
        if (i <= last - first) {
            for (Eigen::Index n = 0; n < len; ++n) {
                q(i, n) = acc[static_cast<std::size_t>(n)];
            }
        }
    }
    return q;
}

} // namespace takiff
