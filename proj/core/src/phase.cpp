#include "takiff/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "takiff/errors.hpp"

namespace takiff
{

CoeffState CoeffState::zero(const RootData &rd, int order)
{
    return CoeffState{order, Eigen::MatrixXd::Zero(rd.cartan_dim(), order + 1),
                      Eigen::MatrixXd::Zero(rd.num_roots(), order + 1)};
}

PhaseState PhaseState::zero(const RootData &rd, int order)
{
    return PhaseState{order, Eigen::MatrixXd::Zero(rd.cartan_dim(), order + 1),
                      Eigen::MatrixXd::Zero(rd.cartan_dim(), order + 1)};
}

Eigen::VectorXd PhaseState::flatten() const
{
    Eigen::VectorXd v(size());
    Eigen::Index at = 0;
    for (const auto *m : {&q, &p}) {
        for (Eigen::Index i = 0; i < m->rows(); ++i) {
            for (Eigen::Index n = 0; n < m->cols(); ++n) {
                v(at++) = (*m)(i, n);
            }
        }
    }
    return v;
}

PhaseState PhaseState::unflatten(const Eigen::VectorXd &v, int cartan_dim, int order)
{
    if (v.size() != 2 * cartan_dim * (order + 1)) {
        throw InvalidArgument("PhaseState::unflatten: vector length does not match shape");
    }
    PhaseState ps{order, Eigen::MatrixXd(cartan_dim, order + 1), Eigen::MatrixXd(cartan_dim, order + 1)};
    Eigen::Index at = 0;
    for (auto *m : {&ps.q, &ps.p}) {
        for (Eigen::Index i = 0; i < m->rows(); ++i) {
            for (Eigen::Index n = 0; n < m->cols(); ++n) {
                (*m)(i, n) = v(at++);
            }
        }
    }
    return ps;
}

Eigen::MatrixXd root_positions(const PhaseState &ps, const RootData &rd)
{
    if (ps.q.rows() != rd.cartan_dim()) {
        throw InvalidArgument("phase state has " + std::to_string(ps.q.rows()) + " Cartan rows, root data expects "
                              + std::to_string(rd.cartan_dim()));
    }
    return rd.pairing * ps.q;
}

Jet row_jet(const Eigen::MatrixXd &m, Eigen::Index row)
{
    std::vector<double> c(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index n = 0; n < m.cols(); ++n) {
        c[static_cast<std::size_t>(n)] = m(row, n);
    }
    return Jet(std::move(c));
}

// ---------------------------------------------------------------------------
// BlockToeplitz

BlockToeplitz::BlockToeplitz(int order, int dim) : blocks_(order + 1, Eigen::MatrixXd::Zero(dim, dim)) {}

BlockToeplitz::BlockToeplitz(std::vector<Eigen::MatrixXd> blocks) : blocks_(std::move(blocks))
{
    if (blocks_.empty()) {
        throw InvalidArgument("BlockToeplitz: need at least one block");
    }
    for (const auto &b : blocks_) {
        if (b.rows() != b.cols() || b.rows() != blocks_.front().rows()) {
            throw InvalidArgument("BlockToeplitz: blocks must be square and of equal size");
        }
    }
}

namespace
{

void require_same_shape(const BlockToeplitz &a, const BlockToeplitz &b)
{
    if (a.order() != b.order()) {
        throw OrderMismatch("block Toeplitz orders differ");
    }
    if (a.dim() != b.dim()) {
        throw InvalidArgument("block Toeplitz block sizes differ");
    }
}

} // namespace

BlockToeplitz &BlockToeplitz::operator+=(const BlockToeplitz &rhs)
{
    require_same_shape(*this, rhs);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        blocks_[k] += rhs.blocks_[k];
    }
    return *this;
}

BlockToeplitz &BlockToeplitz::operator-=(const BlockToeplitz &rhs)
{
    require_same_shape(*this, rhs);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        blocks_[k] -= rhs.blocks_[k];
    }
    return *this;
}

BlockToeplitz &BlockToeplitz::operator*=(double s)
{
    for (auto &b : blocks_) {
        b *= s;
    }
    return *this;
}

double BlockToeplitz::block_norm() const
{
    double s = 0.0;
    for (const auto &b : blocks_) {
        s += b.squaredNorm();
    }
    return std::sqrt(s);
}

BlockToeplitz operator*(const BlockToeplitz &a, const BlockToeplitz &b)
{
    require_same_shape(a, b);
    BlockToeplitz c(a.order(), a.dim());
    for (int k = 0; k <= a.order(); ++k) {
        for (int i = 0; i <= k; ++i) {
            c.block(k).noalias() += a.block(i) * b.block(k - i);
        }
    }
    return c;
}

BlockToeplitz operator+(BlockToeplitz a, const BlockToeplitz &b) { return a += b; }
BlockToeplitz operator-(BlockToeplitz a, const BlockToeplitz &b) { return a -= b; }
BlockToeplitz operator*(double s, BlockToeplitz a) { return a *= s; }

BlockToeplitz commutator(const BlockToeplitz &a, const BlockToeplitz &b) { return a * b - b * a; }

BlockToeplitz power(const BlockToeplitz &a, int exponent)
{
    if (exponent < 0) {
        throw InvalidArgument("power: negative exponent");
    }
    BlockToeplitz result(a.order(), a.dim());
    result.block(0) = Eigen::MatrixXd::Identity(a.dim(), a.dim());
    BlockToeplitz base = a;
    while (exponent > 0) {
        if (exponent & 1) {
            result = result * base;
        }
        exponent >>= 1;
        if (exponent > 0) {
            base = base * base;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Coordinate changes

CoeffState to_coeff(const PhaseState &ps, const RootData &rd)
{
    const Eigen::MatrixXd big_q = root_positions(ps, rd);
    CoeffState cs{ps.order, ps.p, Eigen::MatrixXd(rd.num_roots(), ps.order + 1)};
    for (Eigen::Index a = 0; a < big_q.rows(); ++a) {
        const Jet b = exp(0.5 * row_jet(big_q, a));
        for (int n = 0; n <= ps.order; ++n) {
            cs.b(a, n) = b[static_cast<std::size_t>(n)];
        }
    }
    return cs;
}

PhaseState to_phase(const CoeffState &cs, const RootData &rd)
{
    if (!pairing_nonsingular(rd)) {
        throw SingularPairing("to_phase: pairing matrix of '" + rd.name + "' is not square and invertible");
    }
    const int roots = rd.num_roots();
    const int order = cs.order;
    const auto len = static_cast<std::size_t>(order + 1);
    if (cs.b.rows() != roots || cs.y.rows() != rd.cartan_dim()) {
        throw InvalidArgument("to_phase: coefficient state shape does not match root data");
    }
    for (int a = 0; a < roots; ++a) {
        if (!(cs.b(a, 0) > 0.0)) {
            throw NonPositiveLeadingCoefficient("to_phase: b_alpha(0) must be positive");
        }
    }

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(rd.pairing);
    Eigen::MatrixXd big_q = Eigen::MatrixXd::Zero(roots, order + 1);

    // Degree 0: log-linear system alpha_j(h_i) q_i(0) = 2 log b_j(0).
    for (int a = 0; a < roots; ++a) {
        big_q(a, 0) = 2.0 * std::log(cs.b(a, 0));
    }
    // Degree n: b_alpha(n) = c_alpha + d_alpha Q(alpha, n), where c_alpha only
    // involves lower degrees and d_alpha = exp(Q(alpha, 0)/2) / 2.
    for (int n = 1; n <= order; ++n) {
        for (int a = 0; a < roots; ++a) {
            Jet known(len);
            for (int k = 0; k < n; ++k) {
                known[static_cast<std::size_t>(k)] = 0.5 * big_q(a, k);
            }
            const double c = exp(known)[static_cast<std::size_t>(n)];
            const double d = 0.5 * std::exp(0.5 * big_q(a, 0));
            big_q(a, n) = (cs.b(a, n) - c) / d;
        }
    }

    PhaseState ps{order, lu.solve(big_q), cs.y};
    return ps;
}

// ---------------------------------------------------------------------------
// Lax matrix and conserved quantities

LaxMatrix lax(const CoeffState &cs, const RootData &rd)
{
    const auto &rep = rd.representation();
    LaxMatrix l(cs.order, rep.dim);
    for (int k = 0; k <= cs.order; ++k) {
        auto &x = l.block(k);
        for (int i = 0; i < rd.cartan_dim(); ++i) {
            x += cs.y(i, k) * rep.cartan[i];
        }
        for (int a = 0; a < rd.num_roots(); ++a) {
            x += cs.b(a, k) * (rep.raising[a] + rep.lowering[a]);
        }
    }
    return l;
}

double block_trace(const BlockToeplitz &a, int k)
{
    if (k < 0 || k > a.order()) {
        throw IndexOutOfRange("block_trace: index " + std::to_string(k) + " outside 0.." + std::to_string(a.order()));
    }
    return static_cast<double>(a.order() + 1 - k) * a.block(k).trace();
}

Eigen::MatrixXd dense_lax(const BlockToeplitz &a)
{
    const int m = a.dim();
    const int nb = a.order() + 1;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nb * m, nb * m);
    for (int r = 0; r < nb; ++r) {
        for (int c = r; c < nb; ++c) {
            d.block(r * m, c * m, m, m) = a.block(c - r);
        }
    }
    return d;
}

double conserved(const CoeffState &cs, const RootData &rd, int k, int degree)
{
    if (degree < 1) {
        throw InvalidArgument("conserved: degree must be >= 1");
    }
    if (k < 0 || k > cs.order) {
        throw IndexOutOfRange("conserved: block index outside 0..N");
    }
    return block_trace(power(lax(cs, rd), degree), k);
}

double hamiltonian(const CoeffState &cs)
{
    const int n = cs.order;
    double kinetic = 0.0;
    double potential = 0.0;
    for (int l = 0; l <= n; ++l) {
        kinetic += cs.y.col(l).dot(cs.y.col(n - l));
        potential += cs.b.col(l).dot(cs.b.col(n - l));
    }
    return 0.5 * kinetic + potential;
}

std::vector<ConservedIndex> conserved_family(const RootData &rd, int order)
{
    std::vector<ConservedIndex> out;
    for (int k = 0; k <= order; ++k) {
        for (int e : rd.exponents) {
            out.push_back({k, e + 1});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Poisson structure

Eigen::VectorXd gradient(const PhaseFunction &f, const PhaseState &ps)
{
    static const double step_scale = std::cbrt(std::numeric_limits<double>::epsilon());
    Eigen::VectorXd x = ps.flatten();
    Eigen::VectorXd g(x.size());
    const int dim = ps.cartan_dim();
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double x0 = x(j);
        const double h = step_scale * std::max(1.0, std::abs(x0));
        x(j) = x0 + h;
        const double fp = f(PhaseState::unflatten(x, dim, ps.order));
        x(j) = x0 - h;
        const double fm = f(PhaseState::unflatten(x, dim, ps.order));
        x(j) = x0;
        g(j) = (fp - fm) / (2.0 * h);
    }
    return g;
}

double bracket_from_gradients(const Eigen::VectorXd &grad_f, const Eigen::VectorXd &grad_g, int cartan_dim, int order)
{
    const int len = order + 1;
    const int half = cartan_dim * len;
    if (grad_f.size() != 2 * half || grad_g.size() != 2 * half) {
        throw InvalidArgument("bracket_from_gradients: gradient length does not match shape");
    }
    auto q_at = [len](int i, int n) { return i * len + n; };
    auto p_at = [half, len](int i, int n) { return half + i * len + n; };
    double s = 0.0;
    for (int i = 0; i < cartan_dim; ++i) {
        for (int m = 0; m <= order; ++m) {
            s += grad_f(p_at(i, m)) * grad_g(q_at(i, order - m)) - grad_g(p_at(i, m)) * grad_f(q_at(i, order - m));
        }
    }
    return s;
}

double poisson_bracket(const PhaseFunction &f, const PhaseFunction &g, const PhaseState &ps)
{
    return bracket_from_gradients(gradient(f, ps), gradient(g, ps), ps.cartan_dim(), ps.order);
}

PhaseFunction conserved_function(const RootData &rd, ConservedIndex idx)
{
    return [rd, idx](const PhaseState &ps) { return conserved(to_coeff(ps, rd), rd, idx.k, idx.degree); };
}

int independence_rank(const PhaseState &ps, const RootData &rd)
{
    rd.representation();
    const auto family = conserved_family(rd, ps.order);
    if (family.empty()) {
        return 0;
    }
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(family.size()), ps.size());
    for (std::size_t r = 0; r < family.size(); ++r) {
        jac.row(static_cast<Eigen::Index>(r)) = gradient(conserved_function(rd, family[r]), ps).transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto &sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) {
        return 0;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-8 * sv(0)) {
            ++rank;
        }
    }
    return rank;
}

namespace sl2
{

namespace
{

void require_single_index(const PhaseState &ps)
{
    if (ps.q.rows() != 1 || ps.p.rows() != 1) {
        throw InvalidArgument("sl(2) chart conversion expects one Cartan index");
    }
}

} // namespace

PhaseState to_rescaled(const PhaseState &generic)
{
    require_single_index(generic);
    const double s = 1.0 / std::sqrt(2.0);
    return PhaseState{generic.order, s * generic.q, s * generic.p};
}

PhaseState from_rescaled(const PhaseState &rescaled)
{
    require_single_index(rescaled);
    const double s = std::sqrt(2.0);
    return PhaseState{rescaled.order, s * rescaled.q, s * rescaled.p};
}

} // namespace sl2

} // namespace takiff
