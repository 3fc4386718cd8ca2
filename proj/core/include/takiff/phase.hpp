#ifndef TAKIFF_PHASE_HPP
#define TAKIFF_PHASE_HPP

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "takiff/jet.hpp"
#include "takiff/lie_data.hpp"

namespace takiff
{

/// Orbit coordinates: y_i(l) (one row per Cartan direction) and b_alpha(l)
/// (one row per simple root), l = 0..N.
struct CoeffState
{
    int order = 0;
    Eigen::MatrixXd y;
    Eigen::MatrixXd b;

    static CoeffState zero(const RootData &rd, int order);
};

/// Darboux coordinates q_i(n), p_i(n) with {p_i(m), q_j(n)} = delta_ij delta_{m+n,N}.
struct PhaseState
{
    int order = 0;
    Eigen::MatrixXd q;
    Eigen::MatrixXd p;

    static PhaseState zero(const RootData &rd, int order);

    int cartan_dim() const { return static_cast<int>(q.rows()); }
    /// Number of scalar coordinates, 2 * cartan_dim * (N+1).
    int size() const { return static_cast<int>(q.size() + p.size()); }

    /// Coordinates as one vector: q row-major by (i, n), then p likewise.
    Eigen::VectorXd flatten() const;
    static PhaseState unflatten(const Eigen::VectorXd &v, int cartan_dim, int order);
};

/// Q(alpha, n) = sum_i alpha(h_i) q_i(n), one row per simple root.
Eigen::MatrixXd root_positions(const PhaseState &ps, const RootData &rd);

/// Row `row` of a coefficient matrix as a Jet in v.
Jet row_jet(const Eigen::MatrixXd &m, Eigen::Index row);

/// Block upper-triangular Toeplitz matrix x_0 + x_1(1) + ... + x_N(N), stored
/// by its first block row. Also used for the M matrix of the Lax pair.
class BlockToeplitz
{
public:
    BlockToeplitz() = default;
    BlockToeplitz(int order, int dim);
    explicit BlockToeplitz(std::vector<Eigen::MatrixXd> blocks);

    int order() const { return static_cast<int>(blocks_.size()) - 1; }
    int dim() const { return blocks_.empty() ? 0 : static_cast<int>(blocks_.front().rows()); }

    const Eigen::MatrixXd &block(int k) const { return blocks_.at(k); }
    Eigen::MatrixXd &block(int k) { return blocks_.at(k); }
    const std::vector<Eigen::MatrixXd> &blocks() const { return blocks_; }

    BlockToeplitz &operator+=(const BlockToeplitz &rhs);
    BlockToeplitz &operator-=(const BlockToeplitz &rhs);
    BlockToeplitz &operator*=(double s);

    /// Frobenius norm over all blocks.
    double block_norm() const;

private:
    std::vector<Eigen::MatrixXd> blocks_;
};

using LaxMatrix = BlockToeplitz;

BlockToeplitz operator*(const BlockToeplitz &a, const BlockToeplitz &b);
BlockToeplitz operator+(BlockToeplitz a, const BlockToeplitz &b);
BlockToeplitz operator-(BlockToeplitz a, const BlockToeplitz &b);
BlockToeplitz operator*(double s, BlockToeplitz a);
BlockToeplitz commutator(const BlockToeplitz &a, const BlockToeplitz &b);
BlockToeplitz power(const BlockToeplitz &a, int exponent);

/// y = p, b_alpha(v) = exp(1/2 sum_n Q(alpha, n) v^n).
CoeffState to_coeff(const PhaseState &ps, const RootData &rd);

/// Inverse of to_coeff, solved degree by degree. Throws SingularPairing when
/// the pairing is not square and invertible, NonPositiveLeadingCoefficient
/// when some b_alpha(0) <= 0.
PhaseState to_phase(const CoeffState &cs, const RootData &rd);

/// x_k = sum_i y_i(k) H_i + sum_alpha b_alpha(k) (E_alpha + F_alpha).
LaxMatrix lax(const CoeffState &cs, const RootData &rd);

/// Trace along the k*M-th superdiagonal: (N+1-k) tr(x_k).
double block_trace(const BlockToeplitz &a, int k);

/// (N+1)M x (N+1)M assembly of the block Toeplitz matrix.
Eigen::MatrixXd dense_lax(const BlockToeplitz &a);

/// f_{k,l} = tr_k(L^l).
double conserved(const CoeffState &cs, const RootData &rd, int k, int degree);

/// H = 1/2 sum y_i(l) y_i(N-l) + sum b_alpha(l) b_alpha(N-l).
double hamiltonian(const CoeffState &cs);

/// A conserved quantity f_{k,l}.
struct ConservedIndex
{
    int k = 0;
    int degree = 0;
    friend bool operator==(const ConservedIndex &, const ConservedIndex &) = default;
};

/// (k, l) for 0 <= k <= N and l - 1 in the exponents, k-major.
std::vector<ConservedIndex> conserved_family(const RootData &rd, int order);

using PhaseFunction = std::function<double(const PhaseState &)>;

/// Central-difference gradient, laid out like PhaseState::flatten().
Eigen::VectorXd gradient(const PhaseFunction &f, const PhaseState &ps);

/// {F, G} from gradients laid out like PhaseState::flatten().
double bracket_from_gradients(const Eigen::VectorXd &grad_f, const Eigen::VectorXd &grad_g, int cartan_dim, int order);

/// {F, G} = sum_{i,m} dF/dp_i(m) dG/dq_i(N-m) - dG/dp_i(m) dF/dq_i(N-m).
double poisson_bracket(const PhaseFunction &f, const PhaseFunction &g, const PhaseState &ps);

/// f_{k,l} as a function of Darboux coordinates.
PhaseFunction conserved_function(const RootData &rd, ConservedIndex idx);

/// Numerical rank of the Jacobian of conserved_family (relative tolerance 1e-8).
int independence_rank(const PhaseState &ps, const RootData &rd);

namespace sl2
{

/// Generic chart to the rescaled chart q_n = q_1(n)/sqrt(2), p_n = p_1(n)/sqrt(2).
PhaseState to_rescaled(const PhaseState &generic);
PhaseState from_rescaled(const PhaseState &rescaled);

} // namespace sl2

} // namespace takiff

#endif
