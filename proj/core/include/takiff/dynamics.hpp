#ifndef TAKIFF_DYNAMICS_HPP
#define TAKIFF_DYNAMICS_HPP

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "takiff/lie_data.hpp"
#include "takiff/phase.hpp"

namespace takiff
{

/// Time derivatives of the Darboux coordinates.
struct PhaseRates
{
    Eigen::MatrixXd dq;
    Eigen::MatrixXd dp;
};

/// dq_i(n) = p_i(n), dp_i(n) = -sum_alpha alpha(h_i) (exp sum_k Q(alpha,k) v^k)_n.
PhaseRates eom_rhs(const PhaseState &ps, const RootData &rd);

enum class Scheme
{
    rk4,
    leapfrog,
};

/// "rk4" or "leapfrog"; throws InvalidArgument otherwise.
Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme s);

/// One step of size dt.
PhaseState step(const PhaseState &ps, const RootData &rd, double dt, Scheme scheme);

/// Coordinates above this magnitude count as a blowup.
inline constexpr double blowup_threshold = 1e12;

struct Trajectory
{
    std::vector<double> times;
    std::vector<PhaseState> states;
    /// H at each recorded time.
    std::vector<double> hamiltonian;
    /// Which f_{k,l} are tracked, and their value per time (outer index = time).
    std::vector<ConservedIndex> tracked;
    std::vector<std::vector<double>> conserved;

    std::size_t size() const { return times.size(); }
};

/// Integrates from t = 0 with floor(T/dt) + 1 recorded states. When `tracked`
/// is empty and the root data has a representation, the conserved family of
/// the exponents is recorded. Throws NonFiniteState on blowup.
Trajectory integrate(const PhaseState &ps0, const RootData &rd, double dt, double horizon, Scheme scheme = Scheme::rk4,
                     std::optional<std::vector<ConservedIndex>> tracked = std::nullopt);

/// Number of steps taken by integrate(): floor(T/dt), tolerant to the
/// rounding of T/dt just below an integer.
long step_count(double dt, double horizon);

/// Blocks m_k = 1/2 sum_alpha b_alpha(k) (F_alpha - E_alpha), chosen so that
/// the Hamiltonian flow reads Ldot = [M, L].
BlockToeplitz m_matrix(const CoeffState &cs, const RootData &rd);

/// Ldot along the Hamiltonian vector field, by central differences of
/// lax(to_coeff(.)) with step `h` along eom_rhs.
LaxMatrix lax_derivative(const PhaseState &ps, const RootData &rd, double h = 1e-6);

/// || Ldot - [M, L] ||_F over all blocks.
double lax_residual(const PhaseState &ps, const RootData &rd);

} // namespace takiff

#endif
