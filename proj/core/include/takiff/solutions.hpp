#ifndef TAKIFF_SOLUTIONS_HPP
#define TAKIFF_SOLUTIONS_HPP

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "takiff/jet.hpp"
#include "takiff/lie_data.hpp"
#include "takiff/phase.hpp"

namespace takiff
{

/// Positions and momenta, one Jet per Cartan index.
struct JetPhase
{
    std::vector<Jet> q;
    std::vector<Jet> p;
};

/// A solution of the N = 0 equations of motion as a map
/// (t, x0, z0) -> (q(t), p(t)), written in ring operations only so that it can
/// be evaluated on Jet-valued initial data. Must return (x0, z0) at t = 0.
using BaseSolution = std::function<JetPhase(double t, std::span<const Jet> x0, std::span<const Jet> z0)>;

/// Order-N solution sample: q_i(n)(t), p_i(n)(t).
struct JetSolutionSample
{
    double t = 0.0;
    Eigen::MatrixXd q;
    Eigen::MatrixXd p;

    PhaseState state() const { return PhaseState{static_cast<int>(q.cols()) - 1, q, p}; }
};

/// Jet transformation: evaluates `base` at x_j0 -> sum_n x_jn v^n,
/// z_j0 -> sum_n z_jn v^n and reads off the coefficient of v^n as
/// q_j(n)(t) = D_n(q_j(0)(t)). Works in whatever chart `base` uses.
JetSolutionSample jet_lift(const BaseSolution &base, const Eigen::MatrixXd &x, const Eigen::MatrixXd &z, double t);

namespace sl2
{

struct Point
{
    Jet q;
    Jet p;
};

/// Open sl(2) Toda solution in the rescaled chart (qddot = -exp(2q)):
/// q(t) = x0 - log(cosh(t beta) - (z0/beta) sinh(t beta)), beta = sqrt(z0^2 + exp(2 x0)),
/// and p(t) = z0 - exp(2 x0) sinh(t beta) / (beta cosh(t beta) - z0 sinh(t beta)).
Point base(double t, const Jet &x0, const Jet &z0);

/// base() as a BaseSolution with a single Cartan index (rescaled chart).
BaseSolution base_solution();

/// Factorization solution of the sl(2) Takiff flow. Input and output are
/// generic-chart coefficient states (y_1 = sqrt(2) y).
CoeffState factorized(double t, const CoeffState &cs0);

} // namespace sl2

/// Closed-form solution of the open type-A Toda chain (N = 0, generic chart)
/// by LDU factorization of exp(-t L0): L(t) = theta_+ L0 theta_+^{-1}.
/// Requires root data from type_a().
BaseSolution type_a_base_solution(const RootData &rd);

/// kappa(v) with cosh(2 kappa) = 2 exp(x0(v) - x1(v)) - 1, computed in the
/// truncated ring. Requires 2 exp(x0_0 - x1_0) - 1 > 1.
Jet soliton_kappa(const Jet &x0, const Jet &x1);

/// r_j(v, t) = -log(1 + gamma^2 sech^2(kappa j + sign gamma t)), gamma = sinh(kappa),
/// with r_j = q_{j+1} - q_j. `sign` is +1 or -1.
Jet soliton(int j, double t, const Jet &kappa, int sign);

/// Positions q_j(n) on sites first..last with q_j = -sum_{i >= j} r_i
/// (particles at rest far ahead). Rows are sites, columns are orders.
Eigen::MatrixXd soliton_positions(int first, int last, double t, const Jet &kappa, int sign);

} // namespace takiff

#endif
