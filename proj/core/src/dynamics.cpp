#include "takiff/dynamics.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "takiff/errors.hpp"
#include "takiff/jet.hpp"

namespace takiff
{

PhaseRates eom_rhs(const PhaseState &ps, const RootData &rd)
{
    const Eigen::MatrixXd big_q = root_positions(ps, rd);
    // force(alpha, n) = (exp sum_k Q(alpha,k) v^k)_n
    Eigen::MatrixXd force(big_q.rows(), big_q.cols());
    for (Eigen::Index a = 0; a < big_q.rows(); ++a) {
        const Jet e = exp(row_jet(big_q, a));
        for (Eigen::Index n = 0; n < big_q.cols(); ++n) {
            force(a, n) = e[static_cast<std::size_t>(n)];
        }
    }
    return PhaseRates{ps.p, -rd.pairing.transpose() * force};
}

Scheme parse_scheme(std::string_view name)
{
    if (name == "rk4") {
        return Scheme::rk4;
    }
    if (name == "leapfrog") {
        return Scheme::leapfrog;
    }
    throw InvalidArgument("unknown integration scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(Scheme s) { return s == Scheme::rk4 ? "rk4" : "leapfrog"; }

namespace
{

PhaseState advance(const PhaseState &ps, const PhaseRates &r, double h)
{
    return PhaseState{ps.order, ps.q + h * r.dq, ps.p + h * r.dp};
}

PhaseState rk4_step(const PhaseState &ps, const RootData &rd, double dt)
{
    const PhaseRates k1 = eom_rhs(ps, rd);
    const PhaseRates k2 = eom_rhs(advance(ps, k1, 0.5 * dt), rd);
    const PhaseRates k3 = eom_rhs(advance(ps, k2, 0.5 * dt), rd);
    const PhaseRates k4 = eom_rhs(advance(ps, k3, dt), rd);
    return PhaseState{ps.order, ps.q + dt / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq),
                      ps.p + dt / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp)};
}

// Kick-drift-kick. The kinetic term 1/2 sum p_i(j) p_i(N-j) gives qdot = p
// exactly, so the potential kick only needs positions.
PhaseState leapfrog_step(const PhaseState &ps, const RootData &rd, double dt)
{
    PhaseState out = ps;
    out.p += 0.5 * dt * eom_rhs(out, rd).dp;
    out.q += dt * out.p;
    out.p += 0.5 * dt * eom_rhs(out, rd).dp;
    return out;
}

bool finite_and_bounded(const PhaseState &ps)
{
    auto ok = [](const Eigen::MatrixXd &m) {
        return m.allFinite() && (m.size() == 0 || m.cwiseAbs().maxCoeff() <= blowup_threshold);
    };
    return ok(ps.q) && ok(ps.p);
}

} // namespace

PhaseState step(const PhaseState &ps, const RootData &rd, double dt, Scheme scheme)
{
    return scheme == Scheme::rk4 ? rk4_step(ps, rd, dt) : leapfrog_step(ps, rd, dt);
}

long step_count(double dt, double horizon)
{
    return static_cast<long>(std::floor(horizon / dt * (1.0 + 1e-12)));
}

Trajectory integrate(const PhaseState &ps0, const RootData &rd, double dt, double horizon, Scheme scheme,
                     std::optional<std::vector<ConservedIndex>> tracked)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("integrate: dt must be positive");
    }
    if (!(horizon >= dt)) {
        throw InvalidArgument("integrate: horizon must be >= dt");
    }
    if (ps0.q.rows() != rd.cartan_dim()) {
        throw InvalidArgument("integrate: initial state shape does not match root data");
    }

    Trajectory tr;
    if (tracked) {
        tr.tracked = std::move(*tracked);
    } else if (rd.rep) {
        tr.tracked = conserved_family(rd, ps0.order);
    }
    if (!tr.tracked.empty()) {
        rd.representation();
    }

    const long steps = step_count(dt, horizon);
    tr.times.reserve(static_cast<std::size_t>(steps + 1));
    tr.states.reserve(static_cast<std::size_t>(steps + 1));

    auto record = [&](double t, const PhaseState &ps) {
        const CoeffState cs = to_coeff(ps, rd);
        tr.times.push_back(t);
        tr.states.push_back(ps);
        tr.hamiltonian.push_back(hamiltonian(cs));
        std::vector<double> values;
        values.reserve(tr.tracked.size());
        for (const auto &idx : tr.tracked) {
            values.push_back(conserved(cs, rd, idx.k, idx.degree));
        }
        tr.conserved.push_back(std::move(values));
    };

    spdlog::debug("integrate: {} steps of dt={} with {}", steps, dt, scheme_name(scheme));
    PhaseState ps = ps0;
    record(0.0, ps);
    for (long n = 1; n <= steps; ++n) {
        ps = step(ps, rd, dt, scheme);
        const double t = static_cast<double>(n) * dt;
        if (!finite_and_bounded(ps)) {
            throw NonFiniteState("integrate: state left the finite range at t=" + std::to_string(t), t);
        }
        record(t, ps);
    }
    return tr;
}

BlockToeplitz m_matrix(const CoeffState &cs, const RootData &rd)
{
    const auto &rep = rd.representation();
    BlockToeplitz m(cs.order, rep.dim);
    for (int k = 0; k <= cs.order; ++k) {
        for (int a = 0; a < rd.num_roots(); ++a) {
            m.block(k) += 0.5 * cs.b(a, k) * (rep.lowering[a] - rep.raising[a]);
        }
    }
    return m;
}

LaxMatrix lax_derivative(const PhaseState &ps, const RootData &rd, double h)
{
    const PhaseRates r = eom_rhs(ps, rd);
    const LaxMatrix plus = lax(to_coeff(advance(ps, r, h), rd), rd);
    const LaxMatrix minus = lax(to_coeff(advance(ps, r, -h), rd), rd);
    return (0.5 / h) * (plus - minus);
}

double lax_residual(const PhaseState &ps, const RootData &rd)
{
    const CoeffState cs = to_coeff(ps, rd);
    const LaxMatrix ldot = lax_derivative(ps, rd);
    return (ldot - commutator(m_matrix(cs, rd), lax(cs, rd))).block_norm();
}

} // namespace takiff
