#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "takiff/errors.hpp"
#include "takiff/jet.hpp"
#include "takiff/solutions.hpp"

namespace takiff::app
{

using nlohmann::json;

namespace
{

// --- config parsing --------------------------------------------------------

template <typename T>
T read(const json &j, const char *key, const char *what)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError(std::string("missing or malformed '") + key + "' (" + what + ")");
    }
}

Eigen::MatrixXd read_matrix(const json &j, const std::string &what)
{
    if (!j.is_array() || j.empty()) {
        throw ConfigError(what + ": expected a nonempty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = -1;
    Eigen::MatrixXd m;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array()) {
            throw ConfigError(what + ": row " + std::to_string(r) + " is not an array");
        }
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ConfigError(what + ": ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json &x = row[static_cast<std::size_t>(c)];
            if (!x.is_number()) {
                throw ConfigError(what + ": non-numeric entry");
            }
            m(r, c) = x.get<double>();
        }
    }
    return m;
}

std::vector<double> read_vector(const json &j, const std::string &what)
{
    if (!j.is_array() || j.empty()) {
        throw ConfigError(what + ": expected a nonempty array of numbers");
    }
    std::vector<double> v;
    for (const auto &x : j) {
        if (!x.is_number()) {
            throw ConfigError(what + ": non-numeric entry");
        }
        v.push_back(x.get<double>());
    }
    return v;
}

std::vector<Eigen::MatrixXd> read_matrices(const json &j, const std::string &what)
{
    if (!j.is_array()) {
        throw ConfigError(what + ": expected an array of matrices");
    }
    std::vector<Eigen::MatrixXd> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(read_matrix(j[i], what + "[" + std::to_string(i) + "]"));
    }
    return out;
}

RootData read_algebra(const json &j)
{
    const auto kind = read<std::string>(j, "algebra", "\"A\", \"lattice\" or \"custom\"");
    if (kind == "A") {
        return type_a(read<int>(j, "rank", "positive integer"));
    }
    if (kind == "lattice") {
        const auto w = read<std::vector<int>>(j, "window", "[i_min, i_max]");
        if (w.size() != 2) {
            throw ConfigError("window must be [i_min, i_max]");
        }
        return lattice_window(w[0], w[1]);
    }
    if (kind == "custom") {
        Eigen::MatrixXd pairing = read_matrix(j.at("pairing"), "pairing");
        std::optional<Representation> rep;
        if (j.contains("rep")) {
            const json &r = j.at("rep");
            Representation rp;
            rp.dim = read<int>(r, "dim", "representation dimension");
            rp.cartan = read_matrices(r.at("cartan"), "rep.cartan");
            rp.raising = read_matrices(r.at("raising"), "rep.raising");
            rp.lowering = read_matrices(r.at("lowering"), "rep.lowering");
            rep = std::move(rp);
        }
        std::vector<int> exponents;
        if (j.contains("exponents")) {
            exponents = read<std::vector<int>>(j, "exponents", "list of integers");
        }
        return custom_root_data(std::move(pairing), std::move(rep), std::move(exponents));
    }
    throw ConfigError("unknown algebra '" + kind + "'");
}

SolverConfig read_solver(const json &j)
{
    SolverConfig s;
    const auto kind = read<std::string>(j, "kind", "factorized, jet or soliton");
    if (kind == "factorized") {
        s.kind = SolverKind::factorized;
    } else if (kind == "jet") {
        s.kind = SolverKind::jet;
    } else if (kind == "soliton") {
        s.kind = SolverKind::soliton;
    } else {
        throw ConfigError("unknown solver kind '" + kind + "'");
    }
    if (j.contains("times")) {
        s.times = read_vector(j.at("times"), "solver.times");
    }
    if (j.contains("kappa")) {
        s.kappa = read_vector(j.at("kappa"), "solver.kappa");
    }
    if (j.contains("x0")) {
        s.x0 = read_vector(j.at("x0"), "solver.x0");
    }
    if (j.contains("x1")) {
        s.x1 = read_vector(j.at("x1"), "solver.x1");
    }
    if (j.contains("sign")) {
        s.sign = read<int>(j, "sign", "+1 or -1");
        if (s.sign != 1 && s.sign != -1) {
            throw ConfigError("solver.sign must be +1 or -1");
        }
    }
    return s;
}

// --- output helpers --------------------------------------------------------

void dump_value(std::ostringstream &os, const json &j, int indent, int depth)
{
    const auto pad = [&](int d) {
        if (indent > 0) {
            os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                os << ',';
            }
            first = false;
            pad(depth + 1);
            os << json(it.key()).dump() << (indent > 0 ? ": " : ":");
            dump_value(os, it.value(), indent, depth + 1);
        }
        pad(depth);
        os << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << '[';
        bool first = true;
        for (const auto &x : j) {
            if (!first) {
                os << ',';
            }
            first = false;
            pad(depth + 1);
            dump_value(os, x, indent, depth + 1);
        }
        pad(depth);
        os << ']';
        return;
    }
    case json::value_t::number_float: {
        const double x = j.get<double>();
        // JSON has no representation for non-finite numbers.
        if (std::isfinite(x)) {
            os << format_double(x);
        } else {
            os << "null";
        }
        return;
    }
    default:
        os << j.dump();
    }
}

class Sink
{
public:
    Sink(const std::optional<std::filesystem::path> &path, std::ostream &fallback) : out_(&fallback)
    {
        if (path) {
            if (path->has_parent_path()) {
                std::filesystem::create_directories(path->parent_path());
            }
            file_.open(*path);
            if (!file_) {
                throw ConfigError("cannot open output file " + path->string());
            }
            out_ = &file_;
        }
    }
    std::ostream &stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream *out_;
};

std::string index_label(const char *prefix, int i, int n)
{
    return std::string(prefix) + "_" + std::to_string(i) + "_" + std::to_string(n);
}

std::string conserved_label(const ConservedIndex &c)
{
    return "f_" + std::to_string(c.k) + "_" + std::to_string(c.degree);
}

/// Shared CSV layout for simulate and the phase-space solvers:
/// t, q_{i}_{n}, p_{i}_{n}, H, f_{k}_{l}.
class PhaseCsv
{
public:
    PhaseCsv(std::ostream &os, const RunConfig &cfg, const std::vector<ConservedIndex> &tracked) : os_(os), cfg_(cfg)
    {
        os_ << "t";
        for (const char *prefix : {"q", "p"}) {
            for (int i = 0; i < cfg.root_data.cartan_dim(); ++i) {
                for (int n = 0; n <= cfg.order; ++n) {
                    os_ << ',' << index_label(prefix, cfg.root_data.first_index + i, n);
                }
            }
        }
        os_ << ",H";
        for (const auto &c : tracked) {
            os_ << ',' << conserved_label(c);
        }
        os_ << '\n';
    }

    /// `ps` is in the generic chart and is converted to the configured chart.
    void row(double t, const PhaseState &ps, double h, const std::vector<double> &conserved)
    {
        const PhaseState shown = cfg_.chart == Chart::sl2_rescaled ? sl2::to_rescaled(ps) : ps;
        os_ << format_double(t);
        for (const Eigen::MatrixXd *m : {&shown.q, &shown.p}) {
            for (Eigen::Index i = 0; i < m->rows(); ++i) {
                for (Eigen::Index n = 0; n < m->cols(); ++n) {
                    os_ << ',' << format_double((*m)(i, n));
                }
            }
        }
        os_ << ',' << format_double(h);
        for (double f : conserved) {
            os_ << ',' << format_double(f);
        }
        os_ << '\n';
    }

private:
    std::ostream &os_;
    const RunConfig &cfg_;
};

std::vector<double> sample_times(const RunConfig &cfg)
{
    if (cfg.solver && !cfg.solver->times.empty()) {
        return cfg.solver->times;
    }
    std::vector<double> times;
    const long steps = step_count(cfg.dt, cfg.horizon);
    for (long n = 0; n <= steps; ++n) {
        times.push_back(static_cast<double>(n) * cfg.dt);
    }
    return times;
}

std::vector<ConservedIndex> tracked_for(const RunConfig &cfg)
{
    return cfg.root_data.rep ? conserved_family(cfg.root_data, cfg.order) : std::vector<ConservedIndex>{};
}

std::vector<double> conserved_values(const CoeffState &cs, const RunConfig &cfg,
                                     const std::vector<ConservedIndex> &tracked)
{
    std::vector<double> out;
    for (const auto &c : tracked) {
        out.push_back(conserved(cs, cfg.root_data, c.k, c.degree));
    }
    return out;
}

bool is_sl2(const RunConfig &cfg) { return cfg.algebra == "A" && cfg.root_data.cartan_dim() == 1; }

/// Runs `body` and converts library exceptions into exit codes.
template <typename F>
int guarded(const char *command, F &&body)
{
    try {
        return body();
    } catch (const ConfigError &e) {
        spdlog::error("{}: configuration error: {}", command, e.what());
        return config_error;
    } catch (const NonFiniteState &e) {
        spdlog::error("{}: numeric blowup at t={}: {}", command, e.time(), e.what());
        return blowup;
    } catch (const InvalidArgument &e) {
        spdlog::error("{}: invalid input: {}", command, e.what());
        return config_error;
    } catch (const std::exception &e) {
        spdlog::error("{}: {}", command, e.what());
        return internal_error;
    }
}

// --- verify checks ---------------------------------------------------------

struct CheckResult
{
    bool pass = false;
    double worst = 0.0;
    double tolerance = 0.0;
    std::string error;
};

double tolerance_for(const std::string &name)
{
    if (name == "ring_axioms") {
        return 1e-12;
    }
    if (name == "darboux_roundtrip") {
        return 1e-10;
    }
    if (name == "independence") {
        return 0.05;
    }
    return 1e-6;
}

Jet random_jet(std::mt19937_64 &gen, std::size_t order, double lo0, double hi0)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> u0(lo0, hi0);
    Jet j(order);
    j[0] = u0(gen);
    for (std::size_t k = 1; k <= order; ++k) {
        j[k] = u(gen);
    }
    return j;
}

PhaseState random_phase(std::mt19937_64 &gen, const RootData &rd, int order)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PhaseState ps = PhaseState::zero(rd, order);
    for (Eigen::Index i = 0; i < ps.q.size(); ++i) {
        ps.q(i) = u(gen);
        ps.p(i) = u(gen);
    }
    return ps;
}

std::vector<PhaseState> verify_states(const RunConfig &cfg, std::mt19937_64 &gen)
{
    std::vector<PhaseState> states{cfg.initial};
    while (static_cast<int>(states.size()) < cfg.verify_samples) {
        states.push_back(random_phase(gen, cfg.root_data, cfg.order));
    }
    return states;
}

CheckResult check_ring_axioms(const RunConfig &cfg, std::mt19937_64 &gen)
{
    CheckResult r{true, 0.0, tolerance_for("ring_axioms"), {}};
    const auto order = static_cast<std::size_t>(cfg.order);
    for (int s = 0; s < cfg.verify_samples * 10; ++s) {
        const Jet a = random_jet(gen, order, 0.5, 2.0);
        const Jet b = random_jet(gen, order, -1.0, 1.0);
        const Jet one = Jet::constant(order, 1.0);
        const Jet root = sqrt_unit(a);
        r.worst = std::max({r.worst, max_abs_diff(a * inv(a), one), max_abs_diff(root * root, a),
                            max_abs_diff(exp(log_unit(a)), a), max_abs_diff(exp(a + b), exp(a) * exp(b))});
    }
    r.pass = r.worst <= r.tolerance;
    return r;
}

CheckResult check_roundtrip(const RunConfig &cfg, const std::vector<PhaseState> &states)
{
    CheckResult r{true, 0.0, tolerance_for("darboux_roundtrip"), {}};
    for (const auto &ps : states) {
        const PhaseState back = to_phase(to_coeff(ps, cfg.root_data), cfg.root_data);
        r.worst = std::max({r.worst, (back.q - ps.q).cwiseAbs().maxCoeff(), (back.p - ps.p).cwiseAbs().maxCoeff()});
    }
    r.pass = r.worst <= r.tolerance;
    return r;
}

CheckResult check_bracket(const RunConfig &cfg, const std::vector<PhaseState> &states)
{
    CheckResult r{true, 0.0, tolerance_for("bracket"), {}};
    const auto family = conserved_family(cfg.root_data, cfg.order);
    for (const auto &ps : states) {
        std::vector<Eigen::VectorXd> grads;
        for (const auto &idx : family) {
            grads.push_back(gradient(conserved_function(cfg.root_data, idx), ps));
        }
        for (std::size_t a = 0; a < grads.size(); ++a) {
            for (std::size_t b = a + 1; b < grads.size(); ++b) {
                const double v = bracket_from_gradients(grads[a], grads[b], ps.cartan_dim(), ps.order);
                r.worst = std::max(r.worst, std::abs(v));
            }
        }
    }
    r.pass = r.worst <= r.tolerance;
    return r;
}

CheckResult check_independence(const RunConfig &cfg, const std::vector<PhaseState> &states)
{
    // worst_value is the fraction of sampled states where the rank falls short.
    CheckResult r{true, 0.0, tolerance_for("independence"), {}};
    const int full = cfg.root_data.cartan_dim() * (cfg.order + 1);
    int deficient = 0;
    for (const auto &ps : states) {
        if (independence_rank(ps, cfg.root_data) < full) {
            ++deficient;
        }
    }
    r.worst = static_cast<double>(deficient) / static_cast<double>(states.size());
    r.pass = r.worst <= r.tolerance;
    return r;
}

CheckResult check_lax(const RunConfig &cfg, const std::vector<PhaseState> &states)
{
    CheckResult r{true, 0.0, tolerance_for("lax_residual"), {}};
    for (const auto &ps : states) {
        r.worst = std::max(r.worst, lax_residual(ps, cfg.root_data));
    }
    r.pass = r.worst <= r.tolerance;
    return r;
}

bool check_applicable(const std::string &name, const RunConfig &cfg)
{
    if (name == "bracket" || name == "independence" || name == "lax_residual") {
        return cfg.root_data.rep.has_value();
    }
    if (name == "darboux_roundtrip") {
        return cfg.root_data.is_square();
    }
    return true;
}

} // namespace

// --- public ------------------------------------------------------------------

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string dump_json(const json &j, int indent)
{
    std::ostringstream os;
    dump_value(os, j, indent, 0);
    return os.str();
}

const std::vector<std::string> &verify_check_names()
{
    static const std::vector<std::string> names{"ring_axioms", "darboux_roundtrip", "bracket", "independence",
                                                "lax_residual"};
    return names;
}

RunConfig parse_config(const json &j)
{
    if (!j.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    RunConfig cfg;
    try {
        cfg.algebra = read<std::string>(j, "algebra", "algebra kind");
        cfg.root_data = read_algebra(j);
    } catch (const InvalidArgument &e) {
        throw ConfigError(e.what());
    } catch (const json::exception &e) {
        throw ConfigError(e.what());
    }
    cfg.order = read<int>(j, "N", "truncation order");
    if (cfg.order < 0) {
        throw ConfigError("N must be >= 0");
    }

    if (j.contains("chart")) {
        const auto chart = read<std::string>(j, "chart", "generic or sl2-rescaled");
        if (chart == "generic") {
            cfg.chart = Chart::generic;
        } else if (chart == "sl2-rescaled") {
            cfg.chart = Chart::sl2_rescaled;
        } else {
            throw ConfigError("unknown chart '" + chart + "'");
        }
    }
    if (cfg.chart == Chart::sl2_rescaled && !is_sl2(cfg)) {
        throw ConfigError("the sl2-rescaled chart requires algebra A of rank 1");
    }

    const int s = cfg.root_data.cartan_dim();
    cfg.initial = PhaseState::zero(cfg.root_data, cfg.order);
    if (j.contains("initial")) {
        const json &init = j.at("initial");
        const auto shape_ok = [&](const Eigen::MatrixXd &m) { return m.rows() == s && m.cols() == cfg.order + 1; };
        const std::string shape = std::to_string(s) + "x" + std::to_string(cfg.order + 1);
        if (init.contains("preset")) {
            const auto preset = read<std::string>(init, "preset", "initial preset");
            if (preset != "zero-velocity") {
                throw ConfigError("unknown initial preset '" + preset + "'");
            }
            if (init.contains("p")) {
                throw ConfigError("the zero-velocity preset takes no 'p'");
            }
        } else if (init.contains("p")) {
            cfg.initial.p = read_matrix(init.at("p"), "initial.p");
            if (!shape_ok(cfg.initial.p)) {
                throw ConfigError("initial.p must be " + shape);
            }
        } else {
            throw ConfigError("initial needs 'p' or a preset");
        }
        cfg.initial.q = read_matrix(init.at("q"), "initial.q");
        if (!shape_ok(cfg.initial.q)) {
            throw ConfigError("initial.q must be " + shape);
        }
        if (cfg.chart == Chart::sl2_rescaled) {
            cfg.initial = sl2::from_rescaled(cfg.initial);
        }
    }

    if (j.contains("integrator")) {
        const json &integ = j.at("integrator");
        if (integ.contains("scheme")) {
            try {
                cfg.scheme = parse_scheme(read<std::string>(integ, "scheme", "rk4 or leapfrog"));
            } catch (const InvalidArgument &e) {
                throw ConfigError(e.what());
            }
        }
        cfg.dt = read<double>(integ, "dt", "time step");
        cfg.horizon = read<double>(integ, "T", "time horizon");
    }
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
        throw ConfigError("integrator.dt must be positive");
    }
    if (!(cfg.horizon >= cfg.dt) || !std::isfinite(cfg.horizon)) {
        throw ConfigError("integrator.T must be >= dt");
    }

    if (j.contains("outputs")) {
        const json &o = j.at("outputs");
        if (o.contains("trajectory_csv")) {
            cfg.trajectory_csv = read<std::string>(o, "trajectory_csv", "path");
        }
        if (o.contains("diagnostics_json")) {
            cfg.diagnostics_json = read<std::string>(o, "diagnostics_json", "path");
        }
        if (o.contains("report_json")) {
            cfg.report_json = read<std::string>(o, "report_json", "path");
        }
    }
    if (j.contains("verify")) {
        cfg.verify = read<std::vector<std::string>>(j, "verify", "list of check names");
        for (const auto &name : cfg.verify) {
            const auto &known = verify_check_names();
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                throw ConfigError("unknown verify check '" + name + "'");
            }
        }
    }
    if (j.contains("seed")) {
        cfg.seed = read<std::uint64_t>(j, "seed", "unsigned integer");
    }
    if (j.contains("verify_samples")) {
        cfg.verify_samples = read<int>(j, "verify_samples", "positive integer");
        if (cfg.verify_samples < 1) {
            throw ConfigError("verify_samples must be >= 1");
        }
    }
    if (j.contains("solver")) {
        cfg.solver = read_solver(j.at("solver"));
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

int cmd_simulate(const RunConfig &cfg, std::ostream &out)
{
    return guarded("simulate", [&] {
        const Trajectory tr = integrate(cfg.initial, cfg.root_data, cfg.dt, cfg.horizon, cfg.scheme);
        {
            Sink sink(cfg.trajectory_csv, out);
            PhaseCsv csv(sink.stream(), cfg, tr.tracked);
            for (std::size_t n = 0; n < tr.size(); ++n) {
                csv.row(tr.times[n], tr.states[n], tr.hamiltonian[n], tr.conserved[n]);
            }
        }

        json drift = json::object();
        for (std::size_t c = 0; c < tr.tracked.size(); ++c) {
            const double f0 = tr.conserved.front()[c];
            double worst = 0.0;
            for (const auto &row : tr.conserved) {
                worst = std::max(worst, std::abs(row[c] - f0) / (1.0 + std::abs(f0)));
            }
            drift[conserved_label(tr.tracked[c])] = worst;
        }
        double h_drift = 0.0;
        for (double h : tr.hamiltonian) {
            h_drift = std::max(h_drift, std::abs(h - tr.hamiltonian.front()) / (1.0 + std::abs(tr.hamiltonian.front())));
        }
        const json diag{{"algebra", cfg.root_data.name},
                        {"N", cfg.order},
                        {"scheme", std::string(scheme_name(cfg.scheme))},
                        {"dt", cfg.dt},
                        {"T", cfg.horizon},
                        {"steps", static_cast<long>(tr.size()) - 1},
                        {"final_time", tr.times.back()},
                        {"initial_H", tr.hamiltonian.front()},
                        {"final_H", tr.hamiltonian.back()},
                        {"max_relative_H_drift", h_drift},
                        {"max_relative_conserved_drift", drift}};
        if (cfg.diagnostics_json) {
            Sink sink(cfg.diagnostics_json, out);
            sink.stream() << dump_json(diag) << '\n';
        }
        spdlog::info("simulate: {} steps, final H = {}", tr.size() - 1, format_double(tr.hamiltonian.back()));
        return static_cast<int>(ok);
    });
}

int cmd_solve(const RunConfig &cfg, std::ostream &out)
{
    return guarded("solve", [&]() -> int {
        if (!cfg.solver) {
            throw ConfigError("solve needs a 'solver' section");
        }
        const SolverConfig &sc = *cfg.solver;
        const std::vector<double> times = sample_times(cfg);

        if (sc.kind == SolverKind::soliton) {
            if (cfg.algebra != "lattice") {
                spdlog::error("solve: the soliton solver needs a lattice window");
                return solver_unavailable;
            }
            const auto order = static_cast<std::size_t>(cfg.order);
            const auto as_jet = [&](const std::vector<double> &c, const char *what) {
                if (c.size() != order + 1) {
                    throw ConfigError(std::string("solver.") + what + " must have N+1 coefficients");
                }
                return Jet(c);
            };
            Jet kappa;
            if (sc.kappa) {
                kappa = as_jet(*sc.kappa, "kappa");
            } else if (sc.x0 && sc.x1) {
                kappa = soliton_kappa(as_jet(*sc.x0, "x0"), as_jet(*sc.x1, "x1"));
            } else {
                throw ConfigError("soliton solver needs 'kappa' or both 'x0' and 'x1'");
            }
            const int first = cfg.root_data.first_index;
            const int last = first + cfg.root_data.cartan_dim() - 1;

            Sink sink(cfg.trajectory_csv, out);
            std::ostream &os = sink.stream();
            os << "t";
            for (int i = first; i <= last; ++i) {
                for (int n = 0; n <= cfg.order; ++n) {
                    os << ',' << index_label("q", i, n);
                }
            }
            for (int i = first; i < last; ++i) {
                for (int n = 0; n <= cfg.order; ++n) {
                    os << ',' << index_label("r", i, n);
                }
            }
            os << '\n';
            for (double t : times) {
                const Eigen::MatrixXd q = soliton_positions(first, last, t, kappa, sc.sign);
                os << format_double(t);
                for (Eigen::Index i = 0; i < q.size(); ++i) {
                    os << ',' << format_double(q(i / q.cols(), i % q.cols()));
                }
                for (int i = first; i < last; ++i) {
                    const Jet r = soliton(i, t, kappa, sc.sign);
                    for (double c : r.coeffs()) {
                        os << ',' << format_double(c);
                    }
                }
                os << '\n';
            }
            return ok;
        }

        if (cfg.algebra != "A" || (sc.kind == SolverKind::factorized && !is_sl2(cfg))) {
            spdlog::error("solve: solver not available for {}", cfg.root_data.name);
            return solver_unavailable;
        }

        std::function<PhaseState(double)> at;
        if (sc.kind == SolverKind::factorized) {
            const CoeffState cs0 = to_coeff(cfg.initial, cfg.root_data);
            at = [&, cs0](double t) { return to_phase(sl2::factorized(t, cs0), cfg.root_data); };
        } else if (is_sl2(cfg)) {
            const PhaseState init = sl2::to_rescaled(cfg.initial);
            const BaseSolution base = sl2::base_solution();
            at = [init, base](double t) { return sl2::from_rescaled(jet_lift(base, init.q, init.p, t).state()); };
        } else {
            const BaseSolution base = type_a_base_solution(cfg.root_data);
            at = [&, base](double t) { return jet_lift(base, cfg.initial.q, cfg.initial.p, t).state(); };
        }

        const auto tracked = tracked_for(cfg);
        Sink sink(cfg.trajectory_csv, out);
        PhaseCsv csv(sink.stream(), cfg, tracked);
        for (double t : times) {
            const PhaseState ps = at(t);
            const CoeffState cs = to_coeff(ps, cfg.root_data);
            csv.row(t, ps, hamiltonian(cs), conserved_values(cs, cfg, tracked));
        }
        return ok;
    });
}

int cmd_verify(const RunConfig &cfg, std::ostream &out)
{
    return guarded("verify", [&] {
        std::mt19937_64 gen(cfg.seed);
        const std::vector<PhaseState> states = verify_states(cfg, gen);
        const std::vector<std::string> &names = cfg.verify.empty() ? verify_check_names() : cfg.verify;

        json report = json::object();
        bool all_pass = true;
        for (const auto &name : names) {
            if (!check_applicable(name, cfg)) {
                spdlog::info("verify: {} does not apply to {}, skipped", name, cfg.root_data.name);
                continue;
            }
            CheckResult r;
            try {
                if (name == "ring_axioms") {
                    r = check_ring_axioms(cfg, gen);
                } else if (name == "darboux_roundtrip") {
                    r = check_roundtrip(cfg, states);
                } else if (name == "bracket") {
                    r = check_bracket(cfg, states);
                } else if (name == "independence") {
                    r = check_independence(cfg, states);
                } else {
                    r = check_lax(cfg, states);
                }
            } catch (const Error &e) {
                r = CheckResult{false, std::numeric_limits<double>::quiet_NaN(), tolerance_for(name), e.what()};
                spdlog::error("verify: {} raised: {}", name, e.what());
            }
            json entry{{"pass", r.pass}, {"worst_value", r.worst}, {"tolerance", r.tolerance}};
            if (!r.error.empty()) {
                entry["error"] = r.error;
            }
            report[name] = entry;
            all_pass = all_pass && r.pass;
            spdlog::info("verify: {} {} (worst {})", name, r.pass ? "pass" : "FAIL", format_double(r.worst));
        }
        Sink sink(cfg.report_json, out);
        sink.stream() << dump_json(report) << '\n';
        return static_cast<int>(all_pass ? ok : verify_failed);
    });
}

} // namespace takiff::app
