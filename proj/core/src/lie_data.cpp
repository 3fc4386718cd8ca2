#include "takiff/lie_data.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "takiff/errors.hpp"

namespace takiff
{

const Representation &RootData::representation() const
{
    if (!rep) {
        throw MissingRepresentation("root data '" + name + "' carries no representation matrices");
    }
    return *rep;
}

RootData type_a(int rank)
{
    if (rank < 1) {
        throw InvalidArgument("type_a: rank must be >= 1");
    }
    const int s = rank;
    const int m = s + 1;

    // Gram-Schmidt on the diagonals of e_j - e_{j+1}, in order j = 1..s.
    std::vector<Eigen::VectorXd> diag;
    for (int j = 0; j < s; ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
        v(j) = 1.0;
        v(j + 1) = -1.0;
        for (const auto &u : diag) {
            v -= u.dot(v) * u;
        }
        diag.push_back(v / v.norm());
    }

    Representation rep;
    rep.dim = m;
    for (int i = 0; i < s; ++i) {
        rep.cartan.push_back(diag[i].asDiagonal());
    }
    for (int j = 0; j < s; ++j) {
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
        e(j, j + 1) = 1.0;
        rep.raising.push_back(e);
        rep.lowering.push_back(e.transpose());
    }

    RootData rd;
    rd.name = "A" + std::to_string(s);
    rd.pairing.resize(s, s);
    for (int j = 0; j < s; ++j) {
        for (int i = 0; i < s; ++i) {
            rd.pairing(j, i) = diag[i](j) - diag[i](j + 1);
        }
    }
    for (int e = 1; e <= s; ++e) {
        rd.exponents.push_back(e);
    }
    rd.rep = std::move(rep);
    rd.first_index = 1;
    return rd;
}

RootData lattice_window(int i_min, int i_max)
{
    if (i_max <= i_min) {
        throw InvalidArgument("lattice_window: need at least two sites (i_min < i_max)");
    }
    const int sites = i_max - i_min + 1;
    RootData rd;
    rd.name = "lattice[" + std::to_string(i_min) + "," + std::to_string(i_max) + "]";
    rd.pairing = Eigen::MatrixXd::Zero(sites - 1, sites);
    for (int r = 0; r < sites - 1; ++r) {
        rd.pairing(r, r) = 1.0;
        rd.pairing(r, r + 1) = -1.0;
    }
    rd.first_index = i_min;
    return rd;
}

RootData custom_root_data(Eigen::MatrixXd pairing, std::optional<Representation> rep, std::vector<int> exponents)
{
    if (pairing.rows() < 1 || pairing.cols() < 1) {
        throw InvalidArgument("custom root data: empty pairing matrix");
    }
    if (rep) {
        const auto m = rep->dim;
        if (m < 1 || static_cast<Eigen::Index>(rep->cartan.size()) != pairing.cols()
            || static_cast<Eigen::Index>(rep->raising.size()) != pairing.rows()
            || static_cast<Eigen::Index>(rep->lowering.size()) != pairing.rows()) {
            throw InvalidArgument("custom root data: representation does not match pairing shape");
        }
        auto bad = [m](const Eigen::MatrixXd &x) { return x.rows() != m || x.cols() != m; };
        if (std::any_of(rep->cartan.begin(), rep->cartan.end(), bad)
            || std::any_of(rep->raising.begin(), rep->raising.end(), bad)
            || std::any_of(rep->lowering.begin(), rep->lowering.end(), bad)) {
            throw InvalidArgument("custom root data: representation matrices must be dim x dim");
        }
    }
    for (int e : exponents) {
        if (e < 1) {
            throw InvalidArgument("custom root data: exponents must be positive");
        }
    }
    RootData rd;
    rd.name = "custom";
    rd.pairing = std::move(pairing);
    rd.rep = std::move(rep);
    rd.exponents = std::move(exponents);
    return rd;
}

double representation_defect(const RootData &rd)
{
    const auto &rep = rd.representation();
    const int s = rd.cartan_dim();
    const int r = rd.num_roots();
    double worst = 0.0;
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            const double target = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::abs((rep.cartan[i] * rep.cartan[j]).trace() - target));
        }
    }
    for (int a = 0; a < r; ++a) {
        const auto &e = rep.raising[a];
        const auto &f = rep.lowering[a];
        worst = std::max(worst, std::abs((e * f).trace() - 1.0));
        Eigen::MatrixXd coroot = Eigen::MatrixXd::Zero(rep.dim, rep.dim);
        for (int i = 0; i < s; ++i) {
            const auto &h = rep.cartan[i];
            const Eigen::MatrixXd comm = h * e - e * h - rd.pairing(a, i) * e;
            worst = std::max(worst, comm.cwiseAbs().maxCoeff());
            coroot += rd.pairing(a, i) * h;
        }
        worst = std::max(worst, (e * f - f * e - coroot).cwiseAbs().maxCoeff());
    }
    return worst;
}

bool pairing_nonsingular(const RootData &rd)
{
    if (!rd.is_square()) {
        return false;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(rd.pairing);
    lu.setThreshold(1e-12);
    return lu.isInvertible();
}

} // namespace takiff
