#ifndef TAKIFF_LIE_DATA_HPP
#define TAKIFF_LIE_DATA_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace takiff
{

/// Matrices of a faithful representation: an orthonormal Cartan basis H_i
/// (trace form) and root vectors E_j, F_j for the simple roots, normalized by
/// tr(E_j F_j) = 1.
struct Representation
{
    int dim = 0;
    std::vector<Eigen::MatrixXd> cartan;
    std::vector<Eigen::MatrixXd> raising;
    std::vector<Eigen::MatrixXd> lowering;
};

/// Root data consumed by the equations of motion and the Lax matrix.
///
/// `pairing(j, i)` holds alpha_j(h_i): one row per simple root, one column per
/// Cartan direction. Simple Lie algebras have a square pairing; lattice
/// windows have one more column than rows.
struct RootData
{
    std::string name;
    Eigen::MatrixXd pairing;
    std::vector<int> exponents;
    std::optional<Representation> rep;
    /// Label of the first Cartan index (0 for finite types, i_min for windows).
    int first_index = 1;

    int num_roots() const { return static_cast<int>(pairing.rows()); }
    int cartan_dim() const { return static_cast<int>(pairing.cols()); }
    bool is_square() const { return pairing.rows() == pairing.cols(); }

    /// Throws MissingRepresentation when `rep` is empty.
    const Representation &representation() const;
};

/// Defining representation of sl(s+1).
RootData type_a(int rank);

/// Free-end window {i_min..i_max} of the A_infinity lattice (no representation).
RootData lattice_window(int i_min, int i_max);

/// User-supplied data; shapes are checked, invariants are not (see check_root_data).
RootData custom_root_data(Eigen::MatrixXd pairing, std::optional<Representation> rep, std::vector<int> exponents);

/// Largest violation of the representation invariants:
/// tr(H_i H_j) = delta_ij, tr(E_j F_j) = 1, [H_i, E_j] = alpha_j(h_i) E_j
/// and [E_j, F_j] = sum_i alpha_j(h_i) H_i.
double representation_defect(const RootData &rd);

/// True when the pairing is square with full numerical rank.
bool pairing_nonsingular(const RootData &rd);

} // namespace takiff

#endif
