#ifndef TAKIFF_JET_HPP
#define TAKIFF_JET_HPP

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace takiff
{

/// Element of the truncated polynomial ring R[v]/<v^{N+1}>.
///
/// Coefficient k multiplies v^k. Products silently drop every degree above
/// the order, so a Jet of order N behaves like a Taylor polynomial of
/// degree N. Binary operations require equal orders and throw
/// OrderMismatch otherwise.
class Jet
{
public:
    /// Zero of order 0.
    Jet() : coeffs_(1, 0.0) {}
    /// Zero of the given order.
    explicit Jet(std::size_t order) : coeffs_(order + 1, 0.0) {}
    /// Coefficients c_0..c_N; the order is size - 1 and must be >= 0.
    explicit Jet(std::vector<double> coeffs);
    Jet(std::initializer_list<double> coeffs) : Jet(std::vector<double>(coeffs)) {}

    static Jet constant(std::size_t order, double value);
    /// value + v (the generator shifted by a constant).
    static Jet variable(std::size_t order, double value = 0.0);

    std::size_t order() const noexcept { return coeffs_.size() - 1; }

    /// Bounds-checked coefficient access.
    double coeff(std::size_t k) const;
    double operator[](std::size_t k) const noexcept { return coeffs_[k]; }
    double &operator[](std::size_t k) noexcept { return coeffs_[k]; }

    std::span<const double> coeffs() const noexcept { return coeffs_; }

    Jet &operator+=(const Jet &rhs);
    Jet &operator-=(const Jet &rhs);
    Jet &operator*=(const Jet &rhs);
    Jet &operator+=(double rhs)
    {
        coeffs_[0] += rhs;
        return *this;
    }
    Jet &operator-=(double rhs)
    {
        coeffs_[0] -= rhs;
        return *this;
    }
    Jet &operator*=(double rhs);

    Jet operator-() const;

    friend bool operator==(const Jet &, const Jet &) = default;

private:
    std::vector<double> coeffs_;
};

Jet operator+(Jet lhs, const Jet &rhs);
Jet operator-(Jet lhs, const Jet &rhs);
Jet operator*(const Jet &lhs, const Jet &rhs);
Jet operator+(Jet lhs, double rhs);
Jet operator+(double lhs, Jet rhs);
Jet operator-(Jet lhs, double rhs);
Jet operator-(double lhs, const Jet &rhs);
Jet operator*(Jet lhs, double rhs);
Jet operator*(double lhs, Jet rhs);

/// Ring product, c_k = sum_{i<=k} a_i b_{k-i}.
Jet mul(const Jet &a, const Jet &b);

/// Multiplicative inverse. Throws NonUnit when |a_0| < unit_threshold.
Jet inv(const Jet &a);

/// Square root with positive constant term. Requires a_0 > 0.
Jet sqrt_unit(const Jet &a);

Jet exp(const Jet &a);

/// Logarithm of a series with positive constant term.
Jet log_unit(const Jet &a);

struct Hyperbolics
{
    Jet sinh;
    Jet cosh;
    Jet tanh;
    Jet sech;
};

Hyperbolics hyperbolics(const Jet &a);

/// Smallest |a_0| accepted by inv().
inline constexpr double unit_threshold = 1e-300;

/// Largest |c_k - d_k| over all coefficients; orders must match.
double max_abs_diff(const Jet &a, const Jet &b);

std::ostream &operator<<(std::ostream &os, const Jet &a);

} // namespace takiff

#endif
