#include "takiff/jet.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "takiff/errors.hpp"

namespace takiff
{

namespace
{

void require_same_order(const Jet &a, const Jet &b, const char *op)
{
    if (a.order() != b.order()) {
        throw OrderMismatch(std::string(op) + ": jet orders differ (" + std::to_string(a.order()) + " vs "
                            + std::to_string(b.order()) + ")");
    }
}

} // namespace

Jet::Jet(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty()) {
        throw InvalidArgument("Jet: coefficient list must hold at least c_0");
    }
}

Jet Jet::constant(std::size_t order, double value)
{
    Jet j(order);
    j.coeffs_[0] = value;
    return j;
}

Jet Jet::variable(std::size_t order, double value)
{
    Jet j = constant(order, value);
    if (order >= 1) {
        j.coeffs_[1] = 1.0;
    }
    return j;
}

double Jet::coeff(std::size_t k) const
{
    if (k > order()) {
        throw IndexOutOfRange("Jet::coeff: index " + std::to_string(k) + " exceeds order " + std::to_string(order()));
    }
    return coeffs_[k];
}

Jet &Jet::operator+=(const Jet &rhs)
{
    require_same_order(*this, rhs, "operator+");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        coeffs_[k] += rhs.coeffs_[k];
    }
    return *this;
}

Jet &Jet::operator-=(const Jet &rhs)
{
    require_same_order(*this, rhs, "operator-");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        coeffs_[k] -= rhs.coeffs_[k];
    }
    return *this;
}

Jet &Jet::operator*=(const Jet &rhs)
{
    *this = mul(*this, rhs);
    return *this;
}

Jet &Jet::operator*=(double rhs)
{
    for (auto &c : coeffs_) {
        c *= rhs;
    }
    return *this;
}

Jet Jet::operator-() const
{
    Jet r = *this;
    for (auto &c : r.coeffs_) {
        c = -c;
    }
    return r;
}

Jet operator+(Jet lhs, const Jet &rhs) { return lhs += rhs; }
Jet operator-(Jet lhs, const Jet &rhs) { return lhs -= rhs; }
Jet operator*(const Jet &lhs, const Jet &rhs) { return mul(lhs, rhs); }
Jet operator+(Jet lhs, double rhs) { return lhs += rhs; }
Jet operator+(double lhs, Jet rhs) { return rhs += lhs; }
Jet operator-(Jet lhs, double rhs) { return lhs -= rhs; }
Jet operator-(double lhs, const Jet &rhs) { return (-rhs) += lhs; }
Jet operator*(Jet lhs, double rhs) { return lhs *= rhs; }
Jet operator*(double lhs, Jet rhs) { return rhs *= lhs; }

Jet mul(const Jet &a, const Jet &b)
{
    require_same_order(a, b, "mul");
    const std::size_t n = a.order();
    Jet c(n);
    for (std::size_t k = 0; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i <= k; ++i) {
            s += a[i] * b[k - i];
        }
        c[k] = s;
    }
    return c;
}

// All elementary functions below solve for the coefficients one degree at a
// time, so each costs O(N^2).

Jet inv(const Jet &a)
{
    if (!(std::abs(a[0]) >= unit_threshold)) {
        throw NonUnit("inv: constant term is not a unit");
    }
    const std::size_t n = a.order();
    Jet b(n);
    b[0] = 1.0 / a[0];
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t i = 1; i <= k; ++i) {
            s += a[i] * b[k - i];
        }
        b[k] = -s * b[0];
    }
    return b;
}

Jet sqrt_unit(const Jet &a)
{
    if (!(a[0] > 0.0)) {
        throw NonPositiveLeadingCoefficient("sqrt_unit: constant term must be positive");
    }
    const std::size_t n = a.order();
    Jet b(n);
    b[0] = std::sqrt(a[0]);
    const double half_inv = 0.5 / b[0];
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t i = 1; i < k; ++i) {
            s += b[i] * b[k - i];
        }
        b[k] = (a[k] - s) * half_inv;
    }
    return b;
}

// b = exp(a) satisfies b' = a' b, i.e. k b_k = sum_{i=1}^k i a_i b_{k-i}.
Jet exp(const Jet &a)
{
    const std::size_t n = a.order();
    Jet b(n);
    b[0] = std::exp(a[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t i = 1; i <= k; ++i) {
            s += static_cast<double>(i) * a[i] * b[k - i];
        }
        b[k] = s / static_cast<double>(k);
    }
    return b;
}

// b = log(a) satisfies a b' = a', i.e. k a_0 b_k = k a_k - sum_{i=1}^{k-1} i b_i a_{k-i}.
Jet log_unit(const Jet &a)
{
    if (!(a[0] > 0.0)) {
        throw NonPositiveLeadingCoefficient("log_unit: constant term must be positive");
    }
    const std::size_t n = a.order();
    Jet b(n);
    b[0] = std::log(a[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t i = 1; i < k; ++i) {
            s += static_cast<double>(i) * b[i] * a[k - i];
        }
        b[k] = (static_cast<double>(k) * a[k] - s) / (static_cast<double>(k) * a[0]);
    }
    return b;
}

Hyperbolics hyperbolics(const Jet &a)
{
    const Jet ep = exp(a);
    const Jet em = exp(-a);
    Hyperbolics h{0.5 * (ep - em), 0.5 * (ep + em), Jet(a.order()), Jet(a.order())};
    h.sech = inv(h.cosh);
    h.tanh = h.sinh * h.sech;
    return h;
}

double max_abs_diff(const Jet &a, const Jet &b)
{
    require_same_order(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k <= a.order(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

std::ostream &operator<<(std::ostream &os, const Jet &a)
{
    os << '[';
    for (std::size_t k = 0; k <= a.order(); ++k) {
        if (k) {
            os << ", ";
        }
        os << a[k];
    }
    return os << ']';
}

} // namespace takiff
