#ifndef TAKIFF_ERRORS_HPP
#define TAKIFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace takiff
{

// Base of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class OrderMismatch : public Error
{
public:
    using Error::Error;
};

class IndexOutOfRange : public Error
{
public:
    using Error::Error;
};

class InvalidArgument : public Error
{
public:
    using Error::Error;
};

// Leading coefficient too small for inversion in the truncated ring.
class NonUnit : public Error
{
public:
    using Error::Error;
};

class NonPositiveLeadingCoefficient : public Error
{
public:
    using Error::Error;
};

// Pairing matrix alpha_j(h_i) is not square or not invertible.
class SingularPairing : public Error
{
public:
    using Error::Error;
};

class MissingRepresentation : public Error
{
public:
    using Error::Error;
};

// Raised by the integrator when a coordinate leaves the finite range.
class NonFiniteState : public Error
{
public:
    NonFiniteState(const std::string &what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace takiff

#endif
