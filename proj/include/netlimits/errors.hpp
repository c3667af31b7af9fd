#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace netlimits
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Root finding on a constant or zero polynomial.
class NoRootsError : public Error
{
public:
    using Error::Error;
};

/// Division by, or a denominator equal to, the zero polynomial.
class ZeroPolynomialError : public Error
{
public:
    using Error::Error;
};

/// Input data inconsistent with what an operation was told to expect
/// (a point that is not a pole, a wrong multiplicity, ...).
class DataError : public Error
{
public:
    using Error::Error;
};

/// Evaluation at or within the guard distance of a pole.
class NearSingularityError : public Error
{
public:
    NearSingularityError(const std::string& what, std::complex<double> pole)
        : Error(what), pole_(pole)
    {
    }

    std::complex<double> pole() const noexcept { return pole_; }

private:
    std::complex<double> pole_;
};

/// The closed form in zeta is too close to |zeta| = 1 to be trusted;
/// callers should fall back to another evaluation method.
class ConditioningError : public Error
{
public:
    using Error::Error;
};

/// Evaluation at a closed-loop pole of the network (singular system).
class ClosedLoopPoleError : public Error
{
public:
    using Error::Error;
};

/// An analysis refused because a premise of the analysis does not hold.
class PremiseError : public Error
{
public:
    PremiseError(const std::string& premise, const std::string& detail)
        : Error(premise + ": " + detail), premise_(premise)
    {
    }

    const std::string& premise() const noexcept { return premise_; }

private:
    std::string premise_;
};

} // namespace netlimits
