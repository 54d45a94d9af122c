#pragma once

#include <stdexcept>
#include <string>

namespace qres
{
    /// Base of every error the library raises.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Factoring or otherwise interpreting 0 where a nonzero integer is required.
    class ZeroInputError : public Error
    {
    public:
        ZeroInputError() : Error("zero has no prime factorization") {}
    };

    /// Input magnitude outside the supported range |n| <= 2^63 - 1.
    class MagnitudeError : public Error
    {
    public:
        using Error::Error;
    };

    /// A caller broke a documented precondition.
    class ContractError : public Error
    {
    public:
        using Error::Error;
    };

    /// An exact computation would exceed a size guard, so it is refused.
    class GuardError : public Error
    {
    public:
        using Error::Error;
    };
}
