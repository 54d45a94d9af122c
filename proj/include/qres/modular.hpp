#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "qres/error.hpp"

/**
 * Word-size modular arithmetic.
 *
 * Everything here works on unsigned 64-bit operands; products go through
 * unsigned __int128 so no intermediate overflows. The primality test is
 * deterministic Miller-Rabin with a base set that is exact for every n < 2^64.
 */

namespace qres
{
    using u64 = std::uint64_t;
    using i64 = std::int64_t;
    using u128 = unsigned __int128;

    constexpr u64 mulmod(u64 a, u64 b, u64 m)
    {
        return static_cast<u64>(static_cast<u128>(a) * b % m);
    }

    constexpr u64 addmod(u64 a, u64 b, u64 m)
    {
        a %= m;
        b %= m;
        return a >= m - b ? a - (m - b) : a + b;
    }

    /// base^exp mod m by left-to-right square and multiply; m >= 1.
    constexpr u64 powmod(u64 base, u64 exp, u64 m)
    {
        if (m == 1) return 0;
        u64 result = 1;
        base %= m;
        while (exp != 0)
        {
            if (exp & 1u) result = mulmod(result, base, m);
            base = mulmod(base, base, m);
            exp >>= 1;
        }
        return result;
    }

    /// Reduces a signed value into [0, m).
    constexpr u64 reduce_signed(i64 a, u64 m)
    {
        if (a >= 0) return static_cast<u64>(a) % m;
        // -(a+1) avoids negating INT64_MIN
        u64 neg = (static_cast<u64>(-(a + 1)) + 1) % m;
        return neg == 0 ? 0 : m - neg;
    }

    namespace detail
    {
        constexpr bool miller_rabin_round(u64 n, u64 d, unsigned s, u64 a)
        {
            a %= n;
            if (a == 0) return true;
            u64 x = powmod(a, d, n);
            if (x == 1 || x == n - 1) return true;
            for (unsigned i = 1; i < s; ++i)
            {
                x = mulmod(x, x, n);
                if (x == n - 1) return true;
            }
            return false;
        }
    }

    constexpr bool is_prime(u64 n)
    {
        if (n < 2) return false;
        for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u})
        {
            if (n % p == 0) return n == p;
        }
        if (n < 41 * 41) return true;
        u64 d = n - 1;
        unsigned s = 0;
        while ((d & 1u) == 0) { d >>= 1; ++s; }
        // Jim Sinclair's seven bases: exact below 2^64.
        for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull})
        {
            if (!detail::miller_rabin_round(n, d, s, a)) return false;
        }
        return true;
    }

    /// base^exp if it does not exceed limit, otherwise nullopt.
    constexpr std::optional<u64> checked_pow(u64 base, u64 exp, u64 limit = std::numeric_limits<u64>::max())
    {
        u64 result = 1;
        for (u64 i = 0; i < exp; ++i)
        {
            if (base != 0 && result > limit / base) return std::nullopt;
            result *= base;
            if (result == 0) return 0; // base == 0
        }
        if (result > limit) return std::nullopt;
        return result;
    }

    /// floor(n^(1/k)) for k >= 1.
    inline u64 integer_root(u64 n, u64 k)
    {
        if (k == 0) throw ContractError("integer_root: k must be positive");
        if (k == 1 || n < 2) return n;
        if (k >= 64) return 1;
        auto guess = static_cast<u64>(std::pow(static_cast<long double>(n), 1.0L / static_cast<long double>(k)));
        // correct the floating estimate in both directions
        while (guess > 0 && !checked_pow(guess, k, n)) --guess;
        while (checked_pow(guess + 1, k, n)) ++guess;
        return guess;
    }

    /// Throws ContractError unless q is prime.
    inline void require_prime(u64 q, const char* what = "q")
    {
        if (!is_prime(q)) throw ContractError(std::string(what) + " must be prime, got " + std::to_string(q));
    }
}
