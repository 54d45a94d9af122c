#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qres/error.hpp"
#include "qres/modular.hpp"

namespace qres
{
    struct PrimePower
    {
        u64 prime = 0;
        unsigned exponent = 0;

        friend constexpr auto operator<=>(const PrimePower&, const PrimePower&) = default;
    };

    /**
     * A nonzero integer as sign times a product of prime powers.
     *
     * Factors are kept sorted by prime with strictly positive exponents, so two
     * FactoredIntegers compare equal exactly when they represent the same value.
     */
    class FactoredInteger
    {
    public:
        FactoredInteger() = default;

        FactoredInteger(int sign, std::vector<PrimePower> factors) : sign_(sign), factors_(std::move(factors))
        {
            if (sign_ != 1 && sign_ != -1) throw ContractError("FactoredInteger: sign must be +1 or -1");
            std::sort(factors_.begin(), factors_.end());
            for (std::size_t i = 0; i < factors_.size(); ++i)
            {
                const auto& f = factors_[i];
                if (f.exponent == 0) throw ContractError("FactoredInteger: zero exponent");
                if (!is_prime(f.prime)) throw ContractError("FactoredInteger: composite key " + std::to_string(f.prime));
                if (i > 0 && factors_[i - 1].prime == f.prime) throw ContractError("FactoredInteger: repeated prime");
            }
        }

        int sign() const { return sign_; }
        std::span<const PrimePower> factors() const { return factors_; }
        bool is_unit() const { return factors_.empty(); }

        unsigned exponent_of(u64 p) const
        {
            auto it = std::lower_bound(factors_.begin(), factors_.end(), p,
                                       [](const PrimePower& f, u64 v) { return f.prime < v; });
            return it != factors_.end() && it->prime == p ? it->exponent : 0;
        }

        /// |value| if it fits in 63 bits.
        std::optional<u64> magnitude() const
        {
            u64 m = 1;
            constexpr u64 limit = static_cast<u64>(std::numeric_limits<i64>::max());
            for (const auto& f : factors_)
            {
                auto pw = checked_pow(f.prime, f.exponent, limit);
                if (!pw || m > limit / *pw) return std::nullopt;
                m *= *pw;
            }
            return m;
        }

        /// Recomposes sign * prod p^e; throws MagnitudeError if it does not fit.
        i64 value() const
        {
            auto m = magnitude();
            if (!m) throw MagnitudeError("FactoredInteger: value exceeds 2^63 - 1");
            return sign_ * static_cast<i64>(*m);
        }

        friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;

    private:
        int sign_ = 1;
        std::vector<PrimePower> factors_;
    };

    namespace detail
    {
        constexpr u64 trial_division_bound = 1'000'000;

        inline const std::vector<std::uint32_t>& small_primes()
        {
            static const std::vector<std::uint32_t> primes = [] {
                std::vector<bool> composite(trial_division_bound, false);
                std::vector<std::uint32_t> out;
                for (u64 i = 2; i < trial_division_bound; ++i)
                {
                    if (composite[i]) continue;
                    out.push_back(static_cast<std::uint32_t>(i));
                    for (u64 j = i * i; j < trial_division_bound; j += i) composite[j] = true;
                }
                return out;
            }();
            return primes;
        }

        inline u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

        // Brent's variant of Pollard rho. n is odd, composite and has no prime
        // factor below the trial division bound. The walk is seeded
        // deterministically and retried with the next constant on failure.
        inline u64 pollard_brent(u64 n)
        {
            for (u64 c = 1;; ++c)
            {
                u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
                const u64 m = 128;
                auto f = [&](u64 v) { return addmod(mulmod(v, v, n), c, n); };
                for (u64 r = 1; g == 1; r <<= 1)
                {
                    x = y;
                    for (u64 i = 0; i < r; ++i) y = f(y);
                    for (u64 k = 0; k < r && g == 1; k += m)
                    {
                        ys = y;
                        for (u64 i = 0; i < std::min(m, r - k); ++i)
                        {
                            y = f(y);
                            q = mulmod(q, x > y ? x - y : y - x, n);
                        }
                        g = gcd_u64(q, n);
                    }
                }
                if (g == n)
                {
                    do
                    {
                        ys = f(ys);
                        g = gcd_u64(x > ys ? x - ys : ys - x, n);
                    } while (g == 1);
                }
                if (g != n) return g;
            }
        }

        inline void split_large(u64 n, std::vector<u64>& out)
        {
            if (n == 1) return;
            if (n < trial_division_bound * trial_division_bound || is_prime(n))
            {
                out.push_back(n);
                return;
            }
            u64 d = pollard_brent(n);
            split_large(d, out);
            split_large(n / d, out);
        }
    }

    /**
     * Exact factorization of a nonzero 64-bit integer.
     *
     * Trial division removes every prime below 10^6; a cofactor left after that
     * is either prime (certified by deterministic Miller-Rabin) or split by
     * Brent-Pollard rho. Throws ZeroInputError for 0 and MagnitudeError for
     * INT64_MIN, whose magnitude is 2^63.
     */
    inline FactoredInteger factor(i64 n)
    {
        if (n == 0) throw ZeroInputError();
        if (n == std::numeric_limits<i64>::min()) throw MagnitudeError("|n| exceeds 2^63 - 1");
        int sign = n < 0 ? -1 : 1;
        u64 m = static_cast<u64>(n < 0 ? -n : n);

        std::vector<PrimePower> factors;
        for (std::uint32_t p : detail::small_primes())
        {
            if (static_cast<u64>(p) * p > m) break;
            if (m % p != 0) continue;
            unsigned e = 0;
            while (m % p == 0) { m /= p; ++e; }
            factors.push_back({p, e});
        }
        if (m > 1)
        {
            std::vector<u64> large;
            detail::split_large(m, large);
            std::sort(large.begin(), large.end());
            for (u64 p : large)
            {
                if (!factors.empty() && factors.back().prime == p) ++factors.back().exponent;
                else factors.push_back({p, 1});
            }
        }
        return FactoredInteger(sign, std::move(factors));
    }

    /**
     * The q-free part: every exponent reduced mod q, zeros dropped.
     * For q = 2 the sign survives (it is part of the square class); for odd q
     * it is discarded because -1 is itself a q-th power.
     */
    inline FactoredInteger rad_q(const FactoredInteger& n, u64 q)
    {
        require_prime(q);
        std::vector<PrimePower> reduced;
        for (const auto& f : n.factors())
        {
            auto e = static_cast<unsigned>(f.exponent % q);
            if (e != 0) reduced.push_back({f.prime, e});
        }
        return FactoredInteger(q == 2 ? n.sign() : 1, std::move(reduced));
    }

    /// True iff n = g^q for an integer g. Zero counts (0 = 0^q).
    inline bool is_perfect_qth_power(i64 n, u64 q)
    {
        require_prime(q);
        if (n == 0) return true;
        if (n < 0 && q == 2) return false;
        u64 m = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
        u64 root = integer_root(m, q);
        auto back = checked_pow(root, q);
        return back && *back == m;
    }

    /// Sorted, duplicate-free list of primes spanning a set's q-free parts.
    class PrimeBasis
    {
    public:
        PrimeBasis() = default;

        explicit PrimeBasis(std::vector<u64> primes) : primes_(std::move(primes))
        {
            std::sort(primes_.begin(), primes_.end());
            if (std::adjacent_find(primes_.begin(), primes_.end()) != primes_.end())
                throw ContractError("PrimeBasis: duplicate prime");
            for (u64 p : primes_)
                if (!is_prime(p)) throw ContractError("PrimeBasis: " + std::to_string(p) + " is not prime");
        }

        /// Every prime dividing rad_q(|b|) (rad_2(b) for q = 2) of some element.
        static PrimeBasis of(std::span<const FactoredInteger> elements, u64 q)
        {
            std::vector<u64> primes;
            for (const auto& b : elements)
            {
                const auto free_part = rad_q(b, q);
                for (const auto& f : free_part.factors()) primes.push_back(f.prime);
            }
            std::sort(primes.begin(), primes.end());
            primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
            PrimeBasis basis;
            basis.primes_ = std::move(primes);
            return basis;
        }

        std::span<const u64> primes() const { return primes_; }
        std::size_t size() const { return primes_.size(); }

        std::optional<std::size_t> index_of(u64 p) const
        {
            auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
            if (it == primes_.end() || *it != p) return std::nullopt;
            return static_cast<std::size_t>(it - primes_.begin());
        }

        friend bool operator==(const PrimeBasis&, const PrimeBasis&) = default;

    private:
        std::vector<u64> primes_;
    };

    /// Exponents mod q over a PrimeBasis; one extra leading sign slot when q = 2.
    struct ExponentVector
    {
        std::vector<u64> coords;

        bool is_zero() const
        {
            return std::all_of(coords.begin(), coords.end(), [](u64 c) { return c == 0; });
        }
        std::size_t size() const { return coords.size(); }

        friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
        friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;
    };

    inline ExponentVector exponent_vector(const FactoredInteger& b, u64 q, const PrimeBasis& basis)
    {
        require_prime(q);
        const std::size_t offset = q == 2 ? 1 : 0;
        ExponentVector v{std::vector<u64>(basis.size() + offset, 0)};
        if (q == 2) v.coords[0] = b.sign() < 0 ? 1 : 0;
        for (const auto& f : b.factors())
        {
            u64 e = f.exponent % q;
            auto idx = basis.index_of(f.prime);
            if (!idx)
            {
                if (e == 0) continue;
                throw ContractError("exponent_vector: prime " + std::to_string(f.prime) + " missing from basis");
            }
            v.coords[*idx + offset] = e;
        }
        return v;
    }

    /// Parses a decimal integer, rejecting anything outside the signed 64-bit range.
    inline i64 parse_integer(std::string_view text)
    {
        while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
        while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
        if (!text.empty() && text.front() == '+') text.remove_prefix(1);
        i64 value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc::result_out_of_range)
            throw MagnitudeError("integer out of range: " + std::string(text));
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
            throw ContractError("not an integer: '" + std::string(text) + "'");
        return value;
    }
}
