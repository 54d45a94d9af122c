#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qres/error.hpp"
#include "qres/modular.hpp"
#include "qres/parallel.hpp"

namespace qres
{
    namespace detail
    {
        inline std::vector<u64> simple_sieve(u64 limit)
        {
            std::vector<u64> out;
            if (limit < 2) return out;
            std::vector<bool> composite(limit + 1, false);
            for (u64 i = 2; i <= limit; ++i)
            {
                if (composite[i]) continue;
                out.push_back(i);
                for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
            }
            return out;
        }

        constexpr u64 sieve_segment = u64{1} << 18;
    }

    /// Primes <= limit in ascending order, by a segmented sieve of Eratosthenes.
    inline std::vector<u64> primes_up_to(u64 limit, unsigned workers = 1)
    {
        if (limit < 2) return {};
        if (limit > 10'000'000'000ull) throw GuardError("primes_up_to: limit above 10^10 is not supported");
        const auto base = detail::simple_sieve(integer_root(limit, 2));
        const u64 segments = limit / detail::sieve_segment + 1;
        std::vector<std::vector<u64>> found(segments);

        for_each_block(segments, workers, [&](std::size_t s) {
            const u64 lo = std::max<u64>(2, s * detail::sieve_segment);
            const u64 hi = std::min<u64>(limit, (s + 1) * detail::sieve_segment - 1);
            if (lo > hi) return;
            std::vector<bool> composite(hi - lo + 1, false);
            for (u64 p : base)
            {
                if (p * p > hi) break;
                u64 start = std::max(p * p, (lo + p - 1) / p * p);
                for (u64 j = start; j <= hi; j += p) composite[j - lo] = true;
            }
            for (u64 v = lo; v <= hi; ++v)
                if (!composite[v - lo]) found[s].push_back(v);
        });

        std::vector<u64> primes;
        for (auto& f : found) primes.insert(primes.end(), f.begin(), f.end());
        return primes;
    }

    /**
     * Whether x^q = a (mod p) is solvable. Multiples of p count (0 = 0^q).
     * When q does not divide p - 1, x -> x^q permutes the units, so every
     * residue is a q-th power; otherwise Euler's criterion generalises to
     * a^((p-1)/q) = 1 (mod p).
     */
    inline bool is_qth_residue(i64 a, u64 p, u64 q)
    {
        const u64 r = reduce_signed(a, p);
        if (r == 0) return true;
        if ((p - 1) % q != 0) return true;
        return powmod(r, (p - 1) / q, p) == 1;
    }

    struct DensityEstimate
    {
        static constexpr std::size_t sample_size = 32;

        u64 q = 2;
        std::vector<i64> set;
        u64 prime_limit = 0;
        u64 primes_tested = 0;
        u64 primes_hit = 0;
        std::vector<u64> failing_primes_sample;

        /// hits/tested, unreduced so both counts stay visible.
        std::string fraction() const { return std::to_string(primes_hit) + "/" + std::to_string(primes_tested); }

        /// Exact decimal rendering of the fraction, rounded half up to 6 places.
        std::string decimal() const
        {
            if (primes_tested == 0) return "0.000000";
            u128 scaled = (static_cast<u128>(primes_hit) * 1'000'000 * 2 + primes_tested) / (2 * static_cast<u128>(primes_tested));
            auto whole = static_cast<u64>(scaled / 1'000'000);
            auto frac = static_cast<u64>(scaled % 1'000'000);
            std::string f = std::to_string(frac);
            return std::to_string(whole) + "." + std::string(6 - f.size(), '0') + f;
        }

        double value() const { return primes_tested == 0 ? 0.0 : static_cast<double>(primes_hit) / static_cast<double>(primes_tested); }
    };

    /// Counts primes p <= limit for which some element of set is a q-th power mod p.
    inline DensityEstimate estimate_density(std::span<const i64> set, u64 q, u64 limit, unsigned workers = 1)
    {
        require_prime(q);
        if (set.empty()) throw ContractError("estimate_density: the set must be nonempty");
        DensityEstimate est;
        est.q = q;
        est.set.assign(set.begin(), set.end());
        est.prime_limit = limit;

        const auto primes = primes_up_to(limit, workers);
        constexpr std::size_t block = 4096;
        const std::size_t blocks = (primes.size() + block - 1) / block;
        std::vector<u64> hits(blocks, 0);
        std::vector<std::vector<u64>> failing(blocks);

        for_each_block(blocks, workers, [&](std::size_t b) {
            const std::size_t end = std::min(primes.size(), (b + 1) * block);
            for (std::size_t i = b * block; i < end; ++i)
            {
                const u64 p = primes[i];
                bool hit = std::any_of(set.begin(), set.end(), [&](i64 a) { return is_qth_residue(a, p, q); });
                if (hit) ++hits[b];
                else if (failing[b].size() < DensityEstimate::sample_size) failing[b].push_back(p);
            }
        });

        est.primes_tested = primes.size();
        for (std::size_t b = 0; b < blocks; ++b)
        {
            est.primes_hit += hits[b];
            for (u64 p : failing[b])
                if (est.failing_primes_sample.size() < DensityEstimate::sample_size) est.failing_primes_sample.push_back(p);
        }
        return est;
    }
}
