#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qres/criterion.hpp"
#include "qres/error.hpp"
#include "qres/factor.hpp"
#include "qres/parallel.hpp"

/**
 * Exact censuses of k-element subsets of the boxes
 *
 *   additive        [N]   = {-N, ..., N}
 *   multiplicative  [N]^x = {+-p_1^e_1 ... p_N^e_N : 0 <= e_i <= N}
 *
 * together with closed-form counts of subsets holding a perfect q-th power and
 * the bounding sums whose leading terms give the decay of S_{q,k}.
 */

namespace qres
{
    using Rational = boost::multiprecision::cpp_rational;

    enum class BoxKind
    {
        additive,
        multiplicative
    };

    inline std::string_view to_string(BoxKind kind)
    {
        return kind == BoxKind::additive ? "additive" : "multiplicative";
    }

    inline BoxKind parse_box_kind(std::string_view text)
    {
        if (text == "additive") return BoxKind::additive;
        if (text == "multiplicative") return BoxKind::multiplicative;
        throw ContractError("unknown box kind '" + std::string(text) + "'");
    }

    constexpr u64 max_multiplicative_n = 4;
    constexpr u64 max_census_subsets = 100'000'000;

    struct BoxSpec
    {
        BoxKind kind = BoxKind::additive;
        u64 n = 1;

        /// 2N+1 or 2(N+1)^N.
        BigInt size() const
        {
            if (kind == BoxKind::additive) return BigInt(2) * n + 1;
            return 2 * boost::multiprecision::pow(BigInt(n + 1), static_cast<unsigned>(n));
        }
    };

    /// The first n primes.
    inline std::vector<u64> first_primes(u64 n)
    {
        std::vector<u64> out;
        for (u64 c = 2; out.size() < n; ++c)
            if (is_prime(c)) out.push_back(c);
        return out;
    }

    /// Box elements in ascending order.
    inline std::vector<i64> enumerate_box(const BoxSpec& spec)
    {
        if (spec.n < 1) throw ContractError("enumerate_box: N must be at least 1");
        std::vector<i64> out;
        if (spec.kind == BoxKind::additive)
        {
            if (spec.n > max_census_subsets) throw GuardError("enumerate_box: additive N too large");
            const auto n = static_cast<i64>(spec.n);
            out.reserve(static_cast<std::size_t>(2 * n + 1));
            for (i64 v = -n; v <= n; ++v) out.push_back(v);
            return out;
        }
        if (spec.n > max_multiplicative_n)
            throw GuardError("enumerate_box: multiplicative N = " + std::to_string(spec.n) + " has " + spec.size().str() +
                             " elements; the limit is N <= " + std::to_string(max_multiplicative_n));

        const auto primes = first_primes(spec.n);
        std::vector<i64> positive{1};
        for (u64 p : primes)
        {
            std::vector<i64> next;
            for (i64 v : positive)
            {
                i64 w = v;
                for (u64 e = 0; e <= spec.n; ++e, w *= static_cast<i64>(p)) next.push_back(w);
            }
            positive = std::move(next);
        }
        for (i64 v : positive)
        {
            out.push_back(v);
            out.push_back(-v);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    inline BigInt binomial(const BigInt& n, u64 k)
    {
        if (n < 0 || BigInt(k) > n) return 0;
        BigInt result = 1;
        for (u64 i = 0; i < k; ++i) result = result * (n - i) / (i + 1);
        return result;
    }

    /// Number of perfect q-th powers (0 included) in the box, in closed form.
    inline BigInt perfect_powers_in_box(u64 q, const BoxSpec& spec)
    {
        require_prime(q);
        if (spec.kind == BoxKind::additive)
        {
            const u64 root = integer_root(spec.n, q);
            return q == 2 ? BigInt(root + 1) : BigInt(2 * root + 1);
        }
        // each exponent must be a multiple of q; the sign is free for odd q
        BigInt per_sign = boost::multiprecision::pow(BigInt(spec.n / q + 1), static_cast<unsigned>(spec.n));
        return q == 2 ? per_sign : 2 * per_sign;
    }

    struct PowerCount
    {
        BigInt exact;
        BigInt perfect_powers;
        BigInt lemma_bound;
    };

    /**
     * Bounding sum for subsets that contain a perfect q-th power, evaluated
     * term by term with the real-valued counts replaced by integer counts:
     * N^(1/q) by floor(N^(1/q)) and N/q by floor(N/q).
     */
    inline BigInt lemma_bound(u64 q, u64 k, const BoxSpec& spec)
    {
        require_prime(q);
        BigInt powers, rest;
        if (spec.kind == BoxKind::additive)
        {
            const u64 root = integer_root(spec.n, q);
            powers = q == 2 ? BigInt(root + 1) : BigInt(2 * root + 1);
            rest = BigInt(2) * spec.n;
        }
        else
        {
            BigInt per_sign = boost::multiprecision::pow(BigInt(spec.n / q + 1), static_cast<unsigned>(spec.n));
            powers = q == 2 ? per_sign : 2 * per_sign + 1;
            rest = spec.size();
        }
        BigInt sum = 0;
        for (u64 i = 1; i <= k; ++i) sum += binomial(powers, i) * binomial(rest, k - i);
        return sum;
    }

    /**
     * Bounding sum for members that hold no perfect q-th power.
     * q = 2: sum over odd r in [3, k] of C(M', r-1) C(M'', k-r) * (square multiples).
     * odd q: sum over r, s >= 1, r + s <= k, r != s (mod q) of
     *        C(M, r+s-1) C(M, k-r-s) * (q-th power multiples).
     */
    inline BigInt nonpower_bound(u64 q, u64 k, const BoxSpec& spec)
    {
        require_prime(q);
        const bool additive = spec.kind == BoxKind::additive;
        const BigInt size = spec.size();
        BigInt sum = 0;
        if (q == 2)
        {
            const BigInt multiples = additive ? BigInt(integer_root(spec.n, 2) + 1)
                                              : boost::multiprecision::pow(BigInt(spec.n / 2 + 1), static_cast<unsigned>(spec.n));
            for (u64 r = 3; r <= k; r += 2)
            {
                const BigInt first = additive ? BigInt(2) * spec.n : size;
                sum += binomial(first, r - 1) * binomial(size - r, k - r) * multiples;
            }
            return sum;
        }
        const BigInt multiples = additive ? BigInt(2 * integer_root(spec.n, q) + 1)
                                          : boost::multiprecision::pow(BigInt(spec.n / q + 1), static_cast<unsigned>(spec.n));
        for (u64 r = 1; r <= k; ++r)
            for (u64 s = 1; r + s <= k; ++s)
            {
                if (r % q == s % q) continue;
                sum += binomial(size, r + s - 1) * binomial(size, k - r - s) * multiples;
            }
        return sum;
    }

    /// Exact count of k-subsets with at least one perfect power: C(M,k) - C(M-s,k).
    inline PowerCount count_with_perfect_power(u64 q, u64 k, const BoxSpec& spec)
    {
        if (k < 1) throw ContractError("count_with_perfect_power: k must be at least 1");
        PowerCount out;
        const BigInt size = spec.size();
        out.perfect_powers = perfect_powers_in_box(q, spec);
        out.exact = binomial(size, k) - binomial(size - out.perfect_powers, k);
        out.lemma_bound = lemma_bound(q, k, spec);
        return out;
    }

    struct BoundConstants
    {
        u64 q = 2;
        u64 k = 1;
        Rational gamma; // additive leading coefficient of the non-power bound
        Rational eta;   // multiplicative leading coefficient of the non-power bound
    };

    inline BigInt factorial(u64 n)
    {
        BigInt f = 1;
        for (u64 i = 2; i <= n; ++i) f *= i;
        return f;
    }

    /**
     * Leading coefficients of the non-power bounding sums, exactly:
     *   q = 2:  2^(k-1) * sum_{r odd, 3 <= r <= k} 1 / ((r-1)! (k-r)!)
     *   odd q:  sum_{r,s >= 1, r+s <= k, r != s mod q} 2^k / ((r+s-1)! (k-r-s)!)
     * The additive (gamma) and multiplicative (eta) constants coincide.
     */
    inline BoundConstants bound_constants(u64 q, u64 k)
    {
        require_prime(q);
        if (k < 1) throw ContractError("bound_constants: k must be at least 1");
        Rational sum = 0;
        if (q == 2)
        {
            for (u64 r = 3; r <= k; r += 2) sum += Rational(BigInt(1), factorial(r - 1) * factorial(k - r));
            sum *= Rational(boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(k - 1)));
        }
        else
        {
            const BigInt two_k = boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(k));
            for (u64 r = 1; r <= k; ++r)
                for (u64 s = 1; r + s <= k; ++s)
                    if (r % q != s % q) sum += Rational(two_k, factorial(r + s - 1) * factorial(k - r - s));
        }
        return {q, k, sum, sum};
    }

    /// Rational as "p" or "p/q".
    inline std::string to_string(const Rational& r)
    {
        const BigInt num = boost::multiprecision::numerator(r);
        const BigInt den = boost::multiprecision::denominator(r);
        return den == 1 ? num.str() : num.str() + "/" + den.str();
    }

    /// num/den rounded half away from zero to `places` decimals; den >= 0.
    inline std::string fixed_decimal(const BigInt& num, const BigInt& den, unsigned places)
    {
        if (den == 0) return "0." + std::string(places, '0');
        if (num < 0) return "-" + fixed_decimal(-num, den, places);
        const BigInt scale = boost::multiprecision::pow(BigInt(10), places);
        const BigInt scaled = (num * scale * 2 + den) / (den * 2);
        std::string frac = BigInt(scaled % scale).str();
        return BigInt(scaled / scale).str() + "." + std::string(places - frac.size(), '0') + frac;
    }

    inline std::string fixed_decimal(const Rational& r, unsigned places)
    {
        return fixed_decimal(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r), places);
    }

    struct CensusRow
    {
        u64 q = 2;
        u64 k = 1;
        BoxSpec box;
        BigInt total;
        u64 members = 0;
        u64 with_perfect_power = 0;
        double elapsed_ms = 0;

        std::string ratio() const { return fixed_decimal(BigInt(members), total, 9); }

        /// members / N^(k-(1-1/q)) for [N], members * q^N / N^(Nk) for [N]^x.
        double normalized() const
        {
            const auto n = static_cast<long double>(box.n);
            const auto m = static_cast<long double>(members);
            if (box.kind == BoxKind::additive)
            {
                const long double exponent = static_cast<long double>(k) - (1.0L - 1.0L / static_cast<long double>(q));
                return static_cast<double>(m / std::pow(n, exponent));
            }
            return static_cast<double>(m * std::pow(static_cast<long double>(q), n) /
                                       std::pow(n, n * static_cast<long double>(k)));
        }
    };

    struct CensusOptions
    {
        unsigned workers = 1;
    };

    /**
     * Decides every k-subset of the box and tallies members and subsets with a
     * perfect q-th power. Subsets are walked in lexicographic index order; a
     * work block is all subsets sharing their first element, and per-block
     * tallies are summed in block order.
     */
    inline CensusRow run_census(u64 q, u64 k, const BoxSpec& spec, CensusOptions options = {})
    {
        require_prime(q);
        if (k < 1) throw ContractError("run_census: k must be at least 1");
        const auto start = std::chrono::steady_clock::now();

        CensusRow row;
        row.q = q;
        row.k = k;
        row.box = spec;
        row.total = binomial(spec.size(), k);
        if (row.total > max_census_subsets)
            throw GuardError("run_census: C(" + spec.size().str() + ", " + std::to_string(k) + ") = " + row.total.str() +
                             " subsets exceeds the limit of 10^8");

        const auto values = enumerate_box(spec);
        std::vector<PreparedElement> prepared;
        prepared.reserve(values.size());
        for (i64 v : values) prepared.push_back(PreparedElement::make(v, q));

        const std::size_t m = prepared.size();
        std::vector<u64> members(m, 0), with_power(m, 0);
        for_each_block(m, options.workers, [&](std::size_t first) {
            std::vector<std::size_t> idx{first};
            std::vector<PreparedElement> subset;
            subset.reserve(k);
            auto tally = [&] {
                subset.clear();
                bool has_power = false;
                for (std::size_t i : idx)
                {
                    subset.push_back(prepared[i]);
                    has_power = has_power || prepared[i].perfect_power;
                }
                if (has_power) ++with_power[first];
                if (has_power || decide_prepared(subset, q).member) ++members[first];
            };
            detail::for_each_combination(m, k, idx, first + 1, [&](const std::vector<std::size_t>&) {
                tally();
                return false;
            });
        });

        for (std::size_t i = 0; i < m; ++i)
        {
            row.members += members[i];
            row.with_perfect_power += with_power[i];
        }
        row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return row;
    }

    struct DecayReport
    {
        std::vector<CensusRow> rows;
        bool ratio_non_increasing = true;
        bool ratio_strictly_decreasing = true;
        bool normalized_non_increasing = true;
        double max_normalized = 0;
    };

    /// One census per N, plus monotonicity of the ratio and the largest normalized value.
    inline DecayReport decay_table(u64 q, u64 k, std::span<const u64> ns, BoxKind kind, CensusOptions options = {})
    {
        DecayReport report;
        for (u64 n : ns) report.rows.push_back(run_census(q, k, {kind, n}, options));
        for (std::size_t i = 0; i < report.rows.size(); ++i)
        {
            const auto& cur = report.rows[i];
            report.max_normalized = std::max(report.max_normalized, cur.normalized());
            if (i == 0) continue;
            const auto& prev = report.rows[i - 1];
            // compare members/total exactly by cross-multiplying
            const BigInt lhs = BigInt(cur.members) * prev.total;
            const BigInt rhs = BigInt(prev.members) * cur.total;
            if (lhs > rhs) report.ratio_non_increasing = false;
            if (lhs >= rhs) report.ratio_strictly_decreasing = false;
            if (cur.normalized() > prev.normalized()) report.normalized_non_increasing = false;
        }
        return report;
    }

    inline constexpr std::string_view census_csv_header =
        "q,k,kind,N,total,members,with_perfect_power,ratio,normalized,elapsed_ms";

    /// One CSV line (no newline). With timing off the elapsed column is 0.
    inline std::string to_csv(const CensusRow& row, bool timing = true)
    {
        char normalized[64];
        std::snprintf(normalized, sizeof normalized, "%.9f", row.normalized());
        std::string out = std::to_string(row.q) + "," + std::to_string(row.k) + "," + std::string(to_string(row.box.kind)) +
                          "," + std::to_string(row.box.n) + "," + row.total.str() + "," + std::to_string(row.members) +
                          "," + std::to_string(row.with_perfect_power) + "," + row.ratio() + "," + normalized + ",";
        out += timing ? std::to_string(static_cast<u64>(std::llround(row.elapsed_ms))) : "0";
        return out;
    }
}
