#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "qres/error.hpp"
#include "qres/factor.hpp"
#include "qres/hyperplane.hpp"
#include "qres/square.hpp"

/**
 * Membership in S_{q,k}: does a finite set of integers contain a q-th power
 * modulo almost every prime?
 *
 *   - Any element that is 0 or a perfect q-th power settles it at once.
 *   - q = 2: member iff some odd-size subset multiplies to a perfect square.
 *   - odd q: member iff the associated hyperplanes cover F_q^r. A set of at
 *     most q elements without a perfect q-th power is never a member, so the
 *     covering search there only has to produce the uncovered point.
 *
 * Every verdict carries a witness that verify_witness re-checks from scratch.
 */

namespace qres
{
    struct PerfectPowerWitness
    {
        i64 element = 0;
    };

    struct OddSquareSubsetWitness
    {
        std::vector<i64> subset;
        BigInt root;
    };

    struct CoveringWitness
    {
        HyperplaneSet hyperplanes;
    };

    struct UncoveredPointWitness
    {
        HyperplaneSet hyperplanes;
        ExponentVector point;
    };

    struct NoOddSubsetWitness
    {
        PrimeBasis basis;
    };

    using Witness = std::variant<PerfectPowerWitness, OddSquareSubsetWitness, CoveringWitness, UncoveredPointWitness,
                                 NoOddSubsetWitness>;

    struct Verdict
    {
        u64 q = 2;
        bool member = false;
        Witness witness;

        std::string_view kind() const
        {
            constexpr std::string_view names[] = {"perfect_power", "odd_square_subset", "covering", "uncovered_point",
                                                  "no_odd_subset"};
            return names[witness.index()];
        }

        /// Primes the witness is expressed over; empty for a perfect power.
        PrimeBasis basis() const
        {
            return std::visit(
                [](const auto& w) -> PrimeBasis {
                    using W = std::decay_t<decltype(w)>;
                    if constexpr (std::is_same_v<W, CoveringWitness> || std::is_same_v<W, UncoveredPointWitness>)
                        return w.hyperplanes.basis();
                    else if constexpr (std::is_same_v<W, NoOddSubsetWitness>)
                        return w.basis;
                    else if constexpr (std::is_same_v<W, OddSquareSubsetWitness>)
                    {
                        std::vector<FactoredInteger> f;
                        for (i64 b : w.subset) f.push_back(factor(b));
                        return PrimeBasis::of(f, 2);
                    }
                    else
                        return PrimeBasis{};
                },
                witness);
        }
    };

    /// An element with its q-dependent data computed once (census reuse).
    struct PreparedElement
    {
        i64 value = 0;
        bool perfect_power = false;
        FactoredInteger factors; // unit for value 0; never consulted then

        static PreparedElement make(i64 value, u64 q)
        {
            PreparedElement e;
            e.value = value;
            e.perfect_power = is_perfect_qth_power(value, q);
            if (value != 0) e.factors = factor(value);
            return e;
        }
    };

    struct DecideOptions
    {
        unsigned workers = 1;
    };

    /// Stable deduplication; returns how many duplicates were dropped.
    inline std::size_t dedupe(std::vector<i64>& set)
    {
        std::vector<i64> out;
        out.reserve(set.size());
        for (i64 b : set)
            if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
        std::size_t dropped = set.size() - out.size();
        set = std::move(out);
        return dropped;
    }

    /// Decides for already prepared, duplicate-free elements.
    inline Verdict decide_prepared(std::span<const PreparedElement> set, u64 q, DecideOptions options = {})
    {
        require_prime(q);
        if (set.empty()) throw ContractError("decide: the set must be nonempty");

        for (const auto& e : set)
            if (e.perfect_power) return {q, true, PerfectPowerWitness{e.value}};

        std::vector<FactoredInteger> factors;
        factors.reserve(set.size());
        for (const auto& e : set) factors.push_back(e.factors);

        if (q == 2)
        {
            auto found = square_criterion(factors);
            if (!found) return {q, false, NoOddSubsetWitness{PrimeBasis::of(factors, 2)}};
            OddSquareSubsetWitness w;
            for (std::size_t i : found->indices) w.subset.push_back(set[i].value);
            w.root = std::move(found->root);
            return {q, true, std::move(w)};
        }

        auto h = build_hyperplanes(factors, q);
        // At most q hyperplanes never cover, so an uncovered point must exist
        // and the search may run past the enumeration limit.
        const bool small = set.size() <= q;
        auto result = covers(h, {options.workers, !small});
        if (result.covered)
        {
            if (small) throw ContractError("decide: at most q hyperplanes reported as a covering");
            return {q, true, CoveringWitness{std::move(h)}};
        }
        return {q, false, UncoveredPointWitness{std::move(h), std::move(*result.uncovered)}};
    }

    inline Verdict decide(std::span<const i64> set, u64 q, DecideOptions options = {})
    {
        require_prime(q);
        if (set.empty()) throw ContractError("decide: the set must be nonempty");
        std::vector<i64> unique(set.begin(), set.end());
        dedupe(unique);
        std::vector<PreparedElement> prepared;
        prepared.reserve(unique.size());
        for (i64 b : unique) prepared.push_back(PreparedElement::make(b, q));
        return decide_prepared(prepared, q, options);
    }

    namespace detail
    {
        inline BigInt magnitude(i64 b)
        {
            BigInt v = b;
            return v < 0 ? BigInt(-v) : v;
        }

        // Row j must be the exponent vector of rad_q(|b|): that holds iff
        // d = prod p_i^{row_i} divides |b| and |b| / d is a perfect q-th power.
        inline bool row_matches(i64 b, const PrimeBasis& basis, const ExponentVector& row, u64 q)
        {
            if (b == 0 || row.size() != basis.size()) return false;
            BigInt d = 1;
            for (std::size_t i = 0; i < basis.size(); ++i)
            {
                if (row.coords[i] >= q) return false;
                d *= boost::multiprecision::pow(BigInt(basis.primes()[i]), static_cast<unsigned>(row.coords[i]));
            }
            BigInt m = magnitude(b);
            if (m % d != 0) return false;
            BigInt rest = m / d;
            return is_perfect_qth_power(static_cast<i64>(rest), q);
        }

        inline bool rows_match(std::span<const i64> set, const HyperplaneSet& h, u64 q)
        {
            if (h.q() != q || h.rows().size() != set.size()) return false;
            for (std::size_t j = 0; j < set.size(); ++j)
                if (!row_matches(set[j], h.basis(), h.rows()[j], q)) return false;
            return true;
        }

        inline bool has_odd_square_subset_by_products(std::span<const i64> set)
        {
            const std::size_t n = set.size();
            for (u64 mask = 1; mask < (u64{1} << n); ++mask)
            {
                if (__builtin_popcountll(mask) % 2 == 0) continue;
                BigInt product = 1;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> i & 1u) product *= set[i];
                if (product < 0) continue;
                BigInt root = boost::multiprecision::sqrt(product);
                if (root * root == product) return true;
            }
            return false;
        }
    }

    /**
     * Re-derives the verdict's claim without trusting the code that made it:
     * perfect powers by root extraction, square subsets by multiplying out,
     * coverings by scanning all q^r points, uncovered points by inner products.
     * Returns false on any mismatch, including witnesses too large to recheck.
     */
    inline bool verify_witness(std::span<const i64> set_in, u64 q, const Verdict& verdict)
    {
        try
        {
            if (verdict.q != q || !is_prime(q) || set_in.empty()) return false;
            std::vector<i64> set(set_in.begin(), set_in.end());
            dedupe(set);
            auto contains = [&](i64 v) { return std::find(set.begin(), set.end(), v) != set.end(); };
            auto no_perfect_power = [&] {
                return std::none_of(set.begin(), set.end(), [&](i64 b) { return is_perfect_qth_power(b, q); });
            };

            return std::visit(
                [&](const auto& w) -> bool {
                    using W = std::decay_t<decltype(w)>;
                    if constexpr (std::is_same_v<W, PerfectPowerWitness>)
                    {
                        return verdict.member && contains(w.element) && is_perfect_qth_power(w.element, q);
                    }
                    else if constexpr (std::is_same_v<W, OddSquareSubsetWitness>)
                    {
                        if (!verdict.member || q != 2 || w.subset.size() % 2 == 0 || w.root < 0) return false;
                        auto sub = w.subset;
                        if (dedupe(sub) != 0) return false;
                        BigInt product = 1;
                        for (i64 b : w.subset)
                        {
                            if (!contains(b)) return false;
                            product *= b;
                        }
                        return product == w.root * w.root;
                    }
                    else if constexpr (std::is_same_v<W, CoveringWitness>)
                    {
                        if (!verdict.member || q == 2) return false;
                        if (!detail::rows_match(set, w.hyperplanes, q)) return false;
                        return !naive_least_uncovered(w.hyperplanes).has_value();
                    }
                    else if constexpr (std::is_same_v<W, UncoveredPointWitness>)
                    {
                        if (verdict.member || q == 2 || !no_perfect_power()) return false;
                        if (!detail::rows_match(set, w.hyperplanes, q)) return false;
                        if (w.point.size() != w.hyperplanes.dimension()) return false;
                        for (u64 c : w.point.coords)
                            if (c >= q) return false;
                        return !point_covered(w.hyperplanes, w.point.coords);
                    }
                    else
                    {
                        if (verdict.member || q != 2 || !no_perfect_power()) return false;
                        if (set.size() <= 16) return !detail::has_odd_square_subset_by_products(set);
                        // Too many subsets to multiply out; fall back to a second elimination.
                        return !square_criterion(std::span<const i64>(set)).has_value();
                    }
                },
                verdict.witness);
        }
        catch (const Error&)
        {
            return false;
        }
    }
}
