#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qres/error.hpp"
#include "qres/factor.hpp"

namespace qres
{
    using BigInt = boost::multiprecision::cpp_int;

    /// An odd-size subset (indices into the input, ascending) whose product is root^2.
    struct SquareSubset
    {
        std::vector<std::size_t> indices;
        BigInt root;
    };

    namespace detail
    {
        using Bits = std::vector<u64>;

        inline void flip(Bits& b, std::size_t i) { b[i / 64] ^= u64{1} << (i % 64); }

        inline void xor_into(Bits& dst, const Bits& src)
        {
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
        }

        inline std::optional<std::size_t> top_bit(const Bits& b)
        {
            for (std::size_t w = b.size(); w-- > 0;)
                if (b[w] != 0) return w * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(b[w])));
            return std::nullopt;
        }

        // Parity vectors over (sign, basis primes) for q = 2.
        inline std::vector<Bits> parity_vectors(std::span<const FactoredInteger> elements, std::size_t& width)
        {
            auto basis = PrimeBasis::of(elements, 2);
            width = basis.size() + 1;
            const std::size_t words = (width + 1 + 63) / 64; // one spare bit for the cardinality parity
            std::vector<Bits> out;
            out.reserve(elements.size());
            for (const auto& b : elements)
            {
                Bits bits(words, 0);
                auto v = exponent_vector(rad_q(b, 2), 2, basis);
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (v.coords[i] != 0) flip(bits, i);
                out.push_back(std::move(bits));
            }
            return out;
        }

        inline BigInt square_root_of_product(std::span<const FactoredInteger> elements, std::span<const std::size_t> subset)
        {
            std::map<u64, unsigned> exponents;
            for (std::size_t i : subset)
                for (const auto& f : elements[i].factors()) exponents[f.prime] += f.exponent;
            BigInt root = 1;
            for (const auto& [p, e] : exponents)
            {
                if (e % 2 != 0) throw ContractError("square_root_of_product: product is not a square");
                root *= boost::multiprecision::pow(BigInt(p), e / 2);
            }
            return root;
        }

        template <typename Visit>
        bool for_each_combination(std::size_t n, std::size_t size, std::vector<std::size_t>& chosen, std::size_t from, Visit&& visit)
        {
            if (chosen.size() == size) return visit(chosen);
            for (std::size_t i = from; i + (size - chosen.size()) <= n; ++i)
            {
                chosen.push_back(i);
                if (for_each_combination(n, size, chosen, i + 1, visit)) return true;
                chosen.pop_back();
            }
            return false;
        }
    }

    /**
     * Looks for an odd-size subset whose product is a perfect square in Z.
     *
     * Existence is decided by elimination over GF(2): each element maps to its
     * (sign, prime-exponent) parity vector extended by a 1 in a cardinality
     * slot, and a solution exists iff the vector that is zero everywhere except
     * that slot lies in their span. If it does, the witness is the smallest such
     * subset, ties broken by the lexicographic order of input positions.
     */
    inline std::optional<SquareSubset> square_criterion(std::span<const FactoredInteger> elements)
    {
        const std::size_t n = elements.size();
        if (n == 0) return std::nullopt;
        std::size_t width = 0;
        auto vectors = detail::parity_vectors(elements, width);
        const std::size_t parity_bit = width;

        // Elimination: keep an xor basis keyed by leading bit.
        std::map<std::size_t, detail::Bits> pivots;
        for (const auto& v : vectors)
        {
            auto row = v;
            detail::flip(row, parity_bit);
            while (auto top = detail::top_bit(row))
            {
                auto it = pivots.find(*top);
                if (it == pivots.end())
                {
                    pivots.emplace(*top, std::move(row));
                    break;
                }
                detail::xor_into(row, it->second);
            }
        }
        detail::Bits target(vectors.front().size(), 0);
        detail::flip(target, parity_bit);
        while (auto top = detail::top_bit(target))
        {
            auto it = pivots.find(*top);
            if (it == pivots.end()) return std::nullopt;
            detail::xor_into(target, it->second);
        }

        // A solution exists; find the least one by size, then position.
        std::map<detail::Bits, std::vector<std::size_t>> positions;
        for (std::size_t i = 0; i < n; ++i) positions[vectors[i]].push_back(i);

        for (std::size_t size = 1; size <= n; size += 2)
        {
            std::vector<std::size_t> chosen;
            std::optional<std::vector<std::size_t>> hit;
            detail::for_each_combination(n, size - 1, chosen, 0, [&](const std::vector<std::size_t>& prefix) {
                detail::Bits need(vectors.front().size(), 0);
                for (std::size_t i : prefix) detail::xor_into(need, vectors[i]);
                auto it = positions.find(need);
                if (it == positions.end()) return false;
                const std::size_t after = prefix.empty() ? 0 : prefix.back() + 1;
                auto pos = std::lower_bound(it->second.begin(), it->second.end(), after);
                if (pos == it->second.end()) return false;
                hit = prefix;
                hit->push_back(*pos);
                return true;
            });
            if (hit)
            {
                auto root = detail::square_root_of_product(elements, *hit);
                return SquareSubset{std::move(*hit), std::move(root)};
            }
        }
        throw ContractError("square_criterion: elimination found a solution the search did not"); // unreachable
    }

    struct SquareSubsetValues
    {
        std::vector<i64> subset;
        BigInt root;
    };

    /// Value-level wrapper: B must be nonzero and free of perfect squares.
    inline std::optional<SquareSubsetValues> square_criterion(std::span<const i64> set)
    {
        std::vector<FactoredInteger> elements;
        elements.reserve(set.size());
        for (i64 b : set)
        {
            if (is_perfect_qth_power(b, 2)) throw ContractError("square_criterion: element " + std::to_string(b) + " is a perfect square");
            elements.push_back(factor(b));
        }
        auto found = square_criterion(elements);
        if (!found) return std::nullopt;
        SquareSubsetValues out{{}, std::move(found->root)};
        for (std::size_t i : found->indices) out.subset.push_back(set[i]);
        return out;
    }
}
