#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qres/error.hpp"
#include "qres/factor.hpp"
#include "qres/modular.hpp"
#include "qres/parallel.hpp"

/**
 * Linear hyperplanes of F_q^r attached to a finite set of integers, and the
 * exact test of whether they cover the whole space.
 *
 * Element b_j contributes the hyperplane { x : sum_i nu_ij x_i = 0 } where
 * nu_ij is the exponent of the i-th basis prime in the q-free part of |b_j|.
 * For odd q, a set without perfect q-th powers contains a q-th power modulo
 * almost every prime exactly when these hyperplanes cover F_q^r.
 */

namespace qres
{
    /// Exhaustive enumeration is refused above this many points.
    constexpr u64 max_enumeration_points = u64{1} << 40;
    constexpr std::size_t max_enumeration_dimension = 24;

    inline bool enumeration_allowed(u64 q, std::size_t r)
    {
        return r <= max_enumeration_dimension && checked_pow(q, r, max_enumeration_points).has_value();
    }

    class HyperplaneSet
    {
    public:
        HyperplaneSet(u64 q, PrimeBasis basis, std::vector<ExponentVector> rows)
            : q_(q), basis_(std::move(basis)), rows_(std::move(rows))
        {
            require_prime(q_);
            if (q_ == 2) throw ContractError("HyperplaneSet: q must be odd");
            for (const auto& row : rows_)
            {
                if (row.size() != basis_.size()) throw ContractError("HyperplaneSet: row length differs from basis size");
                if (row.is_zero()) throw ContractError("HyperplaneSet: zero row (perfect power element)");
                for (u64 c : row.coords)
                    if (c >= q_) throw ContractError("HyperplaneSet: coordinate out of range");
            }
        }

        u64 q() const { return q_; }
        const PrimeBasis& basis() const { return basis_; }
        std::size_t dimension() const { return basis_.size(); }
        std::span<const ExponentVector> rows() const { return rows_; }

        friend bool operator==(const HyperplaneSet&, const HyperplaneSet&) = default;

    private:
        u64 q_;
        PrimeBasis basis_;
        std::vector<ExponentVector> rows_;
    };

    inline u64 dot_mod(const ExponentVector& normal, std::span<const u64> x, u64 q)
    {
        u64 acc = 0;
        for (std::size_t i = 0; i < x.size(); ++i) acc = addmod(acc, mulmod(normal.coords[i], x[i], q), q);
        return acc;
    }

    inline bool point_covered(const HyperplaneSet& h, std::span<const u64> x)
    {
        for (const auto& row : h.rows())
            if (dot_mod(row, x, h.q()) == 0) return true;
        return false;
    }

    /// Hyperplanes of already-factored elements; input order is kept.
    inline HyperplaneSet build_hyperplanes(std::span<const FactoredInteger> elements, u64 q)
    {
        require_prime(q);
        if (q == 2) throw ContractError("build_hyperplanes: q must be odd");
        std::vector<FactoredInteger> free_parts;
        free_parts.reserve(elements.size());
        for (const auto& b : elements)
        {
            auto free_part = rad_q(b, q);
            if (free_part.is_unit())
                throw ContractError("build_hyperplanes: element is a perfect q-th power; strip it first");
            free_parts.push_back(std::move(free_part));
        }
        auto basis = PrimeBasis::of(free_parts, q);
        std::vector<ExponentVector> rows;
        rows.reserve(free_parts.size());
        for (const auto& f : free_parts) rows.push_back(exponent_vector(f, q, basis));
        return HyperplaneSet(q, std::move(basis), std::move(rows));
    }

    /// Deduplicates (first occurrence wins), factors and builds the hyperplanes of B.
    inline HyperplaneSet build_hyperplanes(std::span<const i64> set, u64 q)
    {
        std::vector<FactoredInteger> elements;
        std::vector<i64> seen;
        for (i64 b : set)
        {
            if (std::find(seen.begin(), seen.end(), b) != seen.end()) continue;
            seen.push_back(b);
            if (b == 0) throw ContractError("build_hyperplanes: 0 is a perfect q-th power; strip it first");
            elements.push_back(factor(b));
        }
        return build_hyperplanes(elements, q);
    }

    struct CoverResult
    {
        bool covered = false;
        std::optional<ExponentVector> uncovered;
    };

    struct CoverOptions
    {
        unsigned workers = 1;
        /// Refuse (GuardError) when q^r exceeds the enumeration limit.
        bool enforce_limit = true;
    };

    namespace detail
    {
        // Depth-first walk over projective representatives (first nonzero
        // coordinate equal to 1) in lexicographic order. A branch is cut as
        // soon as some hyperplane's inner product is fully determined and zero,
        // so the first leaf reached is the least uncovered point.
        class ProjectiveSearch
        {
        public:
            explicit ProjectiveSearch(const HyperplaneSet& h)
                : q_(h.q()), r_(h.dimension()), nonzero_at_(r_), ending_at_(r_)
            {
                const auto rows = h.rows();
                for (std::size_t j = 0; j < rows.size(); ++j)
                {
                    std::size_t last = 0;
                    for (std::size_t i = 0; i < r_; ++i)
                    {
                        if (rows[j].coords[i] == 0) continue;
                        nonzero_at_[i].emplace_back(j, rows[j].coords[i]);
                        last = i;
                    }
                    ending_at_[last].push_back(j);
                }
                row_count_ = rows.size();
            }

            struct Prefix
            {
                std::vector<u64> coords;
                bool leading_zero = true;
            };

            std::vector<Prefix> prefixes(std::size_t depth) const
            {
                std::vector<Prefix> out;
                State s = fresh();
                descend(s, 0, true, depth, [&](const State& st, bool leading) {
                    out.push_back({std::vector<u64>(st.x.begin(), st.x.begin() + static_cast<std::ptrdiff_t>(depth)), leading});
                    return false;
                });
                return out;
            }

            std::optional<ExponentVector> least_uncovered(const Prefix& prefix) const
            {
                State s = fresh();
                const std::size_t d = prefix.coords.size();
                for (std::size_t i = 0; i < d; ++i)
                {
                    s.x[i] = prefix.coords[i];
                    apply(s, i, s.x[i]);
                }
                std::optional<ExponentVector> found;
                descend(s, d, prefix.leading_zero, r_, [&](const State& st, bool) {
                    found = ExponentVector{st.x};
                    return true;
                });
                return found;
            }

        private:
            struct State
            {
                std::vector<u64> x;
                std::vector<u64> partial;
            };

            State fresh() const { return {std::vector<u64>(r_, 0), std::vector<u64>(row_count_, 0)}; }

            void apply(State& s, std::size_t i, u64 v) const
            {
                for (const auto& [j, c] : nonzero_at_[i]) s.partial[j] = addmod(s.partial[j], mulmod(c, v, q_), q_);
            }

            void revert(State& s, std::size_t i, u64 v) const
            {
                for (const auto& [j, c] : nonzero_at_[i])
                    s.partial[j] = addmod(s.partial[j], q_ - mulmod(c, v, q_), q_);
            }

            template <typename Leaf>
            bool descend(State& s, std::size_t depth, bool leading_zero, std::size_t target, Leaf&& leaf) const
            {
                if (depth == target) return leaf(s, leading_zero);
                const u64 lo = leading_zero && depth + 1 == r_ ? 1 : 0;
                const u64 hi = leading_zero ? 1 : q_ - 1;
                for (u64 v = lo; v <= hi; ++v)
                {
                    s.x[depth] = v;
                    apply(s, depth, v);
                    bool alive = true;
                    for (std::size_t j : ending_at_[depth])
                        if (s.partial[j] == 0) { alive = false; break; }
                    bool done = alive && descend(s, depth + 1, leading_zero && v == 0, target, leaf);
                    if (done) return true;
                    revert(s, depth, v);
                }
                s.x[depth] = 0;
                return false;
            }

            u64 q_;
            std::size_t r_;
            std::size_t row_count_ = 0;
            std::vector<std::vector<std::pair<std::size_t, u64>>> nonzero_at_;
            std::vector<std::vector<std::size_t>> ending_at_;
        };
    }

    /**
     * Decides whether the hyperplanes cover F_q^r. When they do not, the
     * lexicographically least uncovered point is returned; it is always a
     * projective representative because scaling preserves being uncovered.
     *
     * With several workers the representatives are split into prefix blocks
     * searched independently; the lowest block with a hit holds the answer.
     */
    inline CoverResult covers(const HyperplaneSet& h, CoverOptions options = {})
    {
        const std::size_t r = h.dimension();
        if (options.enforce_limit && !enumeration_allowed(h.q(), r))
            throw GuardError("covering enumeration refused: q^r = " + std::to_string(h.q()) + "^" + std::to_string(r) +
                             " exceeds the exact enumeration limit (r <= 24, q^r <= 2^40)");
        // The zero vector lies on every hyperplane, so it is only uncovered when there are none.
        if (h.rows().empty()) return {false, ExponentVector{std::vector<u64>(r, 0)}};
        if (r == 0) return {true, std::nullopt};

        detail::ProjectiveSearch search(h);
        const unsigned workers = resolve_workers(options.workers);
        if (workers <= 1)
        {
            auto point = search.least_uncovered({{}, true});
            return {!point.has_value(), std::move(point)};
        }

        std::size_t depth = 1;
        auto blocks = search.prefixes(depth);
        while (depth < r && blocks.size() < 8u * workers) blocks = search.prefixes(++depth);

        std::vector<std::optional<ExponentVector>> found(blocks.size());
        std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
        for_each_block(blocks.size(), workers, [&](std::size_t i) {
            if (i > best.load()) return;
            found[i] = search.least_uncovered(blocks[i]);
            if (found[i])
            {
                std::size_t cur = best.load();
                while (i < cur && !best.compare_exchange_weak(cur, i)) {}
            }
        });
        for (auto& f : found)
            if (f) return {false, std::move(f)};
        return {true, std::nullopt};
    }

    /// Plain scan of all q^r points in lexicographic order; the reference route.
    inline std::optional<ExponentVector> naive_least_uncovered(const HyperplaneSet& h)
    {
        const std::size_t r = h.dimension();
        const u64 q = h.q();
        if (!enumeration_allowed(q, r)) throw GuardError("naive enumeration refused: q^r too large");
        std::vector<u64> x(r, 0);
        for (;;)
        {
            if (!point_covered(h, x)) return ExponentVector{x};
            std::size_t i = r;
            while (i > 0)
            {
                --i;
                if (++x[i] < q) break;
                x[i] = 0;
                if (i == 0) return std::nullopt;
            }
            if (r == 0) return std::nullopt;
        }
    }
}
