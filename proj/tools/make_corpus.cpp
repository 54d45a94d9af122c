// Regenerates tests/data/coherence_corpus.json (fixed seed, so the output is stable).
//
//   make_corpus > tests/data/coherence_corpus.json
//
// Members are pencil constructions {p1, p1^j p2 : 0 <= j < q} for odd q and
// {a, b, ab} for q = 2, each element scaled by a random q-th power, with a
// few random extra elements mixed in. Non-members are random sets that the
// criterion rejects.

#include <algorithm>
#include <iostream>
#include <random>

#include "qres/json.hpp"
#include "qres/qres.hpp"

namespace
{
    using qres::i64;
    using qres::u64;

    constexpr std::size_t per_side = 50;
    constexpr u64 small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

    i64 draw(std::mt19937_64& rng, i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng); }

    i64 power(i64 g, u64 q)
    {
        i64 v = 1;
        for (u64 i = 0; i < q; ++i) v *= g;
        return v;
    }

    std::vector<i64> pencil(std::mt19937_64& rng, u64 q)
    {
        const std::size_t n = std::size(small_primes);
        const auto a = static_cast<std::size_t>(draw(rng, 0, static_cast<i64>(n) - 1));
        auto b = static_cast<std::size_t>(draw(rng, 0, static_cast<i64>(n) - 2));
        if (b >= a) ++b;
        const i64 p1 = static_cast<i64>(small_primes[a]);
        const i64 p2 = static_cast<i64>(small_primes[b]);

        std::vector<i64> set;
        if (q == 2)
        {
            const i64 s1 = draw(rng, 0, 1) ? -1 : 1;
            const i64 s2 = draw(rng, 0, 1) ? -1 : 1;
            set = {s1 * p1, s2 * p2, s1 * s2 * p1 * p2};
        }
        else
        {
            set.push_back(p1);
            i64 pj = 1;
            for (u64 j = 0; j < q; ++j, pj *= p1) set.push_back(pj * p2);
        }
        // scale by q-th powers; for q = 2 keep the scale positive
        const i64 max_g = q <= 3 ? 4 : 2;
        for (auto& v : set)
        {
            i64 g = draw(rng, 1, max_g);
            if (q != 2 && draw(rng, 0, 1)) g = -g;
            v *= power(g, q);
        }
        const auto extras = draw(rng, 0, 2);
        for (i64 e = 0; e < extras; ++e) set.push_back(draw(rng, 2, 500) * (draw(rng, 0, 1) ? -1 : 1));
        qres::dedupe(set);
        std::shuffle(set.begin(), set.end(), rng);
        return set;
    }

    std::vector<i64> random_set(std::mt19937_64& rng, u64 q)
    {
        std::vector<i64> set;
        const auto n = static_cast<std::size_t>(draw(rng, 1, q == 2 ? 4 : static_cast<i64>(q) + 2));
        while (set.size() < n)
        {
            i64 v = draw(rng, -300, 300);
            if (v != 0 && std::find(set.begin(), set.end(), v) == set.end()) set.push_back(v);
        }
        return set;
    }

    qres::Json entry(u64 q, const std::vector<i64>& set)
    {
        qres::Json e;
        e["q"] = q;
        e["set"] = set;
        return e;
    }
}

int main()
{
    std::mt19937_64 rng(20240611);
    const u64 qs[] = {2, 3, 5, 7};
    qres::Json members = qres::Json::array(), non_members = qres::Json::array();

    while (members.size() < per_side)
    {
        const u64 q = qs[members.size() % std::size(qs)];
        auto set = pencil(rng, q);
        auto verdict = qres::decide(set, q);
        // skip sets that are members only because of a perfect power
        if (!verdict.member || verdict.kind() == "perfect_power") continue;
        members.push_back(entry(q, set));
    }
    while (non_members.size() < per_side)
    {
        const u64 q = qs[non_members.size() % std::size(qs)];
        auto set = random_set(rng, q);
        if (qres::decide(set, q).member) continue;
        non_members.push_back(entry(q, set));
    }

    qres::Json out;
    out["members"] = std::move(members);
    out["non_members"] = std::move(non_members);
    std::cout << out.dump(1) << "\n";
}
