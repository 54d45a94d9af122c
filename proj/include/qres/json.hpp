#pragma once

#include <string>

#include <json.hpp>

#include "qres/census.hpp"
#include "qres/criterion.hpp"
#include "qres/empirical.hpp"

// Single-line JSON renderings with a fixed key order. Integers whose
// magnitude exceeds 2^53 - 1 are written as quoted decimal strings.

namespace qres
{
    using Json = nlohmann::ordered_json;

    constexpr i64 max_safe_json_integer = (i64{1} << 53) - 1;

    inline Json json_integer(const BigInt& v)
    {
        if (v <= max_safe_json_integer && v >= -max_safe_json_integer) return static_cast<i64>(v);
        return v.str();
    }

    inline Json json_integer(i64 v) { return json_integer(BigInt(v)); }
    inline Json json_integer(u64 v) { return json_integer(BigInt(v)); }

    inline Json json_rows(const HyperplaneSet& h)
    {
        Json rows = Json::array();
        for (const auto& row : h.rows())
        {
            Json r = Json::array();
            for (u64 c : row.coords) r.push_back(json_integer(c));
            rows.push_back(std::move(r));
        }
        return rows;
    }

    /// {"member", "kind", "data", "basis"} in that order.
    inline Json to_json(const Verdict& verdict)
    {
        Json out;
        out["member"] = verdict.member;
        out["kind"] = std::string(verdict.kind());
        out["data"] = std::visit(
            [](const auto& w) -> Json {
                using W = std::decay_t<decltype(w)>;
                if constexpr (std::is_same_v<W, PerfectPowerWitness>)
                    return json_integer(w.element);
                else if constexpr (std::is_same_v<W, OddSquareSubsetWitness>)
                {
                    Json d;
                    Json subset = Json::array();
                    for (i64 b : w.subset) subset.push_back(json_integer(b));
                    d["subset"] = std::move(subset);
                    d["root"] = json_integer(w.root);
                    return d;
                }
                else if constexpr (std::is_same_v<W, CoveringWitness>)
                    return json_rows(w.hyperplanes);
                else if constexpr (std::is_same_v<W, UncoveredPointWitness>)
                {
                    Json point = Json::array();
                    for (u64 c : w.point.coords) point.push_back(json_integer(c));
                    return point;
                }
                else
                    return nullptr;
            },
            verdict.witness);
        Json basis = Json::array();
        const auto witness_basis = verdict.basis();
        for (u64 p : witness_basis.primes()) basis.push_back(json_integer(p));
        out["basis"] = std::move(basis);
        return out;
    }

    inline Json to_json(const DensityEstimate& est)
    {
        Json out;
        out["q"] = json_integer(est.q);
        Json set = Json::array();
        for (i64 b : est.set) set.push_back(json_integer(b));
        out["set"] = std::move(set);
        out["prime_limit"] = json_integer(est.prime_limit);
        out["primes_tested"] = json_integer(est.primes_tested);
        out["primes_hit"] = json_integer(est.primes_hit);
        out["fraction"] = est.fraction();
        out["decimal"] = est.decimal();
        Json failing = Json::array();
        for (u64 p : est.failing_primes_sample) failing.push_back(json_integer(p));
        out["failing_primes_sample"] = std::move(failing);
        return out;
    }

    /// Constants, plus the bounding sums at N when a box is given.
    inline Json to_json(const BoundConstants& c, const BoxSpec* box = nullptr)
    {
        Json out;
        out["q"] = json_integer(c.q);
        out["k"] = json_integer(c.k);
        out["gamma"] = to_string(c.gamma);
        out["gamma_decimal"] = fixed_decimal(c.gamma, 6);
        out["eta"] = to_string(c.eta);
        out["eta_decimal"] = fixed_decimal(c.eta, 6);
        if (box)
        {
            out["kind"] = std::string(to_string(box->kind));
            out["N"] = json_integer(box->n);
            const auto count = count_with_perfect_power(c.q, c.k, *box);
            out["perfect_powers"] = json_integer(count.perfect_powers);
            out["with_perfect_power"] = json_integer(count.exact);
            out["lemma_bound"] = json_integer(count.lemma_bound);
            out["nonpower_bound"] = json_integer(nonpower_bound(c.q, c.k, *box));
        }
        return out;
    }
}
