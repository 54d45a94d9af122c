// Acceptance checks AC1-AC9. Prints one PASS/FAIL line per check and exits
// nonzero if any selected check fails.
//
//   acceptance            run everything
//   acceptance AC5 AC9    run a selection
//
// Each check also produces a report of everything it computed (no timings);
// AC9 reruns AC1-AC8 at 4 and 8 workers and compares those reports byte for byte.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "qres/json.hpp"
#include "qres/qres.hpp"
#include "support/oracles.hpp"

using namespace qres;

namespace
{
    struct Outcome
    {
        bool pass = true;
        std::string summary;
        std::string report; // deterministic, compared by AC9
        double seconds = 0;
    };

    using Check = std::function<Outcome(unsigned workers)>;

    template <typename F>
    double timed(F&& f)
    {
        const auto start = std::chrono::steady_clock::now();
        f();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    std::string join(const std::vector<i64>& v)
    {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
        return "{" + out + "}";
    }

    Outcome ac1(unsigned workers)
    {
        Outcome o;
        const std::vector<i64> set{2, 5, 10, 20};
        Verdict v;
        bool verified = false;
        o.seconds = timed([&] {
            v = decide(set, 3, {workers});
            verified = verify_witness(set, 3, v);
        });
        bool rows_ok = false;
        if (const auto* w = std::get_if<CoveringWitness>(&v.witness))
        {
            std::vector<std::vector<u64>> rows;
            for (const auto& r : w->hyperplanes.rows()) rows.push_back(r.coords);
            rows_ok = w->hyperplanes.basis() == PrimeBasis({2, 5}) &&
                      rows == std::vector<std::vector<u64>>{{1, 0}, {0, 1}, {1, 1}, {2, 1}};
        }
        o.report = to_json(v).dump();
        o.pass = v.member && rows_ok && verified && o.seconds < 1.0;
        o.summary = "{2,5,10,20} q=3 -> " + o.report + (verified ? ", witness verified" : ", witness NOT verified");
        return o;
    }

    Outcome ac2(unsigned workers)
    {
        Outcome o;
        std::vector<i64> pool;
        for (i64 b = -20; b <= 20; ++b)
            if (b != 0) pool.push_back(b);
        const std::size_t n = pool.size();
        u64 checked = 0, with_cube = 0, exceptions = 0;
        std::string first_exception;
        auto check = [&](const std::vector<i64>& set) {
            const bool cube = std::any_of(set.begin(), set.end(), [](i64 b) { return is_perfect_qth_power(b, 3); });
            const bool member = decide(set, 3, {workers}).member;
            ++checked;
            with_cube += cube;
            if (member != cube && exceptions++ == 0) first_exception = join(set);
        };
        o.seconds = timed([&] {
            for (std::size_t i = 0; i < n; ++i)
            {
                check({pool[i]});
                for (std::size_t j = i + 1; j < n; ++j)
                {
                    check({pool[i], pool[j]});
                    for (std::size_t l = j + 1; l < n; ++l) check({pool[i], pool[j], pool[l]});
                }
            }
        });
        o.pass = exceptions == 0 && o.seconds < 300;
        o.report = "checked=" + std::to_string(checked) + " with_cube=" + std::to_string(with_cube) +
                   " exceptions=" + std::to_string(exceptions);
        o.summary = "q=3, B in [-20,20]\\{0}, |B|<=3: " + o.report + (exceptions ? " first " + first_exception : "");
        return o;
    }

    Outcome ac3(unsigned)
    {
        Outcome o;
        auto rng = test::seeded(0xAC3);
        u64 members = 0, mismatches = 0;
        std::ostringstream log;
        o.seconds = timed([&] {
            for (int t = 0; t < 1000; ++t)
            {
                const auto size = static_cast<std::size_t>(test::uniform(rng, 1, 12));
                std::vector<i64> set;
                while (set.size() < size)
                {
                    const i64 b = test::uniform(rng, -1000, 1000);
                    if (b == 0 || is_perfect_qth_power(b, 2)) continue;
                    if (std::find(set.begin(), set.end(), b) == set.end()) set.push_back(b);
                }
                const bool got = square_criterion(std::span<const i64>(set)).has_value();
                const bool want = test::brute_force_odd_square_subset(set);
                members += got;
                if (got != want) ++mismatches;
                log << got;
            }
        });
        o.pass = mismatches == 0 && o.seconds < 60;
        o.report = "sets=1000 with_odd_square_subset=" + std::to_string(members) + " mismatches=" + std::to_string(mismatches) +
                   " bits=" + log.str();
        o.summary = "1000 random sets vs 2^|B| brute force: with_odd_square_subset=" + std::to_string(members) +
                    " mismatches=" + std::to_string(mismatches);
        return o;
    }

    Outcome ac4(unsigned workers)
    {
        Outcome o;
        auto rng = test::seeded(0xAC4);
        u64 covered = 0, mismatches = 0;
        std::ostringstream log;
        o.seconds = timed([&] {
            for (int t = 0; t < 1000; ++t)
            {
                const u64 q = std::array<u64, 3>{3, 5, 7}[static_cast<std::size_t>(test::uniform(rng, 0, 2))];
                const auto r = static_cast<std::size_t>(test::uniform(rng, 1, 4));
                const auto count = static_cast<std::size_t>(test::uniform(rng, 1, static_cast<std::int64_t>(2 * q + 2)));
                auto rows = (r >= 2 && t % 3 == 0) ? test::covering_rows(rng, q, r, count % 4) : test::random_rows(rng, q, r, count);
                std::vector<u64> primes;
                for (u64 c = 2; primes.size() < r; ++c)
                    if (is_prime(c)) primes.push_back(c);
                std::vector<ExponentVector> vs;
                for (const auto& row : rows) vs.push_back({row});
                const HyperplaneSet h(q, PrimeBasis(primes), vs);

                const auto got = covers(h, {workers, true});
                const auto want = test::least_uncovered_by_scan(rows, q, r);
                bool same = got.covered == !want.has_value();
                if (same && want) same = got.uncovered->coords == *want;
                mismatches += !same;
                covered += got.covered;
                log << (got.covered ? 'c' : 'u');
                if (got.uncovered)
                    for (u64 c : got.uncovered->coords) log << c;
            }
        });
        o.pass = mismatches == 0;
        o.report = "sets=1000 covered=" + std::to_string(covered) + " mismatches=" + std::to_string(mismatches) + " log=" + log.str();
        o.summary = "1000 random hyperplane sets vs plain q^r scan: covered=" + std::to_string(covered) +
                    " mismatches=" + std::to_string(mismatches) + " (least uncovered point compared too)";
        return o;
    }

    Outcome ac5(unsigned workers)
    {
        Outcome o;
        constexpr u64 limit = 1'000'000;
        DensityEstimate triple, two_sq, two_cube;
        o.seconds = timed([&] {
            const std::vector<i64> a{2, 3, 6}, b{2};
            triple = estimate_density(a, 2, limit, workers);
            two_sq = estimate_density(b, 2, limit, workers);
            two_cube = estimate_density(b, 3, limit, workers);
        });
        const bool c1 = triple.primes_hit == triple.primes_tested;
        const bool c2 = two_sq.value() >= 0.49 && two_sq.value() <= 0.51;
        const bool c3 = two_cube.value() >= 0.768 && two_cube.value() <= 0.788;
        const bool fast = o.seconds < 120;
        o.pass = c1 && c2 && c3 && fast;
        o.report = triple.fraction() + " " + two_sq.fraction() + " " + two_cube.fraction();
        o.summary = std::string("X=10^6: {2,3,6} q=2 ") + triple.fraction() + (c1 ? " ok" : " NOT 1") + "; {2} q=2 " +
                    two_sq.decimal() + (c2 ? " in" : " NOT in") + " [0.49,0.51]; {2} q=3 " + two_cube.decimal() +
                    (c3 ? " in" : " NOT in") + " [0.768,0.788]" + (c3 ? "" : " (2 is a cube mod p for 2/3 of primes)");
        return o;
    }

    Outcome ac6(unsigned workers)
    {
        Outcome o;
        std::ifstream in(QRES_CORPUS_PATH);
        if (!in)
        {
            o.pass = false;
            o.summary = "cannot open corpus " + std::string(QRES_CORPUS_PATH);
            return o;
        }
        const auto corpus = Json::parse(in);
        const auto primes_small = primes_up_to(10'000, workers);
        const auto primes_large = primes_up_to(100'000, workers);
        u64 bad_members = 0, bad_non_members = 0, wrong_verdicts = 0;
        std::ostringstream log;
        std::string first_bad;
        o.seconds = timed([&] {
            for (const auto& e : corpus["members"])
            {
                const auto q = e["q"].get<u64>();
                const auto set = e["set"].get<std::vector<i64>>();
                wrong_verdicts += !decide(set, q, {workers}).member;
                const auto est = estimate_density(set, q, 100'000, workers);
                u64 stray = 0;
                for (u64 p : primes_large)
                {
                    if (std::any_of(set.begin(), set.end(), [&](i64 b) { return is_qth_residue(b, p, q); })) continue;
                    const bool divides = std::any_of(set.begin(), set.end(), [&](i64 b) { return b % static_cast<i64>(p) == 0; });
                    if (!divides && p != q) ++stray;
                }
                log << est.fraction() << ";";
                if (stray && bad_members++ == 0) first_bad = "member " + join(set) + " q=" + std::to_string(q);
            }
            for (const auto& e : corpus["non_members"])
            {
                const auto q = e["q"].get<u64>();
                const auto set = e["set"].get<std::vector<i64>>();
                wrong_verdicts += decide(set, q, {workers}).member;
                std::optional<u64> failing;
                for (u64 p : primes_small)
                    if (std::none_of(set.begin(), set.end(), [&](i64 b) { return is_qth_residue(b, p, q); }))
                    {
                        failing = p;
                        break;
                    }
                log << (failing ? std::to_string(*failing) : "none") << ";";
                if (!failing && bad_non_members++ == 0) first_bad = "non-member " + join(set) + " q=" + std::to_string(q);
            }
        });
        o.pass = bad_members == 0 && bad_non_members == 0 && wrong_verdicts == 0;
        o.report = log.str();
        o.summary = std::to_string(corpus["members"].size()) + " members, " + std::to_string(corpus["non_members"].size()) +
                    " non-members: bad members=" + std::to_string(bad_members) + " bad non-members=" +
                    std::to_string(bad_non_members) + " verdict disagreements=" + std::to_string(wrong_verdicts) +
                    (first_bad.empty() ? "" : " first " + first_bad);
        return o;
    }

    Outcome ac7(unsigned workers)
    {
        Outcome o;
        u64 cells = 0, mismatches = 0;
        std::ostringstream log;
        o.seconds = timed([&] {
            for (u64 q : {2u, 3u})
                for (u64 k = 1; k <= 3; ++k)
                {
                    std::vector<BoxSpec> boxes;
                    for (u64 n = 1; n <= 12; ++n) boxes.push_back({BoxKind::additive, n});
                    for (u64 n = 1; n <= 3; ++n) boxes.push_back({BoxKind::multiplicative, n});
                    for (const auto& box : boxes)
                    {
                        const auto row = run_census(q, k, box, {workers});
                        const auto formula = count_with_perfect_power(q, k, box);
                        ++cells;
                        mismatches += formula.exact != row.with_perfect_power;
                        log << to_csv(row, false) << "\n";
                    }
                }
        });
        o.pass = mismatches == 0;
        o.report = log.str();
        o.summary = std::to_string(cells) + " census cells: with_perfect_power vs closed form mismatches=" + std::to_string(mismatches);
        return o;
    }

    Outcome ac8(unsigned workers)
    {
        Outcome o;
        std::ostringstream log, notes;
        bool additive_ok = true, multiplicative_ok = true;
        o.seconds = timed([&] {
            const std::vector<u64> ns{4, 9, 16, 25, 36};
            for (u64 k = 1; k <= 3; ++k)
            {
                auto report = decay_table(2, k, ns, BoxKind::additive, {workers});
                const double bound = 4 * report.rows.front().normalized();
                const bool bounded = report.max_normalized <= bound;
                additive_ok = additive_ok && report.ratio_strictly_decreasing && bounded;
                for (const auto& r : report.rows) log << to_csv(r, false) << "\n";
                notes << " q=2 k=" << k << (report.ratio_strictly_decreasing ? " ratio decreasing" : " ratio NOT decreasing")
                      << (bounded ? ", bounded" : ", NOT bounded") << ";";
            }
            const std::vector<u64> mult{2, 3};
            for (u64 k = 1; k <= 2; ++k)
            {
                auto report = decay_table(3, k, mult, BoxKind::multiplicative, {workers});
                multiplicative_ok = multiplicative_ok && report.normalized_non_increasing;
                for (const auto& r : report.rows) log << to_csv(r, false) << "\n";
                char buf[128];
                std::snprintf(buf, sizeof buf, " q=3 k=%llu normalized %.4f -> %.4f%s;", static_cast<unsigned long long>(k),
                              report.rows[0].normalized(), report.rows[1].normalized(),
                              report.normalized_non_increasing ? "" : " (increases)");
                notes << buf;
            }
        });
        o.pass = additive_ok && multiplicative_ok && o.seconds < 600;
        o.report = log.str();
        o.summary = std::string("additive ") + (additive_ok ? "ok" : "FAILED") + ", multiplicative " +
                    (multiplicative_ok ? "ok" : "FAILED") + ":" + notes.str();
        return o;
    }

    const std::vector<std::pair<std::string, Check>> checks = {
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
        {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},
    };

    void print(const std::string& name, const Outcome& o)
    {
        char secs[32];
        std::snprintf(secs, sizeof secs, " [%.2fs]", o.seconds);
        std::cout << name << (o.pass ? " PASS " : " FAIL ") << o.summary << secs << std::endl;
    }
}

int main(int argc, char** argv)
{
    std::vector<std::string> wanted(argv + 1, argv + argc);
    auto selected = [&](const std::string& name) {
        return wanted.empty() || std::find(wanted.begin(), wanted.end(), name) != wanted.end();
    };

    bool all_pass = true;
    std::map<std::string, Outcome> single;
    try
    {
        for (const auto& [name, check] : checks)
        {
            if (!selected(name)) continue;
            single[name] = check(1);
            print(name, single[name]);
            all_pass = all_pass && single[name].pass;
        }

        if (selected("AC9"))
        {
            Outcome o;
            std::vector<std::string> differing;
            o.seconds = timed([&] {
                for (const auto& [name, check] : checks)
                {
                    if (!single.count(name)) single[name] = check(1);
                    for (unsigned workers : {4u, 8u})
                        if (check(workers).report != single[name].report)
                            differing.push_back(name + "@" + std::to_string(workers));
                }
            });
            o.pass = differing.empty();
            o.summary = "AC1-AC8 reports at 1, 4, 8 workers: ";
            if (differing.empty()) o.summary += "byte-identical";
            else
                for (const auto& d : differing) o.summary += d + " differs; ";
            print("AC9", o);
            all_pass = all_pass && o.pass;
        }
    }
    catch (const std::exception& e)
    {
        std::cout << "error: " << e.what() << std::endl;
        return 2;
    }
    return all_pass ? 0 : 1;
}
