// qres: command-line front end for the power-residue toolkit.
//
//   qres decide  --q 3 --set 2,5,10,20
//   qres density --q 2 --set 2,3,6 --prime-limit 100000
//   qres census  --q 2 --k 1 --N 1,4,9,16 --kind additive
//   qres bounds  --q 2 --k 3 [--N 4 --kind additive]
//
// decide exits 0 for a member, 1 for a non-member; every command exits 2 on error.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qres/json.hpp"
#include "qres/qres.hpp"

namespace
{
    constexpr int exit_member = 0;
    constexpr int exit_non_member = 1;
    constexpr int exit_error = 2;

    std::vector<std::string> split_commas(std::string text)
    {
        text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }), text.end());
        std::vector<std::string> out;
        std::size_t start = 0;
        for (;;)
        {
            auto comma = text.find(',', start);
            out.push_back(text.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    }

    std::vector<qres::i64> parse_set(const std::string& text)
    {
        std::vector<qres::i64> set;
        for (const auto& token : split_commas(text)) set.push_back(qres::parse_integer(token));
        if (auto dropped = qres::dedupe(set); dropped > 0)
            std::cerr << "warning: dropped " << dropped << " duplicate element" << (dropped == 1 ? "" : "s") << "\n";
        return set;
    }

    std::vector<qres::u64> parse_n_list(const std::string& text)
    {
        std::vector<qres::u64> out;
        for (const auto& token : split_commas(text))
        {
            auto v = qres::parse_integer(token);
            if (v < 1) throw qres::ContractError("N must be at least 1, got " + token);
            out.push_back(static_cast<qres::u64>(v));
        }
        return out;
    }

    struct Options
    {
        qres::u64 q = 0;
        std::string set;
        qres::u64 k = 1;
        std::string n_list;
        std::string kind = "additive";
        qres::u64 prime_limit = 100'000;
        unsigned workers = 0;
        std::string out;
        bool no_timing = false;
    };

    class Output
    {
    public:
        explicit Output(const std::string& path)
        {
            if (path.empty()) return;
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw qres::Error("cannot open output file " + path);
        }
        std::ostream& stream() { return file_ ? *file_ : std::cout; }

    private:
        std::unique_ptr<std::ofstream> file_;
    };

    int cmd_decide(const Options& o)
    {
        auto set = parse_set(o.set);
        auto verdict = qres::decide(set, o.q, {o.workers});
        Output out(o.out);
        out.stream() << qres::to_json(verdict).dump() << "\n";
        return verdict.member ? exit_member : exit_non_member;
    }

    int cmd_density(const Options& o)
    {
        auto set = parse_set(o.set);
        auto est = qres::estimate_density(set, o.q, o.prime_limit, o.workers);
        Output out(o.out);
        out.stream() << qres::to_json(est).dump() << "\n";
        return 0;
    }

    int cmd_census(const Options& o)
    {
        const auto kind = qres::parse_box_kind(o.kind);
        const auto ns = parse_n_list(o.n_list);
        if (o.k < 1) throw qres::ContractError("k must be at least 1");
        qres::require_prime(o.q);
        Output out(o.out);
        out.stream() << qres::census_csv_header << "\n" << std::flush;
        int status = 0;
        for (auto n : ns)
        {
            try
            {
                auto row = qres::run_census(o.q, o.k, {kind, n}, {o.workers});
                out.stream() << qres::to_csv(row, !o.no_timing) << "\n" << std::flush;
            }
            catch (const qres::GuardError& e)
            {
                std::cerr << "error: N=" << n << ": " << e.what() << "\n";
                status = exit_error;
            }
        }
        return status;
    }

    int cmd_bounds(const Options& o)
    {
        auto constants = qres::bound_constants(o.q, o.k);
        Output out(o.out);
        if (o.n_list.empty())
        {
            out.stream() << qres::to_json(constants).dump() << "\n";
            return 0;
        }
        const auto kind = qres::parse_box_kind(o.kind);
        for (auto n : parse_n_list(o.n_list))
        {
            qres::BoxSpec box{kind, n};
            out.stream() << qres::to_json(constants, &box).dump() << "\n";
        }
        return 0;
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"Decide, sample and count sets of integers that contain a q-th power modulo almost every prime"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--q", o.q, "Prime exponent q")->required();
        sub->add_option("--workers", o.workers, "Worker threads (0 = hardware concurrency)");
        sub->add_option("--out", o.out, "Write output to this file instead of standard output");
    };

    auto* decide = app.add_subcommand("decide", "Decide membership and print the verdict with its witness as JSON");
    common(decide);
    decide->add_option("--set", o.set, "Comma-separated integers")->required();

    auto* density = app.add_subcommand("density", "Fraction of primes up to a limit at which the set has a q-th residue");
    common(density);
    density->add_option("--set", o.set, "Comma-separated integers")->required();
    density->add_option("--prime-limit", o.prime_limit, "Largest prime to test");

    auto* census = app.add_subcommand("census", "Count members among all k-subsets of a box, one CSV row per N");
    common(census);
    census->add_option("--k", o.k, "Subset size")->required();
    census->add_option("--N", o.n_list, "Comma-separated box parameters")->required();
    census->add_option("--kind", o.kind, "additive or multiplicative")->check(CLI::IsMember({"additive", "multiplicative"}));
    census->add_flag("--no-timing", o.no_timing, "Write 0 in the elapsed_ms column for byte-stable output");

    auto* bounds = app.add_subcommand("bounds", "Leading constants and bounding sums as JSON");
    common(bounds);
    bounds->add_option("--k", o.k, "Subset size")->required();
    bounds->add_option("--N", o.n_list, "Comma-separated box parameters for the bounding sums");
    bounds->add_option("--kind", o.kind, "additive or multiplicative")->check(CLI::IsMember({"additive", "multiplicative"}));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return exit_error;
    }

    try
    {
        if (*decide) return cmd_decide(o);
        if (*density) return cmd_density(o);
        if (*census) return cmd_census(o);
        return cmd_bounds(o);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
}
