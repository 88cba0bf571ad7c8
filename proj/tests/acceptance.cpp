// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "qtails/cli.hpp"
#include "qtails/partitions.hpp"
#include "qtails/qfunctions.hpp"
#include "qtails/registry.hpp"

using namespace qtails;
namespace reg = qtails::registry;
namespace pl = qtails::partitions;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string &what)
    {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

Outcome full_registry()
{
    Outcome o;
    const auto t0 = Clock::now();
    std::ostringstream out, err;
    const int code = cli::run({"verify", "--identity", "all", "--order", "50", "--j-max", "20", "--z-cap", "12",
                               "--format", "json"},
                              out, err);
    const double secs = seconds_since(t0);
    o.require(code == 0, "exit code " + std::to_string(code) + " " + err.str());
    if (code == 0 || code == 1) {
        const auto j = nlohmann::json::parse(out.str());
        o.require(j["reports"].size() >= 24, "fewer than 24 entries");
        for (const auto &r : j["reports"]) {
            o.require(r["status"] == "pass", r["id"].get<std::string>() + " did not pass");
        }
    }
    o.require(secs < 300, "took " + std::to_string(secs) + " s");
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(secs) + " s";
    return o;
}

Outcome worked_example()
{
    Outcome o;
    o.require(pl::p1_count(6) == 2, "p1(6)");
    o.require(pl::p1_count(7) == -1, "p1(7)");
    o.require(pl::p2_count(6) == 3, "p2(6)");
    o.require(pl::tau_even(6) == 2 && pl::tau_odd(6) == 2, "tau(6)");
    o.require(pl::p1_count(6) - pl::p1_count(7) == 3, "p1(6) - p1(7)");
    o.require(pl::p2_count(6) + pl::tau_even(6) - pl::tau_odd(6) == 3, "p2(6) + tau_e(6) - tau_o(6)");
    for (int n = 1; n <= 40; ++n) {
        o.require(pl::p1_count(n) - pl::p1_count(n + 1) == pl::p2_count(n) + pl::tau_even(n) - pl::tau_odd(n),
                  "partition identity at n = " + std::to_string(n));
    }
    for (int N = 2; N <= 40; ++N) {
        std::int64_t s = 0;
        for (int n = 1; n <= N - 1; ++n) {
            s += pl::tau_odd(n) - pl::tau_even(n) - pl::p2_count(n);
        }
        o.require(pl::p1_count(N) == s, "summed form at N = " + std::to_string(N));
    }
    reg::Options opts;
    opts.n_max = 40;
    o.require(reg::verify("T3", opts).status == reg::Status::pass, "T3 entry");
    return o;
}

Outcome sigma_oracles()
{
    Outcome o;
    SeriesContext ctx(35, ParamSpec::none());
    const auto s = sigma_series(ctx);
    const auto s2 = sigma2_series(ctx);
    o.require(s.constant_coeff(0) == 1, "sigma constant term");
    for (int n = 1; n <= 35; ++n) {
        o.require(s.constant_coeff(n) == static_cast<long>(pl::sigma_rank_count(n)), "sigma at " + std::to_string(n));
        o.require(s2.constant_coeff(n) == static_cast<long>(pl::sigma2_rank_count(n)),
                  "sigma2 at " + std::to_string(n));
    }
    return o;
}

Outcome positivity()
{
    Outcome o;
    const auto t0 = Clock::now();
    const auto rep = reg::positivity_check(100);
    const double secs = seconds_since(t0);
    o.require(rep.status == reg::Status::pass, rep.message);
    o.require(rep.sequence.size() == 100, "sequence length");
    for (std::size_t i = 0; i < rep.sequence.size(); ++i) {
        o.require(rep.sequence[i] > 0 && rep.sequence[i].get_den() == 1, "coefficient " + std::to_string(i + 1));
    }
    o.require(secs < 30, "took " + std::to_string(secs) + " s");
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(secs) + " s";
    return o;
}

Outcome finite_families()
{
    Outcome o;
    reg::Options f;
    f.order = 60;
    f.j_max = 25;
    for (const char *id : {"F12", "F2"}) {
        const auto r = reg::verify(id, f);
        o.require(r.status == reg::Status::pass, std::string(id) + ": " + r.message);
    }
    reg::Options s;
    s.j_max = 15;
    s.caps["d"] = 15;
    for (const char *id : {"SYM", "AOT"}) {
        const auto r = reg::verify(id, s);
        o.require(r.status == reg::Status::pass, std::string(id) + ": " + r.message);
        for (const auto &[name, cap] : r.caps) {
            o.require(name != "d" || cap == 15, "cap(d) for " + std::string(id));
        }
    }
    return o;
}

Outcome andrews_onofri()
{
    Outcome o;
    reg::Options opts;
    opts.order = 40;
    for (const char *id : {"AO21", "AO31", "AO32"}) {
        o.require(reg::verify(id, opts).status == reg::Status::pass, id);
    }
    opts.order = 3;
    const auto &def = *reg::find("AO21");
    const SeriesContext ctx(3 + def.slack(opts, {}), ParamSpec::none());
    const reg::Kit kit;
    const auto sides = def.build(reg::BuildEnv{ctx, kit, opts, 3});
    const SeriesContext c3(3, ParamSpec::none());
    const auto expect = c3.q_power(2) - c3.q_power(1);
    for (const auto &side : sides) {
        o.require(!equal_upto(side.value, expect, 3), side.label + " is not q^2 - q");
    }
    return o;
}

Outcome property_suites(int argc, char **argv)
{
    Outcome o;
    for (int i = 1; i < argc; ++i) {
        const std::string cmd = std::string("\"") + argv[i] + "\" > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        o.require(rc == 0, std::string(argv[i]) + " exited " + std::to_string(rc));
    }
    o.require(argc > 1, "no suites given");
    return o;
}

Outcome fault_sensitivity()
{
    Outcome o;
    reg::Options base;
    base.order = 14;
    base.j_max = 6;
    base.z_cap = 4;
    o.require(reg::verify_all(base).passed == static_cast<int>(reg::registry().size()), "clean run not green");
    for (auto m : reg::all_mutations()) {
        auto opts = base;
        opts.mutation = m;
        o.require(reg::verify_all(opts).failed >= 1, std::string(reg::to_string(m)) + " went unnoticed");
    }
    return o;
}

} // namespace

int main(int argc, char **argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"full registry at order 50, j_max 20, z_cap 12", full_registry},
        {"worked partition example and identity for n <= 40", worked_example},
        {"sigma and sigma2 against rank-parity enumeration", sigma_oracles},
        {"positive coefficients to n = 100", positivity},
        {"finite families F12, F2, SYM, AOT", finite_families},
        {"Andrews-Onofri specializations", andrews_onofri},
        {"property suites", [&] { return property_suites(argc, argv); }},
        {"fault sensitivity", fault_sensitivity},
    };
    bool all = true;
    int k = 1;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        all = all && o.ok;
        std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << k++ << ": " << name;
        if (!o.detail.empty()) {
            std::cout << " (" << o.detail << ")";
        }
        std::cout << std::endl;
    }
    return all ? 0 : 1;
}
