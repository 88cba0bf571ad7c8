#include "qtails/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "qtails/errors.hpp"
#include "qtails/partitions.hpp"
#include "qtails/qfunctions.hpp"
#include "qtails/registry.hpp"
#include "qtails/report.hpp"

namespace qtails::cli {

namespace reg = qtails::registry;
namespace pl = qtails::partitions;
using report::Format;

namespace {

struct UsageError : Error {
    using Error::Error;
};

std::string join_ids()
{
    std::string s;
    for (const auto &id : reg::ids()) {
        s += (s.empty() ? "" : ", ") + id;
    }
    return s;
}

std::vector<std::string> resolve_selection(const std::vector<std::string> &raw)
{
    std::vector<std::string> out;
    for (const auto &id : raw) {
        if (id == "all") {
            return {};
        }
        if (!reg::find(id)) {
            throw UsageError("unknown identity '" + id + "'; valid ids: all, " + join_ids());
        }
        out.push_back(id);
    }
    return out;
}

std::map<std::string, int> parse_caps(const std::vector<std::string> &raw)
{
    std::map<std::string, int> caps;
    for (const auto &item : raw) {
        const auto eq = item.find('=');
        int v = -1;
        if (eq != std::string::npos && eq > 0) {
            try {
                std::size_t used = 0;
                v = std::stoi(item.substr(eq + 1), &used);
                if (used != item.size() - eq - 1) {
                    v = -1;
                }
            } catch (const std::exception &) {
                v = -1;
            }
        }
        if (v < 0) {
            throw UsageError("--cap expects name=value with value >= 0, got '" + item + "'");
        }
        caps[item.substr(0, eq)] = v;
    }
    return caps;
}

reg::Mutation parse_mutation(const std::string &name)
{
    if (name.empty() || name == "none") {
        return reg::Mutation::none;
    }
    for (auto m : reg::all_mutations()) {
        if (reg::to_string(m) == name) {
            return m;
        }
    }
    throw UsageError("unknown mutation '" + name + "'");
}

// Writes to --out when given, otherwise to out.
void emit(const std::string &text, const std::string &path, std::ostream &out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) {
        throw IoError("cannot write " + path);
    }
}

int exit_for(const reg::Summary &s) { return s.errors > 0 ? 2 : (s.failed > 0 ? 1 : 0); }

// ---- coeffs -------------------------------------------------------------

QSeries coeff_series(const std::string &fn, int order, int a, int b)
{
    const SeriesContext ctx(order, ParamSpec::none());
    if (fn == "sigma") return sigma_series(ctx);
    if (fn == "sigma2") return sigma2_series(ctx);
    if (fn == "sigma_star") return sigma_star_series(ctx);
    if (fn == "lambert") {
        if (a < 1 || b < 1) {
            throw UsageError("lambert needs --a >= 1 and --b >= 1");
        }
        return lambert(a, b, ctx);
    }
    if (fn == "partition_gf") return inv_pochhammer_infinite(ctx.mono(1, 1), 1, ctx);
    throw UsageError("unknown function '" + fn + "'; valid: sigma, sigma2, sigma_star, lambert, partition_gf");
}

std::string render_coeffs(const std::string &fn, int order, const QSeries &s, Format f)
{
    std::ostringstream os;
    switch (f) {
    case Format::json: {
        nlohmann::ordered_json j;
        j["function"] = fn;
        j["order"] = order;
        auto arr = nlohmann::ordered_json::array();
        for (int n = 0; n <= order; ++n) {
            arr.push_back({{"n", n}, {"c", report::rational_string(s.constant_coeff(n))}});
        }
        j["coefficients"] = arr;
        os << j.dump(2) << '\n';
        break;
    }
    case Format::csv:
        os << "n,c\n";
        for (int n = 0; n <= order; ++n) {
            os << n << ',' << report::rational_string(s.constant_coeff(n)) << '\n';
        }
        break;
    case Format::text:
    case Format::markdown:
        for (int n = 0; n <= order; ++n) {
            os << n << ' ' << report::rational_string(s.constant_coeff(n)) << '\n';
        }
        break;
    }
    return os.str();
}

// ---- partitions ---------------------------------------------------------

struct Counter {
    std::function<std::int64_t(int)> count;
    // Enumerated objects with weights for --list; empty when not a
    // partition counter.
    std::function<std::vector<std::pair<std::string, int>>(int)> list;
    bool needs_positive = true;
};

std::vector<std::pair<std::string, int>> listed(int n, const pl::Constraint &c, pl::WeightRule w)
{
    std::vector<std::pair<std::string, int>> out;
    pl::for_each_partition(n, c, [&](const pl::Partition &p) { out.emplace_back(p.to_string(), pl::weight(p, w)); });
    return out;
}

std::vector<std::pair<std::string, int>> divisors(int n, int parity)
{
    std::vector<std::pair<std::string, int>> out;
    for (int d = 1; d <= n; ++d) {
        if (n % d == 0 && d % 2 == parity) {
            out.emplace_back(std::to_string(d), 1);
        }
    }
    return out;
}

Counter make_counter(const std::string &name, int j)
{
    using W = pl::WeightRule;
    if (name == "p1") {
        return {pl::p1_count, [](int n) { return listed(n, pl::p1_constraint(), W::neg_one_pow_odd_parts); }};
    }
    if (name == "p2") {
        return {pl::p2_count, [](int n) {
                    return listed(n, pl::p2_constraint(), W::neg_one_pow_parts_minus_largest_multiplicity);
                }};
    }
    if (name == "tau_e") {
        return {[](int n) { return std::int64_t{pl::tau_even(n)}; }, [](int n) { return divisors(n, 0); }};
    }
    if (name == "tau_o") {
        return {[](int n) { return std::int64_t{pl::tau_odd(n)}; }, [](int n) { return divisors(n, 1); }};
    }
    if (name == "sigma_weight") {
        return {pl::sigma_rank_count,
                [](int n) { return listed(n, pl::distinct_parts(), W::rank_parity_even_minus_odd); }};
    }
    if (name == "sigma2_weight") {
        return {pl::sigma2_rank_count,
                [](int n) { return listed(n, pl::gap_at_least(2), W::rank_parity_odd_minus_even); }};
    }
    if (name == "ae_ao") {
        Counter c{[j](int n) { return pl::distinct_bounded_diff(n, j < 0 ? n : j); },
                  [j](int n) {
                      auto cons = pl::distinct_parts();
                      cons.max_parts = j < 0 ? n : j;
                      return listed(n, cons, W::part_count_parity_even_minus_odd);
                  }};
        c.needs_positive = false;
        return c;
    }
    throw UsageError("unknown counter '" + name +
                     "'; valid: p1, p2, tau_e, tau_o, sigma_weight, sigma2_weight, ae_ao");
}

std::string signed_weight(int w) { return w > 0 ? "+" + std::to_string(w) : std::to_string(w); }

std::string render_counts(const std::string &name, const Counter &c, int from, int to, bool list, Format f)
{
    std::ostringstream os;
    if (f == Format::json) {
        nlohmann::ordered_json j;
        j["counter"] = name;
        auto arr = nlohmann::ordered_json::array();
        for (int n = from; n <= to; ++n) {
            nlohmann::ordered_json row{{"n", n}, {"count", c.count(n)}};
            if (list) {
                auto items = nlohmann::ordered_json::array();
                for (const auto &[s, w] : c.list(n)) {
                    items.push_back({{"item", s}, {"weight", w}});
                }
                row["list"] = items;
            }
            arr.push_back(row);
        }
        j["values"] = arr;
        os << j.dump(2) << '\n';
        return os.str();
    }
    if (f == Format::csv) {
        os << (list ? "n,count,item,weight\n" : "n,count\n");
        for (int n = from; n <= to; ++n) {
            const auto cnt = c.count(n);
            if (!list) {
                os << n << ',' << cnt << '\n';
                continue;
            }
            for (const auto &[s, w] : c.list(n)) {
                os << n << ',' << cnt << ',' << s << ',' << w << '\n';
            }
        }
        return os.str();
    }
    for (int n = from; n <= to; ++n) {
        os << name << '(' << n << ") = " << c.count(n) << '\n';
        if (list) {
            for (const auto &[s, w] : c.list(n)) {
                os << "  " << s << "  " << signed_weight(w) << '\n';
            }
        }
    }
    return os.str();
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact verification of sums-of-tails q-series identities", "qtails"};
    app.require_subcommand(1);

    std::string format_name = "text";
    std::string out_path;

    // verify / report
    std::vector<std::string> identities{"all"};
    reg::Options opts;
    std::vector<std::string> cap_items;
    unsigned threads = 0;
    std::string mutation_name;
    bool no_timing = false;

    auto add_run_flags = [&](CLI::App *sub) {
        sub->add_option("--order", opts.order, "Truncation order N")->check(CLI::NonNegativeNumber);
        sub->add_option("--j-max", opts.j_max, "Largest j for per-j families")->check(CLI::NonNegativeNumber);
        sub->add_option("--z-cap", opts.z_cap, "z-degree cap for bivariate entries")->check(CLI::NonNegativeNumber);
        sub->add_option("--n-max", opts.n_max, "Range of numeric and positivity entries (0: entry default)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--cap", cap_items, "Parameter cap name=value (repeatable); default: entry minimum");
        sub->add_option("--threads", threads, "Worker threads (0: QTAILS_THREADS or hardware)");
        sub->add_option("--mutation", mutation_name, "Inject a primitive defect (fault-sensitivity runs)");
        sub->add_flag("--no-timing", no_timing, "Omit elapsed times from text, CSV and markdown output");
        sub->add_option("--out", out_path, "Write output to this path");
    };

    auto *verify = app.add_subcommand("verify", "Verify registry identities");
    verify->add_option("--identity", identities, "Identity ids or 'all'")->delimiter(',');
    verify->add_option("--format", format_name, "text, json or csv");
    add_run_flags(verify);

    auto *rep = app.add_subcommand("report", "Run every identity and write one report document");
    std::string report_format = "markdown";
    rep->add_option("--format", report_format, "markdown or json");
    add_run_flags(rep);

    auto *coeffs = app.add_subcommand("coeffs", "Emit series coefficients");
    std::string function;
    int order = 10, a = 1, b = 1;
    coeffs->add_option("--function", function, "sigma, sigma2, sigma_star, lambert, partition_gf")->required();
    coeffs->add_option("--order", order, "Largest exponent")->check(CLI::NonNegativeNumber);
    coeffs->add_option("--a", a, "Lambert numerator step");
    coeffs->add_option("--b", b, "Lambert denominator step");
    coeffs->add_option("--format", format_name, "text, json or csv");
    coeffs->add_option("--out", out_path, "Write output to this path");

    auto *parts = app.add_subcommand("partitions", "Weighted partition counts");
    std::string counter;
    int n = -1, from = -1, to = -1, j = -1;
    bool list = false;
    parts->add_option("--count", counter, "p1, p2, tau_e, tau_o, sigma_weight, sigma2_weight, ae_ao")->required();
    parts->add_option("--n", n, "Single n");
    parts->add_option("--from", from, "Range start");
    parts->add_option("--to", to, "Range end");
    parts->add_option("--j", j, "Bound on the number of parts for ae_ao (default n)");
    parts->add_flag("--list", list, "List the counted objects with their weights");
    parts->add_option("--format", format_name, "text, json or csv");
    parts->add_option("--out", out_path, "Write output to this path");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed() || rep->parsed()) {
            opts.caps = parse_caps(cap_items);
            opts.mutation = parse_mutation(mutation_name);
            if (verify->parsed()) {
                const auto selection = resolve_selection(identities);
                const Format f = report::parse_format(format_name);
                if (f == Format::markdown) {
                    throw UsageError("verify supports text, json or csv");
                }
                const auto summary = reg::verify_all(opts, selection, threads);
                emit(report::render(summary, f, !no_timing), out_path, out);
                return exit_for(summary);
            }
            const Format f = report::parse_format(report_format);
            if (f != Format::markdown && f != Format::json) {
                throw UsageError("report supports markdown or json");
            }
            const auto summary = reg::verify_all(opts, {}, threads);
            emit(report::render(summary, f, !no_timing), out_path, out);
            return exit_for(summary);
        }
        if (coeffs->parsed()) {
            const Format f = report::parse_format(format_name);
            emit(render_coeffs(function, order, coeff_series(function, order, a, b), f), out_path, out);
            return 0;
        }
        if (parts->parsed()) {
            const Counter c = make_counter(counter, j);
            if (n >= 0) {
                from = to = n;
            }
            if (from < 0 || to < from) {
                throw UsageError("give --n or a range --from A --to B with A <= B");
            }
            if (c.needs_positive && from < 1) {
                throw DomainError(counter + " is defined for n >= 1");
            }
            const Format f = report::parse_format(format_name);
            emit(render_counts(counter, c, from, to, list, f), out_path, out);
            return 0;
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace qtails::cli
