#include "qtails/registry.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "qtails/errors.hpp"

namespace qtails::registry {

namespace pl = qtails::partitions;

std::string_view to_string(Mode m)
{
    switch (m) {
    case Mode::qseries: return "qseries";
    case Mode::per_j_family: return "per_j_family";
    case Mode::partition_numeric: return "partition_numeric";
    case Mode::positivity: return "positivity";
    }
    return "?";
}

std::string_view to_string(Status s)
{
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::error: return "error";
    }
    return "?";
}

std::string_view to_string(Mutation m)
{
    switch (m) {
    case Mutation::none: return "none";
    case Mutation::ao_drop_qm: return "ao_drop_qm";
    case Mutation::poch_drop_last: return "poch_drop_last";
    case Mutation::inv_poch_drop_last: return "inv_poch_drop_last";
    case Mutation::poch_inf_drop_first: return "poch_inf_drop_first";
    case Mutation::inv_poch_inf_drop_first: return "inv_poch_inf_drop_first";
    case Mutation::gaussian_shift: return "gaussian_shift";
    case Mutation::lambert_drop_first: return "lambert_drop_first";
    case Mutation::sigma_shift: return "sigma_shift";
    case Mutation::sigma2_shift: return "sigma2_shift";
    case Mutation::tail_skip_first: return "tail_skip_first";
    case Mutation::finite_T_shift: return "finite_T_shift";
    case Mutation::p2_shift: return "p2_shift";
    case Mutation::tau_swap: return "tau_swap";
    case Mutation::rank_count_shift: return "rank_count_shift";
    }
    return "?";
}

const std::vector<Mutation> &all_mutations()
{
    static const std::vector<Mutation> all = {
        Mutation::ao_drop_qm,     Mutation::poch_drop_last,     Mutation::inv_poch_drop_last,
        Mutation::poch_inf_drop_first, Mutation::inv_poch_inf_drop_first, Mutation::gaussian_shift,
        Mutation::lambert_drop_first, Mutation::sigma_shift,    Mutation::sigma2_shift,
        Mutation::tail_skip_first, Mutation::finite_T_shift,   Mutation::p2_shift,
        Mutation::tau_swap,       Mutation::rank_count_shift,
    };
    return all;
}

// ---- Kit --------------------------------------------------------------

QSeries Kit::poch(const QMonomial &a, int n, int base, const SeriesContext &ctx) const
{
    if (m_ == Mutation::poch_drop_last && n >= 1) {
        --n;
    }
    return pochhammer_finite(a, n, base, ctx);
}

QSeries Kit::inv_poch(const QMonomial &a, int n, int base, const SeriesContext &ctx) const
{
    if (m_ == Mutation::inv_poch_drop_last && n >= 1) {
        --n;
    }
    return inv_pochhammer_finite(a, n, base, ctx);
}

QSeries Kit::poch_inf(const QMonomial &a, int base, const SeriesContext &ctx) const
{
    if (m_ == Mutation::poch_inf_drop_first) {
        return pochhammer_infinite(a.times_q(base), base, ctx);
    }
    return pochhammer_infinite(a, base, ctx);
}

QSeries Kit::inv_poch_inf(const QMonomial &a, int base, const SeriesContext &ctx) const
{
    if (m_ == Mutation::inv_poch_inf_drop_first) {
        return inv_pochhammer_infinite(a.times_q(base), base, ctx);
    }
    return inv_pochhammer_infinite(a, base, ctx);
}

std::vector<QSeries> Kit::gaussian_row(int j, const SeriesContext &ctx) const
{
    auto row = gaussian_binomial_row(j, ctx);
    if (m_ == Mutation::gaussian_shift) {
        for (int n = 1; n < j; ++n) {
            row[static_cast<std::size_t>(n)] += ctx.q_power(1);
        }
    }
    return row;
}

QSeries Kit::lambert(int a, int b, const SeriesContext &ctx) const
{
    auto s = qtails::lambert(a, b, ctx);
    if (m_ == Mutation::lambert_drop_first) {
        s -= div_one_minus(ctx.q_power(a), ctx.mono(1, b));
    }
    return s;
}

QSeries Kit::sigma(const SeriesContext &ctx) const
{
    auto s = sigma_series(ctx);
    return m_ == Mutation::sigma_shift ? s + ctx.q_power(3) : s;
}

QSeries Kit::sigma2(const SeriesContext &ctx) const
{
    auto s = sigma2_series(ctx);
    return m_ == Mutation::sigma2_shift ? s + ctx.q_power(2) : s;
}

QSeries Kit::tail_sum(const TailFamily &f, const SeriesContext &ctx) const
{
    auto s = qtails::tail_sum(f, ctx);
    if (m_ == Mutation::tail_skip_first) {
        s -= f.limit - f.first;
    }
    return s;
}

QSeries Kit::finite_T(int j, std::string_view x, std::string_view y, const SeriesContext &ctx,
                      bool require_caps) const
{
    auto t = qtails::finite_T(j, x, y, ctx, require_caps);
    if (m_ == Mutation::finite_T_shift && j >= 1) {
        t += ctx.q_power(1);
    }
    return t;
}

std::int64_t Kit::p1(int n) const { return pl::p1_count(n); }

std::int64_t Kit::p2(int n) const { return pl::p2_count(n) + (m_ == Mutation::p2_shift && n == 5 ? 1 : 0); }

int Kit::tau_even(int n) const { return m_ == Mutation::tau_swap ? pl::tau_odd(n) : pl::tau_even(n); }

int Kit::tau_odd(int n) const { return m_ == Mutation::tau_swap ? pl::tau_even(n) : pl::tau_odd(n); }

std::int64_t Kit::sigma_rank_count(int n) const
{
    return pl::sigma_rank_count(n) + (m_ == Mutation::rank_count_shift && n == 4 ? 1 : 0);
}

std::int64_t Kit::sigma2_rank_count(int n) const
{
    return pl::sigma2_rank_count(n) + (m_ == Mutation::rank_count_shift && n == 4 ? 1 : 0);
}

// ---- builders -----------------------------------------------------------

namespace {

int neg1(int n) { return n % 2 == 0 ? 1 : -1; }
int tri(int n) { return n * (n - 1) / 2; }

int euler_cap(const Options &o) { return static_cast<int>(std::ceil(std::sqrt(2.0 * o.order))) + 2; }

// s / (1 - q^k)
QSeries over(const QSeries &s, int k, const SeriesContext &c) { return div_one_minus(s, c.mono(1, k)); }

// sum_{k>=1} q^k / (1 + q^k), over n from `from`.
QSeries plus_lambert(int from, const SeriesContext &c)
{
    QSeries s = c.zero();
    for (int n = from; n <= c.order(); ++n) {
        s += div_one_minus(c.q_power(n), c.mono(-1, n));
    }
    return s;
}

// sum_{n>=1} (-x)^n q^{n(n-1)/2} / (1 - q^n), x a parameter or q^0 when empty.
QSeries euler_lambert(std::string_view x, const SeriesContext &c)
{
    QSeries s = c.zero();
    for (int n = 1; tri(n) <= c.order(); ++n) {
        auto m = c.mono(neg1(n), tri(n), {{x, n}});
        if (m.is_zero()) {
            break;
        }
        s += over(c.monomial(m), n, c);
    }
    return s;
}

// sum_{m>=1} (x/q)_m q^m / (1 - q^m)
QSeries shifted_poch_lambert(std::string_view x, const BuildEnv &e)
{
    const auto &c = e.ctx;
    QSeries s = c.zero();
    for (int m = 1; m <= c.order() + 1; ++m) {
        s += over(shift(e.kit.poch(c.mono(1, -1, {{x, 1}}), m, 1, c), m), m, c);
    }
    return s;
}

// 1/((b)_inf (d)_inf), one factor per parameter.
QSeries inv_bd(const BuildEnv &e)
{
    const auto &c = e.ctx;
    return e.kit.inv_poch_inf(c.mono(1, 0, {{"b", 1}}), 1, c) * e.kit.inv_poch_inf(c.mono(1, 0, {{"d", 1}}), 1, c);
}

QSeries bd_tails(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto b = c.mono(1, 0, {{"b", 1}});
    const auto d = c.mono(1, 0, {{"d", 1}});
    TailFamily fam{
        e.kit.inv_poch_inf(b, 1, c) * e.kit.inv_poch_inf(d, 1, c),
        c.one(),
        [&c, b, d](int n, const QSeries &prev) {
            return div_one_minus(div_one_minus(prev, b.times_q(n - 1)), d.times_q(n - 1));
        },
        [](int n) { return n; },
    };
    return e.kit.tail_sum(fam, c);
}

// sum_{n,m>=1} (-d)^n (-b)^m q^{n(n-1)/2 + m(m-1)/2} / ((q)_n (q)_m (1 - q^{m+n}))
QSeries double_euler(const BuildEnv &e)
{
    const auto &c = e.ctx;
    std::vector<QSeries> inv_q;
    for (int n = 0; tri(n) <= c.order(); ++n) {
        inv_q.push_back(e.kit.inv_poch(c.mono(1, 1), n, 1, c));
    }
    QSeries s = c.zero();
    for (int n = 1; n < static_cast<int>(inv_q.size()); ++n) {
        for (int m = 1; tri(n) + tri(m) <= c.order(); ++m) {
            auto mono = c.mono(neg1(n + m), tri(n) + tri(m), {{"d", n}, {"b", m}});
            if (mono.is_zero()) {
                continue;
            }
            auto t = mul_monomial(inv_q[static_cast<std::size_t>(n)] * inv_q[static_cast<std::size_t>(m)], mono);
            s += over(t, n + m, c);
        }
    }
    return s;
}

std::vector<Side> build_R1(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    TailFamily fam{
        k.poch_inf(c.mono(-1, 1), 1, c),
        c.one(),
        [&c](int n, const QSeries &prev) { return mul_one_minus(prev, c.mono(-1, n)); },
        [](int n) { return n + 1; },
    };
    auto lhs = k.tail_sum(fam, c);
    auto rhs = k.inv_poch_inf(c.mono(1, 1), 2, c) * (c.constant(Rational(-1, 2)) + k.lambert(1, 1, c)) +
               scale(k.sigma(c), Rational(1, 2));
    return {{"tails of (-q)_n", lhs}, {"Lambert and sigma form", rhs}};
}

std::vector<Side> build_R2(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    TailFamily fam{
        k.inv_poch_inf(c.mono(1, 1), 2, c),
        div_one_minus(c.one(), c.mono(1, 1)),
        [&c](int n, const QSeries &prev) { return div_one_minus(prev, c.mono(1, 2 * n + 1)); },
        [](int n) { return 2 * n + 3; },
    };
    auto lhs = k.tail_sum(fam, c);
    auto rhs = k.poch_inf(c.mono(-1, 1), 1, c) * (c.constant(Rational(-1, 2)) + k.lambert(2, 2, c)) +
               scale(k.sigma(c), Rational(1, 2));
    return {{"tails of 1/(q;q^2)_{n+1}", lhs}, {"Lambert and sigma form", rhs}};
}

std::vector<Side> build_T1(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    const int M = c.order() + 1;
    // P_m = (b/q)_m q^m / (q)_m
    std::vector<QSeries> P;
    for (int m = 0; m <= M; ++m) {
        P.push_back(shift(k.poch(c.mono(1, -1, {{"b", 1}}), m, 1, c), m) * k.inv_poch(c.mono(1, 1), m, 1, c));
    }
    QSeries D = c.zero();
    for (int n = 1; tri(n) <= c.order(); ++n) {
        auto lead = c.mono(neg1(n), tri(n), {{"d", n}});
        if (lead.is_zero()) {
            break;
        }
        QSeries inner = c.zero();
        for (int m = 1; m <= M; ++m) {
            inner += k.poch(c.mono(1, n), m, 1, c) * P[static_cast<std::size_t>(m)];
        }
        D += over(mul_monomial(inner, lead), n, c);
    }
    auto braces = k.lambert(1, 1, c) - euler_lambert("d", c) - shifted_poch_lambert("b", e) - D;
    auto lhs = bd_tails(e);
    auto rhs = inv_bd(e) * braces;
    return {{"tails of 1/((b)_n (d)_n)", lhs}, {"four-sum form", rhs}};
}

std::vector<Side> build_T1S(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    auto single = [&](std::string_view x) {
        QSeries s = c.zero();
        for (int n = 1; tri(n) <= c.order(); ++n) {
            auto m = c.mono(neg1(n), tri(n), {{x, n}});
            if (m.is_zero()) {
                break;
            }
            s += over(mul_monomial(k.inv_poch(c.mono(1, 1), n, 1, c), m), n, c);
        }
        return s;
    };
    auto dd = double_euler(e);
    auto w = inv_bd(e);
    auto form_a = -(w * (single("d") + single("b") + dd));
    auto form_b = w * (scale(k.lambert(1, 1, c), 2) - shifted_poch_lambert("d", e) - shifted_poch_lambert("b", e) - dd);
    auto lhs = bd_tails(e);
    return {{"tails of 1/((b)_n (d)_n)", lhs}, {"symmetric form A", form_a}, {"symmetric form B", form_b}};
}

std::vector<Side> build_BDQ(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    auto inv_q = k.inv_poch_inf(c.mono(1, 1), 1, c);
    TailFamily fam{
        inv_q * inv_q,
        c.one(),
        [&c](int n, const QSeries &prev) { return div_one_minus(div_one_minus(prev, c.mono(1, n)), c.mono(1, n)); },
        [](int n) { return n + 1; },
    };
    auto lhs = k.tail_sum(fam, c);
    QSeries alt = c.zero();
    for (int n = 1; n * (n + 1) / 2 <= c.order(); ++n) {
        alt += over(c.q_power(n * (n + 1) / 2, neg1(n)), n, c);
    }
    auto w = k.inv_poch_inf(c.mono(1, 1), 1, c);
    auto rhs = w * w * (k.lambert(1, 1, c) - alt);
    return {{"tails of 1/(q)_n^2", lhs}, {"Lambert form", rhs}};
}

std::vector<Side> build_L31(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    QSeries lhs = c.zero();
    for (int n = 1; 2 * n <= c.order(); ++n) {
        lhs += over(shift(k.inv_poch(c.mono(-1, 1), n, 1, c), 2 * n), n, c);
    }
    QSeries s = c.zero();
    for (int m = 1; m <= c.order(); ++m) {
        s += over(over(shift(k.inv_poch(c.mono(-1, 1), m, 1, c), m), m, c), m + 1, c);
    }
    auto rhs = over(c.q_power(1), 1, c) - mul_one_minus(s, c.mono(1, 1));
    return {{"sum q^{2n}/((-q)_n (1-q^n))", lhs}, {"rearranged form", rhs}};
}

std::vector<Side> build_T2(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    QSeries s = c.zero();
    for (int m = 1; 2 * m - 1 <= c.order(); ++m) {
        s += over(shift(k.poch(c.mono(1, 1), m - 1, 2, c), 2 * m), 2 * m, c);
    }
    auto lhs = mul_one_minus(s, c.mono(1, -1));
    QSeries r = c.zero();
    for (int n = 1; 2 * n <= c.order(); ++n) {
        r += over(shift(k.inv_poch(c.mono(-1, 1), n - 1, 1, c), 2 * n), 2 * n, c);
    }
    auto rhs = r - plus_lambert(1, c);
    return {{"(1-1/q) sum (q;q^2)_{m-1} q^{2m}/(1-q^{2m})", lhs}, {"difference form", rhs}};
}

// (1/(q)_inf^2) sum (-1)^{n-1} n q^{n(n+1)/2} / (1 - q^n)
QSeries concave_series(const SeriesContext &c, const Kit &k)
{
    QSeries s = c.zero();
    for (int n = 1; n * (n + 1) / 2 <= c.order(); ++n) {
        s += over(c.q_power(n * (n + 1) / 2, -neg1(n) * n), n, c);
    }
    auto w = k.inv_poch_inf(c.mono(1, 1), 1, c);
    return w * w * s;
}

std::vector<Side> build_T4(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    const int N = c.order();
    auto e1 = concave_series(c, k);

    std::vector<QSeries> inv_q;
    for (int n = 0; n <= N; ++n) {
        inv_q.push_back(k.inv_poch(c.mono(1, 1), n, 1, c));
    }
    QSeries e2 = c.zero();
    QSeries prefix = c.zero();
    for (int kk = 1; kk <= N; ++kk) {
        const auto &iq = inv_q[static_cast<std::size_t>(kk - 1)];
        prefix += iq * iq;
        e2 += over(shift(prefix, kk), kk, c);
    }

    QSeries e3 = c.zero();
    for (int kk = 1; kk <= N; ++kk) {
        QSeries inner = c.zero();
        for (int n = 0; n < kk && tri(n) <= N; ++n) {
            inner += over(shift(scale(inv_q[static_cast<std::size_t>(n)], neg1(n)), tri(n)), kk - n, c);
        }
        e3 += over(shift(inner * k.poch(c.mono(1, 1), kk, 1, c), kk), kk, c);
    }
    auto w = k.inv_poch_inf(c.mono(1, 1), 1, c);
    e3 = w * w * e3;
    return {{"divisor-type form", e1}, {"prefix form", e2}, {"inner-sum form", e3}};
}

std::vector<Side> build_AUX1(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    QSeries s = c.zero();
    for (int n = 1; n <= c.order(); ++n) {
        s += shift(k.inv_poch(c.mono(-1, 1), n, 1, c), n);
    }
    auto w = k.inv_poch_inf(c.mono(1, 1), 2, c);
    auto lhs = w - c.one();
    auto rhs = w * s;
    return {{"1/(q;q^2)_inf - 1", lhs}, {"sum over 1/(-q)_n", rhs}};
}

std::vector<Side> build_AUX2(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    QSeries s = c.zero();
    for (int n = 1; n <= c.order(); ++n) {
        s += over(shift(k.inv_poch(c.mono(-1, 1), n, 1, c), n), n, c);
    }
    auto lhs = k.inv_poch_inf(c.mono(1, 1), 2, c) * s;
    QSeries mid = c.zero();
    for (int n = 1; n <= c.order(); ++n) {
        mid += shift(k.inv_poch(c.mono(1, n), n + 1, 1, c) * k.inv_poch_inf(c.mono(1, 2 * n + 1), 2, c), n);
    }
    auto rhs = scale(k.sigma(c), Rational(-1, 2)) +
               k.poch_inf(c.mono(-1, 1), 1, c) * (c.constant(Rational(1, 2)) + plus_lambert(1, c));
    return {{"sum q^n/((-q)_n (1-q^n)) / (q;q^2)_inf", lhs}, {"product form", mid}, {"sigma form", rhs}};
}

// (q^{n+1})_inf^2 - (x q^n)_inf (y q^n)_inf for the sot5 family; the tails of
// this partial against the limit 0 give the left side.
QSeries sot5_partial(int n, std::string_view x, std::string_view y, const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    auto q1 = k.poch_inf(c.mono(1, n + 1), 1, c);
    return q1 * q1 - k.poch_inf(c.mono(1, n, {{x, 1}}), 1, c) * k.poch_inf(c.mono(1, n, {{y, 1}}), 1, c);
}

QSeries sot5_lhs(std::string_view x, std::string_view y, const BuildEnv &e)
{
    const auto &c = e.ctx;
    TailFamily fam{
        c.zero(),
        sot5_partial(0, x, y, e),
        [&e, x, y](int n, const QSeries &) { return sot5_partial(n, x, y, e); },
        [](int n) { return n; },
    };
    return e.kit.tail_sum(fam, c);
}

// sum_j (-1)^j q^{j(j+1)/2} / (1 - q^j)
QSeries signed_triangular(const SeriesContext &c)
{
    QSeries s = c.zero();
    for (int j = 1; j * (j + 1) / 2 <= c.order(); ++j) {
        s += over(c.q_power(j * (j + 1) / 2, neg1(j)), j, c);
    }
    return s;
}

QSeries sot5_rhs(std::string_view x, std::string_view y, const BuildEnv &e)
{
    const auto &c = e.ctx;
    QSeries s = c.zero();
    for (int j = 1; j <= c.order() + 2; ++j) {
        s += over(shift(e.kit.finite_T(j, x, y, c, false), j), j, c);
    }
    return s - signed_triangular(c);
}

std::vector<Side> build_S5(const BuildEnv &e)
{
    auto lhs = sot5_lhs("b", "d", e);
    auto rhs = sot5_rhs("b", "d", e);
    return {{"tails of (bq^n)_inf (dq^n)_inf", lhs}, {"T(j) form", rhs}};
}

std::vector<Side> build_C51(const BuildEnv &e)
{
    auto lhs = sot5_lhs("b", "b", e);
    auto rhs = sot5_rhs("b", "b", e);
    return {{"tails of (bq^n)_inf^2", lhs}, {"T(j) form at d = b", rhs}};
}

// sum_n (q^{n+1})_inf ((dq^n)_inf - (q^{n+1})_inf)
QSeries c52_lhs(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    auto partial = [&c, &k](int n) {
        auto q1 = k.poch_inf(c.mono(1, n + 1), 1, c);
        return q1 * (q1 - k.poch_inf(c.mono(1, n, {{"d", 1}}), 1, c));
    };
    TailFamily fam{c.zero(), partial(0), [partial](int n, const QSeries &) { return partial(n); },
                   [](int n) { return n; }};
    return k.tail_sum(fam, c);
}

// sum_j q^j/(1-q^j) sum_n (-1)^n [j,n] (d/q)_{j-n} q^{n(n-1)/2}
QSeries c53_sum(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    QSeries s = c.zero();
    for (int j = 1; j <= c.order() + 2; ++j) {
        auto row = k.gaussian_row(j, c);
        QSeries u = c.zero();
        for (int n = 0; n <= j && tri(n) - 1 <= c.order(); ++n) {
            auto t = row[static_cast<std::size_t>(n)] * k.poch(c.mono(1, -1, {{"d", 1}}), j - n, 1, c);
            u += shift(scale(t, neg1(n)), tri(n));
        }
        s += over(shift(u, j), j, c);
    }
    return s;
}

std::vector<Side> build_C52(const BuildEnv &e)
{
    const auto &c = e.ctx;
    QSeries rhs = c.zero();
    for (int j = 1; tri(j) <= c.order(); ++j) {
        auto dj = c.monomial(c.mono(neg1(j), tri(j), {{"d", j}}));
        rhs += over(dj - c.q_power(j * (j + 1) / 2, neg1(j)), j, c);
    }
    auto lhs = c52_lhs(e);
    return {{"tails of (q^{n+1})_inf (dq^n)_inf", lhs}, {"closed sum", rhs}};
}

std::vector<Side> build_C53(const BuildEnv &e)
{
    auto lhs = c53_sum(e);
    auto rhs = euler_lambert("d", e.ctx);
    return {{"Gaussian double sum", lhs}, {"Euler-type sum", rhs}};
}

std::vector<Side> build_C53D(const BuildEnv &e)
{
    auto lhs = c52_lhs(e);
    auto rhs = c53_sum(e) - signed_triangular(e.ctx);
    return {{"tails of (q^{n+1})_inf (dq^n)_inf", lhs}, {"Gaussian double sum form", rhs}};
}

std::vector<std::vector<Side>> build_SYM(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    std::vector<std::vector<Side>> out;
    for (int j = 0; j <= e.opts.j_max; ++j) {
        auto row = k.gaussian_row(j, c);
        QSeries swapped = c.zero();
        for (int n = 0; n <= j; ++n) {
            auto m = c.mono(neg1(n), n * (n - 3) / 2, {{"b", n}});
            swapped += mul_monomial(row[static_cast<std::size_t>(n)] * k.poch(c.mono(1, -1, {{"d", 1}}), j - n, 1, c), m);
        }
        out.push_back({{"T(j)", k.finite_T(j, "b", "d", c)}, {"b-d exchanged sum", swapped}});
    }
    return out;
}

std::vector<Side> build_TJ(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    // Every z-degree the parameter caps keep, which may exceed z_cap under explicit caps.
    const int J = c.spec()->cap(c.spec()->index_of("z"));
    QSeries lhs = c.zero();
    for (int j = 0; j <= J; ++j) {
        auto t = k.finite_T(j, "b", "d", c, false) * k.inv_poch(c.mono(1, 1), j, 1, c);
        lhs += mul_monomial(t, c.mono(1, 0, {{"z", j}}));
    }
    auto rhs = k.poch_inf(c.mono(1, -1, {{"d", 1}, {"z", 1}}), 1, c) *
               k.poch_inf(c.mono(1, -1, {{"b", 1}, {"z", 1}}), 1, c) *
               k.inv_poch_inf(c.mono(1, 0, {{"z", 1}}), 1, c);
    return {{"sum T(j) z^j/(q)_j", lhs}, {"product", rhs}};
}

std::function<std::vector<Side>(const BuildEnv &)> build_AO(int r, int s)
{
    return [r, s](const BuildEnv &e) -> std::vector<Side> {
        const auto &c = e.ctx;
        const auto &k = e.kit;
        const int N = c.order();
        // (q^{s-r})_n / (q)_n; for s <= r the factor 1 - q^0 kills every n > r - s.
        std::vector<QSeries> A;
        for (int n = 0; n <= r - s || (s > r && r * n <= N); ++n) {
            A.push_back(k.poch(c.mono(1, s - r), n, 1, c) * k.inv_poch(c.mono(1, 1), n, 1, c));
        }
        const int top = static_cast<int>(A.size()) - 1;
        QSeries lhs = c.zero();
        for (int n = 0; n <= top; ++n) {
            for (int m = 0; m <= top && (s <= r || r * (n + m) <= N); ++m) {
                if (n == m) {
                    continue;
                }
                const int qexp = r * (n + m) + (k.drops_ao_qm() ? 0 : m);
                auto t = A[static_cast<std::size_t>(n)] * A[static_cast<std::size_t>(m)];
                lhs += shift(scale(t, n - m), qexp);
            }
        }
        auto top_prod = k.poch_inf(c.mono(1, s + 1), 1, c);
        auto bottom = k.inv_poch_inf(c.mono(1, r), 1, c);
        auto rhs = (c.q_power(r) - c.q_power(s)) * top_prod * top_prod * bottom * bottom;
        return {{"double sum", lhs}, {"product", rhs}};
    };
}

std::vector<std::vector<Side>> build_AOT(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    const int J = e.opts.j_max;
    const auto d_q2 = c.mono(1, -2, {{"d", 1}});
    std::vector<QSeries> A, B;
    for (int n = 0; n <= J + 1; ++n) {
        A.push_back(k.poch(d_q2, n, 1, c) * k.inv_poch(c.mono(1, 1), n, 1, c));
        B.push_back(k.drops_ao_qm() ? A.back() : shift(A.back(), n));
    }
    std::vector<QSeries> C; // C_t = sum_n (2n - t) A_n B_{t-n}
    for (int t = 0; t <= J + 1; ++t) {
        QSeries ct = c.zero();
        for (int n = 0; n <= t; ++n) {
            if (2 * n != t) {
                ct += scale(A[static_cast<std::size_t>(n)] * B[static_cast<std::size_t>(t - n)], 2 * n - t);
            }
        }
        C.push_back(std::move(ct));
    }
    std::vector<std::vector<Side>> out;
    for (int j = 0; j <= J; ++j) {
        QSeries sum = c.zero();
        for (int t = 0; t <= j + 1; ++t) {
            const int sh = (j - t) * (j - t + 1) / 2;
            sum += shift(scale(C[static_cast<std::size_t>(t)] * k.inv_poch(c.mono(1, 1), j + 1 - t, 1, c),
                               neg1(j + 1 - t)),
                         sh);
        }
        auto rhs = k.poch(c.mono(1, 1), j, 1, c) * div_one_minus(sum, d_q2);
        out.push_back({{"T(j) at b = d", k.finite_T(j, "d", "d", c)}, {"Andrews-Onofri form", rhs}});
    }
    return out;
}

std::vector<std::vector<Side>> build_F12(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    std::vector<std::vector<Side>> out;
    for (int j = 0; j <= e.opts.j_max; ++j) {
        QSeries x1 = c.zero(), x2 = c.zero(), x3 = c.zero();
        for (int n = 0; n <= j; ++n) {
            auto iq = k.inv_poch(c.mono(1, 1), n, 1, c);
            x1 += shift(scale(iq, neg1(n)), n * (n + 1) / 2);
            x2 += shift(scale(iq, neg1(n) * (j + 1 - n)), tri(n));
            x3 -= shift(scale(iq, neg1(n) * n), tri(n));
        }
        x3 += shift(scale(k.inv_poch(c.mono(1, 1), j, 1, c), neg1(j) * (j + 1)), j * (j + 1) / 2);
        out.push_back({{"signed distinct-part sum", x1}, {"weighted sum", x2}, {"leading-term form", x3}});
    }
    return out;
}

std::vector<std::vector<Side>> build_F2(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    std::vector<std::vector<Side>> out;
    for (int j = 0; j <= e.opts.j_max; ++j) {
        QSeries lhs = c.zero();
        for (int n = 0; n <= j; ++n) {
            lhs += shift(scale(k.inv_poch(c.mono(1, 1), n, 1, c), neg1(n)), tri(n));
        }
        auto rhs = shift(scale(k.inv_poch(c.mono(1, 1), j, 1, c), neg1(j)), j * (j + 1) / 2);
        out.push_back({{"finite sum", lhs}, {"single term", rhs}});
    }
    return out;
}

std::vector<Side> build_A7a(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    TailFamily fam{
        k.poch_inf(c.mono(-1, 1), 1, c),
        c.one(),
        [&c](int n, const QSeries &prev) { return mul_one_minus(prev, c.mono(-1, n)); },
        [](int n) { return n + 1; },
    };
    QSeries rhs = c.zero();
    for (int kk = 1; kk <= c.order(); ++kk) {
        rhs += shift(scale(k.poch(c.mono(-1, 1), kk - 1, 1, c), kk), kk);
    }
    auto lhs = k.tail_sum(fam, c);
    return {{"tails of (-q)_n", lhs}, {"sum k q^k (-q)_{k-1}", rhs}};
}

std::vector<Side> build_A7b(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    TailFamily fam{
        k.inv_poch_inf(c.mono(1, 1), 2, c),
        div_one_minus(c.one(), c.mono(1, 1)),
        [&c](int n, const QSeries &prev) { return div_one_minus(prev, c.mono(1, 2 * n + 1)); },
        [](int n) { return 2 * n + 3; },
    };
    QSeries rhs = c.zero();
    for (int kk = 1; 2 * kk + 1 <= c.order(); ++kk) {
        rhs += shift(scale(k.inv_poch(c.mono(1, 1), kk + 1, 2, c), kk), 2 * kk + 1);
    }
    auto lhs = k.tail_sum(fam, c);
    return {{"tails of 1/(q;q^2)_{n+1}", lhs}, {"sum k q^{2k+1}/(q;q^2)_{k+1}", rhs}};
}

std::vector<Side> build_SOT5rep(const BuildEnv &e)
{
    const auto &c = e.ctx;
    const auto &k = e.kit;
    TailFamily fam{
        k.inv_poch_inf(c.mono(1, 1), 5, c) * k.inv_poch_inf(c.mono(1, 4), 5, c),
        c.one(),
        [&c](int n, const QSeries &prev) {
            return div_one_minus(div_one_minus(prev, c.mono(1, 5 * n - 4)), c.mono(1, 5 * n - 1));
        },
        [](int n) { return 5 * n + 1; },
    };
    QSeries rhs = c.zero();
    for (int kk = 1; 5 * kk - 4 <= c.order(); ++kk) {
        auto first = k.inv_poch(c.mono(1, 1), kk, 5, c);
        rhs += shift(scale(first * k.inv_poch(c.mono(1, 4), kk - 1, 5, c), kk), 5 * kk - 4);
        rhs += shift(scale(first * k.inv_poch(c.mono(1, 4), kk, 5, c), kk), 5 * kk - 1);
    }
    auto lhs = k.tail_sum(fam, c);
    return {{"tails of 1/((q;q^5)_n (q^4;q^5)_n)", lhs}, {"largest-part sums", rhs}};
}

std::vector<Side> build_SIG(const BuildEnv &e)
{
    const auto &k = e.kit;
    auto gf = pl::weighted_gf([&k](int n) -> std::int64_t { return n == 0 ? 1 : k.sigma_rank_count(n); }, e.target,
                              e.ctx);
    auto lhs = k.sigma(e.ctx);
    return {{"sigma", lhs}, {"rank parity of distinct-part partitions", gf}};
}

std::vector<Side> build_SIG2(const BuildEnv &e)
{
    const auto &k = e.kit;
    auto gf = pl::weighted_gf([&k](int n) -> std::int64_t { return n == 0 ? 1 : k.sigma2_rank_count(n); }, e.target,
                              e.ctx);
    auto lhs = k.sigma2(e.ctx);
    return {{"sigma2", lhs}, {"rank parity of gap-2 partitions", gf}};
}

NumericOutcome numeric_T3(const Options &, const Kit &k, int n_max)
{
    NumericOutcome out;
    auto fail = [&out](int at, std::int64_t l, std::int64_t r, std::string what) {
        out.ok = false;
        out.at = at;
        out.lhs = std::to_string(l);
        out.rhs = std::to_string(r);
        out.what = std::move(what);
        return out;
    };
    std::vector<std::int64_t> p1(static_cast<std::size_t>(n_max + 2), 0);
    for (int n = 1; n <= n_max + 1; ++n) {
        p1[static_cast<std::size_t>(n)] = k.p1(n);
    }
    auto p1_at = [&](int n) { return n <= n_max + 1 ? p1[static_cast<std::size_t>(n)] : k.p1(n); };
    // The worked example at n = 6.
    const std::int64_t ex_l = p1_at(6) - p1_at(7);
    const std::int64_t ex_r = k.p2(6) + k.tau_even(6) - k.tau_odd(6);
    if (p1_at(6) != 2 || p1_at(7) != -1 || k.p2(6) != 3 || k.tau_even(6) != 2 || k.tau_odd(6) != 2 || ex_l != 3 ||
        ex_r != 3) {
        return fail(6, ex_l, ex_r, "worked example at n = 6");
    }
    std::vector<std::int64_t> diff(static_cast<std::size_t>(n_max + 1), 0);
    for (int n = 1; n <= n_max; ++n) {
        const std::int64_t l = p1_at(n) - p1_at(n + 1);
        const std::int64_t r = k.p2(n) + k.tau_even(n) - k.tau_odd(n);
        if (l != r) {
            return fail(n, l, r, "p1(n) - p1(n+1) against p2(n) + tau_e(n) - tau_o(n)");
        }
        diff[static_cast<std::size_t>(n)] = k.tau_odd(n) - k.tau_even(n) - k.p2(n);
    }
    std::int64_t acc = 0;
    for (int N = 2; N <= n_max; ++N) {
        acc += diff[static_cast<std::size_t>(N - 1)];
        if (p1_at(N) != acc) {
            return fail(N, p1_at(N), acc, "p1(N) against the summed divisor and p2 counts");
        }
    }
    return out;
}

NumericOutcome numeric_T4P(const Options &, const Kit &k, int n_max)
{
    NumericOutcome out;
    SeriesContext c(n_max, ParamSpec::none());
    auto s = concave_series(c, k);
    for (int n = 1; n <= n_max; ++n) {
        const Rational v = s.constant_coeff(n);
        out.sequence.push_back(v);
        if (out.ok && (v <= 0 || v.get_den() != 1)) {
            out.ok = false;
            out.at = n;
            out.lhs = v.get_str();
            out.rhs = "> 0";
            out.what = "nonpositive coefficient";
        }
    }
    return out;
}

std::function<int(const Options &, const std::vector<int> &)> fixed(int s)
{
    return [s](const Options &, const std::vector<int> &) { return s; };
}

// (q^{s-r})_n reaches q^{-(r-s)(r-s+1)/2}; a product of two needs twice that
// below zero, and the precision it costs.
int ao_slack(int r, int s) { return (r - s) * (r - s + 1) + 2; }

ParamRule euler_rule(std::string name) { return {std::move(name), euler_cap}; }

IdentityDef qseries(std::string id, std::string description, std::string reference, std::vector<ParamRule> params,
                    int slack, std::function<std::vector<Side>(const BuildEnv &)> build)
{
    IdentityDef d;
    d.id = std::move(id);
    d.description = std::move(description);
    d.reference = std::move(reference);
    d.mode = Mode::qseries;
    d.params = std::move(params);
    d.slack = fixed(slack);
    d.build = std::move(build);
    return d;
}

IdentityDef family(std::string id, std::string description, std::string reference, std::vector<ParamRule> params,
                   std::function<int(const Options &, const std::vector<int> &)> slack,
                   std::function<std::vector<std::vector<Side>>(const BuildEnv &)> build)
{
    IdentityDef d;
    d.id = std::move(id);
    d.description = std::move(description);
    d.reference = std::move(reference);
    d.mode = Mode::per_j_family;
    d.params = std::move(params);
    d.slack = std::move(slack);
    d.build_family = std::move(build);
    return d;
}

std::vector<IdentityDef> make_registry()
{
    auto jcap = [](const Options &o) { return o.j_max; };
    auto zcap = [](const Options &o) { return o.z_cap; };
    std::vector<IdentityDef> r;
    r.push_back(qseries("R1", "sums of tails of (-q;q)_n in terms of a Lambert series and sigma",
                        "Ramanujan sums of tails for (-q;q)_n", {}, 2, build_R1));
    r.push_back(qseries("R2", "sums of tails of 1/(q;q^2)_{n+1} in terms of a Lambert series and sigma",
                        "Ramanujan sums of tails for 1/(q;q^2)_{n+1}", {}, 2, build_R2));
    r.push_back(qseries("T1", "two-parameter sums of tails of 1/((b)_n (d)_n)", "two-parameter sums of tails",
                        {euler_rule("b"), euler_rule("d")}, 4, build_T1));
    r.push_back(qseries("T1S", "both symmetric forms of the two-parameter sums of tails",
                        "symmetric two-parameter sums of tails", {euler_rule("b"), euler_rule("d")}, 4, build_T1S));
    r.push_back(qseries("BDQ", "sums of tails of 1/(q)_n^2", "two-parameter sums of tails at b = d = q", {}, 2,
                        build_BDQ));
    r.push_back(qseries("L31", "rearrangement of sum q^{2n}/((-q)_n (1-q^n))", "rearrangement lemma", {}, 2,
                        build_L31));
    r.push_back(qseries("T2", "(1-1/q) sum (q;q^2)_{m-1} q^{2m}/(1-q^{2m}) as a difference of two sums",
                        "combination identity", {}, 3, build_T2));
    {
        IdentityDef d;
        d.id = "T3";
        d.description = "p1(n) - p1(n+1) = p2(n) + tau_e(n) - tau_o(n) and its summed form";
        d.reference = "weighted partition counts p1, p2";
        d.mode = Mode::partition_numeric;
        d.numeric = numeric_T3;
        d.default_n_max = 40;
        r.push_back(std::move(d));
    }
    r.push_back(qseries("T4", "three expressions for the concave-composition series",
                        "concave-composition series", {}, 2, build_T4));
    {
        IdentityDef d;
        d.id = "T4P";
        d.description = "positive coefficients of the concave-composition series";
        d.reference = "positivity of the concave-composition series";
        d.mode = Mode::positivity;
        d.numeric = numeric_T4P;
        d.default_n_max = 100;
        r.push_back(std::move(d));
    }
    r.push_back(qseries("AUX1", "1/(q;q^2)_inf - 1 as a sum over 1/(-q)_n", "Euler-type expansion of 1/(q;q^2)_inf",
                        {}, 1, build_AUX1));
    r.push_back(qseries("AUX2", "sum q^n/((-q)_n (1-q^n)) over (q;q^2)_inf in terms of sigma",
                        "sigma evaluation used for the second sums of tails", {}, 2, build_AUX2));
    r.push_back(qseries("S5", "sums of tails of (bq^n)_inf (dq^n)_inf", "sums of tails of (bq^n)_inf (dq^n)_inf",
                        {euler_rule("b"), euler_rule("d")}, 6, build_S5));
    r.push_back(qseries("C51", "sums of tails of (bq^n)_inf^2", "specialization d = b", {euler_rule("b")}, 6,
                        build_C51));
    r.push_back(qseries("C52", "sums of tails of (q^{n+1})_inf (dq^n)_inf in closed form", "specialization b = q",
                        {euler_rule("d")}, 4, build_C52));
    r.push_back(qseries("C53", "Gaussian double sum against sum (-d)^j q^{j(j-1)/2}/(1-q^j)",
                        "specialization d = q, compared", {euler_rule("d")}, 6, build_C53));
    r.push_back(qseries("C53D", "sums of tails of (q^{n+1})_inf (dq^n)_inf as a Gaussian double sum",
                        "specialization d = q", {euler_rule("d")}, 6, build_C53D));
    r.push_back(family("SYM", "T(j) is symmetric in b and d", "symmetry of T(j)",
                       {{"b", jcap}, {"d", jcap}}, fixed(4), build_SYM));
    r.push_back(qseries("TJ", "sum T(j) z^j/(q)_j = (dz/q)_inf (bz/q)_inf/(z)_inf", "generating function of T(j)",
                        {{"b", zcap}, {"d", zcap}, {"z", zcap}}, 4, build_TJ));
    r.push_back(qseries("AO21", "Andrews-Onofri double sum at a = q^2, b = q", "Andrews-Onofri identity", {}, ao_slack(2, 1),
                        build_AO(2, 1)));
    r.push_back(qseries("AO31", "Andrews-Onofri double sum at a = q^3, b = q", "Andrews-Onofri identity", {}, ao_slack(3, 1),
                        build_AO(3, 1)));
    r.push_back(qseries("AO32", "Andrews-Onofri double sum at a = q^3, b = q^2", "Andrews-Onofri identity", {}, ao_slack(3, 2),
                        build_AO(3, 2)));
    r.push_back(family("AOT", "T(j) at b = d through the Andrews-Onofri double sum",
                       "finite Andrews-Onofri evaluation of T(j)", {{"d", jcap}},
                       [](const Options &, const std::vector<int> &caps) { return 2 * caps[0] + 8; }, build_AOT));
    r.push_back(family("F12", "three finite sums over 1/(q)_n agree", "finite sums over 1/(q)_n", {}, fixed(0),
                       build_F12));
    r.push_back(family("F2", "sum (-1)^n q^{n(n-1)/2}/(q)_n = (-1)^j q^{j(j+1)/2}/(q)_j", "telescoping finite sum", {},
                       fixed(0), build_F2));
    r.push_back(qseries("A7a", "sums of tails of (-q)_n as sum k q^k (-q)_{k-1}", "alternate representation for (-q)_n",
                        {}, 1, build_A7a));
    r.push_back(qseries("A7b", "sums of tails of 1/(q;q^2)_{n+1} as sum k q^{2k+1}/(q;q^2)_{k+1}",
                        "alternate representation for 1/(q;q^2)_{n+1}", {}, 1, build_A7b));
    r.push_back(qseries("SOT5rep", "sums of tails of 1/((q;q^5)_n (q^4;q^5)_n) by largest part",
                        "alternate representation for the mod-5 product", {}, 1, build_SOT5rep));
    r.push_back(qseries("SIG", "sigma counts distinct-part partitions by rank parity", "sigma as a rank-parity count",
                        {}, 0, build_SIG));
    r.push_back(qseries("SIG2", "sigma2 counts gap-2 partitions by rank parity", "sigma2 as a rank-parity count", {},
                        0, build_SIG2));
    return r;
}

MismatchInfo to_info(const Mismatch &m)
{
    return {m.q_order, m.monomial, m.lhs.get_str(), m.rhs.get_str()};
}

// Compares every side against the first; false on the first disagreement.
bool compare_sides(const std::vector<Side> &sides, int order, VerificationReport &rep, const std::string &where)
{
    if (sides.size() < 2) {
        throw Error("entry produced fewer than two sides");
    }
    for (std::size_t i = 1; i < sides.size(); ++i) {
        std::optional<Mismatch> mm;
        try {
            mm = equal_upto(sides[0].value, sides[i].value, order);
        } catch (const WindowError &err) {
            throw Error(sides[0].label + " vs " + sides[i].label + where + ": " + err.what());
        }
        if (mm) {
            rep.status = Status::fail;
            rep.first_mismatch = to_info(*mm);
            rep.message = sides[0].label + " vs " + sides[i].label + where;
            return false;
        }
    }
    return true;
}

} // namespace

const std::vector<IdentityDef> &registry()
{
    static const std::vector<IdentityDef> r = make_registry();
    return r;
}

const IdentityDef *find(std::string_view id)
{
    for (const auto &d : registry()) {
        if (d.id == id) {
            return &d;
        }
    }
    return nullptr;
}

std::vector<std::string> ids()
{
    std::vector<std::string> out;
    for (const auto &d : registry()) {
        out.push_back(d.id);
    }
    return out;
}

std::vector<std::pair<std::string, int>> resolve_caps(const IdentityDef &def, const Options &opts)
{
    std::vector<std::pair<std::string, int>> out;
    for (const auto &p : def.params) {
        const int need = p.min_cap(opts);
        int cap = need;
        if (auto it = opts.caps.find(p.name); it != opts.caps.end()) {
            if (it->second < need) {
                throw CapError("cap(" + p.name + ") = " + std::to_string(it->second) + " is below the required " +
                               std::to_string(need) + " for " + def.id);
            }
            cap = it->second;
        }
        out.emplace_back(p.name, cap);
    }
    return out;
}

VerificationReport verify(const IdentityDef &def, const Options &opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.id = def.id;
    rep.reference = def.reference;
    rep.mode = def.mode;
    rep.order = opts.order;
    try {
        rep.caps = resolve_caps(def, opts);
        const Kit kit(opts.mutation);
        if (def.mode == Mode::partition_numeric || def.mode == Mode::positivity) {
            const int n_max = opts.n_max > 0 ? opts.n_max : def.default_n_max;
            rep.order = n_max;
            auto out = def.numeric(opts, kit, n_max);
            rep.sequence = std::move(out.sequence);
            if (out.ok) {
                rep.status = Status::pass;
            } else {
                rep.status = Status::fail;
                rep.first_mismatch = MismatchInfo{out.at, "1", out.lhs, out.rhs};
                rep.message = out.what;
            }
        } else {
            std::vector<std::string> names;
            std::vector<int> caps;
            for (const auto &[name, cap] : rep.caps) {
                names.push_back(name);
                caps.push_back(cap);
            }
            const SpecPtr spec = names.empty() ? ParamSpec::none() : ParamSpec::make(names, caps);
            const int slack = def.slack ? def.slack(opts, caps) : 0;
            const SeriesContext ctx(opts.order + slack, spec);
            const BuildEnv env{ctx, kit, opts, opts.order};
            rep.status = Status::pass;
            if (def.mode == Mode::qseries) {
                compare_sides(def.build(env), opts.order, rep, "");
            } else {
                auto fam = def.build_family(env);
                for (std::size_t j = 0; j < fam.size(); ++j) {
                    if (!compare_sides(fam[j], opts.order, rep, " at j = " + std::to_string(j))) {
                        break;
                    }
                }
            }
        }
    } catch (const CapError &err) {
        rep.status = Status::error;
        rep.first_mismatch.reset();
        rep.message = std::string("insufficient caps: ") + err.what();
    } catch (const std::exception &err) {
        rep.status = Status::error;
        rep.first_mismatch.reset();
        rep.message = "while building " + def.id + ": " + err.what();
    }
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

VerificationReport verify(std::string_view id, const Options &opts)
{
    const auto *def = find(id);
    if (!def) {
        throw UnknownIdentityError("unknown identity: " + std::string(id));
    }
    return verify(*def, opts);
}

unsigned thread_budget()
{
    if (const char *env = std::getenv("QTAILS_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

Summary verify_all(const Options &opts, const std::vector<std::string> &selection, unsigned threads)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<const IdentityDef *> defs;
    if (selection.empty()) {
        for (const auto &d : registry()) {
            defs.push_back(&d);
        }
    } else {
        for (const auto &id : selection) {
            const auto *d = find(id);
            if (!d) {
                throw UnknownIdentityError("unknown identity: " + id);
            }
            defs.push_back(d);
        }
    }
    Summary sum;
    sum.reports.resize(defs.size());
    const unsigned budget = threads == 0 ? thread_budget() : threads;
    const unsigned workers = std::max(1u, std::min<unsigned>(budget, static_cast<unsigned>(defs.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < defs.size(); i = next++) {
            sum.reports[i] = verify(*defs[i], opts);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    for (const auto &r : sum.reports) {
        sum.passed += r.status == Status::pass;
        sum.failed += r.status == Status::fail;
        sum.errors += r.status == Status::error;
    }
    sum.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return sum;
}

VerificationReport positivity_check(int n_max, Mutation m)
{
    if (n_max < 1) {
        throw DomainError("positivity check needs n_max >= 1");
    }
    Options o;
    o.n_max = n_max;
    o.mutation = m;
    return verify("T4P", o);
}

} // namespace qtails::registry
