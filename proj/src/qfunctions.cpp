#include "qtails/qfunctions.hpp"

#include <algorithm>

namespace qtails {

namespace {

QSeries one_at(const SeriesContext &ctx, int hi)
{
    std::vector<ParamPoly> c(static_cast<std::size_t>(hi + 1), ParamPoly(ctx.spec()));
    c[0] = ParamPoly::constant(ctx.spec(), Rational(1));
    return QSeries(ctx.spec(), 0, hi, std::move(c), ctx.lo_floor());
}

QSeries clip(const QSeries &s, int order) { return s.hi() > order ? s.truncated(order) : s; }

void require_base(int base)
{
    if (base < 1) {
        throw DomainError("q-base exponent must be positive");
    }
}

int nilpotency(const ParamSpec &spec, ParamSpec::Key key)
{
    int bound = -1;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const int e = spec.exponent(key, i);
        if (e > 0) {
            bound = bound < 0 ? spec.cap(i) / e : std::min(bound, spec.cap(i) / e);
        }
    }
    return bound;
}

// Precision lost when multiplying by a factor 1 - m q^e with e < 0.
int mul_headroom(const QMonomial &a, int e)
{
    return (!a.is_zero() && e < 0) ? -e : 0;
}

// Precision lost when dividing by 1 - m q^e.
int div_headroom(const ParamSpec &spec, const QMonomial &a, int e)
{
    if (a.is_zero() || e >= 0 || a.is_param_free()) {
        return 0;
    }
    return -e * nilpotency(spec, a.key);
}

// A factor 1 - m q^e leaves s unchanged below q^(hi+1) once e exceeds the
// span of the window.
bool factor_matters(const QSeries &s, int e) { return !s.is_zero() && s.lo() + e <= s.hi(); }

} // namespace

QSeries pochhammer_finite(const QMonomial &a, int n, int base, const SeriesContext &ctx)
{
    require_base(base);
    if (n < 0) {
        throw DomainError("pochhammer length must be nonnegative");
    }
    int headroom = 0;
    for (int i = 0; i < n; ++i) {
        headroom += mul_headroom(a, a.q_exp + base * i);
    }
    QSeries acc = one_at(ctx, ctx.order() + headroom);
    if (a.is_zero()) {
        return clip(acc, ctx.order());
    }
    for (int i = 0; i < n; ++i) {
        const int e = a.q_exp + base * i;
        if (e > 0 && !factor_matters(acc, e)) {
            break;
        }
        acc = mul_one_minus(acc, a.times_q(base * i));
    }
    return clip(acc, ctx.order());
}

QSeries inv_pochhammer_finite(const QMonomial &a, int n, int base, const SeriesContext &ctx)
{
    require_base(base);
    if (n < 0) {
        throw DomainError("pochhammer length must be nonnegative");
    }
    int headroom = 0;
    for (int i = 0; i < n; ++i) {
        headroom += div_headroom(*ctx.spec(), a, a.q_exp + base * i);
    }
    QSeries acc = one_at(ctx, ctx.order() + headroom);
    if (a.is_zero()) {
        return clip(acc, ctx.order());
    }
    for (int i = 0; i < n; ++i) {
        const int e = a.q_exp + base * i;
        if (e > 0 && !factor_matters(acc, e)) {
            break;
        }
        acc = div_one_minus(acc, a.times_q(base * i));
    }
    return clip(acc, ctx.order());
}

namespace {

void check_convergent(const QMonomial &a, int base)
{
    if (!a.is_zero() && a.is_param_free() && a.q_exp <= -base) {
        throw DivergentProductError("(a; q^" + std::to_string(base) + ")_inf diverges for a = c q^" +
                                    std::to_string(a.q_exp));
    }
}

} // namespace

QSeries pochhammer_infinite(const QMonomial &a, int base, const SeriesContext &ctx)
{
    require_base(base);
    check_convergent(a, base);
    if (a.is_zero()) {
        return ctx.one();
    }
    int headroom = 0;
    for (int e = a.q_exp; e < 0; e += base) {
        headroom += mul_headroom(a, e);
    }
    QSeries acc = one_at(ctx, ctx.order() + headroom);
    for (int i = 0;; ++i) {
        const int e = a.q_exp + base * i;
        if (e > 0 && !factor_matters(acc, e)) {
            break;
        }
        acc = mul_one_minus(acc, a.times_q(base * i));
    }
    return clip(acc, ctx.order());
}

QSeries inv_pochhammer_infinite(const QMonomial &a, int base, const SeriesContext &ctx)
{
    require_base(base);
    check_convergent(a, base);
    if (a.is_zero()) {
        return ctx.one();
    }
    int headroom = 0;
    for (int e = a.q_exp; e < 0; e += base) {
        headroom += div_headroom(*ctx.spec(), a, e);
    }
    QSeries acc = one_at(ctx, ctx.order() + headroom);
    for (int i = 0;; ++i) {
        const int e = a.q_exp + base * i;
        if (e > 0 && !factor_matters(acc, e)) {
            break;
        }
        acc = div_one_minus(acc, a.times_q(base * i));
    }
    return clip(acc, ctx.order());
}

QSeries euler_expansion(const QMonomial &a, int base, const SeriesContext &ctx)
{
    require_base(base);
    check_convergent(a, base);
    if (a.is_zero()) {
        return ctx.one();
    }
    const auto &spec = *ctx.spec();
    const int order = ctx.order();
    // Term k has q-order k e + base k(k-1)/2 and parameter key k * key.
    auto q_order = [&](int k) { return k * a.q_exp + base * k * (k - 1) / 2; };
    auto key_power = [&](int k) -> std::optional<ParamSpec::Key> {
        std::vector<int> exps = spec.exponents(a.key);
        for (auto &e : exps) {
            e *= k;
        }
        return spec.key_of(exps);
    };
    int last = 0;
    int lowest = 0;
    for (int k = 1;; ++k) {
        const bool past_minimum = base * k > -a.q_exp;
        if (!key_power(k)) {
            break;
        }
        if (q_order(k) > order && past_minimum) {
            break;
        }
        last = k;
        lowest = std::min(lowest, q_order(k));
    }
    QSeries inv = one_at(ctx, order - lowest);
    QSeries sum = one_at(ctx, order - lowest);
    Rational sign_power(1);
    for (int k = 1; k <= last; ++k) {
        inv = div_one_minus(inv, QMonomial{Rational(1), 0, base * k});
        sign_power *= -a.coeff;
        sum += mul_monomial(inv, QMonomial{sign_power, *key_power(k), q_order(k)});
    }
    return clip(sum, order);
}

std::vector<QSeries> gaussian_binomial_row(int j, const SeriesContext &ctx)
{
    if (j < 0) {
        throw DomainError("gaussian binomial needs j >= 0");
    }
    const int order = ctx.order();
    using Poly = std::vector<mpz_class>;
    std::vector<Poly> row{Poly{1}};
    for (int r = 1; r <= j; ++r) {
        std::vector<Poly> next(static_cast<std::size_t>(r + 1));
        for (int n = 0; n <= r; ++n) {
            const int deg = std::min(order, n * (r - n));
            Poly p(static_cast<std::size_t>(deg + 1));
            if (n >= 1) {
                const auto &left = row[static_cast<std::size_t>(n - 1)];
                for (std::size_t i = 0; i < left.size() && i < p.size(); ++i) {
                    p[i] += left[i];
                }
            }
            if (n <= r - 1) {
                const auto &up = row[static_cast<std::size_t>(n)];
                for (std::size_t i = 0; i < up.size(); ++i) {
                    const std::size_t target = i + static_cast<std::size_t>(n);
                    if (target < p.size()) {
                        p[target] += up[i];
                    }
                }
            }
            next[static_cast<std::size_t>(n)] = std::move(p);
        }
        row = std::move(next);
    }
    std::vector<QSeries> out;
    out.reserve(row.size());
    for (const auto &p : row) {
        std::vector<Rational> c(p.begin(), p.end());
        out.push_back(ctx.from_coefficients(c));
    }
    return out;
}

QSeries gaussian_binomial(int j, int n, const SeriesContext &ctx)
{
    if (j < 0 || n < 0 || n > j) {
        return ctx.zero();
    }
    return gaussian_binomial_row(j, ctx)[static_cast<std::size_t>(n)];
}

QSeries lambert(int a, int b, const SeriesContext &ctx)
{
    if (a < 1 || b < 1) {
        throw DomainError("lambert series needs positive a and b");
    }
    const int order = ctx.order();
    std::vector<Rational> c(static_cast<std::size_t>(order + 1));
    for (int k = 1; a * k <= order; ++k) {
        for (int e = a * k; e <= order; e += b * k) {
            c[static_cast<std::size_t>(e)] += 1;
        }
    }
    return ctx.from_coefficients(c);
}

QSeries sigma_series(const SeriesContext &ctx)
{
    QSeries sum = ctx.zero();
    QSeries inv = ctx.one();
    for (int n = 0; n * (n + 1) / 2 <= ctx.order(); ++n) {
        if (n > 0) {
            inv = div_one_minus(inv, QMonomial{Rational(-1), 0, n});
        }
        sum += shift(inv, n * (n + 1) / 2);
    }
    return clip(sum, ctx.order());
}

QSeries sigma2_series(const SeriesContext &ctx)
{
    QSeries sum = ctx.zero();
    QSeries inv = ctx.one();
    for (int n = 0; n * n <= ctx.order(); ++n) {
        if (n > 0) {
            inv = div_one_minus(inv, QMonomial{Rational(-1), 0, n});
        }
        const QSeries term = shift(inv, n * n);
        sum = n % 2 == 0 ? sum + term : sum - term;
    }
    return clip(sum, ctx.order());
}

QSeries sigma_star_series(const SeriesContext &ctx)
{
    QSeries sum = ctx.zero();
    QSeries inv = ctx.one();
    for (int n = 1; n * n <= ctx.order(); ++n) {
        inv = div_one_minus(inv, QMonomial{Rational(1), 0, 2 * n - 1});
        const QSeries term = shift(inv, n * n);
        sum = n % 2 == 0 ? sum + term : sum - term;
    }
    return clip(scale(sum, Rational(2)), ctx.order());
}

QSeries tail_sum(const TailFamily &family, const SeriesContext &ctx, int extra_terms)
{
    const int order = ctx.order();
    constexpr int kMaxTerms = 1 << 20;
    int n_max = 0;
    while (family.order_gain(n_max) <= order) {
        if (++n_max > kMaxTerms) {
            throw NonStabilizedTailError("order_gain never exceeds the target order");
        }
    }
    auto check_vanishes = [&](const QSeries &term, int n) {
        const int top = std::min(order, term.hi());
        for (int m = term.lo(); m <= top; ++m) {
            if (!term.coeff(m).is_zero()) {
                throw NonStabilizedTailError("tail term " + std::to_string(n) + " is nonzero at q^" +
                                             std::to_string(m) + " beyond its declared cutoff");
            }
        }
    };
    const int last = n_max + std::max(1, extra_terms);
    QSeries partial = family.first;
    QSeries sum = family.limit - partial;
    if (n_max == 0) {
        check_vanishes(sum, 0);
    }
    for (int n = 1; n <= last; ++n) {
        partial = family.next(n, partial);
        const QSeries term = family.limit - partial;
        if (n >= n_max && n <= n_max + 1) {
            check_vanishes(term, n);
        }
        sum += term;
    }
    return clip(sum, order);
}

QSeries finite_T(int j, std::string_view x, std::string_view y, const SeriesContext &ctx, bool require_caps)
{
    if (j < 0) {
        throw DomainError("T(j) needs j >= 0");
    }
    const auto &spec = *ctx.spec();
    for (auto name : {x, y}) {
        const int cap = spec.cap(spec.index_of(name));
        if (require_caps && cap < j) {
            throw CapError("T(" + std::to_string(j) + ") needs cap(" + std::string(name) + ") >= " +
                           std::to_string(j));
        }
    }
    // (x/q)_m and (-y/q)^n q^(n(n-1)/2) each reach down to q^-1.
    const SeriesContext work = ctx.with_order(ctx.order() + 4);
    const auto binomials = gaussian_binomial_row(j, work);
    std::vector<QSeries> poch{work.one()};
    for (int m = 1; m <= j; ++m) {
        poch.push_back(mul_one_minus(poch.back(), work.mono(Rational(1), m - 2, {{x, 1}})));
    }
    QSeries sum = work.zero();
    for (int n = 0; n <= j; ++n) {
        const QMonomial power = work.mono(Rational(n % 2 == 0 ? 1 : -1), n * (n - 3) / 2, {{y, n}});
        if (power.is_zero()) {
            break; // y^n is past its cap, and so is every later power
        }
        sum += mul_monomial(poch[static_cast<std::size_t>(j - n)], power) * binomials[static_cast<std::size_t>(n)];
    }
    return clip(sum, ctx.order());
}

} // namespace qtails
