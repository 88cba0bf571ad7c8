#include "qtails/series.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace qtails {

QMonomial QMonomial::make(const ParamSpec &spec, const Rational &c, int q_exp,
                          std::initializer_list<std::pair<std::string_view, int>> params)
{
    std::vector<int> exps(spec.size(), 0);
    for (const auto &[name, e] : params) {
        exps[spec.index_of(name)] += e;
    }
    auto key = spec.key_of(exps);
    if (!key) {
        return QMonomial{Rational(0), 0, q_exp};
    }
    return QMonomial{c, *key, q_exp};
}

// ---- QSeries ----------------------------------------------------------

QSeries::QSeries(SpecPtr spec, int lo, int hi, std::vector<ParamPoly> coeffs, int lo_floor)
    : spec_(std::move(spec)), lo_(lo), hi_(hi), coeffs_(std::move(coeffs)), floor_(lo_floor)
{
    if (hi_ < lo_) {
        if (!coeffs_.empty()) {
            throw WindowError("series window is empty but coefficients were given");
        }
    } else if (coeffs_.size() != static_cast<std::size_t>(hi_ - lo_ + 1)) {
        throw WindowError("coefficient count does not match series window");
    }
    normalize();
}

QSeries QSeries::zero(SpecPtr spec, int hi, int lo_floor)
{
    return QSeries(std::move(spec), hi + 1, hi, {}, lo_floor);
}

void QSeries::normalize()
{
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first].is_zero()) {
        ++first;
    }
    if (first == coeffs_.size()) {
        coeffs_.clear();
        coeffs_.emplace_back(spec_);
        lo_ = hi_;
        return;
    }
    if (first > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
        lo_ += static_cast<int>(first);
    }
    if (lo_ < floor_) {
        throw LaurentFloorError("series reaches q^" + std::to_string(lo_) + " below floor q^" +
                                std::to_string(floor_));
    }
}

ParamPoly QSeries::coeff(int n) const
{
    if (n > hi_) {
        throw WindowError("coefficient of q^" + std::to_string(n) + " requested but series is exact only to q^" +
                          std::to_string(hi_));
    }
    if (n < lo_) {
        return ParamPoly(spec_);
    }
    return coeffs_[static_cast<std::size_t>(n - lo_)];
}

bool QSeries::is_param_free() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const ParamPoly &p) { return p.is_constant(); });
}

QSeries QSeries::truncated(int new_hi) const
{
    if (new_hi > hi_) {
        throw WindowError("cannot extend a series past its exact range");
    }
    if (new_hi < lo_) {
        return zero(spec_, new_hi, floor_);
    }
    std::vector<ParamPoly> c(coeffs_.begin(), coeffs_.begin() + (new_hi - lo_ + 1));
    return QSeries(spec_, lo_, new_hi, std::move(c), floor_);
}

QSeries QSeries::operator-() const
{
    QSeries out(*this);
    for (auto &c : out.coeffs_) {
        c = -c;
    }
    return out;
}

namespace {

template <bool Subtract>
QSeries add_impl(const QSeries &a, const QSeries &b)
{
    require_same_spec(a.spec(), b.spec());
    const int lo = std::min(a.lo(), b.lo());
    const int hi = std::min(a.hi(), b.hi());
    const int floor = std::min(a.lo_floor(), b.lo_floor());
    std::vector<ParamPoly> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int n = lo; n <= hi; ++n) {
        const bool in_a = n >= a.lo() && !a.is_zero();
        const bool in_b = n >= b.lo() && !b.is_zero();
        if (in_a && in_b) {
            const auto &pa = a.coeffs()[static_cast<std::size_t>(n - a.lo())];
            const auto &pb = b.coeffs()[static_cast<std::size_t>(n - b.lo())];
            out.push_back(Subtract ? pa - pb : pa + pb);
        } else if (in_a) {
            out.push_back(a.coeffs()[static_cast<std::size_t>(n - a.lo())]);
        } else if (in_b) {
            const auto &pb = b.coeffs()[static_cast<std::size_t>(n - b.lo())];
            out.push_back(Subtract ? -pb : pb);
        } else {
            out.emplace_back(a.spec());
        }
    }
    return QSeries(a.spec(), lo, hi, std::move(out), floor);
}

} // namespace

QSeries operator+(const QSeries &a, const QSeries &b) { return add_impl<false>(a, b); }
QSeries operator-(const QSeries &a, const QSeries &b) { return add_impl<true>(a, b); }

QSeries operator*(const QSeries &a, const QSeries &b)
{
    require_same_spec(a.spec_, b.spec_);
    const int floor = std::min(a.floor_, b.floor_);
    const int hi = std::min(a.hi_ + b.valuation(), b.hi_ + a.valuation());
    if (a.is_zero() || b.is_zero()) {
        return QSeries::zero(a.spec_, hi, floor);
    }
    const int lo = a.lo_ + b.lo_;
    std::vector<ParamPoly> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));

    if (a.is_param_free() && b.is_param_free()) {
        std::vector<Rational> ca(a.coeffs_.size()), cb(b.coeffs_.size());
        for (std::size_t i = 0; i < ca.size(); ++i) {
            ca[i] = a.coeffs_[i].constant_term();
        }
        for (std::size_t i = 0; i < cb.size(); ++i) {
            cb[i] = b.coeffs_[i].constant_term();
        }
        Rational sum, tmp;
        for (int n = lo; n <= hi; ++n) {
            sum = 0;
            const int ilo = std::max(a.lo_, n - b.hi_);
            const int ihi = std::min(a.hi_, n - b.lo_);
            for (int i = ilo; i <= ihi; ++i) {
                const auto &x = ca[static_cast<std::size_t>(i - a.lo_)];
                const auto &y = cb[static_cast<std::size_t>(n - i - b.lo_)];
                if (sgn(x) == 0 || sgn(y) == 0) {
                    continue;
                }
                add_mul(sum, x, y, tmp);
            }
            out.push_back(ParamPoly::constant(a.spec_, sum));
        }
        return QSeries(a.spec_, lo, hi, std::move(out), floor);
    }

    PolyAccumulator acc(a.spec_);
    for (int n = lo; n <= hi; ++n) {
        const int ilo = std::max(a.lo_, n - b.hi_);
        const int ihi = std::min(a.hi_, n - b.lo_);
        for (int i = ilo; i <= ihi; ++i) {
            const auto &pa = a.coeffs_[static_cast<std::size_t>(i - a.lo_)];
            if (pa.is_zero()) {
                continue;
            }
            const auto &pb = b.coeffs_[static_cast<std::size_t>(n - i - b.lo_)];
            if (pb.is_zero()) {
                continue;
            }
            acc.add_poly_product(pa, pb);
        }
        out.push_back(acc.take());
    }
    return QSeries(a.spec_, lo, hi, std::move(out), floor);
}

bool QSeries::operator==(const QSeries &other) const
{
    return same_spec(spec_, other.spec_) && lo_ == other.lo_ && hi_ == other.hi_ && coeffs_ == other.coeffs_;
}

std::string QSeries::to_string() const
{
    std::ostringstream os;
    bool first = true;
    if (!is_zero()) {
        for (int n = lo_; n <= hi_; ++n) {
            const auto &p = coeffs_[static_cast<std::size_t>(n - lo_)];
            if (p.is_zero()) {
                continue;
            }
            if (!first) {
                os << " + ";
            }
            first = false;
            const std::string qpart = n == 0 ? "" : (n == 1 ? "q" : "q^" + std::to_string(n));
            if (qpart.empty()) {
                os << '(' << p.to_string() << ')';
            } else {
                os << '(' << p.to_string() << ")*" << qpart;
            }
        }
    }
    if (first) {
        os << '0';
    }
    os << " + O(q^" << hi_ + 1 << ')';
    return os.str();
}

// ---- SeriesContext ----------------------------------------------------

namespace {

int default_floor(int order, const ParamSpec &spec)
{
    int max_cap = 0;
    for (int c : spec.caps()) {
        max_cap = std::max(max_cap, c);
    }
    return -(order + max_cap);
}

} // namespace

SeriesContext::SeriesContext(int order, SpecPtr spec, std::optional<int> lo_floor)
    : order_(order), spec_(std::move(spec)), lo_floor_(0), explicit_floor_(lo_floor.has_value())
{
    if (order_ < 0) {
        throw DomainError("series order must be nonnegative");
    }
    if (!spec_) {
        spec_ = ParamSpec::none();
    }
    lo_floor_ = lo_floor ? *lo_floor : default_floor(order_, *spec_);
    if (lo_floor_ > 0) {
        throw DomainError("lo_floor must be nonpositive");
    }
}

SeriesContext SeriesContext::with_order(int order) const
{
    return SeriesContext(order, spec_, explicit_floor_ ? std::optional<int>(lo_floor_) : std::nullopt);
}

QSeries SeriesContext::zero() const { return QSeries::zero(spec_, order_, lo_floor_); }

QSeries SeriesContext::one() const { return constant(Rational(1)); }

QSeries SeriesContext::constant(const Rational &c) const { return poly(ParamPoly::constant(spec_, c)); }

QSeries SeriesContext::param(std::string_view name) const { return poly(ParamPoly::variable(spec_, name)); }

QSeries SeriesContext::poly(const ParamPoly &p) const
{
    require_same_spec(spec_, p.spec());
    std::vector<ParamPoly> c(static_cast<std::size_t>(order_ + 1), ParamPoly(spec_));
    c[0] = p;
    return QSeries(spec_, 0, order_, std::move(c), lo_floor_);
}

QSeries SeriesContext::monomial(const QMonomial &m) const
{
    if (m.is_zero() || m.q_exp > order_) {
        return zero();
    }
    std::vector<ParamPoly> c(static_cast<std::size_t>(order_ - m.q_exp + 1), ParamPoly(spec_));
    c[0] = ParamPoly::monomial(spec_, m.key, m.coeff);
    return QSeries(spec_, m.q_exp, order_, std::move(c), lo_floor_);
}

QSeries SeriesContext::q_power(int k, const Rational &c) const { return monomial(QMonomial{c, 0, k}); }

QSeries SeriesContext::from_coefficients(const std::vector<Rational> &coeffs, int lo) const
{
    if (lo > order_) {
        return zero();
    }
    std::vector<ParamPoly> c;
    c.reserve(static_cast<std::size_t>(order_ - lo + 1));
    for (int n = lo; n <= order_; ++n) {
        const auto idx = static_cast<std::size_t>(n - lo);
        c.push_back(ParamPoly::constant(spec_, idx < coeffs.size() ? coeffs[idx] : Rational(0)));
    }
    return QSeries(spec_, lo, order_, std::move(c), lo_floor_);
}

// ---- free operations --------------------------------------------------

QSeries shift(const QSeries &s, int k)
{
    QSeries out(s);
    out.lo_ += k;
    out.hi_ += k;
    if (!out.is_zero() && out.lo_ < out.floor_) {
        throw LaurentFloorError("shift by q^" + std::to_string(k) + " reaches q^" + std::to_string(out.lo_) +
                                " below floor q^" + std::to_string(out.floor_));
    }
    if (out.is_zero()) {
        out.lo_ = out.hi_;
    }
    return out;
}

QSeries scale(const QSeries &s, const Rational &c)
{
    if (c == 0) {
        return QSeries::zero(s.spec(), s.hi(), s.lo_floor());
    }
    std::vector<ParamPoly> out;
    out.reserve(s.coeffs().size());
    for (const auto &p : s.coeffs()) {
        out.push_back(p.scaled(c));
    }
    return QSeries(s.spec(), s.lo(), s.hi(), std::move(out), s.lo_floor());
}

QSeries mul_poly(const QSeries &s, const ParamPoly &p)
{
    require_same_spec(s.spec(), p.spec());
    std::vector<ParamPoly> out;
    out.reserve(s.coeffs().size());
    for (const auto &c : s.coeffs()) {
        out.push_back(c * p);
    }
    return QSeries(s.spec(), s.lo(), s.hi(), std::move(out), s.lo_floor());
}

QSeries mul_monomial(const QSeries &s, const QMonomial &m)
{
    if (m.is_zero() || s.is_zero()) {
        return QSeries::zero(s.spec(), s.hi() + m.q_exp, s.lo_floor());
    }
    std::vector<ParamPoly> out;
    out.reserve(s.coeffs().size());
    for (const auto &c : s.coeffs()) {
        out.push_back(c.times_monomial(m.key, m.coeff));
    }
    return QSeries(s.spec(), s.lo() + m.q_exp, s.hi() + m.q_exp, std::move(out), s.lo_floor());
}

QSeries mul_one_minus(const QSeries &s, const QMonomial &m)
{
    if (m.is_zero()) {
        return s;
    }
    return s - mul_monomial(s, m);
}

namespace {

// Largest p with m^p nonzero in the parameter quotient (m has a parameter).
int nilpotency_bound(const ParamSpec &spec, ParamSpec::Key key)
{
    int bound = -1;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const int e = spec.exponent(key, i);
        if (e > 0) {
            const int p = spec.cap(i) / e;
            bound = bound < 0 ? p : std::min(bound, p);
        }
    }
    return bound;
}

QSeries inverse_standard(const QSeries &s)
{
    const auto &spec = s.spec();
    const int v = s.lo();
    const int len = s.hi() - v;
    const auto &c = s.coeffs();
    std::vector<ParamPoly> t;
    t.reserve(static_cast<std::size_t>(len + 1));

    if (s.is_param_free()) {
        std::vector<Rational> cr(c.size());
        for (std::size_t i = 0; i < cr.size(); ++i) {
            cr[i] = c[i].constant_term();
        }
        const Rational inv0 = 1 / cr[0];
        std::vector<Rational> tr(static_cast<std::size_t>(len + 1));
        tr[0] = inv0;
        Rational sum, tmp;
        for (int m = 1; m <= len; ++m) {
            sum = 0;
            for (int i = 1; i <= m; ++i) {
                const auto &x = cr[static_cast<std::size_t>(i)];
                if (sgn(x) == 0) {
                    continue;
                }
                add_mul(sum, x, tr[static_cast<std::size_t>(m - i)], tmp);
            }
            tr[static_cast<std::size_t>(m)] = -inv0 * sum;
        }
        for (auto &x : tr) {
            t.push_back(ParamPoly::constant(spec, x));
        }
        return QSeries(spec, -v, s.hi() - 2 * v, std::move(t), s.lo_floor());
    }

    const ParamPoly inv0 = c[0].inverse();
    const bool inv0_const = inv0.is_constant();
    PolyAccumulator acc(spec);
    t.push_back(inv0);
    for (int m = 1; m <= len; ++m) {
        for (int i = 1; i <= m; ++i) {
            const auto &x = c[static_cast<std::size_t>(i)];
            const auto &y = t[static_cast<std::size_t>(m - i)];
            if (x.is_zero() || y.is_zero()) {
                continue;
            }
            acc.add_poly_product(x, y);
        }
        ParamPoly sum = acc.take();
        t.push_back(inv0_const ? sum.scaled(-inv0.constant_term()) : -(sum * inv0));
    }
    return QSeries(spec, -v, s.hi() - 2 * v, std::move(t), s.lo_floor());
}

QSeries param_free_part(const QSeries &s)
{
    std::vector<ParamPoly> out;
    out.reserve(s.coeffs().size());
    for (const auto &p : s.coeffs()) {
        out.push_back(ParamPoly::constant(s.spec(), p.constant_term()));
    }
    return QSeries(s.spec(), s.lo(), s.hi(), std::move(out), s.lo_floor());
}

} // namespace

QSeries inverse(const QSeries &s)
{
    if (s.is_zero()) {
        throw NotInvertibleError("zero series is not invertible");
    }
    if (s.coeffs()[0].constant_term() != 0) {
        return inverse_standard(s);
    }
    const QSeries u = param_free_part(s);
    if (u.is_zero()) {
        throw NotInvertibleError("series has no parameter-free part; leading coefficient is not a unit");
    }
    const QSeries u_inv = inverse_standard(u);
    const QSeries w = (s - u) * u_inv;
    int max_power = 0;
    for (int c : s.spec()->caps()) {
        max_power += c;
    }
    // The leading 1 is exact; give it the widest window any later term can use.
    const int top = std::max(w.hi(), 0);
    std::vector<ParamPoly> one(static_cast<std::size_t>(top + 1), ParamPoly(s.spec()));
    one[0] = ParamPoly::constant(s.spec(), Rational(1));
    QSeries sum(s.spec(), 0, top, std::move(one), s.lo_floor());
    QSeries power = -w;
    for (int k = 1; k <= max_power && !power.is_zero(); ++k) {
        sum += power;
        power = power * -w;
    }
    return sum * u_inv;
}

QSeries div_one_minus(const QSeries &s, const QMonomial &m)
{
    if (m.is_zero()) {
        return s;
    }
    const auto &spec = s.spec();
    if (m.q_exp > 0) {
        if (s.is_zero()) {
            return s;
        }
        const int lo = s.lo();
        const int hi = s.hi();
        std::vector<ParamPoly> y;
        y.reserve(s.coeffs().size());
        for (int n = lo; n <= hi; ++n) {
            ParamPoly v = s.coeffs()[static_cast<std::size_t>(n - lo)];
            const int prev = n - m.q_exp;
            if (prev >= lo) {
                const auto &yp = y[static_cast<std::size_t>(prev - lo)];
                if (!yp.is_zero()) {
                    v += yp.times_monomial(m.key, m.coeff);
                }
            }
            y.push_back(std::move(v));
        }
        return QSeries(spec, lo, hi, std::move(y), s.lo_floor());
    }
    if (!m.is_param_free()) {
        const int bound = nilpotency_bound(*spec, m.key);
        QSeries y = s;
        for (int i = 0; i < bound; ++i) {
            y = s + mul_monomial(y, m);
        }
        return y;
    }
    if (m.q_exp == 0) {
        if (m.coeff == 1) {
            throw NotInvertibleError("division by 1 - 1");
        }
        return scale(s, 1 / (1 - m.coeff));
    }
    // Parameter-free with negative q-exponent: -c^{-1} q^{-k} / (1 - c^{-1} q^{-k}).
    const Rational inv = 1 / m.coeff;
    const QSeries t = scale(shift(s, -m.q_exp), -inv);
    return div_one_minus(t, QMonomial{inv, 0, -m.q_exp});
}

QSeries derivative(const QSeries &s, std::string_view name)
{
    const std::size_t idx = s.spec()->index_of(name);
    std::vector<ParamPoly> out;
    out.reserve(s.coeffs().size());
    for (const auto &c : s.coeffs()) {
        out.push_back(c.derivative(idx));
    }
    return QSeries(s.spec(), s.lo(), s.hi(), std::move(out), s.lo_floor());
}

QSeries substitute(const QSeries &s, std::string_view name, const Rational &c, int k)
{
    const auto &spec = s.spec();
    const std::size_t idx = spec->index_of(name);
    const int cap = spec->cap(idx);
    const int hi = k >= 0 ? s.hi() : s.hi() - cap * (-k);
    // Nothing from the original exact range survives.
    if (hi < s.lo()) {
        throw EmptyWindowError("substituting " + std::string(name) + " leaves no exact coefficient");
    }
    std::vector<Rational> powers(static_cast<std::size_t>(cap + 1));
    powers[0] = 1;
    for (int e = 1; e <= cap; ++e) {
        powers[static_cast<std::size_t>(e)] = powers[static_cast<std::size_t>(e - 1)] * c;
    }
    std::map<int, std::map<ParamSpec::Key, Rational>> collected;
    if (!s.is_zero()) {
        for (int n = s.lo(); n <= s.hi(); ++n) {
            for (const auto &t : s.coeffs()[static_cast<std::size_t>(n - s.lo())].terms()) {
                const int e = spec->exponent(t.key, idx);
                const int target = n + k * e;
                if (target > hi) {
                    continue;
                }
                const Rational v = t.coeff * powers[static_cast<std::size_t>(e)];
                if (v == 0) {
                    continue;
                }
                collected[target][t.key - static_cast<ParamSpec::Key>(e) * spec->stride(idx)] += v;
            }
        }
    }
    if (collected.empty()) {
        return QSeries::zero(spec, hi, s.lo_floor());
    }
    const int lo = collected.begin()->first;
    std::vector<ParamPoly> out(static_cast<std::size_t>(hi - lo + 1), ParamPoly(spec));
    for (auto &[n, terms] : collected) {
        std::vector<ParamPoly::Term> sorted;
        for (auto &[key, v] : terms) {
            if (v != 0) {
                sorted.push_back({key, v});
            }
        }
        out[static_cast<std::size_t>(n - lo)] = ParamPoly::from_sorted_terms(spec, std::move(sorted));
    }
    return QSeries(spec, lo, hi, std::move(out), s.lo_floor());
}

QSeries recap(const QSeries &s, const SpecPtr &target)
{
    const auto &src = *s.spec();
    if (src.names() != target->names()) {
        throw SpecMismatchError("recap requires identical parameter names");
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (target->cap(i) > src.cap(i)) {
            throw CapError("recap cannot raise a cap");
        }
    }
    std::vector<ParamPoly> out;
    out.reserve(s.coeffs().size());
    for (const auto &p : s.coeffs()) {
        std::vector<ParamPoly::Term> terms;
        for (const auto &t : p.terms()) {
            if (auto k = target->key_of(src.exponents(t.key))) {
                terms.push_back({*k, t.coeff});
            }
        }
        out.push_back(ParamPoly::from_sorted_terms(target, std::move(terms)));
    }
    return QSeries(target, s.lo(), s.hi(), std::move(out), s.lo_floor());
}

std::optional<Mismatch> equal_upto(const QSeries &s, const QSeries &t, int n)
{
    require_same_spec(s.spec(), t.spec());
    if (n > s.hi() || n > t.hi()) {
        throw WindowError("comparison to q^" + std::to_string(n) + " exceeds exact range (lhs to q^" +
                          std::to_string(s.hi()) + ", rhs to q^" + std::to_string(t.hi()) + ")");
    }
    const auto &spec = *s.spec();
    const int lo = std::min(s.lo(), t.lo());
    for (int m = lo; m <= n; ++m) {
        const ParamPoly a = s.coeff(m);
        const ParamPoly b = t.coeff(m);
        if (a == b) {
            continue;
        }
        // Smallest key present in exactly one side or with differing values.
        const auto &ta = a.terms();
        const auto &tb = b.terms();
        std::size_t i = 0, j = 0;
        while (true) {
            const bool has_a = i < ta.size();
            const bool has_b = j < tb.size();
            ParamSpec::Key key;
            Rational va(0), vb(0);
            if (has_a && (!has_b || ta[i].key < tb[j].key)) {
                key = ta[i].key;
                va = ta[i].coeff;
                ++i;
            } else if (has_b && (!has_a || tb[j].key < ta[i].key)) {
                key = tb[j].key;
                vb = tb[j].coeff;
                ++j;
            } else {
                key = ta[i].key;
                va = ta[i].coeff;
                vb = tb[j].coeff;
                ++i;
                ++j;
            }
            if (va != vb) {
                return Mismatch{m, spec.exponents(key), spec.monomial_string(key), va, vb};
            }
        }
    }
    return std::nullopt;
}

} // namespace qtails
