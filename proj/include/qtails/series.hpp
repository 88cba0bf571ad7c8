#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qtails/param_poly.hpp"

namespace qtails {

/// c * (parameter monomial) * q^k with k possibly negative. A zero
/// coefficient denotes the zero monomial.
struct QMonomial {
    Rational coeff{0};
    ParamSpec::Key key = 0;
    int q_exp = 0;

    bool is_zero() const { return coeff == 0; }
    bool is_param_free() const { return key == 0; }

    // Builds c * prod(name^e) * q^k. Exponents past a cap give the zero
    // monomial.
    static QMonomial make(const ParamSpec &spec, const Rational &c, int q_exp,
                          std::initializer_list<std::pair<std::string_view, int>> params = {});
    QMonomial times_q(int k) const { return {coeff, key, q_exp + k}; }
};

/// Truncated Laurent series in q with ParamPoly coefficients.
///
/// The series is known exactly modulo q^(hi+1); exponents below lo are
/// exactly zero. Coefficients are stored densely for every exponent in
/// [lo, hi]. After construction lo is the valuation (leading zeros are
/// trimmed), except for the zero series which stores a single zero
/// coefficient at lo == hi.
class QSeries {
public:
    QSeries(SpecPtr spec, int lo, int hi, std::vector<ParamPoly> coeffs, int lo_floor);

    static QSeries zero(SpecPtr spec, int hi, int lo_floor);

    const SpecPtr &spec() const { return spec_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int lo_floor() const { return floor_; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0].is_zero(); }
    // Lowest exponent that can be nonzero; hi+1 for the zero series.
    int valuation() const { return is_zero() ? hi_ + 1 : lo_; }

    // Coefficient of q^n; throws WindowError when n > hi.
    ParamPoly coeff(int n) const;
    const std::vector<ParamPoly> &coeffs() const { return coeffs_; }

    bool is_param_free() const;
    // Coefficient of q^n with all parameters set to zero.
    Rational constant_coeff(int n) const { return coeff(n).constant_term(); }

    // Drops every exponent above new_hi (which must not exceed hi).
    QSeries truncated(int new_hi) const;

    QSeries operator-() const;
    friend QSeries operator+(const QSeries &a, const QSeries &b);
    friend QSeries operator-(const QSeries &a, const QSeries &b);
    friend QSeries operator*(const QSeries &a, const QSeries &b);
    QSeries &operator+=(const QSeries &b) { return *this = *this + b; }
    QSeries &operator-=(const QSeries &b) { return *this = *this - b; }
    QSeries &operator*=(const QSeries &b) { return *this = *this * b; }

    // Canonical equality: same window and coefficients.
    bool operator==(const QSeries &other) const;

    std::string to_string() const;

private:
    friend QSeries shift(const QSeries &s, int k);

    void normalize();

    SpecPtr spec_;
    int lo_;
    int hi_;
    std::vector<ParamPoly> coeffs_;
    int floor_;
};

/// Evaluation context: target truncation order, parameter spec and the
/// lowest q-exponent any series may reach. lo_floor defaults to
/// -(order + largest cap).
class SeriesContext {
public:
    SeriesContext(int order, SpecPtr spec, std::optional<int> lo_floor = std::nullopt);

    int order() const { return order_; }
    const SpecPtr &spec() const { return spec_; }
    int lo_floor() const { return lo_floor_; }

    // Same spec, different order; the floor is re-derived unless it was
    // given explicitly.
    SeriesContext with_order(int order) const;

    QSeries zero() const;
    QSeries one() const;
    QSeries constant(const Rational &c) const;
    QSeries param(std::string_view name) const;
    QSeries poly(const ParamPoly &p) const;
    QSeries monomial(const QMonomial &m) const;
    // c * q^k
    QSeries q_power(int k, const Rational &c = Rational(1)) const;
    // sum_n coeffs[n] * q^(lo + n), parameter-free.
    QSeries from_coefficients(const std::vector<Rational> &coeffs, int lo = 0) const;
    QMonomial mono(const Rational &c, int q_exp,
                   std::initializer_list<std::pair<std::string_view, int>> params = {}) const
    {
        return QMonomial::make(*spec_, c, q_exp, params);
    }

private:
    int order_;
    SpecPtr spec_;
    int lo_floor_;
    bool explicit_floor_;
};

// ---- arithmetic -------------------------------------------------------

QSeries shift(const QSeries &s, int k);
QSeries scale(const QSeries &s, const Rational &c);
QSeries mul_poly(const QSeries &s, const ParamPoly &p);
QSeries mul_monomial(const QSeries &s, const QMonomial &m);
// s * (1 - m), via one monomial product.
QSeries mul_one_minus(const QSeries &s, const QMonomial &m);
// s / (1 - m). For m of positive q-order this is a linear recurrence; for
// nilpotent m it is a finite geometric sum; otherwise a full inversion.
QSeries div_one_minus(const QSeries &s, const QMonomial &m);

/// Multiplicative inverse.
///
/// When the coefficient of q^lo has a nonzero constant term the standard
/// recurrence is used and the result spans [-lo, hi - 2 lo]. Otherwise the
/// series is split into its parameter-free part u and a remainder r that is
/// nilpotent in the parameter quotient; 1/s = (1/u) sum_k (-r/u)^k. A series
/// whose parameter-free part vanishes is not invertible.
QSeries inverse(const QSeries &s);

QSeries derivative(const QSeries &s, std::string_view name);

/// Replaces parameter `name` by c * q^k. For k >= 0 the precision is kept;
/// for k < 0 it shrinks by cap(name) * |k|.
QSeries substitute(const QSeries &s, std::string_view name, const Rational &c, int k);

/// Re-expresses s under a spec with the same names and caps no larger than
/// the current ones, dropping out-of-cap monomials.
QSeries recap(const QSeries &s, const SpecPtr &target);

struct Mismatch {
    int q_order = 0;
    std::vector<int> exponents;
    std::string monomial;
    Rational lhs;
    Rational rhs;
};

/// Compares coefficients of q^m for every m <= n. Returns nullopt on
/// equality, otherwise the smallest mismatching q-order and within it the
/// lexicographically smallest mismatching monomial. Throws WindowError when
/// n exceeds either operand's exact range.
std::optional<Mismatch> equal_upto(const QSeries &s, const QSeries &t, int n);

} // namespace qtails
