#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "qtails/series.hpp"

namespace qtails {

/// (a; q^base)_n = prod_{i<n} (1 - a q^(base*i)). Factors with negative
/// q-order are compensated by computing with extra headroom so that the
/// result is exact to ctx.order().
QSeries pochhammer_finite(const QMonomial &a, int n, int base, const SeriesContext &ctx);

/// 1 / (a; q^base)_n, built factor by factor.
QSeries inv_pochhammer_finite(const QMonomial &a, int n, int base, const SeriesContext &ctx);

/// (a; q^base)_inf as the finite product of every factor that can still
/// touch the window. Throws DivergentProductError for a parameter-free a of
/// q-order <= -base.
QSeries pochhammer_infinite(const QMonomial &a, int base, const SeriesContext &ctx);

QSeries inv_pochhammer_infinite(const QMonomial &a, int base, const SeriesContext &ctx);

/// Euler's expansion sum_k (-a)^k q^(base k(k-1)/2) / (q^base; q^base)_k,
/// an independent route to (a; q^base)_inf.
QSeries euler_expansion(const QMonomial &a, int base, const SeriesContext &ctx);

/// Gaussian binomial [j, n] via the Pascal recurrence
/// [j,n] = [j-1,n-1] + q^n [j-1,n]. Zero for n > j or n < 0.
QSeries gaussian_binomial(int j, int n, const SeriesContext &ctx);
/// [j, 0..j] in one pass.
std::vector<QSeries> gaussian_binomial_row(int j, const SeriesContext &ctx);

/// sum_{k>=1} q^(a k) / (1 - q^(b k)).
QSeries lambert(int a, int b, const SeriesContext &ctx);

/// sum_n q^(n(n+1)/2) / (-q; q)_n
QSeries sigma_series(const SeriesContext &ctx);
/// sum_n (-1)^n q^(n^2) / (-q; q)_n
QSeries sigma2_series(const SeriesContext &ctx);
/// 2 sum_{n>=1} (-1)^n q^(n^2) / (q; q^2)_n
QSeries sigma_star_series(const SeriesContext &ctx);

/// A convergent family partial(n) -> limit whose tails limit - partial(n)
/// have q-order at least order_gain(n).
///
/// partial(n) is produced incrementally: `first` is partial(0) and
/// `next(n, partial(n-1))` yields partial(n).
struct TailFamily {
    QSeries limit;
    QSeries first;
    std::function<QSeries(int, const QSeries &)> next;
    std::function<int(int)> order_gain;
};

/// sum_{n=0}^{n_max} (limit - partial(n)) with n_max the least n whose
/// order_gain exceeds ctx.order(), plus `extra_terms` further terms. The
/// terms at n_max and n_max + 1 must vanish modulo q^(order+1), otherwise
/// NonStabilizedTailError is thrown.
QSeries tail_sum(const TailFamily &family, const SeriesContext &ctx, int extra_terms = 0);

/// T(j) = sum_{n=0}^{j} [j,n] (x/q)_{j-n} (-y/q)^n q^(n(n-1)/2) for two
/// declared parameters x, y (possibly the same). Requires cap(x), cap(y) >= j
/// unless require_caps is false, in which case the result is T(j) reduced in
/// the capped quotient ring.
QSeries finite_T(int j, std::string_view x, std::string_view y, const SeriesContext &ctx,
                 bool require_caps = true);

} // namespace qtails
