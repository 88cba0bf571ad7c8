#pragma once

#include <random>
#include <vector>

#include "qtails/series.hpp"

namespace qtails::testing {

// Parameter-free coefficients of q^from .. q^to.
inline std::vector<Rational> coeffs(const QSeries &s, int from, int to)
{
    std::vector<Rational> out;
    for (int n = from; n <= to; ++n) {
        out.push_back(s.constant_coeff(n));
    }
    return out;
}

inline std::vector<Rational> ints(std::initializer_list<long> xs)
{
    std::vector<Rational> out;
    for (long x : xs) {
        out.emplace_back(x);
    }
    return out;
}

inline ParamPoly random_poly(const SpecPtr &spec, std::mt19937 &rng, int max_terms = 4)
{
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<ParamSpec::Key> key(0, spec->box_size() - 1);
    ParamPoly p(spec);
    const int k = nterms(rng);
    for (int i = 0; i < k; ++i) {
        Rational c(num(rng), den(rng));
        c.canonicalize();
        p += ParamPoly::monomial(spec, key(rng), c);
    }
    return p;
}

// Random series over [lo, order] with sparse parameter coefficients.
inline QSeries random_series(const SeriesContext &ctx, std::mt19937 &rng, int lo)
{
    std::vector<ParamPoly> cs;
    for (int n = lo; n <= ctx.order(); ++n) {
        cs.push_back(random_poly(ctx.spec(), rng, 3));
    }
    return QSeries(ctx.spec(), lo, ctx.order(), std::move(cs), ctx.lo_floor());
}

} // namespace qtails::testing
