#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qtails/errors.hpp"

namespace qtails {

using Rational = mpq_class;

std::string to_string(const Rational &r);

// acc += x * y, staying on the integer numerators when all three values are
// integral. tmp is scratch space.
inline void add_mul(Rational &acc, const Rational &x, const Rational &y, Rational &tmp)
{
    mpq_ptr a = acc.get_mpq_t();
    mpq_srcptr px = x.get_mpq_t();
    mpq_srcptr py = y.get_mpq_t();
    if (mpz_cmp_ui(mpq_denref(px), 1) == 0 && mpz_cmp_ui(mpq_denref(py), 1) == 0 &&
        mpz_cmp_ui(mpq_denref(a), 1) == 0) {
        mpz_addmul(mpq_numref(a), mpq_numref(px), mpq_numref(py));
        return;
    }
    mpq_mul(tmp.get_mpq_t(), px, py);
    mpq_add(a, a, tmp.get_mpq_t());
}

/// Ordered list of free parameters with a maximum retained degree for each.
///
/// Monomials are packed into a single integer key using a mixed radix whose
/// digits are the exponents, first parameter most significant. Numeric order
/// of keys therefore coincides with lexicographic order of exponent vectors.
class ParamSpec {
public:
    using Key = std::uint32_t;

    ParamSpec(std::vector<std::string> names, std::vector<int> caps);

    static std::shared_ptr<const ParamSpec> make(std::vector<std::string> names,
                                                 std::vector<int> caps);
    static std::shared_ptr<const ParamSpec>
    make(std::initializer_list<std::pair<std::string, int>> params);
    static std::shared_ptr<const ParamSpec> none();

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string> &names() const { return names_; }
    const std::string &name(std::size_t i) const { return names_[i]; }
    int cap(std::size_t i) const { return caps_[i]; }
    const std::vector<int> &caps() const { return caps_; }
    Key stride(std::size_t i) const { return strides_[i]; }
    Key box_size() const { return box_; }

    std::optional<std::size_t> find(std::string_view name) const;
    // Throws SpecError for an undeclared name.
    std::size_t index_of(std::string_view name) const;

    int exponent(Key k, std::size_t i) const { return exps_[k * names_.size() + i]; }
    std::vector<int> exponents(Key k) const;

    // Key of the monomial with the given exponents, or nullopt when some
    // exponent exceeds its cap (the monomial is zero in the quotient ring).
    std::optional<Key> key_of(std::span<const int> exps) const;

    // Product of two monomials; nullopt when the product leaves the box.
    std::optional<Key> multiply(Key a, Key b) const
    {
        const std::size_t n = names_.size();
        const std::uint8_t *ea = exps_.data() + a * n;
        const std::uint8_t *eb = exps_.data() + b * n;
        for (std::size_t i = 0; i < n; ++i) {
            if (ea[i] + eb[i] > caps_[i]) {
                return std::nullopt;
            }
        }
        return a + b;
    }

    std::string monomial_string(Key k) const;

    bool operator==(const ParamSpec &other) const
    {
        return names_ == other.names_ && caps_ == other.caps_;
    }

private:
    std::vector<std::string> names_;
    std::vector<int> caps_;
    std::vector<Key> strides_;
    std::vector<std::uint8_t> exps_;
    Key box_ = 1;
};

using SpecPtr = std::shared_ptr<const ParamSpec>;

bool same_spec(const SpecPtr &a, const SpecPtr &b);
void require_same_spec(const SpecPtr &a, const SpecPtr &b);

/// Polynomial over the rationals in the parameters of a ParamSpec, reduced
/// modulo every param^(cap+1). Terms are kept sorted by key with no zero
/// coefficient, so structural equality is mathematical equality.
class ParamPoly {
public:
    using Key = ParamSpec::Key;
    struct Term {
        Key key;
        Rational coeff;
        bool operator==(const Term &) const = default;
    };

    explicit ParamPoly(SpecPtr spec) : spec_(std::move(spec)) {}

    static ParamPoly constant(SpecPtr spec, const Rational &c);
    // The degree-one monomial of a parameter; zero when its cap is 0.
    static ParamPoly variable(SpecPtr spec, std::string_view name);
    static ParamPoly monomial(SpecPtr spec, Key key, const Rational &c);
    // Terms must be sorted by key and free of zeros.
    static ParamPoly from_sorted_terms(SpecPtr spec, std::vector<Term> terms);

    const SpecPtr &spec() const { return spec_; }
    const std::vector<Term> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].key == 0); }
    Rational coeff(Key key) const;
    Rational constant_term() const { return coeff(0); }

    ParamPoly operator-() const;
    ParamPoly &operator+=(const ParamPoly &other);
    ParamPoly &operator-=(const ParamPoly &other);
    friend ParamPoly operator+(ParamPoly a, const ParamPoly &b) { return a += b; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly &b) { return a -= b; }
    friend ParamPoly operator*(const ParamPoly &a, const ParamPoly &b);

    ParamPoly scaled(const Rational &c) const;
    ParamPoly times_monomial(Key key, const Rational &c) const;
    ParamPoly derivative(std::size_t param) const;
    // Inverse in the quotient ring; requires a nonzero constant term.
    ParamPoly inverse() const;

    bool operator==(const ParamPoly &other) const;

    std::string to_string() const;

private:
    SpecPtr spec_;
    std::vector<Term> terms_;
};

// Dense scratch space for summing many monomial products into one
// polynomial without repeated merges.
class PolyAccumulator {
public:
    explicit PolyAccumulator(SpecPtr spec);

    void add_product(ParamPoly::Key key, const Rational &a, const Rational &b);
    void add(ParamPoly::Key key, const Rational &a);
    void add_poly_product(const ParamPoly &a, const ParamPoly &b);
    // Returns the accumulated polynomial and resets the accumulator.
    ParamPoly take();

private:
    SpecPtr spec_;
    std::vector<Rational> slots_;
    std::vector<std::uint8_t> used_;
    std::vector<ParamPoly::Key> touched_;
    Rational tmp_;
};

} // namespace qtails
