#include "qtails/param_poly.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qtails {

std::string to_string(const Rational &r) { return r.get_str(); }

ParamSpec::ParamSpec(std::vector<std::string> names, std::vector<int> caps)
    : names_(std::move(names)), caps_(std::move(caps))
{
    if (names_.size() != caps_.size()) {
        throw SpecError("parameter names and caps differ in length");
    }
    std::set<std::string> seen;
    for (const auto &n : names_) {
        if (n.empty() || n == "q") {
            throw SpecError("invalid parameter name '" + n + "'");
        }
        if (!seen.insert(n).second) {
            throw SpecError("duplicate parameter name '" + n + "'");
        }
    }
    for (int c : caps_) {
        if (c < 0 || c > 255) {
            throw SpecError("parameter cap out of range: " + std::to_string(c));
        }
    }
    const std::size_t n = names_.size();
    strides_.assign(n, 1);
    std::uint64_t box = 1;
    for (std::size_t i = n; i-- > 0;) {
        strides_[i] = static_cast<Key>(box);
        box *= static_cast<std::uint64_t>(caps_[i]) + 1;
        if (box > (1u << 24)) {
            throw SpecError("parameter box too large");
        }
    }
    box_ = static_cast<Key>(box);
    exps_.resize(static_cast<std::size_t>(box_) * n);
    for (Key k = 0; k < box_; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            exps_[k * n + i] = static_cast<std::uint8_t>((k / strides_[i]) % (caps_[i] + 1));
        }
    }
}

SpecPtr ParamSpec::make(std::vector<std::string> names, std::vector<int> caps)
{
    return std::make_shared<const ParamSpec>(std::move(names), std::move(caps));
}

SpecPtr ParamSpec::make(std::initializer_list<std::pair<std::string, int>> params)
{
    std::vector<std::string> names;
    std::vector<int> caps;
    for (const auto &[n, c] : params) {
        names.push_back(n);
        caps.push_back(c);
    }
    return make(std::move(names), std::move(caps));
}

SpecPtr ParamSpec::none()
{
    static const SpecPtr empty = make(std::vector<std::string>{}, std::vector<int>{});
    return empty;
}

std::optional<std::size_t> ParamSpec::find(std::string_view name) const
{
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t ParamSpec::index_of(std::string_view name) const
{
    if (auto i = find(name)) {
        return *i;
    }
    throw SpecError("unknown parameter '" + std::string(name) + "'");
}

std::vector<int> ParamSpec::exponents(Key k) const
{
    std::vector<int> out(names_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = exponent(k, i);
    }
    return out;
}

std::optional<ParamSpec::Key> ParamSpec::key_of(std::span<const int> exps) const
{
    if (exps.size() != names_.size()) {
        throw SpecError("exponent vector has wrong length");
    }
    Key k = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] < 0) {
            throw SpecError("negative parameter exponent");
        }
        if (exps[i] > caps_[i]) {
            return std::nullopt;
        }
        k += static_cast<Key>(exps[i]) * strides_[i];
    }
    return k;
}

std::string ParamSpec::monomial_string(Key k) const
{
    std::string out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        const int e = exponent(k, i);
        if (e == 0) {
            continue;
        }
        if (!out.empty()) {
            out += '*';
        }
        out += names_[i];
        if (e > 1) {
            out += '^' + std::to_string(e);
        }
    }
    return out.empty() ? "1" : out;
}

bool same_spec(const SpecPtr &a, const SpecPtr &b) { return a == b || *a == *b; }

void require_same_spec(const SpecPtr &a, const SpecPtr &b)
{
    if (!same_spec(a, b)) {
        throw SpecMismatchError("operands use different parameter specs");
    }
}

ParamPoly ParamPoly::constant(SpecPtr spec, const Rational &c)
{
    ParamPoly p(std::move(spec));
    if (c != 0) {
        p.terms_.push_back({0, c});
    }
    return p;
}

ParamPoly ParamPoly::variable(SpecPtr spec, std::string_view name)
{
    const std::size_t i = spec->index_of(name);
    ParamPoly p(spec);
    if (spec->cap(i) >= 1) {
        p.terms_.push_back({spec->stride(i), Rational(1)});
    }
    return p;
}

ParamPoly ParamPoly::monomial(SpecPtr spec, Key key, const Rational &c)
{
    ParamPoly p(std::move(spec));
    if (c != 0) {
        p.terms_.push_back({key, c});
    }
    return p;
}

ParamPoly ParamPoly::from_sorted_terms(SpecPtr spec, std::vector<Term> terms)
{
    ParamPoly p(std::move(spec));
    p.terms_ = std::move(terms);
    return p;
}

Rational ParamPoly::coeff(Key key) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term &t, Key k) { return t.key < k; });
    if (it != terms_.end() && it->key == key) {
        return it->coeff;
    }
    return Rational(0);
}

ParamPoly ParamPoly::operator-() const
{
    ParamPoly out(*this);
    for (auto &t : out.terms_) {
        t.coeff = -t.coeff;
    }
    return out;
}

namespace {

template <bool Subtract>
void merge_into(std::vector<ParamPoly::Term> &lhs, const std::vector<ParamPoly::Term> &rhs)
{
    if (rhs.empty()) {
        return;
    }
    std::vector<ParamPoly::Term> out;
    out.reserve(lhs.size() + rhs.size());
    auto a = lhs.begin();
    auto b = rhs.begin();
    while (a != lhs.end() || b != rhs.end()) {
        if (b == rhs.end() || (a != lhs.end() && a->key < b->key)) {
            out.push_back(std::move(*a));
            ++a;
        } else if (a == lhs.end() || b->key < a->key) {
            out.push_back({b->key, Subtract ? Rational(-b->coeff) : b->coeff});
            ++b;
        } else {
            Rational c = Subtract ? Rational(a->coeff - b->coeff) : Rational(a->coeff + b->coeff);
            if (c != 0) {
                out.push_back({a->key, std::move(c)});
            }
            ++a;
            ++b;
        }
    }
    lhs = std::move(out);
}

} // namespace

ParamPoly &ParamPoly::operator+=(const ParamPoly &other)
{
    require_same_spec(spec_, other.spec_);
    merge_into<false>(terms_, other.terms_);
    return *this;
}

ParamPoly &ParamPoly::operator-=(const ParamPoly &other)
{
    require_same_spec(spec_, other.spec_);
    merge_into<true>(terms_, other.terms_);
    return *this;
}

ParamPoly operator*(const ParamPoly &a, const ParamPoly &b)
{
    require_same_spec(a.spec_, b.spec_);
    if (a.is_zero() || b.is_zero()) {
        return ParamPoly(a.spec_);
    }
    if (b.is_constant()) {
        return a.scaled(b.terms_[0].coeff);
    }
    if (a.is_constant()) {
        return b.scaled(a.terms_[0].coeff);
    }
    PolyAccumulator acc(a.spec_);
    acc.add_poly_product(a, b);
    return acc.take();
}

ParamPoly ParamPoly::scaled(const Rational &c) const
{
    if (c == 0) {
        return ParamPoly(spec_);
    }
    ParamPoly out(*this);
    for (auto &t : out.terms_) {
        t.coeff *= c;
    }
    return out;
}

ParamPoly ParamPoly::times_monomial(Key key, const Rational &c) const
{
    ParamPoly out(spec_);
    if (c == 0) {
        return out;
    }
    out.terms_.reserve(terms_.size());
    for (const auto &t : terms_) {
        if (auto k = spec_->multiply(t.key, key)) {
            out.terms_.push_back({*k, t.coeff * c});
        }
    }
    return out;
}

ParamPoly ParamPoly::derivative(std::size_t param) const
{
    ParamPoly out(spec_);
    for (const auto &t : terms_) {
        const int e = spec_->exponent(t.key, param);
        if (e > 0) {
            out.terms_.push_back({t.key - spec_->stride(param), t.coeff * e});
        }
    }
    return out;
}

ParamPoly ParamPoly::inverse() const
{
    const Rational c0 = constant_term();
    if (c0 == 0) {
        throw NotInvertibleError("parameter polynomial has zero constant term");
    }
    const Rational inv0 = 1 / c0;
    // 1/(c0 + r) = (1/c0) * sum_k (-r/c0)^k; r is nilpotent in the quotient.
    const ParamPoly ratio = (*this - constant(spec_, c0)).scaled(-inv0);
    ParamPoly sum = constant(spec_, Rational(1));
    ParamPoly power = sum;
    while (true) {
        power = power * ratio;
        if (power.is_zero()) {
            break;
        }
        sum += power;
    }
    return sum.scaled(inv0);
}

bool ParamPoly::operator==(const ParamPoly &other) const
{
    return same_spec(spec_, other.spec_) && terms_ == other.terms_;
}

std::string ParamPoly::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &t : terms_) {
        Rational c = t.coeff;
        if (!first) {
            os << (c < 0 ? " - " : " + ");
            c = abs(c);
        } else if (c < 0) {
            os << '-';
            c = -c;
        }
        first = false;
        const std::string mono = spec_->monomial_string(t.key);
        if (t.key == 0) {
            os << c.get_str();
        } else if (c == 1) {
            os << mono;
        } else {
            os << c.get_str() << '*' << mono;
        }
    }
    return os.str();
}

PolyAccumulator::PolyAccumulator(SpecPtr spec)
    : spec_(std::move(spec)), slots_(spec_->box_size()), used_(spec_->box_size(), 0)
{
}

void PolyAccumulator::add_product(ParamPoly::Key key, const Rational &a, const Rational &b)
{
    if (!used_[key]) {
        used_[key] = 1;
        touched_.push_back(key);
    }
    // Unused slots hold 0, so accumulating is always correct.
    add_mul(slots_[key], a, b, tmp_);
}

void PolyAccumulator::add(ParamPoly::Key key, const Rational &a)
{
    if (!used_[key]) {
        used_[key] = 1;
        touched_.push_back(key);
        slots_[key] = a;
        return;
    }
    mpq_add(slots_[key].get_mpq_t(), slots_[key].get_mpq_t(), a.get_mpq_t());
}

void PolyAccumulator::add_poly_product(const ParamPoly &a, const ParamPoly &b)
{
    for (const auto &ta : a.terms()) {
        for (const auto &tb : b.terms()) {
            if (auto k = spec_->multiply(ta.key, tb.key)) {
                add_product(*k, ta.coeff, tb.coeff);
            }
        }
    }
}

ParamPoly PolyAccumulator::take()
{
    std::sort(touched_.begin(), touched_.end());
    std::vector<ParamPoly::Term> terms;
    terms.reserve(touched_.size());
    for (auto k : touched_) {
        used_[k] = 0;
        if (sgn(slots_[k]) != 0) {
            terms.push_back({k, std::move(slots_[k])});
        }
        slots_[k] = 0;
    }
    touched_.clear();
    return ParamPoly::from_sorted_terms(spec_, std::move(terms));
}

} // namespace qtails
