#include "qtails/partitions.hpp"

#include <algorithm>
#include <sstream>

#include "qtails/errors.hpp"

namespace qtails::partitions {

namespace {

bool has_parity(int x, Parity p) { return (x % 2 == 0) == (p == Parity::even); }

std::optional<int> eval(const AffineOfLargest &f, int largest)
{
    const long long num = static_cast<long long>(f.num) * largest;
    if (f.den == 0 || num % f.den != 0) {
        return std::nullopt;
    }
    return static_cast<int>(num / f.den) + f.offset;
}

struct BandBounds {
    int lo;
    int hi;
};

// Restrictions that only depend on the largest part. nullopt band bounds
// mean no band; a false return rejects the largest part itself.
bool largest_ok(const Constraint &c, int largest, std::optional<BandBounds> &band)
{
    band.reset();
    if (c.largest_parity && !has_parity(largest, *c.largest_parity)) {
        return false;
    }
    if (c.forbidden_band) {
        const auto lo = eval(c.forbidden_band->lo, largest);
        const auto hi = eval(c.forbidden_band->hi, largest);
        if (!lo || !hi) {
            return false;
        }
        band = BandBounds{*lo, *hi};
    }
    return true;
}

bool residue_ok(const Constraint &c, int x)
{
    if (!c.residues) {
        return true;
    }
    const int m = c.residues->modulus;
    const int r = ((x % m) + m) % m;
    const auto &allowed = c.residues->allowed;
    return std::find(allowed.begin(), allowed.end(), r) != allowed.end();
}

// Pairwise check for a part x following prev (x <= prev) in a partition
// whose largest part is `largest`.
bool next_ok(const Constraint &c, int largest, const std::optional<BandBounds> &band, int prev, int x)
{
    if (c.distinct && x == prev) {
        return false;
    }
    if (prev - x < c.min_gap) {
        return false;
    }
    if (!residue_ok(c, x)) {
        return false;
    }
    if (x < largest) {
        if (c.below_largest_parity && !has_parity(x, *c.below_largest_parity)) {
            return false;
        }
        if (c.distinct_below_largest && x == prev) {
            return false;
        }
        if (band && x >= band->lo && x <= band->hi) {
            return false;
        }
    }
    return true;
}

struct Walker {
    const Constraint &c;
    const std::function<void(const Partition &)> &visit;
    Partition current;
    int largest = 0;
    std::optional<BandBounds> band;

    void descend(int remaining)
    {
        if (remaining == 0) {
            visit(current);
            return;
        }
        if (c.max_parts && current.count() >= *c.max_parts) {
            return;
        }
        const int prev = current.parts.back();
        for (int x = std::min(remaining, prev); x >= 1; --x) {
            if (!next_ok(c, largest, band, prev, x)) {
                continue;
            }
            current.parts.push_back(x);
            descend(remaining - x);
            current.parts.pop_back();
        }
    }
};

} // namespace

int Partition::multiplicity_of_largest() const
{
    if (parts.empty()) {
        return 0;
    }
    return static_cast<int>(std::count(parts.begin(), parts.end(), parts.front()));
}

int Partition::odd_parts() const
{
    return static_cast<int>(std::count_if(parts.begin(), parts.end(), [](int x) { return x % 2 != 0; }));
}

std::string Partition::to_string() const
{
    if (parts.empty()) {
        return "0";
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        os << (i ? "+" : "") << parts[i];
    }
    return os.str();
}

bool Constraint::satisfied_by(const Partition &p) const
{
    if (p.parts.empty()) {
        return p.n == 0;
    }
    int sum = 0;
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
        if (p.parts[i] <= 0 || (i > 0 && p.parts[i] > p.parts[i - 1])) {
            return false;
        }
        sum += p.parts[i];
    }
    if (sum != p.n) {
        return false;
    }
    if (max_parts && p.count() > *max_parts) {
        return false;
    }
    std::optional<BandBounds> band;
    const int largest = p.largest();
    if (!largest_ok(*this, largest, band) || !residue_ok(*this, largest)) {
        return false;
    }
    for (std::size_t i = 1; i < p.parts.size(); ++i) {
        if (!next_ok(*this, largest, band, p.parts[i - 1], p.parts[i])) {
            return false;
        }
    }
    return true;
}

void for_each_partition(int n, const Constraint &c, const std::function<void(const Partition &)> &visit)
{
    if (n < 0) {
        throw DomainError("gen_partitions: n must be nonnegative");
    }
    if (n == 0) {
        visit(Partition{});
        return;
    }
    if (c.max_parts && *c.max_parts <= 0) {
        return;
    }
    Walker w{c, visit, Partition{{}, n}, 0, std::nullopt};
    for (int largest = n; largest >= 1; --largest) {
        if (!largest_ok(c, largest, w.band) || !residue_ok(c, largest)) {
            continue;
        }
        w.largest = largest;
        w.current.parts.assign(1, largest);
        w.descend(n - largest);
    }
}

std::vector<Partition> gen_partitions(int n, const Constraint &c)
{
    std::vector<Partition> out;
    for_each_partition(n, c, [&](const Partition &p) { out.push_back(p); });
    return out;
}

int rank(const Partition &p)
{
    if (p.parts.empty()) {
        throw DomainError("rank of the empty partition is undefined");
    }
    return p.largest() - p.count();
}

int weight(const Partition &p, WeightRule rule)
{
    auto sign = [](int k) { return k % 2 == 0 ? 1 : -1; };
    switch (rule) {
    case WeightRule::rank_parity_even_minus_odd:
        return sign(rank(p));
    case WeightRule::rank_parity_odd_minus_even:
        return -sign(rank(p));
    case WeightRule::neg_one_pow_odd_parts:
        return sign(p.odd_parts());
    case WeightRule::neg_one_pow_parts_minus_largest_multiplicity:
        return sign(p.count() - p.multiplicity_of_largest());
    case WeightRule::part_count_parity_even_minus_odd:
        return sign(p.count());
    case WeightRule::unweighted:
        return 1;
    }
    return 1;
}

std::int64_t weighted_count(int n, const Constraint &c, WeightRule rule)
{
    std::int64_t total = 0;
    for_each_partition(n, c, [&](const Partition &p) { total += weight(p, rule); });
    return total;
}

Constraint p1_constraint()
{
    Constraint c;
    c.largest_parity = Parity::even;
    c.below_largest_parity = Parity::odd;
    c.distinct_below_largest = true;
    c.forbidden_band = Band{{1, 1, -1}, {1, 1, -1}};
    return c;
}

Constraint p2_constraint()
{
    Constraint c;
    c.largest_parity = Parity::even;
    c.forbidden_band = Band{{1, 2, 0}, {1, 1, -1}};
    return c;
}

Constraint distinct_parts()
{
    Constraint c;
    c.distinct = true;
    return c;
}

Constraint gap_at_least(int g)
{
    Constraint c;
    c.min_gap = g;
    return c;
}

std::int64_t p1_count(int n)
{
    if (n <= 0) {
        throw DomainError("p1 requires n >= 1");
    }
    return weighted_count(n, p1_constraint(), WeightRule::neg_one_pow_odd_parts);
}

std::int64_t p2_count(int n)
{
    if (n <= 0) {
        throw DomainError("p2 requires n >= 1");
    }
    return weighted_count(n, p2_constraint(), WeightRule::neg_one_pow_parts_minus_largest_multiplicity);
}

int tau_even(int n)
{
    if (n <= 0) {
        throw DomainError("divisor counts require n >= 1");
    }
    int count = 0;
    for (int d = 2; d <= n; d += 2) {
        count += n % d == 0;
    }
    return count;
}

int tau_odd(int n)
{
    if (n <= 0) {
        throw DomainError("divisor counts require n >= 1");
    }
    int count = 0;
    for (int d = 1; d <= n; d += 2) {
        count += n % d == 0;
    }
    return count;
}

std::int64_t distinct_bounded_diff(int m, int j)
{
    if (m < 0 || j < 0) {
        throw DomainError("distinct_bounded_diff requires m, j >= 0");
    }
    Constraint c = distinct_parts();
    c.max_parts = j;
    return weighted_count(m, c, WeightRule::part_count_parity_even_minus_odd);
}

std::int64_t sigma_rank_count(int n)
{
    if (n <= 0) {
        throw DomainError("rank counts require n >= 1");
    }
    return weighted_count(n, distinct_parts(), WeightRule::rank_parity_even_minus_odd);
}

std::int64_t sigma2_rank_count(int n)
{
    if (n <= 0) {
        throw DomainError("rank counts require n >= 1");
    }
    return weighted_count(n, gap_at_least(2), WeightRule::rank_parity_odd_minus_even);
}

QSeries weighted_gf(const std::function<std::int64_t(int)> &count, int n_max, const SeriesContext &ctx)
{
    if (n_max > ctx.order()) {
        throw WindowError("weighted_gf: n_max exceeds the context order");
    }
    if (n_max < 0) {
        throw DomainError("weighted_gf: n_max must be nonnegative");
    }
    std::vector<Rational> coeffs;
    coeffs.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        coeffs.emplace_back(static_cast<long>(count(n)));
    }
    return ctx.from_coefficients(coeffs).truncated(n_max);
}

} // namespace qtails::partitions
