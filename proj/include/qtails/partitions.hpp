#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtails/series.hpp"

namespace qtails::partitions {

/// A partition of n: nonincreasing positive parts summing to n.
struct Partition {
    std::vector<int> parts;
    int n = 0;

    int largest() const { return parts.empty() ? 0 : parts.front(); }
    int count() const { return static_cast<int>(parts.size()); }
    int multiplicity_of_largest() const;
    int odd_parts() const;
    std::string to_string() const; // "6+1", "0" for the empty partition
    bool operator==(const Partition &) const = default;
};

enum class Parity { even, odd };

/// x -> (num * x) / den + offset; only evaluated where the division is exact.
struct AffineOfLargest {
    int num = 1;
    int den = 1;
    int offset = 0;
};

/// Closed interval [lo(L), hi(L)] of forbidden values for parts strictly
/// below the largest part L. When L is not divisible by a denominator the
/// partition is rejected outright.
struct Band {
    AffineOfLargest lo;
    AffineOfLargest hi;
};

struct Residues {
    int modulus = 1;
    std::vector<int> allowed;
};

/// Independent, individually checkable restrictions on a partition.
struct Constraint {
    bool distinct = false;
    int min_gap = 0; // successive parts differ by at least this much
    std::optional<Residues> residues;
    std::optional<Parity> largest_parity;
    std::optional<Parity> below_largest_parity;
    bool distinct_below_largest = false;
    std::optional<Band> forbidden_band;
    std::optional<int> max_parts;

    bool satisfied_by(const Partition &p) const;
};

enum class WeightRule {
    rank_parity_even_minus_odd,
    rank_parity_odd_minus_even,
    neg_one_pow_odd_parts,
    neg_one_pow_parts_minus_largest_multiplicity,
    part_count_parity_even_minus_odd,
    unweighted,
};

/// Every partition of n satisfying c, each exactly once, in
/// lexicographically decreasing order of part lists.
std::vector<Partition> gen_partitions(int n, const Constraint &c);

/// Calls visit(p) for each partition gen_partitions would return, without
/// materializing the list.
void for_each_partition(int n, const Constraint &c, const std::function<void(const Partition &)> &visit);

/// Largest part minus number of parts. Throws DomainError for the empty
/// partition.
int rank(const Partition &p);

int weight(const Partition &p, WeightRule rule);
std::int64_t weighted_count(int n, const Constraint &c, WeightRule rule);

// Constraint presets used by the named counters below.
Constraint p1_constraint();
Constraint p2_constraint();
Constraint distinct_parts();
Constraint gap_at_least(int g);

/// Weighted counts of the two families in the partition identity; n >= 1.
std::int64_t p1_count(int n);
std::int64_t p2_count(int n);

int tau_even(int n);
int tau_odd(int n);

/// Distinct-part partitions of m with at most j parts, even-part-count
/// minus odd-part-count.
std::int64_t distinct_bounded_diff(int m, int j);

/// Even-rank minus odd-rank over distinct-part partitions of n >= 1.
std::int64_t sigma_rank_count(int n);
/// Odd-rank minus even-rank over gap->=2 partitions of n >= 1.
std::int64_t sigma2_rank_count(int n);

/// sum_{n=0}^{n_max} count(n) q^n as a parameter-free series in ctx.
/// Requires n_max <= ctx.order(); the result is exact through q^n_max.
QSeries weighted_gf(const std::function<std::int64_t(int)> &count, int n_max, const SeriesContext &ctx);

} // namespace qtails::partitions
