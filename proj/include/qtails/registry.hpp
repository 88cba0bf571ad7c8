#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtails/partitions.hpp"
#include "qtails/qfunctions.hpp"
#include "qtails/series.hpp"

namespace qtails::registry {

enum class Mode { qseries, per_j_family, partition_numeric, positivity };
std::string_view to_string(Mode m);

enum class Status { pass, fail, error };
std::string_view to_string(Status s);

/// A deliberate defect in one primitive. Used by the fault-sensitivity
/// harness; `none` in normal runs.
enum class Mutation {
    none,
    ao_drop_qm,               // the q^m factor in the Andrews-Onofri summand
    poch_drop_last,           // (a)_n built with n-1 factors
    inv_poch_drop_last,       // 1/(a)_n built with n-1 factors
    poch_inf_drop_first,      // (a)_inf without its first factor
    inv_poch_inf_drop_first,  // 1/(a)_inf without its first factor
    gaussian_shift,           // [j,n] + q for 0 < n < j
    lambert_drop_first,       // Lambert sum without its k = 1 term
    sigma_shift,              // sigma + q^3
    sigma2_shift,             // sigma2 + q^2
    tail_skip_first,          // tail sum without its n = 0 term
    finite_T_shift,           // T(j) + q for j >= 1
    p2_shift,                 // p2(5) off by one
    tau_swap,                 // even and odd divisor counts exchanged
    rank_count_shift,         // rank-weighted counts off by one at n = 4
};
std::string_view to_string(Mutation m);
const std::vector<Mutation> &all_mutations();

/// The primitives identity builders are allowed to use, each routed through
/// the active mutation.
class Kit {
public:
    explicit Kit(Mutation m = Mutation::none) : m_(m) {}
    Mutation mutation() const { return m_; }
    bool drops_ao_qm() const { return m_ == Mutation::ao_drop_qm; }

    QSeries poch(const QMonomial &a, int n, int base, const SeriesContext &ctx) const;
    QSeries inv_poch(const QMonomial &a, int n, int base, const SeriesContext &ctx) const;
    QSeries poch_inf(const QMonomial &a, int base, const SeriesContext &ctx) const;
    QSeries inv_poch_inf(const QMonomial &a, int base, const SeriesContext &ctx) const;
    std::vector<QSeries> gaussian_row(int j, const SeriesContext &ctx) const;
    QSeries lambert(int a, int b, const SeriesContext &ctx) const;
    QSeries sigma(const SeriesContext &ctx) const;
    QSeries sigma2(const SeriesContext &ctx) const;
    QSeries tail_sum(const TailFamily &f, const SeriesContext &ctx) const;
    QSeries finite_T(int j, std::string_view x, std::string_view y, const SeriesContext &ctx,
                     bool require_caps = true) const;

    std::int64_t p1(int n) const;
    std::int64_t p2(int n) const;
    int tau_even(int n) const;
    int tau_odd(int n) const;
    std::int64_t sigma_rank_count(int n) const;
    std::int64_t sigma2_rank_count(int n) const;

private:
    Mutation m_;
};

struct Options {
    int order = 40;
    int j_max = 15;
    int z_cap = 10;
    // Range for partition_numeric and positivity entries; 0 picks the
    // entry's own default.
    int n_max = 0;
    // Explicit caps by parameter name; otherwise each entry's minimum.
    std::map<std::string, int> caps;
    Mutation mutation = Mutation::none;
};

struct Side {
    std::string label;
    QSeries value;
};

struct BuildEnv {
    const SeriesContext &ctx; // working context, order = target + slack
    const Kit &kit;
    const Options &opts;
    int target; // comparison order
};

struct NumericOutcome {
    bool ok = true;
    int at = 0; // first failing index
    std::string lhs;
    std::string rhs;
    std::string what;
    std::vector<Rational> sequence; // positivity: the checked coefficients
};

struct ParamRule {
    std::string name;
    std::function<int(const Options &)> min_cap;
};

struct IdentityDef {
    std::string id;
    std::string description;
    std::string reference;
    Mode mode = Mode::qseries;
    std::vector<ParamRule> params;
    // Extra working order for precision lost to negative q-exponents.
    std::function<int(const Options &, const std::vector<int> &caps)> slack;
    // qseries: the expressions that must agree.
    std::function<std::vector<Side>(const BuildEnv &)> build;
    // per_j_family: element j holds the expressions for that j.
    std::function<std::vector<std::vector<Side>>(const BuildEnv &)> build_family;
    // partition_numeric and positivity.
    std::function<NumericOutcome(const Options &, const Kit &, int n_max)> numeric;
    int default_n_max = 0;
};

struct MismatchInfo {
    int q_order = 0;
    std::string monomial;
    std::string lhs;
    std::string rhs;
};

struct VerificationReport {
    std::string id;
    std::string reference;
    Mode mode = Mode::qseries;
    int order = 0;
    std::vector<std::pair<std::string, int>> caps;
    Status status = Status::error;
    std::optional<MismatchInfo> first_mismatch;
    std::string message;
    double elapsed_ms = 0;
    std::vector<Rational> sequence;
};

struct Summary {
    std::vector<VerificationReport> reports;
    int passed = 0;
    int failed = 0;
    int errors = 0;
    double elapsed_ms = 0;
    int total() const { return static_cast<int>(reports.size()); }
};

const std::vector<IdentityDef> &registry();
const IdentityDef *find(std::string_view id);
std::vector<std::string> ids();

/// Caps an entry would use under opts, in declaration order; throws
/// CapError when an explicit cap is below the entry's minimum.
std::vector<std::pair<std::string, int>> resolve_caps(const IdentityDef &def, const Options &opts);

VerificationReport verify(const IdentityDef &def, const Options &opts);
VerificationReport verify(std::string_view id, const Options &opts);

/// Verifies the selected entries (all when empty) concurrently, with at most
/// `threads` workers; 0 reads QTAILS_THREADS, falling back to the hardware
/// concurrency. Reports keep registry order.
Summary verify_all(const Options &opts, const std::vector<std::string> &selection = {}, unsigned threads = 0);

/// Coefficients of the concave-composition series for 1 <= n <= n_max, with
/// the first nonpositive one reported as a failure.
VerificationReport positivity_check(int n_max, Mutation m = Mutation::none);

unsigned thread_budget();

} // namespace qtails::registry
