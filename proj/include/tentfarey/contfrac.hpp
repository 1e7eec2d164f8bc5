#pragma once

#include "tentfarey/map_core.hpp"
#include "tentfarey/surd.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tf {

/* Continued fraction [0; a1, a2, ...] of a point in [0,1].
 * Entries are an explicit head followed by either nothing (finite), a repeating
 * period, or a generator a(offset + i).  Values are immutable; copies share no
 * iteration state.  The empty finite expansion denotes 0. */
class ContinuedFraction {
public:
    enum class Kind { Finite, Periodic, Generator };
    using Generator = std::function<mpz_class(std::size_t)>; // 1-based index -> entry

    ContinuedFraction() = default;

    static ContinuedFraction finite(std::vector<mpz_class> entries);
    // Reduced to the shortest preperiod and a primitive period.
    static ContinuedFraction periodic(std::vector<mpz_class> preperiod, std::vector<mpz_class> period);
    static ContinuedFraction generator(Generator g, std::string label);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_periodic() const { return kind_ == Kind::Periodic; }
    bool is_zero() const { return is_finite() && head_.empty(); }

    // a_i for i >= 1; 0 past the end of a finite expansion.
    mpz_class entry(std::size_t i) const;
    std::size_t entry_size(std::size_t i) const; // entry as size_t, InputError when too large
    std::optional<std::size_t> length() const;   // finite expansions only

    const std::vector<mpz_class>& head() const { return head_; }
    const std::vector<mpz_class>& period() const { return period_; }

    // Drop the first j entries.
    ContinuedFraction drop(std::size_t j) const;
    // Replace the first entry (which must exist).
    ContinuedFraction with_first_entry(const mpz_class& e) const;

    // Exact value (finite or periodic only).
    Surd exact_value() const;
    bool has_exact_value() const { return kind_ != Kind::Generator; }
    // Value from the first `depth` entries (exact for short finite expansions).
    double approx(std::size_t depth = 80) const;

    std::string str(std::size_t max_entries = 12) const;

private:
    Kind kind_ = Kind::Finite;
    std::vector<mpz_class> head_;
    std::vector<mpz_class> period_;
    Generator gen_;
    std::size_t offset_ = 0;
    std::string label_;
};

// p_{-1} = 1, p_0 = 0, q_{-1} = 0, q_0 = 1, p_n = a_n p_{n-1} + p_{n-2}, same for q.
class ConvergentTable {
public:
    ConvergentTable() = default;
    ConvergentTable(const ContinuedFraction& cf, std::size_t n);

    std::size_t depth() const { return p_.size() - 2; }
    const mpz_class& p(long n) const { return p_.at(static_cast<std::size_t>(n + 1)); }
    const mpz_class& q(long n) const { return q_.at(static_cast<std::size_t>(n + 1)); }
    // p_{n-1} q_n - p_n q_{n-1}; equals (-1)^n.
    mpz_class signed_determinant(long n) const;
    // Extend by one entry.
    void push(const mpz_class& a);

private:
    std::vector<mpz_class> p_{1, 0}, q_{0, 1};
};

ConvergentTable convergents(const ContinuedFraction& cf, std::size_t n);

ContinuedFraction cf_expand(const mpq_class& value);
ContinuedFraction cf_expand(const Surd& value);

struct CertifiedExpansion {
    ContinuedFraction cf;       // the certified entries only (finite)
    std::size_t certified = 0;  // number of entries shared by every real in the interval
};
// Expansion of any real in [lo, hi]; entries are certified when both ends agree.
CertifiedExpansion cf_expand_interval(const mpq_class& lo, const mpq_class& hi, std::size_t depth);
// A double treated as the interval of width one ulp on each side.
CertifiedExpansion cf_expand(double value, std::size_t depth);

// One step of the Farey map on a continued fraction: decrement a1, or drop it when a1 = 1.
ContinuedFraction farey_step(const ContinuedFraction& cf);
// T_1^n in O(#entries consumed).
ContinuedFraction farey_shift(const ContinuedFraction& cf, const mpz_class& n);

// Farey coding: a1 - 1 zeros then a 1, a2 - 1 zeros then a 1, ...; zeros after a rational ends.
Word farey_coding(const ContinuedFraction& cf, std::size_t n);

struct OrbitBookkeeping {
    std::size_t n = 0;
    std::size_t k = 0; // position of the last 1 among the first n coding digits, 0 if none
    std::size_t m = 0; // number of 1s among the first n coding digits
    std::size_t r = 0; // n - k
};

OrbitBookkeeping orbit_bookkeeping(const ContinuedFraction& cf, std::size_t n);

// ((r p_m + p_{m-1}), p_m; (r q_m + q_{m-1}), q_m) from a precomputed convergent table.
ExactMobius farey_branch_matrix(const ConvergentTable& t, const OrbitBookkeeping& b);

struct FareyBranch {
    ExactMobius matrix;
    OrbitBookkeeping bookkeeping;
};
FareyBranch farey_branch_closed_form(const ContinuedFraction& beta, std::size_t n);

enum class AlphaTypeVerdict { CertifiedYes, Inconclusive };

struct AlphaTypeReport {
    AlphaTypeVerdict verdict = AlphaTypeVerdict::Inconclusive;
    double epsilon = 0;         // the epsilon used in the exponent -2(1-alpha)+epsilon
    double log_partial_sum = 0; // ln of the partial double sum up to the depth
    std::size_t depth = 0;
    std::string reason;
};

AlphaTypeReport alpha_type_test(const ContinuedFraction& beta, double alpha, std::size_t depth);

struct OmegaLimit {
    std::vector<Surd> points; // sorted increasingly
    std::size_t period = 0;    // period of the T_1-orbit
    std::size_t preperiod = 0; // steps until the orbit enters the cycle
};

OmegaLimit omega_limit_preperiodic(const ContinuedFraction& beta);

struct SReport {
    mpz_class n_kj;                 // sum_{i<=j} a_i - k
    bool orbit_confirmed = false;   // T_1^{n_kj}(beta) starts with k, a_{j+1}
    std::optional<double> value;    // undefined when n_kj <= 1 gives ln(n) <= 0 at n = 0
    mpz_class q_j;
};

SReport compute_S(const ContinuedFraction& beta, double alpha, const mpz_class& k, std::size_t j);

enum class WitnessVariant { Beta, Kappa };

// Block expansions of the two witnesses: 2n (resp. 2^n) ones followed by a 2.
ContinuedFraction theorem33_witness(WitnessVariant v);
mpz_class theorem33_lambda(WitnessVariant v, std::size_t n);

struct WitnessReport {
    mpz_class lambda;
    mpz_class entry_before;  // a_{Lambda-1}
    mpz_class entry_at;      // a_{Lambda}
    bool check = false;      // a_{Lambda-1} == 2
};

WitnessReport theorem33_witnesses(WitnessVariant v, std::size_t n);

// ln |x - y| for two expansions that agree on a common prefix, using the convergents of
// the prefix and double-precision tails (no cancellation).  Requires x != y.
double cf_log_distance(const ContinuedFraction& x, const ContinuedFraction& y, std::size_t max_prefix = 100000);

/* A point of [0,1] with whatever exact information is available: always a double
 * approximation; an exact element of Q(sqrt D) for rationals and quadratic surds; and a
 * continued fraction when the point lies in (0,1] or was given as one. */
struct Point {
    double approx = 0;
    std::optional<Surd> exact;
    std::optional<ContinuedFraction> cf;
    std::string text;

    static Point from_double(double x);
    static Point from_surd(const Surd& s);
    static Point from_cf(const ContinuedFraction& cf);
};

/* Parse "2/5", "0.3", "1", "[0;2,2]", "[0;1,(1,2)]", "sqrt2-1", "(sqrt5-1)/2", "sqrt2/2",
 * "natural" ([0;1,2,3,...]), "witness-beta", "witness-kappa". */
Point parse_point(const std::string& s);

} // namespace tf
