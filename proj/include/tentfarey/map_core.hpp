#pragma once

#include "tentfarey/extended_real.hpp"
#include "tentfarey/surd.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace tf {

// Parameter r of the map family T_r; 0 <= r <= 1 (r = 0 tent map, r = 1 Farey map).
class MapParameter {
public:
    explicit MapParameter(double r);

    double value() const { return r_; }
    bool is_tent() const { return r_ == 0.0; }
    bool is_farey() const { return r_ == 1.0; }
    // Branch matrices have integer entries (r = 0 or r = 1).
    bool is_integral() const { return is_tent() || is_farey(); }
    // Every double is a dyadic rational, so r is always exactly representable.
    mpq_class rational() const { return mpq_class(r_); }

private:
    double r_;
};

using Word = std::vector<std::uint8_t>;

std::string word_str(const Word& w);

/* x -> (a x + b)/(c x + d) in extended precision.  Entries are kept normalized
 * (largest magnitude 1) with the removed factor accumulated in log_scale, so the
 * true matrix is exp(log_scale) * (a, b; c, d).  Long products are nearly rank one,
 * so ln|det| of the true matrix is carried separately in log_det; code that fills in
 * the entries by hand must set it. */
struct MobiusMatrix {
    long double a = 1, b = 0, c = 0, d = 1;
    long double log_scale = 0;
    long double log_det = 0;

    static MobiusMatrix identity() { return {}; }

    long double operator()(long double x) const { return (a * x + b) / (c * x + d); }
    long double denominator(long double x) const { return c * x + d; }
    long double det() const { return a * d - b * c; }
    // ln|det| of the true (unnormalized) matrix.
    long double log_abs_det() const;

    // this * m, i.e. the composition this o m.
    MobiusMatrix operator*(const MobiusMatrix& m) const;
    void normalize();
};

// Exact integer Mobius matrix, used when r is 0 or 1.
struct ExactMobius {
    mpz_class a = 1, b = 0, c = 0, d = 1;

    mpz_class det() const { return a * d - b * c; }
    ExactMobius operator*(const ExactMobius& m) const;
    bool operator==(const ExactMobius& m) const = default;

    mpq_class operator()(const mpq_class& x) const;
    Surd operator()(const Surd& x) const;
    double operator()(double x) const;
    MobiusMatrix to_float() const;
    std::string str() const;
};

// Rational Mobius matrix (exact for any r, since r is a dyadic rational).
struct RationalMobius {
    mpq_class a = 1, b = 0, c = 0, d = 1;

    RationalMobius operator*(const RationalMobius& m) const;
    Surd operator()(const Surd& x) const;
    mpq_class operator()(const mpq_class& x) const;
};

// T_r(x); the boundary x = 1/2 belongs to the first branch.
double eval_map(const MapParameter& r, double x);
// Exact T_r on Q(sqrt D).
Surd eval_map(const MapParameter& r, const Surd& x);

MobiusMatrix inverse_branch_matrix(const MapParameter& r, int digit);
ExactMobius inverse_branch_exact(const MapParameter& r, int digit);
RationalMobius inverse_branch_rational(const MapParameter& r, int digit);

// f_{r,w} = f_{r,w1} o ... o f_{r,wn}; the empty word gives the identity.
MobiusMatrix compose_branches(const MapParameter& r, const Word& word);
ExactMobius compose_branches_exact(const MapParameter& r, const Word& word);
RationalMobius compose_branches_rational(const MapParameter& r, const Word& word);

// |f'(x)| = |det| / (c x + d)^2.
double branch_derivative(const MobiusMatrix& m, double x);
double branch_derivative(const ExactMobius& m, double x);

ExtendedReal invariant_density(const MapParameter& r, double x);
// mu_r([a, b]).
ExtendedReal measure_mu(const MapParameter& r, double a, double b);

// The fixed point of T_r in (1/2, 1); the r -> 0 limit 2/3 at r = 0.
double fixed_point_nonzero(const MapParameter& r);

} // namespace tf
