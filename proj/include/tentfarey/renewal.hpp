#pragma once

#include "tentfarey/observables.hpp"

#include <cstddef>
#include <functional>
#include <utility>

namespace tf {

// Induced system of the Farey map on Y = [1/2, 1].
struct Interval {
    double lo = 0, hi = 0;
    bool left_closed = true, right_closed = true;
    bool contains(double x) const {
        return (left_closed ? x >= lo : x > lo) && (right_closed ? x <= hi : x < hi);
    }
    double length() const { return hi - lo; }
};

// Y_0 = Y = [1/2, 1]; Y_k = [1/(k+2), 1/(k+1)) for k >= 1.
Interval y_interval(std::size_t k);
// U_k = [k/(k+1), (k+1)/(k+2)], the closure of {phi_Y = k}.
Interval u_interval(std::size_t k);
// Bucket used for sums: (k/(k+1), (k+1)/(k+2)], and [1/2, 2/3] for k = 1.
Interval u_bucket(std::size_t k);
// mu_1(U_k) = ln(1 + 1/(k(k+2))).
double mu1_u(std::size_t k);

struct PartitionSums {
    double lambda_y = 0; // sum_k lambda(Y_k) up to the truncation, plus the tail
    double mu_u = 0;     // sum_k mu_1(U_k) up to the truncation, plus the tail
    double lambda_tail = 0, mu_tail = 0;
};
PartitionSums partition_sums(std::size_t truncation);

// phi_Y(y) for y in [1/2, 1], decided exactly on the binary value of y; phi_Y(1) = 1 by convention.
std::size_t first_return_time(double y);
// min{n >= 1 : T_1^n(y) in Y} by iterating the map (at most max_steps steps; 0 if not found).
std::size_t return_time_by_orbit(double y, std::size_t max_steps = 1u << 20);
// T_1^{phi_Y(y)}(y) = 1 / (y/(1-y) - phi_Y(y) + 1) for y in [1/2, 1).
double induced_map(double y);

using PlainFn = std::function<double(double)>;

// R_n(f)(x) = 1_Y(x) f_{1,0}^n(x) prod_{k=0}^{n-2} f_{1,1}(f_{1,0}^k(x)) 1_{[1/2,1)}(x) f(f_{1,1}(f_{1,0}^{n-1}(x))).
double first_return_operator(const PlainFn& f, std::size_t n, double x);
double first_return_operator(const Observable& f, std::size_t n, double x);

// sum_{k=1}^m R_k(f)(x); for f = 1 on the interior of Y this is x m / (1 + m x).
double r1_partial_sum(const PlainFn& f, std::size_t m, double x);
double r1_partial_sum(const Observable& f, std::size_t m, double x);

// g_k(x) = -k x + 2k - 1 - (k-1)/x on U_k, 0 elsewhere.
double g_k_eval(std::size_t k, double x);
Observable g_k_observable(std::size_t k);

struct SupVariation {
    double sup = 0, variation = 0;
};
// Closed forms: sup 1/2, 3 - 2^{3/2}, 2/((k+1)(k+2)); variation 1/6, 17/3 - 2^{5/2}, (k-2)/(k(k+1)(k+2)).
SupVariation g_k_table(std::size_t k);
// Sup and variation of g_k over U_k computed from the observable.
SupVariation g_k_computed(std::size_t k);

// R_n(f) as an observable on [0,1] (breakpoints at 1/2, 1 and the preimages of f's breakpoints).
Observable first_return_observable(const Observable& f, std::size_t n);

struct RenewalBoundReport {
    std::size_t n = 0;
    double rn_bv_norm = 0; // ||R_n(f)||_BV on [0,1]
    double f_bv_norm = 0;  // ||f||_BV on [0,1]
    double bound = 0;      // constant * (n+1)^{-3} * ||f||_BV
    double ratio = 0;      // rn_bv_norm / bound; the bound holds iff ratio <= 1
};
RenewalBoundReport renewal_bound_report(const Observable& f, std::size_t n, double constant = 8.0);

struct DualityReport {
    double lhs = 0;             // int sum_{k<=m} R_k(w) u dmu_1 over Y
    double rhs_truncated = 0;   // int over U_1..U_m of w * u o T_Y dmu_1
    double rhs_full = 0;        // int over Y of w * u o T_Y dmu_1
    double truncated_error = 0; // |lhs - rhs_truncated|
    double full_error = 0;      // |lhs - rhs_full|, decreasing to 0 in m
};
DualityReport induced_duality_check(const Observable& w, const Observable& u, std::size_t m);

} // namespace tf
