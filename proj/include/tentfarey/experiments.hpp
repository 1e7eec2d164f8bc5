#pragma once

#include "tentfarey/transfer.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace tf {

enum class ScheduleKind { Linear, Dyadic };

// from, from+step, ..., <= to.
std::vector<std::size_t> linear_schedule(std::size_t from, std::size_t to, std::size_t step = 1);
// Powers of two 2^k with from <= 2^k <= to.
std::vector<std::size_t> dyadic_schedule(std::size_t from, std::size_t to);

struct ExperimentConfig {
    std::string theorem = "3.1"; // 3.1 | 3.2 | 3.3a | 3.3b | diagnostics
    double r = 0.5;
    double alpha = 0.5;
    std::string beta = "1/3";
    std::vector<std::string> points;
    std::vector<std::size_t> schedule; // strictly increasing; empty selects the default
    std::size_t n_from = 1, n_to = 0;  // used for the default schedule
    std::string observable;            // empty: v_{beta,alpha}
    GridSpec grid{std::size_t{1} << 14, 3.0};
    std::size_t k = 1;
    double eta_k = 1.0, s = 1.0;
};

// Default n schedule: dyadic for r = 1, linear otherwise.
std::vector<std::size_t> resolve_schedule(const ExperimentConfig& c);

struct ExperimentRow {
    std::string theorem;
    double r = 0, alpha = 0;
    std::string beta, x;
    std::size_t n = 0;
    std::string backend; // backend and error model, e.g. "exact-tree" or "grid:N=16384:p=3"
    ExtendedReal value, target, normalized;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::map<std::string, std::string> metadata;

    // theorem,r,alpha,beta,x,n,backend,value,target,normalized
    std::string to_csv() const;
    std::string to_json() const;
    // The (n, x, value, normalized) view.
    ExperimentSeries series() const;
};

/* r < 1: P_r^n(v)(x) on the exact tree, target int v dlambda * h_r(x), normalized = value/target.
 * r = 1: P_1^n(v)(x) = T^_1^n(x v)(x)/x on the graded grid for BV v, normalized = ln(n) * value,
 * target int v dlambda * h_1(x).  Points of a finite omega-limit set are listed in the
 * metadata as expected divergence and evaluated with the exact tail. */
ExperimentReport run_convergence(const ExperimentConfig& c);

// T^_1^n(f)(x) on a grid: result[i][j] is the value at xs[i] after schedule[j] steps.
std::vector<std::vector<double>> farey_dual_series(const Observable& f, const std::vector<double>& xs,
                                                   const std::vector<std::size_t>& schedule, const GridSpec& grid);

struct LimsupFit {
    std::string zeta;
    std::size_t period = 0, preperiod = 0;
    std::vector<std::size_t> infinite_residues; // n mod period over the +inf rows
    bool all_infinite = false;                  // every scheduled n >= preperiod gave +inf (rational beta)
    double slope = 0;                           // ln v against ln q_{m(n)} over the finite rows
    std::size_t fit_points = 0;
};

struct LimsupReport {
    ExperimentReport report;
    std::vector<LimsupFit> fits;
};

/* For each zeta in Omega_1(beta): v_{n,1}(zeta) for the scheduled n; +inf rows are the exact
 * hits T_1^n(beta) = zeta.  normalized = ln v when finite.  The decay slope is fitted over the
 * finite rows with n >= n_fit_from; its expected value is 2(alpha - 1). */
LimsupReport run_limsup_report(const std::string& beta, double alpha, const std::vector<std::size_t>& schedule,
                               std::size_t n_fit_from = 100);

// 3.3a: witness entry checks, Lambda(n, tau), the bounding quantity
//   ln(n) / q_{m(n)}^{2(1-alpha)} * |T_1^{n-(k+1)}(tau) - gamma|^{-alpha}
// along n - (k+1) = Lambda(l, tau) + l - 1, the kappa lower-bound sequence at n = Lambda(l, kappa) + l + 1
// and its closed-form minorant l ln 2 gamma^{2^{l+1}(1-2 alpha) + 2(3l-2)(1-alpha)} (with s = 1).
// 3.3b: S_{k,j} for j = 1..n_to with the classification of its limsup at the computed depth.
ExperimentReport run_thm33(const ExperimentConfig& c);

// Wandering rate, cover sums and the alpha-type test.
ExperimentReport run_diagnostics(const ExperimentConfig& c);

ExperimentReport run_experiment(const ExperimentConfig& c);

} // namespace tf
