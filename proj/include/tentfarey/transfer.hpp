#pragma once

#include "tentfarey/contfrac.hpp"
#include "tentfarey/extended_real.hpp"
#include "tentfarey/map_core.hpp"
#include "tentfarey/observables.hpp"
#include "tentfarey/symbolic.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tf {

using RealFn = std::function<ExtendedReal(double)>;

enum class Backend { ExactTree, Grid };
std::string backend_name(Backend b);

// Depth limit of the exact branch-tree backend (2^n Mobius evaluations per point).
inline constexpr std::size_t kMaxTreeDepth = 26;

/* Piecewise-linear representation on nodes x_i = (i/(N-1))^grading, i = 0..N-1.
 * grading = 1 is the uniform grid; grading > 1 concentrates nodes near 0, where the
 * Farey operator's iterates develop a boundary layer of width ~1/n. */
struct GridSpec {
    std::size_t N = std::size_t{1} << 14;
    double grading = 1.0;
};

class GridFunction {
public:
    GridFunction(const GridSpec& spec, std::vector<double> values);
    static GridFunction sample(const GridSpec& spec, const std::function<double(double)>& f);

    const GridSpec& spec() const { return spec_; }
    const std::vector<double>& nodes() const { return *nodes_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator()(double x) const;

private:
    GridSpec spec_;
    std::shared_ptr<const std::vector<double>> nodes_;
    std::vector<double> values_;
};

std::shared_ptr<const std::vector<double>> grid_nodes(const GridSpec& spec);

/* One application of a two-branch weighted-composition operator on a grid:
 * (L g)(x_i) = sum_d w_d(x_i) g(f_d(x_i)), with the interpolation stencils precomputed. */
class GridOperator {
public:
    static GridOperator perron_frobenius(const MapParameter& r, const GridSpec& spec);
    static GridOperator farey_dual(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    void apply(const std::vector<double>& in, std::vector<double>& out) const;
    GridFunction apply(const GridFunction& g) const;

private:
    struct Stencil {
        std::uint32_t j;
        double t, w; // value = w * ((1 - t) g[j] + t g[j+1])
    };
    GridSpec spec_;
    std::vector<Stencil> st0_, st1_;
};

// --- Perron-Frobenius operator P_r -----------------------------------------------------

ExtendedReal pf_apply_once(const MapParameter& r, const Observable& f, double x);
ExtendedReal pf_apply_once(const MapParameter& r, const RealFn& f, double x);

// sum over words w of length n of |f'_{r,w}(x)| f(f_{r,w}(x)), depth-first over matrices.
ExtendedReal pf_iterate_tree(const MapParameter& r, const RealFn& f, double x, std::size_t n);
ExtendedReal pf_iterate_tree(const MapParameter& r, const Observable& f, double x, std::size_t n);

// n grid steps; refuses observables with a singularity in [0,1].
GridFunction pf_iterate_grid(const MapParameter& r, const Observable& f, std::size_t n, const GridSpec& spec = {});

ExtendedReal pf_iterate(const MapParameter& r, const Observable& f, double x, std::size_t n,
                        Backend backend = Backend::ExactTree, const GridSpec& spec = {});

// --- Farey dual operator T^_1 ------------------------------------------------------------

// f_{1,0}(x) f(f_{1,1}(x)) + f_{1,1}(x) f(f_{1,0}(x)), i.e. P_1(f h_1)/h_1.
ExtendedReal transfer_hat_once(const RealFn& f, double x);
ExtendedReal transfer_hat_tree(const RealFn& f, double x, std::size_t n);
ExtendedReal transfer_hat_tree(const Observable& f, double x, std::size_t n);
GridFunction transfer_hat_grid(const Observable& f, std::size_t n, const GridSpec& spec);
ExtendedReal transfer_hat_apply(const Observable& f, double x, std::size_t n, Backend backend = Backend::ExactTree,
                                const GridSpec& spec = {});

// T^_1^n(f 1_{Y_n})(x) = prod_{k<n} f_{1,1}(f_{1,0}^k(x)) * f(f_{1,0}^n(x)) restricted to the
// branch that lands in Y_n; evaluated in O(n).
double transfer_hat_restricted_closed_form(const RealFn& f, double x, std::size_t n);

// Both sides of 1_Y T^_1^n(f) = sum_{j<=n} 1_Y T^_1^{n-j}(1_Y T^_1^j(f 1_{Y_j})) at x (exact tree).
struct DecompositionSides {
    double lhs = 0, rhs = 0;
};
DecompositionSides decomposition_identity(const RealFn& f, double x, std::size_t n);

// Both sides of P_1^n(g)(f_{1,0}(x)) = (P_1^{n+1}(g)(x) - |f'_{1,1}(x)| P_1^n(g)(f_{1,1}(x))) / |f'_{1,0}(x)|.
struct ExtensionSides {
    double lhs = 0, rhs = 0;
};
ExtensionSides extension_equation(const RealFn& g, double x, std::size_t n);

// --- tails and the split ---------------------------------------------------------------

/* v_{n,r}(x): for r < 1 the sum over the (at most three) distinct words of W_{r,n}(beta) of
 * |f'_{r,w}(x)| v_{beta,alpha}(f_{r,w}(x)); for r = 1 the single word w_1(beta)|_n through
 * the convergent closed form.  +inf exactly when f_{r,w}(x) = beta, decided in exact
 * arithmetic when beta and x carry exact values. */
ExtendedReal tail_eval(const MapParameter& r, const Point& beta, double alpha, std::size_t n, const Point& x);

// Evaluator for many n at r = 1 sharing one convergent table (n ascending is fastest).
class FareyTail {
public:
    FareyTail(Point beta, double alpha);
    ExtendedReal operator()(std::size_t n, const Point& x);
    // ln v_{n,1}(x) when finite.
    std::optional<double> log_value(std::size_t n, const Point& x);
    const ConvergentTable& table() const { return table_; }

private:
    void ensure(std::size_t m);
    Point beta_;
    double alpha_;
    ConvergentTable table_;
};

struct SplitResult {
    ExtendedReal bv_part;   // sum over words outside W_{r,n}(beta)
    ExtendedReal tail_part; // sum over words inside W_{r,n}(beta)
};

SplitResult split_decomposition(const MapParameter& r, const Observable& v, const Point& beta, std::size_t n, double x);

// --- wandering rate and cover sums -----------------------------------------------------

// mu_r of the union of T_r^{-k}(Y), k < n, Y = [1/2, 1]; equals mu_r([f_{r,0}^n(1), 1]).
double wandering_rate(const MapParameter& r, std::size_t n);

struct CoverSumReport {
    double partial_sum = 0;
    std::optional<double> geometric_bound; // closed-form tail from n_from on (r < 1)
    std::vector<std::pair<std::size_t, double>> terms;
};

// Sum over n in [n_from, n_to] of radius_n^s with the ball radii of the tail-set covers.
// r < 1: (2-r)^{(1-1/alpha) n} (3 eta K)^{1/alpha}.
// r = 1: (k+1)^{2/alpha} ln(n)^{1/alpha} / (eta^{1/alpha} k^2 ((r(n)+k) q_m + q_{m-1})^{2(1/alpha-1)}),
//        over the n of the form a_1 + ... + a_l - k.
CoverSumReport cover_sum_diagnostic(const MapParameter& r, const Point& beta, double alpha, double etaK, double s,
                                    std::size_t n_from, std::size_t n_to, std::size_t k = 1);

// --- series plumbing -------------------------------------------------------------------

struct SeriesRecord {
    std::size_t n = 0;
    double x = 0;
    ExtendedReal value;
    ExtendedReal normalized_value;
};

struct ExperimentSeries {
    std::vector<SeriesRecord> records;
    std::map<std::string, std::string> metadata;

    std::string to_csv() const;  // n,x,value,normalized_value
    std::string to_json() const; // {"metadata": {...}, "records": [...]}
};

// Least-squares slope of y against x.
double fit_linear_slope(const std::vector<double>& x, const std::vector<double>& y);
// Least-squares slope of ln(y) against x; the fitted geometric ratio is exp(slope).
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);
// Least-squares slope of ln(y) against ln(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace tf
