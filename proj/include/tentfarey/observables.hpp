#pragma once

#include "tentfarey/contfrac.hpp"
#include "tentfarey/extended_real.hpp"
#include "tentfarey/map_core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tf {

// Which one-sided limit to evaluate; Value is the point value.
enum class Side { Value, Left, Right };

/* Evaluable function [0,1] -> [0, +inf].  Built from constants, the identity, singular
 * powers s|beta - x|^(-alpha), invariant densities, indicators, piecewise functions and
 * restrictions, combined by sums and products.  Every observable carries its breakpoints;
 * between consecutive breakpoints it is continuous, and when all building blocks are
 * monotone there the variation is computed exactly from endpoint limits. */
class Observable {
public:
    using Fn = std::function<double(double)>;

    struct Piece {
        Fn f;                 // defined on the closed piece interval
        bool monotone = true; // otherwise extrema are located numerically
    };

    struct SingularPower {
        double beta, alpha, scale;
    };

    Observable(); // the zero function

    static Observable constant(double c);
    static Observable identity();
    static Observable linear(double slope, double intercept); // slope*x + intercept on [0,1]
    static Observable singular_power(double beta, double alpha, double scale = 1.0);
    static Observable density(const MapParameter& r);
    static Observable indicator(double a, double b, bool left_closed = true, bool right_closed = true);
    // breaks b_0 < ... < b_k; piece i lives on [b_i, b_{i+1}) (the last one is closed); zero outside.
    static Observable piecewise(std::vector<double> breaks, std::vector<Piece> pieces);
    // A function continuous on [0,1] apart from the listed breakpoints, not assumed monotone.
    static Observable function(Fn f, std::vector<double> breaks = {}, bool monotone = false);

    // 1_I * f, evaluated as 0 outside I even where f is infinite.
    Observable restrict(double a, double b, bool left_closed = true, bool right_closed = true) const;
    Observable scaled(double c) const;

    friend Observable operator+(const Observable& f, const Observable& g);
    friend Observable operator*(const Observable& f, const Observable& g);

    ExtendedReal operator()(double x) const { return eval(x, Side::Value); }
    ExtendedReal eval(double x, Side side) const;
    // Value at the real number base + offset with the offset kept exact; a singular power
    // centred at base sees the distance |offset| even when base + offset rounds to base.
    ExtendedReal eval_offset(double base, double offset) const;
    // Plain double (+inf at singularities).
    double value(double x) const { return eval(x, Side::Value).value(); }

    std::vector<double> breakpoints() const;     // sorted, inside [0,1]
    std::vector<double> singular_points() const; // where the value or a one-sided limit is +inf
    bool has_singularity_in(double a, double b) const;
    bool monotone_between_breakpoints() const;
    std::optional<SingularPower> as_singular_power() const;
    std::string describe() const;

    struct Node;

private:
    explicit Observable(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// v_{beta,alpha}(x) = |beta - x|^(-alpha).
ExtendedReal eval_observable(const Observable& v, double x);

// Variation over [a, b] with point values included (right-continuous functions give the
// usual BV seminorm).  DomainError when a singularity lies in [a, b].
double variation(const Observable& f, double a, double b);
double sup_norm(const Observable& f, double a, double b);
// sup |f| + V(f) over [a, b].
double bv_norm(const Observable& f, double a, double b);

// Lebesgue integral over [a, b].  Closed form for a bare singular power over [0,1];
// otherwise tanh-sinh quadrature on each breakpoint interval (endpoint singularities allowed).
double integral_lebesgue(const Observable& f, double a = 0.0, double b = 1.0);
// integral of f dmu_r over [a, b].
double integral_mu(const MapParameter& r, const Observable& f, double a, double b);

// Quadrature of a plain function on [a, b] splitting at the given interior points.
double integrate(const std::function<double(double)>& f, double a, double b, const std::vector<double>& splits = {},
                 double tol = 1e-13);

/* Parse observables such as "power:beta=sqrt2-1,alpha=0.5[,scale=2]", "indicator:[0.5,1]",
 * "indicator:[0.5,1)", "const:2", "identity", "linear:slope=1,intercept=0",
 * "density:r=0.5", and products joined by '*', e.g. "identity*indicator:[0.5,1]". */
Observable parse_observable(const std::string& s);

} // namespace tf
