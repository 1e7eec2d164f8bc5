#pragma once

#include "tentfarey/contfrac.hpp"
#include "tentfarey/map_core.hpp"

#include <gmpxx.h>

#include <vector>

namespace tf {

/* Digit k (1-based) is 0 iff T_r^{k-1}(beta) <= 1/2.
 * Exact when beta carries exact information (continued fraction at r = 1, element of
 * Q(sqrt D) otherwise).  The double overload iterates in binary64; codings of points very
 * close to 1/2 become unreliable after roughly 45 iterates. */
Word code_point(const MapParameter& r, const Point& beta, std::size_t n);
Word code_point(const MapParameter& r, double beta, std::size_t n);

// beta, T_r(beta), ..., T_r^{n-1}(beta) as doubles (computed exactly when possible).
std::vector<double> orbit_points(const MapParameter& r, const Point& beta, std::size_t n);

// [phi]_r = f_{r,phi}([0,1]).  Endpoints are exact: r is a dyadic rational.
struct Cylinder {
    Word word;
    mpq_class left, right;
    double left_d() const { return left.get_d(); }
    double right_d() const { return right.get_d(); }
    double length() const { return mpq_class(right - left).get_d(); }
    bool contains(const Surd& x) const { return Surd(left) <= x && x <= Surd(right); }
    bool contains(double x) const { return left_d() <= x && x <= right_d(); }
};

Cylinder cylinder_interval(const MapParameter& r, const Word& word);

struct NeighborTriple {
    Word minus, center, plus;
    mpq_class left, right; // [W_{r,n}(beta)], the union of the three cylinders
    // The distinct words among minus, center, plus.
    std::vector<Word> distinct() const;
};

// Neighbours via one-letter flips of the centre word: adjacent length-n cylinders differ in
// exactly one letter, so the flip that touches each side is the neighbour there.  A side
// with no neighbour (beta's cylinder touches 0 or 1) repeats the centre word.
NeighborTriple neighbor_words(const MapParameter& r, const Point& beta, std::size_t n);

// sup over x, y in [psi]_r of |f'_{r,phi}(x) / f'_{r,phi}(y)|.
double distortion_ratio(const MapParameter& r, const Word& phi, const Word& psi);
// Max of distortion_ratio over all phi of length n and psi of length m (exhaustive).
double distortion_profile(const MapParameter& r, std::size_t n, std::size_t m);

// Max over adjacent pairs phi, phi' of length n of sup|f'_phi| / inf|f'_phi'| (exhaustive).
double neighbor_derivative_constant(const MapParameter& r, std::size_t n);

} // namespace tf
