#include "tentfarey/renewal.hpp"

#include "tentfarey/errors.hpp"
#include "tentfarey/map_core.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>

namespace tf {

namespace {

// Neumaier compensated summation.
struct CompensatedSum {
    double s = 0, c = 0;
    void add(double x) {
        double t = s + x;
        c += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

void require_k(std::size_t k) {
    if (k < 1) throw InputError("partition index must be >= 1");
}

} // namespace

Interval y_interval(std::size_t k) {
    if (k == 0) return {0.5, 1.0, true, true};
    const double kk = static_cast<double>(k);
    return {1.0 / (kk + 2), 1.0 / (kk + 1), true, false};
}

Interval u_interval(std::size_t k) {
    require_k(k);
    const double kk = static_cast<double>(k);
    return {kk / (kk + 1), (kk + 1) / (kk + 2), true, true};
}

Interval u_bucket(std::size_t k) {
    Interval u = u_interval(k);
    u.left_closed = k == 1;
    return u;
}

double mu1_u(std::size_t k) {
    require_k(k);
    const double kk = static_cast<double>(k);
    return std::log1p(1.0 / (kk * (kk + 2)));
}

PartitionSums partition_sums(std::size_t truncation) {
    PartitionSums p;
    CompensatedSum ly, mu;
    ly.add(0.5); // Y_0
    for (std::size_t k = 1; k <= truncation; ++k) {
        const double kk = static_cast<double>(k);
        ly.add(1.0 / ((kk + 1) * (kk + 2)));
        mu.add(mu1_u(k));
    }
    const double K = static_cast<double>(truncation);
    p.lambda_tail = 1.0 / (K + 2);          // lambda((0, 1/(K+2)))
    p.mu_tail = std::log1p(1.0 / (K + 1)); // mu_1([(K+1)/(K+2), 1])
    ly.add(p.lambda_tail);
    mu.add(p.mu_tail);
    p.lambda_y = ly.value();
    p.mu_u = mu.value();
    return p;
}

std::size_t first_return_time(double y) {
    if (!(y >= 0.5 && y <= 1.0)) throw InputError("first_return_time: y must lie in [1/2, 1]");
    if (y == 1.0) return 1;
    // y in (k/(k+1), (k+1)/(k+2)]  <=>  1/(1-y) in (k+1, k+2].
    mpq_class t = 1 / (1 - mpq_class(y));
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    mpz_class k = c - 2;
    return k < 1 ? 1 : k.get_ui();
}

std::size_t return_time_by_orbit(double y, std::size_t max_steps) {
    const MapParameter one(1.0);
    for (std::size_t n = 1; n <= max_steps; ++n) {
        y = eval_map(one, y);
        if (y >= 0.5) return n;
    }
    return 0;
}

double induced_map(double y) {
    if (!(y >= 0.5 && y < 1.0)) throw InputError("induced_map: y must lie in [1/2, 1)");
    const mpq_class q(y), k(static_cast<unsigned long>(first_return_time(y)));
    mpq_class z = (1 - q) / (k * q - (k - 1));
    return z.get_d();
}

double first_return_operator(const PlainFn& f, std::size_t n, double x) {
    if (n < 1) throw InputError("first_return_operator: n must be >= 1");
    if (!(x >= 0.5 && x < 1.0)) return 0.0;
    double prod = 1.0;
    for (std::size_t k = 0; k + 2 <= n; ++k) {
        const double kk = static_cast<double>(k);
        prod *= (1 + kk * x) / (1 + (kk + 1) * x); // f_{1,1}(f_{1,0}^k(x))
    }
    const double nn = static_cast<double>(n);
    double z = x / (1 + (nn - 1) * x); // f_{1,0}^{n-1}(x)
    return x / (1 + nn * x) * prod * f(1 / (1 + z));
}

double first_return_operator(const Observable& f, std::size_t n, double x) {
    return first_return_operator([&](double y) { return f.value(y); }, n, x);
}

double r1_partial_sum(const PlainFn& f, std::size_t m, double x) {
    if (!(x >= 0.5 && x < 1.0)) return 0.0;
    CompensatedSum s;
    double prod = 1.0; // prod_{k=0}^{j-2} f_{1,1}(f_{1,0}^k(x))
    for (std::size_t j = 1; j <= m; ++j) {
        const double jj = static_cast<double>(j);
        if (j >= 2) prod *= (1 + (jj - 2) * x) / (1 + (jj - 1) * x);
        double z = x / (1 + (jj - 1) * x);
        s.add(x / (1 + jj * x) * prod * f(1 / (1 + z)));
    }
    return s.value();
}

double r1_partial_sum(const Observable& f, std::size_t m, double x) {
    return r1_partial_sum([&](double y) { return f.value(y); }, m, x);
}

double g_k_eval(std::size_t k, double x) {
    require_k(k);
    if (!u_interval(k).contains(x)) return 0.0;
    const double kk = static_cast<double>(k);
    return -kk * x + 2 * kk - 1 - (kk - 1) / x;
}

Observable g_k_observable(std::size_t k) {
    Interval u = u_interval(k);
    const double kk = static_cast<double>(k);
    auto g = [kk](double x) { return -kk * x + 2 * kk - 1 - (kk - 1) / x; };
    return Observable::function(g, {u.lo, u.hi}, k != 2).restrict(u.lo, u.hi);
}

SupVariation g_k_table(std::size_t k) {
    require_k(k);
    if (k == 1) return {0.5, 1.0 / 6};
    if (k == 2) return {3 - std::pow(2.0, 1.5), 17.0 / 3 - std::pow(2.0, 2.5)};
    const double kk = static_cast<double>(k);
    return {2 / ((kk + 1) * (kk + 2)), (kk - 2) / (kk * (kk + 1) * (kk + 2))};
}

SupVariation g_k_computed(std::size_t k) {
    Observable g = g_k_observable(k);
    Interval u = u_interval(k);
    return {sup_norm(g, u.lo, u.hi), variation(g, u.lo, u.hi)};
}

Observable first_return_observable(const Observable& f, std::size_t n) {
    if (n < 1) throw InputError("first_return_observable: n must be >= 1");
    const double nn = static_cast<double>(n);
    std::vector<double> br{0.5, 1.0};
    // x with f_{1,1}(f_{1,0}^{n-1}(x)) = b: z = 1/b - 1, x = z / (1 - (n-1) z).
    for (double b : f.breakpoints()) {
        if (b <= 0) continue;
        double z = 1 / b - 1;
        double den = 1 - (nn - 1) * z;
        if (den <= 0) continue;
        double x = z / den;
        if (x > 0.5 && x < 1.0) br.push_back(x);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    std::vector<Observable::Piece> pieces;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double lo = br[i], hi = br[i + 1];
        // x increasing moves f_{1,1} o f_{1,0}^{n-1}(x) to the left.
        auto piece = [f, n, nn, lo, hi](double x) {
            Side side = x == lo ? Side::Left : x == hi ? Side::Right : Side::Value;
            double prod = 1.0;
            for (std::size_t k = 0; k + 2 <= n; ++k) {
                const double kk = static_cast<double>(k);
                prod *= (1 + kk * x) / (1 + (kk + 1) * x);
            }
            double z = x / (1 + (nn - 1) * x);
            return x / (1 + nn * x) * prod * f.eval(1 / (1 + z), side).value();
        };
        pieces.push_back({piece, false});
    }
    return Observable::piecewise(br, pieces).restrict(0.5, 1.0, true, false);
}

RenewalBoundReport renewal_bound_report(const Observable& f, std::size_t n, double constant) {
    RenewalBoundReport r;
    r.n = n;
    r.rn_bv_norm = bv_norm(first_return_observable(f, n), 0.0, 1.0);
    r.f_bv_norm = bv_norm(f, 0.0, 1.0);
    r.bound = constant * std::pow(static_cast<double>(n + 1), -3.0) * r.f_bv_norm;
    r.ratio = r.rn_bv_norm / r.bound;
    return r;
}

DualityReport induced_duality_check(const Observable& w, const Observable& u, std::size_t m) {
    DualityReport rep;
    if (m > 0) {
        std::vector<double> splits = u.breakpoints();
        Observable rsum = first_return_observable(w, 1);
        for (std::size_t k = 2; k <= m; ++k) rsum = rsum + first_return_observable(w, k);
        for (double b : rsum.breakpoints()) splits.push_back(b);
        rep.lhs = integrate([&](double x) { return rsum.value(x) * u.value(x) / x; }, 0.5, 1.0, splits);
    }
    // Adaptive quadrature on the first blocks, Gauss-Legendre on the thin ones.
    const std::size_t full = std::max<std::size_t>(m, 20000);
    CompensatedSum trunc, all;
    for (std::size_t k = 1; k <= full; ++k) {
        Interval uk = u_interval(k);
        const double kk = static_cast<double>(k);
        auto g = [&, kk](double y) { return w.value(y) * u.value((1 - y) / (kk * y - (kk - 1))) / y; };
        double v;
        if (k <= 200) {
            std::vector<double> splits;
            for (double b : w.breakpoints())
                if (b > uk.lo && b < uk.hi) splits.push_back(b);
            v = integrate(g, uk.lo, uk.hi, splits);
        } else {
            v = boost::math::quadrature::gauss<double, 20>::integrate(g, uk.lo, uk.hi);
        }
        if (k <= m) trunc.add(v);
        all.add(v);
    }
    rep.rhs_truncated = trunc.value();
    rep.rhs_full = all.value();
    rep.truncated_error = std::fabs(rep.lhs - rep.rhs_truncated);
    rep.full_error = std::fabs(rep.lhs - rep.rhs_full);
    return rep;
}

} // namespace tf
