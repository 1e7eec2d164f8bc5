#include "tentfarey/symbolic.hpp"

#include "tentfarey/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tf {

namespace {

const Surd& half() {
    static const Surd h(mpq_class(1, 2));
    return h;
}

Word all_words_next(Word w) {
    for (std::size_t i = w.size(); i-- > 0;) {
        if (w[i] == 0) {
            w[i] = 1;
            return w;
        }
        w[i] = 0;
    }
    return {};
}

} // namespace

Word code_point(const MapParameter& r, const Point& beta, std::size_t n) {
    if (!(beta.approx >= 0 && beta.approx <= 1)) throw InputError("code_point: beta must lie in [0,1]");
    if (r.is_farey() && beta.cf) return farey_coding(*beta.cf, n);
    if (r.is_farey() && beta.exact && beta.exact->is_zero()) return Word(n, 0);
    if (beta.exact) {
        Word w;
        w.reserve(n);
        Surd x = *beta.exact;
        for (std::size_t k = 0; k < n; ++k) {
            w.push_back(x <= half() ? 0 : 1);
            if (k + 1 < n) x = eval_map(r, x);
        }
        return w;
    }
    return code_point(r, beta.approx, n);
}

Word code_point(const MapParameter& r, double beta, std::size_t n) {
    if (!(beta >= 0 && beta <= 1)) throw InputError("code_point: beta must lie in [0,1]");
    Word w;
    w.reserve(n);
    double x = beta;
    for (std::size_t k = 0; k < n; ++k) {
        w.push_back(x <= 0.5 ? 0 : 1);
        x = eval_map(r, x);
    }
    return w;
}

std::vector<double> orbit_points(const MapParameter& r, const Point& beta, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    if (r.is_farey() && beta.cf) {
        ContinuedFraction x = *beta.cf;
        for (std::size_t k = 0; k < n; ++k) {
            out.push_back(x.is_zero() ? 0.0 : (x.has_exact_value() ? x.exact_value().to_double() : x.approx(200)));
            x = farey_step(x);
        }
        return out;
    }
    if (beta.exact) {
        Surd x = *beta.exact;
        for (std::size_t k = 0; k < n; ++k) {
            out.push_back(x.to_double());
            if (k + 1 < n) x = eval_map(r, x);
        }
        return out;
    }
    double x = beta.approx;
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(x);
        x = eval_map(r, x);
    }
    return out;
}

Cylinder cylinder_interval(const MapParameter& r, const Word& word) {
    if (word.empty()) throw InputError("cylinder_interval: word must be nonempty");
    Cylinder c;
    c.word = word;
    mpq_class e0, e1;
    if (r.is_integral()) {
        ExactMobius m = compose_branches_exact(r, word);
        e0 = m(mpq_class(0));
        e1 = m(mpq_class(1));
    } else {
        RationalMobius m = compose_branches_rational(r, word);
        e0 = m(mpq_class(0));
        e1 = m(mpq_class(1));
    }
    c.left = std::min(e0, e1);
    c.right = std::max(e0, e1);
    return c;
}

std::vector<Word> NeighborTriple::distinct() const {
    std::vector<Word> v{center};
    if (minus != center) v.push_back(minus);
    if (plus != center && plus != minus) v.push_back(plus);
    return v;
}

NeighborTriple neighbor_words(const MapParameter& r, const Point& beta, std::size_t n) {
    if (n < 1) throw InputError("neighbor_words: n must be >= 1");
    NeighborTriple t;
    t.center = code_point(r, beta, n);
    Cylinder c = cylinder_interval(r, t.center);
    t.minus = t.center;
    t.plus = t.center;
    t.left = c.left;
    t.right = c.right;
    for (std::size_t i = 0; i < n; ++i) {
        Word w = t.center;
        w[i] ^= 1;
        Cylinder d = cylinder_interval(r, w);
        if (d.right == c.left && c.left != 0) {
            t.minus = w;
            t.left = d.left;
        } else if (d.left == c.right && c.right != 1) {
            t.plus = w;
            t.right = d.right;
        }
    }
    return t;
}

double distortion_ratio(const MapParameter& r, const Word& phi, const Word& psi) {
    MobiusMatrix m = compose_branches(r, phi);
    Cylinder c = cylinder_interval(r, psi);
    long double d0 = std::fabs(m.denominator(c.left_d())), d1 = std::fabs(m.denominator(c.right_d()));
    long double q = std::max(d0, d1) / std::min(d0, d1);
    return static_cast<double>(q * q);
}

double distortion_profile(const MapParameter& r, std::size_t n, std::size_t m) {
    if (n > 16 || m > 16) throw CapacityError("distortion_profile: exhaustive search limited to length 16");
    std::vector<std::pair<double, double>> cyl;
    for (Word psi(m, 0); !psi.empty(); psi = all_words_next(psi)) {
        Cylinder c = cylinder_interval(r, psi);
        cyl.emplace_back(c.left_d(), c.right_d());
    }
    if (m == 0) cyl.emplace_back(0.0, 1.0);
    double worst = 1;
    auto visit = [&](const MobiusMatrix& f) {
        for (auto [a, b] : cyl) {
            long double d0 = std::fabs(f.denominator(a)), d1 = std::fabs(f.denominator(b));
            long double q = std::max(d0, d1) / std::min(d0, d1);
            worst = std::max(worst, static_cast<double>(q * q));
        }
    };
    if (n == 0) {
        visit(MobiusMatrix::identity());
        return worst;
    }
    for (Word phi(n, 0); !phi.empty(); phi = all_words_next(phi)) visit(compose_branches(r, phi));
    return worst;
}

double neighbor_derivative_constant(const MapParameter& r, std::size_t n) {
    if (n < 1 || n > 14) throw CapacityError("neighbor_derivative_constant: exhaustive search limited to 1..14");
    std::size_t count = std::size_t{1} << n;
    std::vector<MobiusMatrix> mats(count);
    std::vector<std::pair<double, double>> ends(count);
    std::vector<std::pair<double, double>> dmin_max(count);
    for (std::size_t code = 0; code < count; ++code) {
        Word w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = (code >> (n - 1 - i)) & 1;
        mats[code] = compose_branches(r, w);
        double e0 = static_cast<double>(mats[code](0.0L)), e1 = static_cast<double>(mats[code](1.0L));
        ends[code] = {std::min(e0, e1), std::max(e0, e1)};
        double f0 = branch_derivative(mats[code], 0.0), f1 = branch_derivative(mats[code], 1.0);
        dmin_max[code] = {std::min(f0, f1), std::max(f0, f1)}; // |f'| is monotone on [0,1]
    }
    double K = 0;
    for (std::size_t code = 0; code < count; ++code) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t other = code ^ (std::size_t{1} << i);
            bool adjacent = std::fabs(ends[code].second - ends[other].first) < 1e-12 ||
                            std::fabs(ends[code].first - ends[other].second) < 1e-12;
            if (adjacent) K = std::max(K, dmin_max[code].second / dmin_max[other].first);
        }
    }
    return K;
}

} // namespace tf
