#include "tentfarey/errors.hpp"
#include "tentfarey/map_core.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tf;

namespace {

// Independent transcription of the forward map.
double forward_oracle(double r, double x) {
    if (x <= 0.5) return (2 - r) * x / (1 - r * x);
    return (2 - r) * (1 - x) / (1 - r + r * x);
}

double density_oracle(double r, double x) {
    if (r == 0) return 1;
    if (r == 1) return 1 / x;
    return -r / std::log1p(-r) / (1 - r + r * x);
}

} // namespace

TEST_SUITE("map_core") {

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(MapParameter(1.5), InputError);
    CHECK_THROWS_AS(MapParameter(-0.1), InputError);
    CHECK_THROWS_AS(MapParameter(std::nan("")), InputError);
    CHECK(MapParameter(0).is_tent());
    CHECK(MapParameter(1).is_farey());
}

TEST_CASE("forward map values") {
    CHECK(eval_map(MapParameter(0.5), 0.25) == doctest::Approx(3.0 / 7).epsilon(1e-15));
    CHECK(eval_map(MapParameter(1), 2.0 / 3) == doctest::Approx(0.5).epsilon(1e-15));
    for (double r : {0.0, 0.3, 0.5, 0.9, 1.0}) {
        MapParameter p(r);
        CHECK(eval_map(p, 0.5) == 1.0);
        CHECK(eval_map(p, 1.0) == 0.0);
        CHECK(eval_map(p, 0.0) == 0.0);
        for (int i = 1; i < 100; ++i) {
            double x = i / 100.0;
            CHECK(eval_map(p, x) == doctest::Approx(forward_oracle(r, x)).epsilon(1e-14));
        }
    }
}

TEST_CASE("exact forward map agrees with the double map") {
    for (double r : {0.0, 0.25, 1.0}) {
        MapParameter p(r);
        Surd x = (Surd::sqrt(5) - Surd(1L)) / Surd(2L);
        for (int k = 0; k < 10; ++k) {
            double xd = x.to_double();
            Surd y = eval_map(p, x);
            CHECK(y.to_double() == doctest::Approx(eval_map(p, xd)).epsilon(1e-9));
            x = y;
        }
    }
}

TEST_CASE("inverse branch matrices") {
    ExactMobius f0 = inverse_branch_exact(MapParameter(1), 0);
    ExactMobius f1 = inverse_branch_exact(MapParameter(1), 1);
    CHECK(f0 == ExactMobius{1, 0, 1, 1});
    CHECK(f1 == ExactMobius{0, 1, 1, 1});
    CHECK_THROWS_AS(inverse_branch_matrix(MapParameter(0.5), 2), InputError);
}

TEST_CASE("inverse branches invert the forward map") {
    for (double r : {0.0, 0.2, 0.5, 0.8, 1.0}) {
        MapParameter p(r);
        for (int d = 0; d < 2; ++d) {
            MobiusMatrix f = inverse_branch_matrix(p, d);
            for (int i = 0; i <= 20; ++i) {
                double x = i / 20.0;
                double y = static_cast<double>(f(x));
                CHECK(((d == 0) ? y <= 0.5 + 1e-15 : y >= 0.5 - 1e-15));
                CHECK(eval_map(p, y) == doctest::Approx(x).epsilon(1e-13).scale(1));
            }
            CHECK(std::fabs(static_cast<double>(f.log_abs_det())) ==
                  doctest::Approx(std::fabs(std::log(2 - r))).epsilon(1e-14).scale(1));
        }
    }
}

TEST_CASE("composition of a word") {
    ExactMobius m = compose_branches_exact(MapParameter(1), Word{1, 0});
    CHECK(m == ExactMobius{1, 1, 2, 1});
    CHECK(compose_branches_exact(MapParameter(1), Word{}) == ExactMobius{});
    MobiusMatrix f = compose_branches(MapParameter(1), Word{1, 0});
    CHECK(static_cast<double>(f(0.3)) == doctest::Approx(1.3 / 1.6).epsilon(1e-15));
}

TEST_CASE("composed matrices match stepwise evaluation on random words") {
    std::mt19937_64 rng(7);
    for (double r : {0.0, 0.3, 0.7, 1.0}) {
        MapParameter p(r);
        for (int t = 0; t < 50; ++t) {
            Word w(rng() % 30);
            for (auto& d : w) d = rng() & 1;
            double x = std::uniform_real_distribution<double>(0, 1)(rng);
            long double y = x, deriv = 1;
            for (std::size_t i = w.size(); i-- > 0;) {
                MobiusMatrix f = inverse_branch_matrix(p, w[i]);
                deriv *= std::fabs(f.det()) / (f.denominator(y) * f.denominator(y));
                y = f(y);
            }
            MobiusMatrix m = compose_branches(p, w);
            CHECK(static_cast<double>(m(x)) == doctest::Approx(static_cast<double>(y)).epsilon(1e-12));
            CHECK(branch_derivative(m, x) == doctest::Approx(static_cast<double>(deriv)).epsilon(1e-11));
            RationalMobius q = compose_branches_rational(p, w);
            CHECK(q(mpq_class(x)).get_d() == doctest::Approx(static_cast<double>(y)).epsilon(1e-12));
        }
    }
}

TEST_CASE("branch derivative") {
    CHECK(branch_derivative(inverse_branch_matrix(MapParameter(1), 0), 1.0) == doctest::Approx(0.25));
    double d = branch_derivative(inverse_branch_matrix(MapParameter(0.5), 0), 0.0);
    CHECK(d == doctest::Approx(1 / 1.5).epsilon(1e-15));
    for (double r : {0.0, 0.5, 0.9})
        for (int i = 0; i <= 10; ++i) {
            double x = i / 10.0;
            double v = branch_derivative(inverse_branch_matrix(MapParameter(r), 0), x);
            CHECK(v >= (2 - r) / 4 - 1e-15);
            CHECK(v <= 1 / (2 - r) + 1e-15);
        }
}

TEST_CASE("invariant density and measure") {
    CHECK(invariant_density(MapParameter(0.5), 0).value() == doctest::Approx(1 / std::log(2.0)).epsilon(1e-15));
    CHECK(invariant_density(MapParameter(1), 0).is_infinite());
    for (double r : {0.0, 0.25, 0.5, 0.75, 1.0})
        for (int i = 1; i <= 10; ++i)
            CHECK(invariant_density(MapParameter(r), i / 10.0).value() ==
                  doctest::Approx(density_oracle(r, i / 10.0)).epsilon(1e-14));
    CHECK(measure_mu(MapParameter(1), 0.5, 1).value() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(measure_mu(MapParameter(1), 0, 1).is_infinite());
    CHECK(measure_mu(MapParameter(0.5), 0, 1).value() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(measure_mu(MapParameter(0), 0.2, 0.7).value() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("fixed point") {
    CHECK(fixed_point_nonzero(MapParameter(0)) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(fixed_point_nonzero(MapParameter(0.5)) == doctest::Approx(std::sqrt(7.0) - 2).epsilon(1e-15));
    for (double r : {0.1, 0.5, 0.9, 1.0}) {
        double p = fixed_point_nonzero(MapParameter(r));
        CHECK(p > 0.5);
        CHECK(eval_map(MapParameter(r), p) == doctest::Approx(p).epsilon(1e-14));
    }
}

TEST_CASE("MobiusMatrix keeps scale through long products") {
    MapParameter p(0.5);
    MobiusMatrix m;
    for (int i = 0; i < 2000; ++i) m = m * inverse_branch_matrix(p, i % 2);
    CHECK(std::isfinite(static_cast<double>(m.a)));
    CHECK(static_cast<double>(m.log_abs_det()) == doctest::Approx(2000 * std::log(1.5)).epsilon(1e-12));
}

}
