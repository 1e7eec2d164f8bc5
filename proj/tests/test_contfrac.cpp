#include "tentfarey/contfrac.hpp"
#include "tentfarey/errors.hpp"
#include "tentfarey/symbolic.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace tf;

namespace {

std::vector<mpz_class> euclid(mpz_class p, mpz_class q) {
    std::vector<mpz_class> out;
    while (p != 0) {
        mpz_class a = q / p;
        out.push_back(a);
        mpz_class r = q - a * p;
        q = p;
        p = r;
    }
    return out;
}

ContinuedFraction natural() {
    return ContinuedFraction::generator([](std::size_t i) { return mpz_class(i); }, "natural");
}

} // namespace

TEST_SUITE("contfrac") {

TEST_CASE("expansion of rationals and surds") {
    ContinuedFraction c = cf_expand(mpq_class(2, 5));
    CHECK(c.is_finite());
    CHECK(c.head() == std::vector<mpz_class>{2, 2});
    CHECK(cf_expand(mpq_class(1)).head() == std::vector<mpz_class>{1});
    ContinuedFraction s = cf_expand(Surd::sqrt(2) - Surd(1L));
    CHECK(s.is_periodic());
    CHECK(s.head().empty());
    CHECK(s.period() == std::vector<mpz_class>{2});
    ContinuedFraction g = cf_expand((Surd::sqrt(5) - Surd(1L)) / Surd(2L));
    CHECK(g.period() == std::vector<mpz_class>{1});
    CHECK_THROWS_AS(cf_expand(mpq_class(3, 2)), InputError);
}

TEST_CASE("rational roundtrip against the Euclidean algorithm") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 2000; ++t) {
        long q = 1 + static_cast<long>(rng() % 1000000);
        long p = 1 + static_cast<long>(rng() % q);
        mpq_class v(p, q);
        v.canonicalize();
        ContinuedFraction c = cf_expand(v);
        CHECK(c.head() == euclid(v.get_num(), v.get_den()));
        ConvergentTable tab(c, *c.length());
        long n = static_cast<long>(*c.length());
        CHECK(mpq_class(tab.p(n), tab.q(n)) == v);
    }
}

TEST_CASE("periodic expansions reproduce the exact surd") {
    for (long D : {2L, 3L, 5L, 7L, 13L, 19L, 31L}) {
        Surd x = Surd::sqrt(D);
        x = x - Surd(x.floor());
        ContinuedFraction c = cf_expand(x);
        CHECK(c.is_periodic());
        CHECK(c.exact_value() == x);
    }
    ContinuedFraction pre = ContinuedFraction::periodic({3, 1}, {2, 2});
    CHECK(pre.period() == std::vector<mpz_class>{2});
    CHECK(pre.head() == std::vector<mpz_class>{3, 1});
    CHECK(cf_expand(pre.exact_value()).head() == pre.head());
}

TEST_CASE("convergents") {
    ContinuedFraction fib = ContinuedFraction::finite({1, 1, 1, 1, 1});
    ConvergentTable t(fib, 5);
    std::vector<long> q{1, 1, 2, 3, 5, 8};
    for (long i = 0; i <= 5; ++i) CHECK(t.q(i) == q[i]);
    ConvergentTable t2(ContinuedFraction::finite({2, 2}), 2);
    CHECK(mpq_class(t2.p(2), t2.q(2)) == mpq_class(2, 5));
    ConvergentTable t3(natural(), 40);
    for (long i = 0; i <= 40; ++i) {
        mpz_class d = t3.signed_determinant(i);
        CHECK(abs(d) == 1);
        CHECK(d == ((i % 2) ? -1 : 1));
    }
}

TEST_CASE("certified expansion of a double") {
    // correctly rounded, so sqrt 2 - 1 lies within one ulp
    CertifiedExpansion e = cf_expand((Surd::sqrt(2) - Surd(1L)).to_double(), 40);
    CHECK(e.certified >= 15);
    CHECK(e.certified < 40);
    for (std::size_t i = 1; i <= e.certified; ++i) CHECK(e.cf.entry(i) == 2);
    // 0.5 - ulp = [0;2,...] and 0.5 + ulp = [0;1,...]
    CHECK(cf_expand(0.5, 10).certified == 0);
    CHECK(cf_expand(0.3, 10).cf.entry(1) == 3);
}

TEST_CASE("Farey step and shift follow the orbit") {
    ContinuedFraction b = cf_expand(mpq_class(2, 3));
    Word w = farey_coding(b, 5);
    CHECK(w == Word{1, 0, 1, 0, 0});
    ContinuedFraction x = cf_expand(Surd::sqrt(7) - Surd(2L));
    Surd e = x.exact_value();
    ContinuedFraction c = x;
    for (int n = 1; n <= 30; ++n) {
        c = farey_step(c);
        e = eval_map(MapParameter(1), e);
        CHECK(c.exact_value() == e);
        CHECK(farey_shift(x, n).exact_value() == e);
    }
    CHECK(farey_step(ContinuedFraction::finite({1})).is_zero());
    // 1 + 2 + 3 steps consume a1, a2, a3
    CHECK(farey_shift(natural(), 6).entry(1) == 4);
    CHECK(farey_shift(natural(), 5).entry(1) == 1);
}

TEST_CASE("Farey coding matches the double-free code_point") {
    ContinuedFraction g = natural();
    Word w = farey_coding(g, 12);
    // a1 = 1: "1"; a2 = 2: "01"; a3 = 3: "001"; a4 = 4: "0001"; a5 starts "00"
    CHECK(w == Word{1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0});
}

TEST_CASE("orbit bookkeeping and the closed-form branch matrix") {
    FareyBranch a = farey_branch_closed_form(cf_expand(Surd::sqrt(2) - Surd(1L)), 1);
    CHECK(a.matrix == ExactMobius{1, 0, 1, 1});
    CHECK(a.bookkeeping.k == 0);
    CHECK(a.bookkeeping.m == 0);
    CHECK(a.bookkeeping.r == 1);
    FareyBranch b = farey_branch_closed_form(cf_expand(mpq_class(2, 3)), 2);
    CHECK(b.matrix == ExactMobius{1, 1, 2, 1});
    CHECK(b.bookkeeping.k == 1);
    CHECK(b.bookkeeping.m == 1);
    CHECK(b.bookkeeping.r == 1);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; ++t) {
        std::vector<mpz_class> e;
        for (int i = 0; i < 12; ++i) e.push_back(1 + rng() % 6);
        ContinuedFraction c = ContinuedFraction::finite(e);
        ConvergentTable tab(c, 12);
        for (std::size_t n = 1; n <= 40; ++n) {
            FareyBranch f = farey_branch_closed_form(c, n);
            ExactMobius ref = compose_branches_exact(MapParameter(1), farey_coding(c, n));
            CHECK(f.matrix == ref);
            CHECK(mpq_class(f.matrix.b, f.matrix.d) ==
                  mpq_class(tab.p(static_cast<long>(f.bookkeeping.m)), tab.q(static_cast<long>(f.bookkeeping.m))));
        }
    }
}

TEST_CASE("alpha type verdicts") {
    ContinuedFraction gold = ContinuedFraction::periodic({}, {1});
    CHECK(alpha_type_test(gold, 0.8, 50).verdict == AlphaTypeVerdict::CertifiedYes);
    CHECK(alpha_type_test(natural(), 0.4, 50).verdict == AlphaTypeVerdict::CertifiedYes);
    ContinuedFraction huge = ContinuedFraction::generator(
        [](std::size_t i) {
            mpz_class z;
            mpz_ui_pow_ui(z.get_mpz_t(), 2, 1UL << std::min<std::size_t>(i, 12));
            return z;
        },
        "doubly exponential");
    AlphaTypeReport r = alpha_type_test(huge, 0.9, 20);
    CHECK(r.verdict == AlphaTypeVerdict::Inconclusive);
    CHECK(std::isfinite(r.log_partial_sum));
    CHECK_THROWS_AS(alpha_type_test(ContinuedFraction::finite({2, 2}), 0.5, 10), InputError);
}

TEST_CASE("omega limit sets") {
    OmegaLimit a = omega_limit_preperiodic(cf_expand(Surd::sqrt(2) - Surd(1L)));
    CHECK(a.period == 2);
    REQUIRE(a.points.size() == 2);
    CHECK(a.points[0] == Surd::sqrt(2) - Surd(1L));
    CHECK(a.points[1] == Surd::sqrt(2) / Surd(2L));
    OmegaLimit b = omega_limit_preperiodic(cf_expand(mpq_class(2, 3)));
    REQUIRE(b.points.size() == 1);
    CHECK(b.points[0] == Surd(0L));
    CHECK(b.period == 1);
    CHECK(b.preperiod == 3);
    OmegaLimit g = omega_limit_preperiodic(ContinuedFraction::periodic({}, {1}));
    CHECK(g.period == 1);
    CHECK(g.points.size() == 1);
    CHECK_THROWS_AS(omega_limit_preperiodic(natural()), UnsupportedError);
}

TEST_CASE("S_{k,j} for the natural expansion") {
    SReport s = compute_S(natural(), 0.5, 1, 3);
    CHECK(s.n_kj == 5);
    CHECK(s.q_j == 10);
    CHECK(s.orbit_confirmed);
    REQUIRE(s.value);
    CHECK(*s.value == doctest::Approx(2 * std::log(5.0) / 10).epsilon(1e-14));
    SReport edge = compute_S(natural(), 0.5, 1, 1);
    CHECK(edge.n_kj == 0);
    CHECK(!edge.value);
    CHECK_THROWS_AS(compute_S(ContinuedFraction::periodic({}, {1}), 0.5, 2, 3), InputError);
    double prev = 1e300;
    for (std::size_t j = 5; j <= 30; ++j) {
        SReport r = compute_S(natural(), 0.5, 1, j);
        CHECK(r.orbit_confirmed);
        CHECK(*r.value < prev);
        prev = *r.value;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("witness expansions") {
    CHECK(theorem33_lambda(WitnessVariant::Beta, 1) == 3);
    CHECK(theorem33_lambda(WitnessVariant::Beta, 2) == 8);
    CHECK(theorem33_lambda(WitnessVariant::Kappa, 3) == 9);
    ContinuedFraction b = theorem33_witness(WitnessVariant::Beta);
    CHECK(b.entry(1) == 1);
    CHECK(b.entry(2) == 1);
    CHECK(b.entry(3) == 2);
    ContinuedFraction k = theorem33_witness(WitnessVariant::Kappa);
    CHECK(k.entry(3) == 2);
    CHECK(k.entry(8) == 2);
    CHECK(k.entry(17) == 2);
    // the blocks put the 2s of beta at Lambda(n, beta) and those of kappa at Lambda(n, kappa) - 1
    for (std::size_t n = 1; n <= 10; ++n) {
        WitnessReport wb = theorem33_witnesses(WitnessVariant::Beta, n);
        WitnessReport wk = theorem33_witnesses(WitnessVariant::Kappa, n);
        CHECK(wb.entry_at == 2);
        CHECK(wb.entry_before == 1);
        CHECK(wb.check == (wb.entry_before == 2));
        if (n >= 2) CHECK(wk.entry_before == 2);
        CHECK(wk.check == (wk.entry_before == 2));
    }
}

TEST_CASE("log distance between expansions against multiprecision") {
    ContinuedFraction x = ContinuedFraction::periodic({}, {2});
    std::vector<mpz_class> e(30, 2);
    e.push_back(5);
    ContinuedFraction y = ContinuedFraction::finite(e);
    double got = cf_log_distance(x, y);
    mpf_class two(2, 1024), s2(0, 1024);
    mpf_sqrt(s2.get_mpf_t(), two.get_mpf_t());
    mpf_class xv = s2 - 1;
    ConvergentTable t(y, 31);
    mpf_class yv(0, 1024);
    yv = mpf_class(t.p(31), 1024) / mpf_class(t.q(31), 1024);
    mpf_class d = abs(xv - yv);
    long ex;
    double mant = mpf_get_d_2exp(&ex, d.get_mpf_t());
    double ref = std::log(mant) + ex * std::log(2.0);
    CHECK(got == doctest::Approx(ref).epsilon(1e-12));
    CHECK_THROWS_AS(cf_log_distance(x, x), InputError);
}

TEST_CASE("point parsing") {
    Point a = parse_point("2/5");
    CHECK(a.exact);
    CHECK(*a.exact == Surd(mpq_class(2, 5)));
    CHECK(a.cf->head() == std::vector<mpz_class>{2, 2});
    Point b = parse_point("sqrt2-1");
    CHECK(*b.exact == Surd::sqrt(2) - Surd(1L));
    Point c = parse_point("(sqrt5-1)/2");
    CHECK(c.approx == doctest::Approx((std::sqrt(5.0) - 1) / 2));
    Point d = parse_point("[0;1,(1,2)]");
    CHECK(d.cf->is_periodic());
    Point e = parse_point("sqrt2/2");
    CHECK(*e.exact == Surd::sqrt(2) / Surd(2L));
    Point n = parse_point("natural");
    CHECK(n.cf->entry(7) == 7);
    CHECK(!n.exact);
    Point z = parse_point("0.3");
    CHECK(z.approx == 0.3);
    CHECK_THROWS_AS(parse_point("3/2"), InputError);
    CHECK_THROWS_AS(parse_point("1/0"), InputError);
    CHECK_THROWS_AS(parse_point("banana"), InputError);
}

}
