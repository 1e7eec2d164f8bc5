#include "tentfarey/map_core.hpp"

#include "tentfarey/errors.hpp"

#include <cmath>
#include <limits>

namespace tf {

MapParameter::MapParameter(double r) : r_(r) {
    if (!(r >= 0.0 && r <= 1.0)) throw InputError("map parameter r must lie in [0,1]");
}

std::string word_str(const Word& w) {
    std::string s;
    for (auto d : w) s += static_cast<char>('0' + d);
    return s;
}

long double MobiusMatrix::log_abs_det() const { return log_det; }

MobiusMatrix MobiusMatrix::operator*(const MobiusMatrix& m) const {
    MobiusMatrix p;
    p.a = a * m.a + b * m.c;
    p.b = a * m.b + b * m.d;
    p.c = c * m.a + d * m.c;
    p.d = c * m.b + d * m.d;
    p.log_scale = log_scale + m.log_scale;
    p.log_det = log_det + m.log_det;
    p.normalize();
    return p;
}

void MobiusMatrix::normalize() {
    long double s = std::max(std::max(std::fabs(a), std::fabs(b)), std::max(std::fabs(c), std::fabs(d)));
    if (s == 0 || s == 1) return;
    a /= s;
    b /= s;
    c /= s;
    d /= s;
    log_scale += std::log(s);
}

ExactMobius ExactMobius::operator*(const ExactMobius& m) const {
    return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
}

mpq_class ExactMobius::operator()(const mpq_class& x) const {
    mpq_class den = c * x + d;
    if (den == 0) throw DomainError("vanishing Mobius denominator");
    return (a * x + b) / den;
}

Surd ExactMobius::operator()(const Surd& x) const {
    Surd den = Surd(c) * x + Surd(d);
    if (den.is_zero()) throw DomainError("vanishing Mobius denominator");
    return (Surd(a) * x + Surd(b)) / den;
}

double ExactMobius::operator()(double x) const { return static_cast<double>(to_float()(x)); }

MobiusMatrix ExactMobius::to_float() const {
    // scale by a common power of two before converting so huge entries survive
    long ea = 0, eb = 0, ec = 0, ed = 0;
    double ma = mpz_get_d_2exp(&ea, a.get_mpz_t()), mb = mpz_get_d_2exp(&eb, b.get_mpz_t());
    double mc = mpz_get_d_2exp(&ec, c.get_mpz_t()), md = mpz_get_d_2exp(&ed, d.get_mpz_t());
    long e = std::max(std::max(ea, eb), std::max(ec, ed));
    MobiusMatrix m;
    m.a = std::ldexp(static_cast<long double>(ma), static_cast<int>(ea - e));
    m.b = std::ldexp(static_cast<long double>(mb), static_cast<int>(eb - e));
    m.c = std::ldexp(static_cast<long double>(mc), static_cast<int>(ec - e));
    m.d = std::ldexp(static_cast<long double>(md), static_cast<int>(ed - e));
    m.log_scale = static_cast<long double>(e) * std::log(2.0L);
    m.log_det = static_cast<long double>(tf::log_abs(det()));
    m.normalize();
    return m;
}

std::string ExactMobius::str() const {
    return "(" + a.get_str() + "," + b.get_str() + ";" + c.get_str() + "," + d.get_str() + ")";
}

RationalMobius RationalMobius::operator*(const RationalMobius& m) const {
    return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
}

Surd RationalMobius::operator()(const Surd& x) const {
    Surd den = Surd(c) * x + Surd(d);
    if (den.is_zero()) throw DomainError("vanishing Mobius denominator");
    return (Surd(a) * x + Surd(b)) / den;
}

mpq_class RationalMobius::operator()(const mpq_class& x) const {
    mpq_class den = c * x + d;
    if (den == 0) throw DomainError("vanishing Mobius denominator");
    return (a * x + b) / den;
}

double eval_map(const MapParameter& rp, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("eval_map: x must lie in [0,1]");
    double r = rp.value();
    if (x <= 0.5) return (2.0 - r) * x / (1.0 - r * x);
    return (2.0 - r) * (1.0 - x) / (1.0 - r + r * x);
}

Surd eval_map(const MapParameter& rp, const Surd& x) {
    Surd zero(0L), one(1L), half(mpq_class(1, 2));
    if (x < zero || x > one) throw InputError("eval_map: x must lie in [0,1]");
    Surd r(rp.rational());
    Surd two_minus_r = Surd(2L) - r;
    if (x <= half) return two_minus_r * x / (one - r * x);
    return two_minus_r * (one - x) / (one - r + r * x);
}

MobiusMatrix inverse_branch_matrix(const MapParameter& rp, int digit) {
    long double r = rp.value();
    MobiusMatrix m;
    if (digit == 0) {
        m.a = 1;
        m.b = 0;
        m.c = r;
        m.d = 2 - r;
    } else if (digit == 1) {
        m.a = -(1 - r);
        m.b = 2 - r;
        m.c = r;
        m.d = 2 - r;
    } else {
        throw InputError("digit must be 0 or 1");
    }
    m.log_det = std::log(std::fabs(m.det()));
    return m;
}

ExactMobius inverse_branch_exact(const MapParameter& rp, int digit) {
    if (digit != 0 && digit != 1) throw InputError("digit must be 0 or 1");
    if (rp.is_farey()) return digit == 0 ? ExactMobius{1, 0, 1, 1} : ExactMobius{0, 1, 1, 1};
    if (rp.is_tent()) return digit == 0 ? ExactMobius{1, 0, 0, 2} : ExactMobius{-1, 2, 0, 2};
    throw InputError("exact integer branches exist only for r = 0 and r = 1");
}

RationalMobius inverse_branch_rational(const MapParameter& rp, int digit) {
    mpq_class r = rp.rational();
    if (digit == 0) return {1, 0, r, 2 - r};
    if (digit == 1) return {-(1 - r), 2 - r, r, 2 - r};
    throw InputError("digit must be 0 or 1");
}

MobiusMatrix compose_branches(const MapParameter& r, const Word& word) {
    MobiusMatrix b0 = inverse_branch_matrix(r, 0), b1 = inverse_branch_matrix(r, 1);
    MobiusMatrix m = MobiusMatrix::identity();
    for (auto d : word) m = m * (d ? b1 : b0);
    return m;
}

ExactMobius compose_branches_exact(const MapParameter& r, const Word& word) {
    ExactMobius b0 = inverse_branch_exact(r, 0), b1 = inverse_branch_exact(r, 1);
    ExactMobius m;
    for (auto d : word) m = m * (d ? b1 : b0);
    return m;
}

RationalMobius compose_branches_rational(const MapParameter& r, const Word& word) {
    RationalMobius b0 = inverse_branch_rational(r, 0), b1 = inverse_branch_rational(r, 1);
    RationalMobius m;
    for (auto d : word) {
        if (d > 1) throw InputError("digit must be 0 or 1");
        m = m * (d ? b1 : b0);
    }
    return m;
}

double branch_derivative(const MobiusMatrix& m, double x) {
    long double den = m.denominator(x);
    if (den == 0) throw DomainError("vanishing Mobius denominator");
    return static_cast<double>(std::exp(m.log_det - 2 * m.log_scale) / (den * den));
}

double branch_derivative(const ExactMobius& m, double x) { return branch_derivative(m.to_float(), x); }

ExtendedReal invariant_density(const MapParameter& rp, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("invariant_density: x must lie in [0,1]");
    double r = rp.value();
    if (rp.is_tent()) return 1.0;
    if (rp.is_farey()) return x == 0.0 ? ExtendedReal::infinity() : ExtendedReal(1.0 / x);
    return -r / std::log1p(-r) / (1.0 - r + r * x);
}

ExtendedReal measure_mu(const MapParameter& rp, double a, double b) {
    if (!(0.0 <= a && a <= b && b <= 1.0)) throw InputError("measure_mu: need 0 <= a <= b <= 1");
    double r = rp.value();
    if (rp.is_tent()) return b - a;
    if (rp.is_farey()) {
        if (a == b) return 0.0;
        if (a == 0.0) return ExtendedReal::infinity();
        return std::log(b / a);
    }
    // antiderivative of h_r: -ln(1 - r + r x) / ln(1 - r)
    return (std::log1p(r * (b - 1.0)) - std::log1p(r * (a - 1.0))) / -std::log1p(-r);
}

double fixed_point_nonzero(const MapParameter& rp) {
    // 1 - (3 - s)/(2r) with s = sqrt(9 - 4r), rewritten as 1 - 2/(3 + s); the rewrite
    // is continuous at r = 0 where it gives 2/3.
    double s = std::sqrt(9.0 - 4.0 * rp.value());
    return 1.0 - 2.0 / (3.0 + s);
}

} // namespace tf
