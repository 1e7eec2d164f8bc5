#include "tentfarey/surd.hpp"

#include "tentfarey/errors.hpp"

#include <cmath>
#include <limits>

namespace tf {

double log_abs(const mpz_class& z) {
    long e = 0;
    double d = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(std::fabs(d)) + static_cast<double>(e) * std::log(2.0);
}

namespace {

double log_add(double x, double y) {
    if (x < y) std::swap(x, y);
    return x + std::log1p(std::exp(y - x));
}

} // namespace

Surd::Surd(const mpq_class& q) : a_(q.get_num()), b_(0), c_(q.get_den()), D_(0) {}

Surd::Surd(mpz_class a, mpz_class b, mpz_class c, mpz_class D)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), D_(std::move(D)) {
    if (c_ == 0) throw DomainError("surd with zero denominator");
    if (b_ != 0 && D_ < 0) throw InputError("negative radicand");
    normalize();
}

Surd Surd::sqrt(const mpz_class& D) { return Surd(0, 1, 1, D); }

Surd Surd::from_double(double x) {
    if (!std::isfinite(x)) throw InputError("non-finite value");
    return Surd(mpq_class(x));
}

void Surd::normalize() {
    if (c_ < 0) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
    }
    if (b_ != 0) {
        // pull out square factors of D (trial division keeps this cheap for small D)
        for (unsigned long p = 2; p <= 10000; ++p) {
            mpz_class p2 = p * p;
            if (p2 > D_) break;
            while (mpz_divisible_p(D_.get_mpz_t(), p2.get_mpz_t())) {
                D_ /= p2;
                b_ *= p;
            }
        }
        if (mpz_perfect_square_p(D_.get_mpz_t())) {
            mpz_class s;
            mpz_sqrt(s.get_mpz_t(), D_.get_mpz_t());
            a_ += b_ * s;
            b_ = 0;
        }
    }
    if (b_ == 0) D_ = 0;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c_.get_mpz_t());
    if (g > 1) {
        mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(c_.get_mpz_t(), c_.get_mpz_t(), g.get_mpz_t());
    }
}

mpz_class Surd::common_radicand(const Surd& x, const Surd& y) {
    if (x.b_ == 0) return y.D_;
    if (y.b_ == 0) return x.D_;
    if (x.D_ != y.D_) throw InputError("surds from different quadratic fields");
    return x.D_;
}

mpq_class Surd::rational() const {
    if (b_ != 0) throw InputError("surd is irrational");
    mpq_class q(a_, c_);
    q.canonicalize();
    return q;
}

int Surd::sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // opposite signs: compare a^2 with b^2 D
    mpz_class lhs = a_ * a_, rhs = b_ * b_ * D_;
    int c = cmp(lhs, rhs);
    return c > 0 ? sa : (c < 0 ? sb : 0);
}

mpz_class Surd::floor() const {
    mpz_class num = a_;
    if (b_ != 0) {
        mpz_class s, sq = b_ * b_ * D_;
        mpz_sqrt(s.get_mpz_t(), sq.get_mpz_t());
        // b*sqrt(D) is irrational: it lies strictly between s and s+1 (or -s-1 and -s)
        num += (b_ > 0) ? s : mpz_class(-s - 1);
    }
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), c_.get_mpz_t());
    return q;
}

Surd Surd::conjugate() const { return Surd(a_, -b_, c_, D_); }

Surd Surd::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    // c/(a + b sqrt D) = c (a - b sqrt D) / (a^2 - b^2 D)
    mpz_class n = a_ * a_ - b_ * b_ * D_;
    return Surd(c_ * a_, -c_ * b_, n, D_);
}

double Surd::log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    double lc = tf::log_abs(c_);
    if (b_ == 0) return tf::log_abs(a_) - lc;
    double lb = tf::log_abs(b_) + 0.5 * tf::log_abs(D_);
    double lsum = (a_ == 0) ? lb : log_add(tf::log_abs(a_), lb); // ln(|a| + |b| sqrt D)
    if (a_ == 0 || sgn(a_) == sgn(b_)) return lsum - lc;
    mpz_class n = a_ * a_ - b_ * b_ * D_;
    return tf::log_abs(n) - lsum - lc;
}

namespace {

// Round to the nearest double (mpf_get_d truncates toward zero).
double nearest_double(const mpf_class& v) {
    double d = v.get_d();
    double e = std::nextafter(d, sgn(v) > 0 ? HUGE_VAL : -HUGE_VAL);
    if (!std::isfinite(e)) return d;
    mpf_class md(d, v.get_prec()), me(e, v.get_prec());
    return abs(v - me) < abs(v - md) ? e : d;
}

} // namespace

double Surd::to_double() const {
    if (is_zero()) return 0.0;
    const mp_bitcnt_t prec = 256;
    if (b_ == 0) {
        mpf_class v(a_, prec);
        v /= mpf_class(c_, prec);
        return nearest_double(v);
    }
    mpf_class root(D_, prec);
    mpf_sqrt(root.get_mpf_t(), root.get_mpf_t());
    mpf_class bs = mpf_class(b_, prec) * root;
    mpf_class v(0, prec);
    if (a_ == 0 || sgn(a_) == sgn(b_)) {
        v = (mpf_class(a_, prec) + bs) / mpf_class(c_, prec);
    } else {
        // (a^2 - b^2 D) / (c (a - b sqrt D)) avoids the cancellation
        mpz_class n = a_ * a_ - b_ * b_ * D_;
        v = mpf_class(n, prec) / (mpf_class(c_, prec) * (mpf_class(a_, prec) - bs));
    }
    return nearest_double(v);
}

std::string Surd::str() const {
    std::string s;
    if (b_ == 0) {
        s = a_.get_str();
        if (c_ != 1) s += "/" + c_.get_str();
        return s;
    }
    s = "(" + a_.get_str() + (b_ < 0 ? "-" : "+") + mpz_class(abs(b_)).get_str() + "*sqrt(" + D_.get_str() + "))";
    if (c_ != 1) s += "/" + c_.get_str();
    return s;
}

Surd operator+(const Surd& x, const Surd& y) {
    mpz_class D = Surd::common_radicand(x, y);
    return Surd(x.a_ * y.c_ + y.a_ * x.c_, x.b_ * y.c_ + y.b_ * x.c_, x.c_ * y.c_, D);
}

Surd operator-(const Surd& x) { return Surd(-x.a_, -x.b_, x.c_, x.D_); }

Surd operator-(const Surd& x, const Surd& y) { return x + (-y); }

Surd operator*(const Surd& x, const Surd& y) {
    mpz_class D = Surd::common_radicand(x, y);
    return Surd(x.a_ * y.a_ + x.b_ * y.b_ * D, x.a_ * y.b_ + x.b_ * y.a_, x.c_ * y.c_, D);
}

Surd operator/(const Surd& x, const Surd& y) { return x * y.inverse(); }

} // namespace tf
