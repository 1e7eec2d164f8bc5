#pragma once

#include <gmpxx.h>

#include <string>

namespace tf {

// ln|z| for an arbitrary-size integer, without overflow. z != 0.
double log_abs(const mpz_class& z);

/* Exact element of Q(sqrt(D)): (a + b*sqrt(D)) / c with c > 0.
 * Rationals use b == 0 (D is then irrelevant and stored as 0).  D is kept free of
 * small square factors so that equal surds have equal representations. */
class Surd {
public:
    Surd() : a_(0), b_(0), c_(1), D_(0) {}
    Surd(long n) : a_(n), b_(0), c_(1), D_(0) {}
    Surd(const mpz_class& n) : a_(n), b_(0), c_(1), D_(0) {}
    Surd(const mpq_class& q);
    Surd(mpz_class a, mpz_class b, mpz_class c, mpz_class D);

    static Surd sqrt(const mpz_class& D);
    // The exact binary value of a double.
    static Surd from_double(double x);

    const mpz_class& a() const { return a_; }
    const mpz_class& b() const { return b_; }
    const mpz_class& c() const { return c_; }
    const mpz_class& D() const { return D_; }

    bool is_rational() const { return b_ == 0; }
    mpq_class rational() const; // requires is_rational()

    int sign() const;
    bool is_zero() const { return a_ == 0 && b_ == 0; }
    mpz_class floor() const;

    Surd conjugate() const;
    Surd inverse() const;

    double to_double() const;
    // ln|x|, accurate even when a and b*sqrt(D) nearly cancel. x != 0.
    double log_abs() const;

    std::string str() const;

    friend Surd operator+(const Surd& x, const Surd& y);
    friend Surd operator-(const Surd& x, const Surd& y);
    friend Surd operator*(const Surd& x, const Surd& y);
    friend Surd operator/(const Surd& x, const Surd& y);
    friend Surd operator-(const Surd& x);

    friend int compare(const Surd& x, const Surd& y) { return (x - y).sign(); }
    friend bool operator==(const Surd& x, const Surd& y) { return compare(x, y) == 0; }
    friend bool operator<(const Surd& x, const Surd& y) { return compare(x, y) < 0; }
    friend bool operator<=(const Surd& x, const Surd& y) { return compare(x, y) <= 0; }
    friend bool operator>(const Surd& x, const Surd& y) { return compare(x, y) > 0; }
    friend bool operator>=(const Surd& x, const Surd& y) { return compare(x, y) >= 0; }

private:
    void normalize();
    static mpz_class common_radicand(const Surd& x, const Surd& y);

    mpz_class a_, b_, c_, D_;
};

} // namespace tf
