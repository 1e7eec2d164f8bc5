#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace tf {

// Shortest decimal string that reads back to the same double.
inline std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/* A nonnegative-friendly extended real: either a finite double or the symbol +inf.
 * The infinite state is only ever produced by an exact symbolic decision, never by
 * overflow, so callers can distinguish "hit the singularity" from "large". */
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double v) : value_(v) {}

    static constexpr ExtendedReal infinity() {
        ExtendedReal e;
        e.inf_ = true;
        return e;
    }

    constexpr bool is_infinite() const { return inf_; }
    constexpr bool is_finite() const { return !inf_; }
    // Finite value; +inf as a double when infinite.
    double value() const { return inf_ ? std::numeric_limits<double>::infinity() : value_; }

    friend ExtendedReal operator+(ExtendedReal x, ExtendedReal y) {
        if (x.inf_ || y.inf_) return infinity();
        return ExtendedReal(x.value_ + y.value_);
    }
    ExtendedReal& operator+=(ExtendedReal y) { return *this = *this + y; }

    // 0 * inf = 0 (measure-theoretic convention: a zero weight kills the term).
    friend ExtendedReal operator*(ExtendedReal x, ExtendedReal y) {
        if (x.inf_ || y.inf_) {
            if ((!x.inf_ && x.value_ == 0.0) || (!y.inf_ && y.value_ == 0.0)) return ExtendedReal(0.0);
            return infinity();
        }
        return ExtendedReal(x.value_ * y.value_);
    }
    ExtendedReal& operator*=(ExtendedReal y) { return *this = *this * y; }

    friend bool operator==(ExtendedReal x, ExtendedReal y) {
        return x.inf_ == y.inf_ && (x.inf_ || x.value_ == y.value_);
    }

    std::string str() const;

private:
    double value_ = 0.0;
    bool inf_ = false;
};

inline std::string ExtendedReal::str() const {
    if (inf_) return "inf";
    return format_double(value_);
}

inline std::ostream& operator<<(std::ostream& os, ExtendedReal x) { return os << x.str(); }

} // namespace tf
