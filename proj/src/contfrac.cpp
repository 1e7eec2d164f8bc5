#include "tentfarey/contfrac.hpp"

#include "tentfarey/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace tf {

namespace {

double log_add(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    if (x < y) std::swap(x, y);
    return x + std::log1p(std::exp(y - x));
}

void check_entries(const std::vector<mpz_class>& v) {
    for (const auto& a : v)
        if (a < 1) throw InputError("continued fraction entries must be positive integers");
}

} // namespace

// ---------------------------------------------------------------------------
// ContinuedFraction

ContinuedFraction ContinuedFraction::finite(std::vector<mpz_class> entries) {
    check_entries(entries);
    ContinuedFraction cf;
    cf.kind_ = Kind::Finite;
    cf.head_ = std::move(entries);
    return cf;
}

ContinuedFraction ContinuedFraction::periodic(std::vector<mpz_class> pre, std::vector<mpz_class> per) {
    check_entries(pre);
    check_entries(per);
    if (per.empty()) return finite(std::move(pre));
    // primitive period
    std::size_t p = per.size();
    for (std::size_t d = 1; d < p; ++d) {
        if (p % d) continue;
        bool rep = true;
        for (std::size_t i = d; i < p && rep; ++i) rep = per[i] == per[i - d];
        if (rep) {
            per.resize(d);
            break;
        }
    }
    // absorb a preperiod tail that matches the period
    while (!pre.empty() && pre.back() == per.back()) {
        pre.pop_back();
        std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
    }
    ContinuedFraction cf;
    cf.kind_ = Kind::Periodic;
    cf.head_ = std::move(pre);
    cf.period_ = std::move(per);
    return cf;
}

ContinuedFraction ContinuedFraction::generator(Generator g, std::string label) {
    ContinuedFraction cf;
    cf.kind_ = Kind::Generator;
    cf.gen_ = std::move(g);
    cf.label_ = std::move(label);
    return cf;
}

mpz_class ContinuedFraction::entry(std::size_t i) const {
    if (i == 0) throw InputError("continued fraction entries are indexed from 1");
    if (i <= head_.size()) return head_[i - 1];
    std::size_t idx = i - head_.size();
    switch (kind_) {
    case Kind::Finite:
        return 0;
    case Kind::Periodic:
        return period_[(idx - 1) % period_.size()];
    case Kind::Generator:
        return gen_(offset_ + idx);
    }
    return 0;
}

std::size_t ContinuedFraction::entry_size(std::size_t i) const {
    mpz_class a = entry(i);
    if (!a.fits_ulong_p()) throw InputError("continued fraction entry too large for this operation");
    return a.get_ui();
}

std::optional<std::size_t> ContinuedFraction::length() const {
    if (kind_ == Kind::Finite) return head_.size();
    return std::nullopt;
}

ContinuedFraction ContinuedFraction::drop(std::size_t j) const {
    ContinuedFraction cf = *this;
    if (j <= cf.head_.size()) {
        cf.head_.erase(cf.head_.begin(), cf.head_.begin() + static_cast<std::ptrdiff_t>(j));
        return cf;
    }
    std::size_t rem = j - cf.head_.size();
    cf.head_.clear();
    switch (kind_) {
    case Kind::Finite:
        break;
    case Kind::Periodic:
        std::rotate(cf.period_.begin(), cf.period_.begin() + static_cast<std::ptrdiff_t>(rem % cf.period_.size()),
                    cf.period_.end());
        break;
    case Kind::Generator:
        cf.offset_ += rem;
        break;
    }
    return cf;
}

ContinuedFraction ContinuedFraction::with_first_entry(const mpz_class& e) const {
    if (e < 1) throw InputError("continued fraction entries must be positive integers");
    if (!head_.empty()) {
        ContinuedFraction cf = *this;
        cf.head_[0] = e;
        if (kind_ == Kind::Periodic) return periodic(cf.head_, cf.period_);
        return cf;
    }
    if (kind_ == Kind::Finite) throw InputError("with_first_entry on the empty expansion");
    ContinuedFraction cf = drop(1);
    cf.head_.insert(cf.head_.begin(), e);
    if (kind_ == Kind::Periodic) return periodic(cf.head_, cf.period_);
    return cf;
}

Surd ContinuedFraction::exact_value() const {
    if (kind_ == Kind::Generator) throw UnsupportedError("generator-backed expansion has no exact value");
    if (kind_ == Kind::Finite) {
        mpq_class x = 0;
        for (auto it = head_.rbegin(); it != head_.rend(); ++it) x = 1 / (*it + x);
        return Surd(x);
    }
    // z = [0; period repeated] solves q'_{k-1} z^2 + (q'_k - p'_{k-1}) z - p'_k = 0
    ConvergentTable per(ContinuedFraction::finite(period_), period_.size());
    long k = static_cast<long>(period_.size());
    mpz_class A = per.q(k - 1), B = per.q(k) - per.p(k - 1), C = per.p(k);
    Surd z(-B, 1, 2 * A, B * B + 4 * A * C);
    ConvergentTable pre(ContinuedFraction::finite(head_), head_.size());
    long j = static_cast<long>(head_.size());
    return (Surd(pre.p(j)) + Surd(pre.p(j - 1)) * z) / (Surd(pre.q(j)) + Surd(pre.q(j - 1)) * z);
}

double ContinuedFraction::approx(std::size_t depth) const {
    std::size_t n = depth;
    if (auto len = length()) n = std::min(n, *len);
    if (kind_ == Kind::Finite && n == head_.size()) return exact_value().to_double();
    double x = 0;
    for (std::size_t i = n; i >= 1; --i) x = 1.0 / (entry(i).get_d() + x);
    return x;
}

std::string ContinuedFraction::str(std::size_t max_entries) const {
    std::string s = "[0;";
    bool first = true;
    auto put = [&](const std::string& e) {
        if (!first) s += ",";
        s += e;
        first = false;
    };
    for (const auto& a : head_) put(a.get_str());
    if (kind_ == Kind::Periodic) {
        std::string p = "(";
        for (std::size_t i = 0; i < period_.size(); ++i) p += (i ? "," : "") + period_[i].get_str();
        put(p + ")");
    } else if (kind_ == Kind::Generator) {
        for (std::size_t i = head_.size() + 1; i <= std::max(max_entries, head_.size()); ++i) put(entry(i).get_str());
        put("...");
    }
    return s + "]";
}

// ---------------------------------------------------------------------------
// Convergents

ConvergentTable::ConvergentTable(const ContinuedFraction& cf, std::size_t n) {
    if (auto len = cf.length(); len && n > *len) throw InputError("convergent depth exceeds expansion length");
    p_.reserve(n + 2);
    q_.reserve(n + 2);
    for (std::size_t i = 1; i <= n; ++i) push(cf.entry(i));
}

void ConvergentTable::push(const mpz_class& a) {
    std::size_t s = p_.size();
    p_.push_back(a * p_[s - 1] + p_[s - 2]);
    q_.push_back(a * q_[s - 1] + q_[s - 2]);
}

mpz_class ConvergentTable::signed_determinant(long n) const { return p(n - 1) * q(n) - p(n) * q(n - 1); }

ConvergentTable convergents(const ContinuedFraction& cf, std::size_t n) { return ConvergentTable(cf, n); }

// ---------------------------------------------------------------------------
// Expansion

ContinuedFraction cf_expand(const mpq_class& value) {
    mpq_class v = value;
    v.canonicalize();
    if (!(v > 0 && v <= 1)) throw InputError("cf_expand: value must lie in (0,1]");
    if (v == 1) return ContinuedFraction::finite({mpz_class(1)});
    std::vector<mpz_class> e;
    mpz_class num = v.get_num(), den = v.get_den();
    while (num != 0) {
        mpz_class a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
        e.push_back(a);
        den = num;
        num = r;
    }
    return ContinuedFraction::finite(std::move(e));
}

ContinuedFraction cf_expand(const Surd& value) {
    if (value.is_rational()) return cf_expand(value.rational());
    if (!(value.sign() > 0 && value < Surd(1L))) throw InputError("cf_expand: value must lie in (0,1]");
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> seen;
    std::vector<mpz_class> e;
    Surd x = value;
    for (;;) {
        auto key = std::make_tuple(x.a().get_str(16), x.b().get_str(16), x.c().get_str(16));
        if (auto it = seen.find(key); it != seen.end()) {
            std::vector<mpz_class> pre(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(it->second));
            std::vector<mpz_class> per(e.begin() + static_cast<std::ptrdiff_t>(it->second), e.end());
            return ContinuedFraction::periodic(std::move(pre), std::move(per));
        }
        seen.emplace(key, e.size());
        Surd y = x.inverse();
        mpz_class a = y.floor();
        e.push_back(a);
        x = y - Surd(a);
    }
}

CertifiedExpansion cf_expand_interval(const mpq_class& lo, const mpq_class& hi, std::size_t depth) {
    if (!(lo > 0 && lo <= hi && hi <= 1)) throw InputError("cf_expand: interval must lie in (0,1]");
    ContinuedFraction a = cf_expand(lo), b = cf_expand(hi);
    std::size_t la = *a.length(), lb = *b.length();
    std::size_t L = 0;
    if (lo == hi) {
        L = la;
    } else {
        while (L < std::min(la, lb) && a.entry(L + 1) == b.entry(L + 1)) ++L;
        // the last shared entry is only certain when both expansions continue past it
        if (L > 0 && (la == L || lb == L)) --L;
    }
    L = std::min(L, depth);
    std::vector<mpz_class> e;
    for (std::size_t i = 1; i <= L; ++i) e.push_back(a.entry(i));
    return {ContinuedFraction::finite(std::move(e)), L};
}

CertifiedExpansion cf_expand(double value, std::size_t depth) {
    if (!(value > 0 && value <= 1)) throw InputError("cf_expand: value must lie in (0,1]");
    double lo = std::nextafter(value, 0.0), hi = std::min(1.0, std::nextafter(value, 2.0));
    return cf_expand_interval(mpq_class(lo), mpq_class(hi), depth);
}

// ---------------------------------------------------------------------------
// Farey orbit on expansions

ContinuedFraction farey_step(const ContinuedFraction& cf) {
    if (cf.is_zero()) return cf;
    mpz_class a = cf.entry(1);
    if (a == 1) return cf.drop(1);
    return cf.with_first_entry(a - 1);
}

ContinuedFraction farey_shift(const ContinuedFraction& cf, const mpz_class& steps) {
    ContinuedFraction x = cf;
    mpz_class n = steps;
    std::size_t dropped = 0;
    while (n > 0) {
        mpz_class a = x.entry(dropped + 1);
        if (a == 0) return ContinuedFraction(); // reached the fixed point 0
        if (n >= a) {
            n -= a;
            ++dropped;
        } else {
            return x.drop(dropped).with_first_entry(a - n);
        }
    }
    return x.drop(dropped);
}

Word farey_coding(const ContinuedFraction& cf, std::size_t n) {
    Word w;
    w.reserve(n);
    for (std::size_t i = 1; w.size() < n; ++i) {
        mpz_class a = cf.entry(i);
        if (a == 0) break;
        std::size_t zeros = n - w.size();
        if (a - 1 < zeros) zeros = mpz_class(a - 1).get_ui();
        w.insert(w.end(), zeros, 0);
        if (w.size() < n) w.push_back(1);
    }
    w.resize(n, 0);
    return w;
}

OrbitBookkeeping orbit_bookkeeping(const ContinuedFraction& cf, std::size_t n) {
    OrbitBookkeeping b;
    b.n = n;
    mpz_class pos = 0;
    for (std::size_t i = 1;; ++i) {
        mpz_class a = cf.entry(i);
        if (a == 0 || pos + a > n) break;
        pos += a;
        ++b.m;
    }
    b.k = pos.get_ui();
    b.r = n - b.k;
    return b;
}

ExactMobius farey_branch_matrix(const ConvergentTable& t, const OrbitBookkeeping& b) {
    long m = static_cast<long>(b.m);
    mpz_class r = static_cast<unsigned long>(b.r);
    return {r * t.p(m) + t.p(m - 1), t.p(m), r * t.q(m) + t.q(m - 1), t.q(m)};
}

FareyBranch farey_branch_closed_form(const ContinuedFraction& beta, std::size_t n) {
    if (n < 1) throw InputError("farey_branch_closed_form: n must be >= 1");
    if (beta.is_zero()) throw InputError("farey_branch_closed_form: beta must lie in (0,1]");
    OrbitBookkeeping b = orbit_bookkeeping(beta, n);
    ConvergentTable t(beta, b.m);
    return {farey_branch_matrix(t, b), b};
}

// ---------------------------------------------------------------------------
// Intermediate alpha-type

AlphaTypeReport alpha_type_test(const ContinuedFraction& beta, double alpha, std::size_t depth) {
    if (beta.is_finite()) throw InputError("alpha_type_test: beta must be irrational");
    if (!(alpha > 0 && alpha < 1)) throw InputError("alpha_type_test: alpha must lie in (0,1)");
    AlphaTypeReport rep;
    rep.depth = depth;
    if (alpha < 0.5) {
        // the t_{n,j} are distinct positive integers, so any exponent below -1 is summable
        rep.verdict = AlphaTypeVerdict::CertifiedYes;
        rep.epsilon = (1 - 2 * alpha) / 2;
        rep.reason = "alpha < 1/2: exponent below -1 over distinct integers";
    } else if (beta.is_periodic()) {
        // bounded entries: at most max(a) terms per level, each at least q_{n-1} >= golden^(n-2)
        rep.verdict = AlphaTypeVerdict::CertifiedYes;
        rep.epsilon = 1 - alpha;
        rep.reason = "bounded entries: geometric tail";
    } else {
        rep.verdict = AlphaTypeVerdict::Inconclusive;
        rep.epsilon = 0;
        rep.reason = "no tail bound available for a generator-backed expansion";
    }
    const double s = 2 * (1 - alpha) - rep.epsilon;
    const std::size_t direct = 100000;
    double total = -std::numeric_limits<double>::infinity();
    mpz_class q1 = 1, q2 = 0; // q_{n-1}, q_{n-2}
    for (std::size_t n = 1; n <= depth; ++n) {
        mpz_class a = beta.entry(n);
        double lq = log_abs(q1);
        double rho = (q2 == 0) ? 0.0 : std::exp(log_abs(q2) - lq);
        std::size_t jmax = a.fits_ulong_p() ? std::min<unsigned long>(a.get_ui(), direct) : direct;
        for (std::size_t j = 1; j <= jmax; ++j) total = log_add(total, -s * (lq + std::log(j + rho)));
        if (a > direct) {
            // midpoint-rule integral for j in (direct, a]: int (u + rho)^(-s) du
            double LJ = std::log(direct + 0.5 + rho);
            double La = log_abs(a) + std::log1p((0.5 + rho) / a.get_d());
            double e = 1 - s, part;
            if (std::fabs(e) < 1e-14) {
                part = std::log(La - LJ);
            } else if (e > 0) {
                part = e * La + std::log1p(-std::exp(e * (LJ - La))) - std::log(e);
            } else {
                part = e * LJ + std::log1p(-std::exp(e * (La - LJ))) - std::log(-e);
            }
            total = log_add(total, part - s * lq);
        }
        mpz_class qn = a * q1 + q2;
        q2 = q1;
        q1 = qn;
    }
    rep.log_partial_sum = total;
    return rep;
}

// ---------------------------------------------------------------------------
// Omega-limit sets

OmegaLimit omega_limit_preperiodic(const ContinuedFraction& beta) {
    OmegaLimit om;
    if (beta.kind() == ContinuedFraction::Kind::Generator)
        throw UnsupportedError("omega-limit sets need a rational or eventually periodic expansion");
    if (beta.is_finite()) {
        om.points = {Surd(0L)};
        om.period = 1;
        mpz_class steps = 0;
        for (const auto& a : beta.head()) steps += a;
        om.preperiod = steps.get_ui();
        return om;
    }
    ContinuedFraction z = beta.drop(beta.head().size());
    mpz_class len = 0;
    for (const auto& a : z.period()) len += a;
    om.period = len.get_ui();
    std::vector<Surd> cycle;
    for (std::size_t i = 0; i < om.period; ++i) {
        cycle.push_back(z.exact_value());
        z = farey_step(z);
    }
    ContinuedFraction x = beta;
    for (;;) {
        Surd v = x.exact_value();
        if (std::any_of(cycle.begin(), cycle.end(), [&](const Surd& c) { return c == v; })) break;
        x = farey_step(x);
        ++om.preperiod;
    }
    std::sort(cycle.begin(), cycle.end());
    om.points = std::move(cycle);
    return om;
}

// ---------------------------------------------------------------------------
// S_{k,j}

SReport compute_S(const ContinuedFraction& beta, double alpha, const mpz_class& k, std::size_t j) {
    if (!(alpha > 0 && alpha < 1)) throw InputError("compute_S: alpha must lie in (0,1)");
    if (k < 1 || j < 1) throw InputError("compute_S: need k >= 1 and j >= 1");
    mpz_class aj = beta.entry(j), aj1 = beta.entry(j + 1);
    if (aj1 == 0) throw InputError("compute_S: expansion ends before a_{j+1}");
    if (aj < k) throw InputError("compute_S: k exceeds the entry a_j");
    SReport rep;
    mpz_class sum = 0;
    for (std::size_t i = 1; i <= j; ++i) sum += beta.entry(i);
    rep.n_kj = sum - k;

    // independent confirmation by stepping the Farey map one iterate at a time
    ContinuedFraction x = beta;
    if (rep.n_kj <= 200000) {
        for (unsigned long s = 0; s < rep.n_kj.get_ui(); ++s) x = farey_step(x);
    } else {
        x = farey_shift(beta, rep.n_kj);
    }
    rep.orbit_confirmed = x.entry(1) == k && x.entry(2) == aj1;

    ConvergentTable t(beta, j);
    rep.q_j = t.q(static_cast<long>(j));
    if (rep.n_kj >= 1) {
        double ln_n = log_abs(rep.n_kj);
        if (ln_n == 0) {
            rep.value = 0.0;
        } else {
            rep.value = std::exp(alpha * log_abs(aj1) + std::log(ln_n) - 2 * (1 - alpha) * log_abs(rep.q_j));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Witness expansions

ContinuedFraction theorem33_witness(WitnessVariant v) {
    if (v == WitnessVariant::Beta) {
        // the k-th 2 sits at position k(k+2) = (k+1)^2 - 1
        return ContinuedFraction::generator(
            [](std::size_t i) {
                mpz_class n = static_cast<unsigned long>(i + 1);
                return mpz_class((i >= 3 && mpz_perfect_square_p(n.get_mpz_t())) ? 2 : 1);
            },
            "witness-beta");
    }
    // the k-th 2 sits at position 2^(k+1) - 2 + k
    return ContinuedFraction::generator(
        [](std::size_t i) {
            for (std::size_t k = 1; k < 63; ++k) {
                std::size_t pos = (std::size_t{1} << (k + 1)) - 2 + k;
                if (pos == i) return mpz_class(2);
                if (pos > i) break;
            }
            return mpz_class(1);
        },
        "witness-kappa");
}

mpz_class theorem33_lambda(WitnessVariant v, std::size_t n) {
    if (n < 1) throw InputError("witness index n must be >= 1");
    mpz_class N = static_cast<unsigned long>(n);
    if (v == WitnessVariant::Beta) return N * (N + 2);
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, n);
    return p + N - 2;
}

WitnessReport theorem33_witnesses(WitnessVariant v, std::size_t n) {
    WitnessReport rep;
    rep.lambda = theorem33_lambda(v, n);
    ContinuedFraction cf = theorem33_witness(v);
    std::size_t L = rep.lambda.get_ui();
    rep.entry_before = (L >= 2) ? cf.entry(L - 1) : mpz_class(0); // a_0 = 0 is the integer part
    rep.entry_at = cf.entry(L);
    rep.check = rep.entry_before == 2;
    return rep;
}

// ---------------------------------------------------------------------------

double cf_log_distance(const ContinuedFraction& x, const ContinuedFraction& y, std::size_t max_prefix) {
    if (x.has_exact_value() && y.has_exact_value()) {
        Surd ex = x.exact_value(), ey = y.exact_value();
        bool comparable = ex.is_rational() || ey.is_rational() || ex.D() == ey.D();
        if (comparable && ex == ey) throw InputError("cf_log_distance: expansions are equal");
    }
    std::size_t m = 0;
    while (m < max_prefix && x.entry(m + 1) == y.entry(m + 1)) {
        if (x.entry(m + 1) == 0) throw InputError("cf_log_distance: expansions are equal");
        ++m;
    }
    if (m == max_prefix) throw CapacityError("cf_log_distance: common prefix exceeds the limit");
    auto tail = [m](const ContinuedFraction& c) {
        double t = 0;
        for (std::size_t i = m + 60; i >= m + 1; --i) {
            mpz_class a = c.entry(i);
            t = (a == 0) ? 0.0 : 1.0 / (a.get_d() + t);
        }
        return t;
    };
    double t = tail(x), s = tail(y);
    ConvergentTable tab(x, m);
    const long ml = static_cast<long>(m);
    double lq = log_abs(tab.q(ml));
    double ratio = tab.q(ml - 1) == 0 ? 0.0 : std::exp(log_abs(tab.q(ml - 1)) - lq);
    return std::log(std::fabs(t - s)) - (lq + std::log1p(t * ratio)) - (lq + std::log1p(s * ratio));
}

// ---------------------------------------------------------------------------
// Points and parsing

Point Point::from_double(double x) {
    Point p;
    p.approx = x;
    p.exact = Surd::from_double(x);
    if (x > 0 && x <= 1) p.cf = cf_expand(p.exact->rational());
    p.text = format_double(x);
    return p;
}

Point Point::from_surd(const Surd& s) {
    Point p;
    p.exact = s;
    p.approx = s.to_double();
    if (s.sign() > 0 && s <= Surd(1L)) p.cf = cf_expand(s);
    p.text = s.str();
    return p;
}

Point Point::from_cf(const ContinuedFraction& cf) {
    Point p;
    p.cf = cf;
    if (cf.has_exact_value()) {
        p.exact = cf.exact_value();
        p.approx = p.exact->to_double();
    } else {
        p.approx = cf.approx(200);
    }
    p.text = cf.str();
    return p;
}

namespace {

std::string strip(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    return t;
}

mpz_class parse_int(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw InputError("expected an integer, got '" + s + "'");
    return mpz_class(s, 10);
}

// signed terms: INT | sqrtINT | INT*sqrtINT
Surd parse_surd_sum(const std::string& s) {
    Surd acc(0L);
    std::size_t i = 0;
    if (s.empty()) throw InputError("empty expression");
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        std::string term = s.substr(i, j - i);
        Surd t;
        auto pos = term.find("sqrt");
        if (pos == std::string::npos) {
            t = Surd(parse_int(term));
        } else {
            mpz_class coef = 1;
            if (pos > 0) {
                std::string c = term.substr(0, pos);
                if (c.back() != '*') throw InputError("malformed surd term '" + term + "'");
                coef = parse_int(c.substr(0, c.size() - 1));
            }
            t = Surd(0, coef, 1, parse_int(term.substr(pos + 4)));
        }
        acc = sign > 0 ? acc + t : acc - t;
        i = j;
    }
    return acc;
}

mpq_class parse_decimal(const std::string& s) {
    auto dot = s.find('.');
    std::string ip = s.substr(0, dot), fp = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    mpz_class num = parse_int(ip + fp), den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

ContinuedFraction parse_bracket(const std::string& s) {
    if (s.size() < 4 || s.substr(0, 3) != "[0;" || s.back() != ']')
        throw InputError("continued fraction must look like [0;a1,a2,...]");
    std::string body = s.substr(3, s.size() - 4);
    std::vector<mpz_class> pre, per;
    auto open = body.find('(');
    std::string pre_s = open == std::string::npos ? body : body.substr(0, open);
    auto split = [](const std::string& t, std::vector<mpz_class>& out) {
        std::size_t i = 0;
        while (i < t.size()) {
            std::size_t j = t.find(',', i);
            if (j == std::string::npos) j = t.size();
            if (j > i) out.push_back(parse_int(t.substr(i, j - i)));
            i = j + 1;
        }
    };
    split(pre_s, pre);
    if (open != std::string::npos) {
        auto close = body.find(')', open);
        if (close == std::string::npos || close != body.size() - 1) throw InputError("unbalanced period in '" + s + "'");
        split(body.substr(open + 1, close - open - 1), per);
        if (per.empty()) throw InputError("empty period in '" + s + "'");
        return ContinuedFraction::periodic(pre, per);
    }
    return ContinuedFraction::finite(pre);
}

} // namespace

Point parse_point(const std::string& raw) {
    std::string s = strip(raw);
    if (s.empty()) throw InputError("empty point string");
    Point p;
    if (s == "natural") {
        p = Point::from_cf(ContinuedFraction::generator([](std::size_t i) { return mpz_class(static_cast<unsigned long>(i)); },
                                                        "natural"));
    } else if (s == "witness-beta") {
        p = Point::from_cf(theorem33_witness(WitnessVariant::Beta));
    } else if (s == "witness-kappa") {
        p = Point::from_cf(theorem33_witness(WitnessVariant::Kappa));
    } else if (s.front() == '[') {
        p = Point::from_cf(parse_bracket(s));
    } else if (s.find("sqrt") != std::string::npos) {
        Surd v;
        if (s.front() == '(') {
            auto close = s.find(')');
            if (close == std::string::npos) throw InputError("unbalanced parenthesis in '" + s + "'");
            v = parse_surd_sum(s.substr(1, close - 1));
            std::string rest = s.substr(close + 1);
            if (!rest.empty()) {
                if (rest[0] != '/') throw InputError("expected '/' in '" + s + "'");
                v = v / Surd(parse_int(rest.substr(1)));
            }
        } else {
            auto slash = s.find('/');
            v = parse_surd_sum(s.substr(0, slash));
            if (slash != std::string::npos) v = v / Surd(parse_int(s.substr(slash + 1)));
        }
        p = Point::from_surd(v);
    } else if (s.find('/') != std::string::npos) {
        auto slash = s.find('/');
        mpz_class den = parse_int(s.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + s + "'");
        mpq_class q(parse_int(s.substr(0, slash)), den);
        q.canonicalize();
        p = Point::from_surd(Surd(q));
    } else {
        p = Point::from_surd(Surd(parse_decimal(s)));
    }
    if (!(p.approx >= 0 && p.approx <= 1)) throw InputError("point '" + s + "' lies outside [0,1]");
    p.text = s;
    return p;
}

} // namespace tf
