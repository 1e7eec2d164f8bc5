#include "tentfarey/transfer.hpp"

#include "tentfarey/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace tf {

std::string backend_name(Backend b) { return b == Backend::ExactTree ? "exact-tree" : "grid"; }

namespace {

struct Mat {
    long double a = 1, b = 0, c = 0, d = 1;
    Mat operator*(const Mat& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
    }
};

Mat branch_mat(double r, int digit) {
    MobiusMatrix m = inverse_branch_matrix(MapParameter(r), digit);
    return {m.a, m.b, m.c, m.d};
}

void check_depth(std::size_t n) {
    if (n > kMaxTreeDepth)
        throw CapacityError("exact-tree backend: n = " + std::to_string(n) + " exceeds the depth limit " +
                            std::to_string(kMaxTreeDepth));
}

void check_point(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("evaluation point must lie in [0,1]");
}

template <class Leaf>
ExtendedReal dfs(const Mat& m, std::uint32_t code, std::size_t depth, const Mat* f, const Leaf& leaf) {
    if (depth == 0) return leaf(m, code);
    return dfs(m * f[0], code << 1, depth - 1, f, leaf) + dfs(m * f[1], (code << 1) | 1u, depth - 1, f, leaf);
}

ExtendedReal pairwise_sum(const std::vector<ExtendedReal>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

// Sum of leaf(f_w, code(w)) over all words of length n.  Large trees are cut at a fixed
// depth and the subtrees shared out to worker threads; the combination order is fixed.
template <class Leaf>
ExtendedReal tree_sum(double r, std::size_t n, const Leaf& leaf) {
    check_depth(n);
    const Mat f[2] = {branch_mat(r, 0), branch_mat(r, 1)};
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (n < 16 || hw == 1) return dfs(Mat{}, 0u, n, f, leaf);

    const std::size_t cut = 6;
    const std::size_t count = std::size_t{1} << cut;
    std::vector<ExtendedReal> part(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            Mat m;
            for (std::size_t k = 0; k < cut; ++k) m = m * f[(i >> (cut - 1 - k)) & 1u];
            part[i] = dfs(m, static_cast<std::uint32_t>(i), n - cut, f, leaf);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<unsigned>(hw, count); ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return pairwise_sum(part, 0, count);
}

template <class F>
ExtendedReal pf_tree(double r, const F& f, double x, std::size_t n) {
    check_point(x);
    const long double det = std::pow(2.0L - r, static_cast<long double>(n));
    const long double lx = x;
    return tree_sum(r, n, [&](const Mat& m, std::uint32_t) {
        long double den = m.c * lx + m.d;
        double y = static_cast<double>((m.a * lx + m.b) / den);
        return ExtendedReal(static_cast<double>(det / (den * den))) * f(std::clamp(y, 0.0, 1.0));
    });
}

// Weight of the word in T^_1^n: |f'_w(x)| h_1(f_w(x)) / h_1(x) = x / ((cx+d)(ax+b)).
long double hat_weight(const Mat& m, long double x) {
    long double den = m.c * x + m.d;
    if (m.b == 0) return 1.0L / (m.a * den);
    return x / (den * (m.a * x + m.b));
}

template <class F>
ExtendedReal hat_tree(const F& f, double x, std::size_t n) {
    check_point(x);
    const long double lx = x;
    return tree_sum(1.0, n, [&](const Mat& m, std::uint32_t) {
        double y = static_cast<double>((m.a * lx + m.b) / (m.c * lx + m.d));
        return ExtendedReal(static_cast<double>(hat_weight(m, lx))) * f(std::clamp(y, 0.0, 1.0));
    });
}

bool same_field(const Surd& a, const Surd& b) { return a.is_rational() || b.is_rational() || a.D() == b.D(); }

double singular_value(double log_weight, double alpha, double log_dist) {
    return std::exp(log_weight - alpha * log_dist);
}

std::vector<Word> tail_words(const MapParameter& r, const Point& beta, std::size_t n) {
    if (r.is_farey()) return {code_point(r, beta, n)};
    return neighbor_words(r, beta, n).distinct();
}

std::uint32_t word_code(const Word& w) {
    std::uint32_t c = 0;
    for (auto d : w) c = (c << 1) | d;
    return c;
}

} // namespace

// ---------------------------------------------------------------------------
// Grids

std::shared_ptr<const std::vector<double>> grid_nodes(const GridSpec& spec) {
    if (spec.N < 2) throw InputError("grid needs at least two nodes");
    if (!(spec.grading >= 1.0)) throw InputError("grid grading must be >= 1");
    static std::mutex mu;
    static std::map<std::pair<std::size_t, double>, std::shared_ptr<const std::vector<double>>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{spec.N, spec.grading}];
    if (!slot) {
        auto v = std::make_shared<std::vector<double>>(spec.N);
        for (std::size_t i = 0; i < spec.N; ++i) {
            double s = static_cast<double>(i) / static_cast<double>(spec.N - 1);
            (*v)[i] = spec.grading == 1.0 ? s : std::pow(s, spec.grading);
        }
        v->back() = 1.0;
        slot = v;
    }
    return slot;
}

GridFunction::GridFunction(const GridSpec& spec, std::vector<double> values)
    : spec_(spec), nodes_(grid_nodes(spec)), values_(std::move(values)) {
    if (values_.size() != spec.N) throw InputError("grid function: value count does not match the grid");
}

GridFunction GridFunction::sample(const GridSpec& spec, const std::function<double(double)>& f) {
    auto nodes = grid_nodes(spec);
    std::vector<double> v(spec.N);
    for (std::size_t i = 0; i < spec.N; ++i) v[i] = f((*nodes)[i]);
    return GridFunction(spec, std::move(v));
}

namespace {

// j with nodes[j] <= y <= nodes[j+1] and the interpolation parameter.
std::pair<std::uint32_t, double> locate(const std::vector<double>& nodes, double y) {
    y = std::clamp(y, 0.0, 1.0);
    auto it = std::upper_bound(nodes.begin(), nodes.end(), y);
    std::size_t j = static_cast<std::size_t>(it - nodes.begin());
    j = j == 0 ? 0 : j - 1;
    if (j >= nodes.size() - 1) j = nodes.size() - 2;
    double t = (y - nodes[j]) / (nodes[j + 1] - nodes[j]);
    return {static_cast<std::uint32_t>(j), std::clamp(t, 0.0, 1.0)};
}

} // namespace

double GridFunction::operator()(double x) const {
    auto [j, t] = locate(*nodes_, x);
    return (1 - t) * values_[j] + t * values_[j + 1];
}

GridOperator GridOperator::perron_frobenius(const MapParameter& r, const GridSpec& spec) {
    GridOperator op;
    op.spec_ = spec;
    auto nodes = grid_nodes(spec);
    MobiusMatrix f0 = inverse_branch_matrix(r, 0), f1 = inverse_branch_matrix(r, 1);
    for (double x : *nodes) {
        auto [j0, t0] = locate(*nodes, static_cast<double>(f0(x)));
        auto [j1, t1] = locate(*nodes, static_cast<double>(f1(x)));
        op.st0_.push_back({j0, t0, branch_derivative(f0, x)});
        op.st1_.push_back({j1, t1, branch_derivative(f1, x)});
    }
    return op;
}

GridOperator GridOperator::farey_dual(const GridSpec& spec) {
    GridOperator op;
    op.spec_ = spec;
    auto nodes = grid_nodes(spec);
    for (double x : *nodes) {
        double y0 = x / (1 + x), y1 = 1 / (1 + x);
        auto [j0, t0] = locate(*nodes, y0);
        auto [j1, t1] = locate(*nodes, y1);
        op.st0_.push_back({j0, t0, y1});
        op.st1_.push_back({j1, t1, y0});
    }
    return op;
}

void GridOperator::apply(const std::vector<double>& in, std::vector<double>& out) const {
    const std::size_t N = st0_.size();
    out.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Stencil& a = st0_[i];
        const Stencil& b = st1_[i];
        out[i] = a.w * ((1 - a.t) * in[a.j] + a.t * in[a.j + 1]) + b.w * ((1 - b.t) * in[b.j] + b.t * in[b.j + 1]);
    }
}

GridFunction GridOperator::apply(const GridFunction& g) const {
    std::vector<double> out;
    apply(g.values(), out);
    return GridFunction(spec_, std::move(out));
}

namespace {

GridFunction grid_iterate(const GridOperator& op, const Observable& f, std::size_t n, const char* who) {
    if (f.has_singularity_in(0.0, 1.0))
        throw DomainError(std::string(who) + ": grid backend refuses observables with a singularity in [0,1]");
    GridFunction g = GridFunction::sample(op.spec(), [&](double x) { return f.value(x); });
    std::vector<double> buf;
    for (std::size_t k = 0; k < n; ++k) {
        op.apply(g.values(), buf);
        std::swap(g.values(), buf);
    }
    return g;
}

} // namespace

// ---------------------------------------------------------------------------
// Perron-Frobenius operator

ExtendedReal pf_apply_once(const MapParameter& r, const RealFn& f, double x) {
    check_point(x);
    ExtendedReal s = 0.0;
    for (int d = 0; d < 2; ++d) {
        MobiusMatrix m = inverse_branch_matrix(r, d);
        s += ExtendedReal(branch_derivative(m, x)) * f(static_cast<double>(m(x)));
    }
    return s;
}

ExtendedReal pf_apply_once(const MapParameter& r, const Observable& f, double x) {
    return pf_apply_once(r, RealFn([&](double y) { return f(y); }), x);
}

ExtendedReal pf_iterate_tree(const MapParameter& r, const RealFn& f, double x, std::size_t n) {
    return pf_tree(r.value(), f, x, n);
}

ExtendedReal pf_iterate_tree(const MapParameter& r, const Observable& f, double x, std::size_t n) {
    return pf_tree(r.value(), f, x, n);
}

GridFunction pf_iterate_grid(const MapParameter& r, const Observable& f, std::size_t n, const GridSpec& spec) {
    return grid_iterate(GridOperator::perron_frobenius(r, spec), f, n, "pf_iterate");
}

ExtendedReal pf_iterate(const MapParameter& r, const Observable& f, double x, std::size_t n, Backend backend,
                        const GridSpec& spec) {
    if (backend == Backend::ExactTree) return pf_iterate_tree(r, f, x, n);
    check_point(x);
    return pf_iterate_grid(r, f, n, spec)(x);
}

// ---------------------------------------------------------------------------
// Farey dual operator

ExtendedReal transfer_hat_once(const RealFn& f, double x) {
    check_point(x);
    double y0 = x / (1 + x), y1 = 1 / (1 + x);
    return ExtendedReal(y0) * f(y1) + ExtendedReal(y1) * f(y0);
}

ExtendedReal transfer_hat_tree(const RealFn& f, double x, std::size_t n) { return hat_tree(f, x, n); }

ExtendedReal transfer_hat_tree(const Observable& f, double x, std::size_t n) { return hat_tree(f, x, n); }

GridFunction transfer_hat_grid(const Observable& f, std::size_t n, const GridSpec& spec) {
    return grid_iterate(GridOperator::farey_dual(spec), f, n, "transfer_hat");
}

ExtendedReal transfer_hat_apply(const Observable& f, double x, std::size_t n, Backend backend, const GridSpec& spec) {
    if (backend == Backend::ExactTree) return transfer_hat_tree(f, x, n);
    check_point(x);
    return transfer_hat_grid(f, n, spec)(x);
}

double transfer_hat_restricted_closed_form(const RealFn& f, double x, std::size_t n) {
    check_point(x);
    double prod = 1.0, y = x;
    for (std::size_t k = 0; k < n; ++k) {
        prod *= 1.0 / (1.0 + y);
        y = y / (1.0 + y);
    }
    const double nn = static_cast<double>(n);
    bool in_yn = n == 0 ? y >= 0.5 : (y >= 1.0 / (nn + 2) && y < 1.0 / (nn + 1));
    return in_yn ? prod * f(y).value() : 0.0;
}

DecompositionSides decomposition_identity(const RealFn& f, double x, std::size_t n) {
    check_depth(n);
    auto in_y = [](double y) { return y >= 0.5 && y <= 1.0; };
    DecompositionSides s;
    if (!in_y(x)) return s;
    s.lhs = transfer_hat_tree(f, x, n).value();
    for (std::size_t j = 0; j <= n; ++j) {
        const double lo = 1.0 / static_cast<double>(j + 2), hi = 1.0 / static_cast<double>(j + 1);
        RealFn fj = [&f, j, lo, hi](double z) -> ExtendedReal {
            bool in = j == 0 ? (z >= 0.5 && z <= 1.0) : (z >= lo && z < hi);
            return in ? f(z) : ExtendedReal(0.0);
        };
        RealFn gj = [&fj, j, &in_y](double y) -> ExtendedReal {
            return in_y(y) ? transfer_hat_tree(fj, y, j) : ExtendedReal(0.0);
        };
        s.rhs += transfer_hat_tree(gj, x, n - j).value();
    }
    return s;
}

ExtensionSides extension_equation(const RealFn& g, double x, std::size_t n) {
    const MapParameter one(1.0);
    MobiusMatrix f0 = inverse_branch_matrix(one, 0), f1 = inverse_branch_matrix(one, 1);
    double y0 = static_cast<double>(f0(x)), y1 = static_cast<double>(f1(x));
    ExtensionSides s;
    s.lhs = pf_iterate_tree(one, g, y0, n).value();
    s.rhs = (pf_iterate_tree(one, g, x, n + 1).value() - branch_derivative(f1, x) * pf_iterate_tree(one, g, y1, n).value()) /
            branch_derivative(f0, x);
    return s;
}

// ---------------------------------------------------------------------------
// Tails

FareyTail::FareyTail(Point beta, double alpha) : beta_(std::move(beta)), alpha_(alpha) {
    if (!(alpha > 0 && alpha < 1)) throw InputError("tail: alpha must lie in (0,1)");
}

void FareyTail::ensure(std::size_t m) {
    while (table_.depth() < m) table_.push(beta_.cf->entry(table_.depth() + 1));
}

std::optional<double> FareyTail::log_value(std::size_t n, const Point& x) {
    check_point(x.approx);
    ContinuedFraction bcf = beta_.cf ? *beta_.cf : ContinuedFraction();
    if (!beta_.cf) beta_.cf = bcf;
    OrbitBookkeeping b = orbit_bookkeeping(bcf, n);
    ensure(b.m);
    ExactMobius M = farey_branch_matrix(table_, b);

    if (x.exact && beta_.exact && same_field(*x.exact, *beta_.exact)) {
        Surd y = M(*x.exact);
        Surd diff = y - *beta_.exact;
        if (diff.is_zero()) return std::nullopt;
        Surd den = Surd(M.c) * *x.exact + Surd(M.d);
        return -2.0 * den.log_abs() - alpha_ * diff.log_abs();
    }

    // Continued-fraction route: f_w(x) = [0; a_1, ..., a_m, b_1 + r(n), b_2, ...].
    const std::size_t m = b.m;
    const mpz_class rr = static_cast<unsigned long>(b.r);
    std::optional<ContinuedFraction> xcf = x.cf;
    if (!xcf) {
        if (x.approx != 0.0) throw UnsupportedError("tail: evaluation point has no continued fraction");
        xcf = ContinuedFraction();
    }
    ContinuedFraction y = ContinuedFraction::generator(
        [bcf, xc = *xcf, m, rr](std::size_t i) -> mpz_class {
            if (i <= m) return bcf.entry(i);
            if (i == m + 1) {
                mpz_class b1 = xc.entry(1);
                return b1 == 0 ? mpz_class(0) : mpz_class(b1 + rr);
            }
            return xc.entry(1) == 0 ? mpz_class(0) : xc.entry(i - m);
        },
        "f_w(x)");
    double log_dist;
    try {
        log_dist = cf_log_distance(y, bcf);
    } catch (const InputError&) {
        return std::nullopt; // equal finite expansions
    } catch (const CapacityError&) {
        throw UnsupportedError("tail: cannot separate f_w(x) from beta within the prefix limit");
    }
    // ln(c x + d) = ln q_m + ln(1 + (r + q_{m-1}/q_m) x)
    const long ml = static_cast<long>(m);
    double lq = log_abs(table_.q(ml));
    double ratio = table_.q(ml - 1) == 0 ? 0.0 : std::exp(log_abs(table_.q(ml - 1)) - lq);
    double lden = lq + std::log1p((static_cast<double>(b.r) + ratio) * x.approx);
    return -2.0 * lden - alpha_ * log_dist;
}

ExtendedReal FareyTail::operator()(std::size_t n, const Point& x) {
    auto lv = log_value(n, x);
    if (!lv) return ExtendedReal::infinity();
    return std::exp(*lv);
}

ExtendedReal tail_eval(const MapParameter& r, const Point& beta, double alpha, std::size_t n, const Point& x) {
    if (!(alpha > 0 && alpha < 1)) throw InputError("tail: alpha must lie in (0,1)");
    check_point(x.approx);
    if (r.is_farey()) {
        FareyTail t(beta, alpha);
        return t(n, x);
    }
    const double lr = std::log(2.0 - r.value()) * static_cast<double>(n);
    ExtendedReal sum = 0.0;
    for (const Word& w : neighbor_words(r, beta, n).distinct()) {
        if (x.exact && beta.exact && same_field(*x.exact, *beta.exact)) {
            RationalMobius M = compose_branches_rational(r, w);
            Surd diff = M(*x.exact) - *beta.exact;
            if (diff.is_zero()) return ExtendedReal::infinity();
            Surd den = Surd(M.c) * *x.exact + Surd(M.d);
            sum += singular_value(lr - 2.0 * den.log_abs(), alpha, diff.log_abs());
        } else {
            MobiusMatrix M = compose_branches(r, w);
            double y = static_cast<double>(M(x.approx));
            if (y == beta.approx) throw DomainError("tail: f_w(x) coincides with beta in floating point only");
            sum += branch_derivative(M, x.approx) * std::pow(std::fabs(beta.approx - y), -alpha);
        }
    }
    return sum;
}

SplitResult split_decomposition(const MapParameter& r, const Observable& v, const Point& beta, std::size_t n, double x) {
    check_depth(n);
    std::set<std::uint32_t> codes;
    std::vector<Word> words = tail_words(r, beta, n);
    for (const Word& w : words) codes.insert(word_code(w));

    const long double det = std::pow(2.0L - r.value(), static_cast<long double>(n));
    const long double lx = x;
    auto term = [&](const Mat& m) {
        long double den = m.c * lx + m.d;
        double y = std::clamp(static_cast<double>((m.a * lx + m.b) / den), 0.0, 1.0);
        return ExtendedReal(static_cast<double>(det / (den * den))) * v(y);
    };
    ExtendedReal tail = tree_sum(r.value(), n, [&](const Mat& m, std::uint32_t code) {
        return codes.count(code) ? term(m) : ExtendedReal(0.0);
    });
    ExtendedReal bv = tree_sum(r.value(), n, [&](const Mat& m, std::uint32_t code) {
        return codes.count(code) ? ExtendedReal(0.0) : term(m);
    });
    // Exact hit of the singularity by a tail word.
    if (beta.exact && v.has_singularity_in(beta.approx, beta.approx)) {
        Surd sx = Surd::from_double(x);
        for (const Word& w : words) {
            Surd y = compose_branches_rational(r, w)(sx);
            if (same_field(y, *beta.exact) && y == *beta.exact) tail = ExtendedReal::infinity();
        }
    }
    return {bv, tail};
}

// ---------------------------------------------------------------------------
// Wandering rate and cover sums

double wandering_rate(const MapParameter& r, std::size_t n) {
    if (n < 1) throw InputError("wandering_rate: n must be >= 1");
    if (r.is_farey()) return std::log1p(static_cast<double>(n));
    // 1 / f_{r,0}^n(1) = ((2-r)^n - r) / (1-r)
    const double rv = r.value();
    double growth = std::pow(2.0 - rv, static_cast<double>(n));
    double a = std::isinf(growth) ? 0.0 : (1.0 - rv) / (growth - rv);
    return measure_mu(r, a, 1.0).value();
}

CoverSumReport cover_sum_diagnostic(const MapParameter& r, const Point& beta, double alpha, double etaK, double s,
                                    std::size_t n_from, std::size_t n_to, std::size_t k) {
    if (!(s > 0)) throw InputError("cover sum: s must be positive");
    if (!(alpha > 0 && alpha < 1)) throw InputError("cover sum: alpha must lie in (0,1)");
    if (!(etaK > 0)) throw InputError("cover sum: eta*K must be positive");
    if (n_from > n_to) throw InputError("cover sum: empty n range");
    CoverSumReport rep;
    const double e = 1.0 - 1.0 / alpha; // < 0
    if (!r.is_farey()) {
        const double l2r = std::log(2.0 - r.value());
        const double lc = std::log(3.0 * etaK) / alpha;
        for (std::size_t n = n_from; n <= n_to; ++n) {
            double t = std::exp(s * (e * l2r * static_cast<double>(n) + lc));
            rep.terms.emplace_back(n, t);
            rep.partial_sum += t;
        }
        double rho = std::exp(e * s * l2r);
        rep.geometric_bound = std::exp(s * lc + e * s * l2r * static_cast<double>(n_from)) / (1.0 - rho);
        return rep;
    }
    if (k < 1) throw InputError("cover sum: k must be >= 1");
    if (!beta.cf) throw InputError("cover sum: beta needs a continued fraction at r = 1");
    const ContinuedFraction& cf = *beta.cf;
    ConvergentTable tab;
    mpz_class partial = 0;
    const double kk = static_cast<double>(k);
    const double lconst = (2.0 / alpha) * std::log(kk + 1) - std::log(etaK) / alpha - 2.0 * std::log(kk);
    for (std::size_t l = 1;; ++l) {
        mpz_class a = cf.entry(l);
        if (a == 0) break;
        partial += a;
        tab.push(a);
        if (partial <= k) continue;
        mpz_class nz = partial - static_cast<unsigned long>(k);
        if (nz > n_to) break;
        if (nz < n_from) continue;
        std::size_t n = nz.get_ui();
        if (n < 2) continue; // ln(1) = 0
        OrbitBookkeeping bk = orbit_bookkeeping(cf, n);
        const long m = static_cast<long>(bk.m);
        mpz_class den = mpz_class(static_cast<unsigned long>(bk.r + k)) * tab.q(m) + tab.q(m - 1);
        double lrad = lconst + std::log(std::log(static_cast<double>(n))) / alpha - 2.0 * (1.0 / alpha - 1.0) * log_abs(den);
        double t = std::exp(s * lrad);
        rep.terms.emplace_back(n, t);
        rep.partial_sum += t;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Series

namespace {

nlohmann::json to_json_value(const ExtendedReal& v) {
    if (v.is_infinite()) return "inf";
    return v.value();
}

} // namespace

std::string ExperimentSeries::to_csv() const {
    std::ostringstream os;
    os << "n,x,value,normalized_value\n";
    for (const auto& r : records) os << r.n << ',' << format_double(r.x) << ',' << r.value.str() << ',' << r.normalized_value.str() << '\n';
    return os.str();
}

std::string ExperimentSeries::to_json() const {
    nlohmann::json j;
    j["metadata"] = metadata;
    j["records"] = nlohmann::json::array();
    for (const auto& r : records)
        j["records"].push_back(
            {{"n", r.n}, {"x", r.x}, {"value", to_json_value(r.value)}, {"normalized_value", to_json_value(r.normalized_value)}});
    return j.dump(2) + "\n";
}

double fit_linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("fit: need at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0) throw InputError("fit: abscissae are all equal");
    return sxy / sxx;
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0)) throw InputError("fit: values must be positive");
        ly[i] = std::log(y[i]);
    }
    return fit_linear_slope(x, ly);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0)) throw InputError("fit: abscissae must be positive");
        lx[i] = std::log(x[i]);
    }
    return fit_log_slope(lx, y);
}

} // namespace tf
