#include "tentfarey/observables.hpp"

#include "tentfarey/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tf {

struct Observable::Node {
    enum class Kind { Constant, Identity, Power, Density, Indicator, Piecewise, Restrict, Sum, Product };
    Kind kind = Kind::Constant;
    double c = 0;                       // constant / scale
    double beta = 0, alpha = 0;         // power
    double r = 0;                       // density
    double a = 0, b = 1;                // indicator / restriction interval
    bool lc = true, rc = true;
    std::vector<double> breaks;         // piecewise
    std::vector<Observable::Piece> pieces;
    std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using Node = Observable::Node;
using Kind = Node::Kind;

bool in_interval(double x, double a, double b, bool lc, bool rc, Side side) {
    switch (side) {
    case Side::Value:
        return (lc ? x >= a : x > a) && (rc ? x <= b : x < b);
    case Side::Left: // points just below x
        return x > a && x <= b;
    case Side::Right: // points just above x
        return x >= a && x < b;
    }
    return false;
}

// The point base + offset with the offset kept exact, so that a singularity at base is
// resolved below the spacing of doubles near base.
struct Offset {
    double base, offset;
};

ExtendedReal eval_node(const Node& n, double x, Side side, const Offset* off = nullptr) {
    switch (n.kind) {
    case Kind::Constant:
        return n.c;
    case Kind::Identity:
        return x;
    case Kind::Power:
        if (off && n.beta == off->base) return n.c * std::pow(std::fabs(off->offset), -n.alpha);
        if (x == n.beta) return ExtendedReal::infinity();
        return n.c * std::pow(std::fabs(n.beta - x), -n.alpha);
    case Kind::Density:
        return invariant_density(MapParameter(n.r), x);
    case Kind::Indicator:
        return in_interval(x, n.a, n.b, n.lc, n.rc, side) ? 1.0 : 0.0;
    case Kind::Piecewise: {
        const auto& br = n.breaks;
        if (x < br.front() || x > br.back()) return 0.0;
        if (side == Side::Left && x == br.front()) return 0.0;
        if (side == Side::Right && x == br.back()) return 0.0;
        std::size_t i;
        if (side == Side::Left) {
            i = static_cast<std::size_t>(std::lower_bound(br.begin(), br.end(), x) - br.begin()) - 1;
        } else {
            i = static_cast<std::size_t>(std::upper_bound(br.begin(), br.end(), x) - br.begin()) - 1;
            if (i >= n.pieces.size()) i = n.pieces.size() - 1; // x == last break, closed end
        }
        return n.pieces[i].f(x);
    }
    case Kind::Restrict:
        if (!in_interval(x, n.a, n.b, n.lc, n.rc, side)) return 0.0;
        return eval_node(*n.kids[0], x, side, off);
    case Kind::Sum: {
        ExtendedReal s = 0.0;
        for (const auto& k : n.kids) s += eval_node(*k, x, side, off);
        return s;
    }
    case Kind::Product: {
        ExtendedReal p = 1.0;
        for (const auto& k : n.kids) {
            ExtendedReal v = eval_node(*k, x, side, off);
            if (v.is_finite() && v.value() == 0.0) return 0.0;
            p *= v;
        }
        return p;
    }
    }
    return 0.0;
}

void collect_breaks(const Node& n, std::vector<double>& out) {
    switch (n.kind) {
    case Kind::Power:
        out.push_back(n.beta);
        break;
    case Kind::Indicator:
        out.push_back(n.a);
        out.push_back(n.b);
        break;
    case Kind::Piecewise:
        out.insert(out.end(), n.breaks.begin(), n.breaks.end());
        break;
    case Kind::Restrict: {
        out.push_back(n.a);
        out.push_back(n.b);
        std::vector<double> inner;
        collect_breaks(*n.kids[0], inner);
        for (double t : inner)
            if (t >= n.a && t <= n.b) out.push_back(t);
        break;
    }
    case Kind::Sum:
    case Kind::Product:
        for (const auto& k : n.kids) collect_breaks(*k, out);
        break;
    default:
        break;
    }
}

void collect_singular(const Node& n, std::vector<double>& out) {
    switch (n.kind) {
    case Kind::Power:
        out.push_back(n.beta);
        break;
    case Kind::Density:
        if (n.r == 1.0) out.push_back(0.0);
        break;
    case Kind::Restrict: {
        std::vector<double> inner;
        collect_singular(*n.kids[0], inner);
        for (double t : inner)
            if (t >= n.a && t <= n.b) out.push_back(t);
        break;
    }
    case Kind::Sum:
    case Kind::Product:
        for (const auto& k : n.kids) collect_singular(*k, out);
        break;
    default:
        break;
    }
}

bool node_monotone(const Node& n) {
    switch (n.kind) {
    case Kind::Piecewise:
        return std::all_of(n.pieces.begin(), n.pieces.end(), [](const Observable::Piece& p) { return p.monotone; });
    case Kind::Restrict:
        return node_monotone(*n.kids[0]);
    case Kind::Sum:
    case Kind::Product: {
        // constants and indicators do not spoil monotonicity; more than one varying factor does
        int varying = 0;
        for (const auto& k : n.kids) {
            if (k->kind == Kind::Constant || k->kind == Kind::Indicator) continue;
            if (!node_monotone(*k)) return false;
            ++varying;
        }
        return varying <= 1;
    }
    default:
        return true;
    }
}

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

std::string describe_node(const Node& n) {
    switch (n.kind) {
    case Kind::Constant:
        return fmt(n.c);
    case Kind::Identity:
        return "x";
    case Kind::Power:
        return (n.c != 1 ? fmt(n.c) + "*" : "") + "|" + fmt(n.beta) + "-x|^-" + fmt(n.alpha);
    case Kind::Density:
        return "h_" + fmt(n.r);
    case Kind::Indicator:
        return std::string("1") + (n.lc ? "[" : "(") + fmt(n.a) + "," + fmt(n.b) + (n.rc ? "]" : ")");
    case Kind::Piecewise:
        return "piecewise(" + std::to_string(n.pieces.size()) + ")";
    case Kind::Restrict:
        return std::string("1") + (n.lc ? "[" : "(") + fmt(n.a) + "," + fmt(n.b) + (n.rc ? "]" : ")") + "*(" +
               describe_node(*n.kids[0]) + ")";
    case Kind::Sum:
    case Kind::Product: {
        std::string s;
        for (std::size_t i = 0; i < n.kids.size(); ++i)
            s += (i ? (n.kind == Kind::Sum ? " + " : " * ") : "") + describe_node(*n.kids[i]);
        return "(" + s + ")";
    }
    }
    return "?";
}

} // namespace

Observable::Observable() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->c = 0;
    node_ = n;
}

Observable Observable::constant(double c) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->c = c;
    return Observable(n);
}

Observable Observable::identity() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Identity;
    return Observable(n);
}

Observable Observable::linear(double slope, double intercept) {
    return piecewise({0.0, 1.0}, {Piece{[slope, intercept](double x) { return slope * x + intercept; }, true}});
}

Observable Observable::singular_power(double beta, double alpha, double scale) {
    if (!(beta >= 0 && beta <= 1)) throw InputError("singular power: beta must lie in [0,1]");
    if (!(alpha > 0 && alpha < 1)) throw InputError("singular power: alpha must lie in (0,1)");
    if (!(scale > 0)) throw InputError("singular power: scale must be positive");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Power;
    n->beta = beta;
    n->alpha = alpha;
    n->c = scale;
    return Observable(n);
}

Observable Observable::density(const MapParameter& r) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Density;
    n->r = r.value();
    return Observable(n);
}

Observable Observable::indicator(double a, double b, bool lc, bool rc) {
    if (!(a <= b)) throw InputError("indicator: need a <= b");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Indicator;
    n->a = a;
    n->b = b;
    n->lc = lc;
    n->rc = rc;
    return Observable(n);
}

Observable Observable::piecewise(std::vector<double> breaks, std::vector<Piece> pieces) {
    if (breaks.size() != pieces.size() + 1 || pieces.empty())
        throw InputError("piecewise: need one more breakpoint than pieces");
    if (!std::is_sorted(breaks.begin(), breaks.end()) ||
        std::adjacent_find(breaks.begin(), breaks.end()) != breaks.end())
        throw InputError("piecewise: breakpoints must be strictly increasing");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Piecewise;
    n->breaks = std::move(breaks);
    n->pieces = std::move(pieces);
    return Observable(n);
}

Observable Observable::function(Fn f, std::vector<double> breaks, bool monotone) {
    std::vector<double> br{0.0};
    sort_unique(breaks);
    for (double t : breaks)
        if (t > 0 && t < 1) br.push_back(t);
    br.push_back(1.0);
    std::vector<Piece> pieces(br.size() - 1, Piece{f, monotone});
    return piecewise(std::move(br), std::move(pieces));
}

Observable Observable::restrict(double a, double b, bool lc, bool rc) const {
    if (!(a <= b)) throw InputError("restrict: need a <= b");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Restrict;
    n->a = a;
    n->b = b;
    n->lc = lc;
    n->rc = rc;
    n->kids = {node_};
    return Observable(n);
}

Observable Observable::scaled(double c) const { return constant(c) * *this; }

Observable operator+(const Observable& f, const Observable& g) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->kids = {f.node_, g.node_};
    return Observable(n);
}

Observable operator*(const Observable& f, const Observable& g) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->kids = {f.node_, g.node_};
    return Observable(n);
}

ExtendedReal Observable::eval(double x, Side side) const { return eval_node(*node_, x, side); }

ExtendedReal Observable::eval_offset(double base, double offset) const {
    const double x = base + offset;
    Side side = Side::Value;
    if (x == base && offset != 0) side = offset > 0 ? Side::Right : Side::Left;
    Offset off{base, offset};
    return eval_node(*node_, x, side, &off);
}

std::vector<double> Observable::breakpoints() const {
    std::vector<double> v;
    collect_breaks(*node_, v);
    v.erase(std::remove_if(v.begin(), v.end(), [](double t) { return t < 0 || t > 1; }), v.end());
    sort_unique(v);
    return v;
}

std::vector<double> Observable::singular_points() const {
    std::vector<double> v;
    collect_singular(*node_, v);
    sort_unique(v);
    return v;
}

bool Observable::has_singularity_in(double a, double b) const {
    for (double s : singular_points())
        if (s >= a && s <= b) {
            if (eval(s, Side::Value).is_infinite() || (s > a && eval(s, Side::Left).is_infinite()) ||
                (s < b && eval(s, Side::Right).is_infinite()))
                return true;
        }
    return false;
}

bool Observable::monotone_between_breakpoints() const { return node_monotone(*node_); }

std::optional<Observable::SingularPower> Observable::as_singular_power() const {
    if (node_->kind != Kind::Power) return std::nullopt;
    return SingularPower{node_->beta, node_->alpha, node_->c};
}

std::string Observable::describe() const { return describe_node(*node_); }

ExtendedReal eval_observable(const Observable& v, double x) {
    if (!(x >= 0 && x <= 1)) throw InputError("eval_observable: x must lie in [0,1]");
    return v(x);
}

// ---------------------------------------------------------------------------
// Variation and sup norm

namespace {

struct Scan {
    double variation = 0;
    double sup = 0;
};

// Turning-point sequence of a continuous function on (u, w) with known one-sided end limits.
void scan_open(const std::function<double(double)>& g, double u, double w, double gu, double gw, Scan& s) {
    const int M = 2048;
    std::vector<double> xs(M + 1), ys(M + 1);
    xs[0] = u;
    ys[0] = gu;
    xs[M] = w;
    ys[M] = gw;
    for (int k = 1; k < M; ++k) {
        xs[k] = u + (w - u) * k / M;
        ys[k] = g(xs[k]);
    }
    std::vector<double> turning{gu};
    for (int k = 1; k < M; ++k) {
        bool is_max = ys[k] >= ys[k - 1] && ys[k] >= ys[k + 1] && (ys[k] > ys[k - 1] || ys[k] > ys[k + 1]);
        bool is_min = ys[k] <= ys[k - 1] && ys[k] <= ys[k + 1] && (ys[k] < ys[k - 1] || ys[k] < ys[k + 1]);
        if (!is_max && !is_min) continue;
        double sgn = is_max ? -1.0 : 1.0;
        auto obj = [&](double x) { return sgn * g(x); };
        auto res = boost::math::tools::brent_find_minima(obj, xs[k - 1], xs[k + 1], std::numeric_limits<double>::digits);
        double y = sgn * res.second;
        y = is_max ? std::max(y, ys[k]) : std::min(y, ys[k]);
        turning.push_back(y);
    }
    turning.push_back(gw);
    for (std::size_t i = 1; i < turning.size(); ++i) s.variation += std::fabs(turning[i] - turning[i - 1]);
    for (double y : turning) s.sup = std::max(s.sup, std::fabs(y));
}

Scan scan(const Observable& f, double a, double b) {
    if (!(a <= b)) throw InputError("variation: need a <= b");
    if (f.has_singularity_in(a, b)) throw DomainError("variation: singularity inside the interval (infinite variation)");
    std::vector<double> t{a};
    for (double x : f.breakpoints())
        if (x > a && x < b) t.push_back(x);
    t.push_back(b);
    Scan s;
    auto val = [&](double x, Side sd) { return f.eval(x, sd).value(); };
    bool mono = f.monotone_between_breakpoints();
    for (std::size_t i = 0; i < t.size(); ++i) {
        double vi = val(t[i], Side::Value);
        s.sup = std::max(s.sup, std::fabs(vi));
        if (i > 0) s.variation += std::fabs(vi - val(t[i], Side::Left));
        if (i + 1 < t.size()) {
            double ri = val(t[i], Side::Right);
            s.variation += std::fabs(ri - vi);
            double li1 = val(t[i + 1], Side::Left);
            if (mono) {
                s.variation += std::fabs(li1 - ri);
                s.sup = std::max({s.sup, std::fabs(ri), std::fabs(li1)});
            } else {
                scan_open([&](double x) { return val(x, Side::Value); }, t[i], t[i + 1], ri, li1, s);
            }
        }
    }
    return s;
}

} // namespace

double variation(const Observable& f, double a, double b) { return scan(f, a, b).variation; }

double sup_norm(const Observable& f, double a, double b) { return scan(f, a, b).sup; }

double bv_norm(const Observable& f, double a, double b) {
    Scan s = scan(f, a, b);
    return s.sup + s.variation;
}

// ---------------------------------------------------------------------------
// Integrals

double integrate(const std::function<double(double)>& f, double a, double b, const std::vector<double>& splits,
                 double tol) {
    std::vector<double> t{a};
    for (double x : splits)
        if (x > a && x < b) t.push_back(x);
    t.push_back(b);
    sort_unique(t);
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double total = 0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        double err = 0;
        total += integrator.integrate(f, t[i], t[i + 1], tol, &err);
    }
    return total;
}

double integral_lebesgue(const Observable& f, double a, double b) {
    if (a == 0.0 && b == 1.0) {
        if (auto sp = f.as_singular_power()) {
            double e = 1 - sp->alpha;
            return sp->scale * (std::pow(sp->beta, e) + std::pow(1 - sp->beta, e)) / e;
        }
    }
    std::vector<double> t{a};
    for (double x : f.breakpoints())
        if (x > a && x < b) t.push_back(x);
    t.push_back(b);
    sort_unique(t);
    // Each piece is integrated from both ends towards its midpoint in the offset variable.
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double v = 0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double lo = t[i], hi = t[i + 1], h = (hi - lo) / 2;
        v += integrator.integrate([&](double u) { return f.eval_offset(lo, u).value(); }, 0.0, h, 1e-13);
        v += integrator.integrate([&](double u) { return f.eval_offset(hi, -u).value(); }, 0.0, hi - lo - h, 1e-13);
    }
    if (!std::isfinite(v)) throw DomainError("integral_lebesgue: observable is not integrable");
    return v;
}

double integral_mu(const MapParameter& r, const Observable& f, double a, double b) {
    return integral_lebesgue(f * Observable::density(r), a, b);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& s) { return parse_point(s).approx; }

double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (...) {
        throw InputError("expected a number, got '" + s + "'");
    }
    if (used != s.size()) throw InputError("expected a number, got '" + s + "'");
    return v;
}

Observable parse_factor(const std::string& s) {
    auto colon = s.find(':');
    std::string kind = s.substr(0, colon), args = colon == std::string::npos ? "" : s.substr(colon + 1);
    auto kv = [&](const std::string& key) -> std::optional<std::string> {
        for (const auto& part : split_top(args, ',')) {
            auto eq = part.find('=');
            if (eq != std::string::npos && part.substr(0, eq) == key) return part.substr(eq + 1);
        }
        return std::nullopt;
    };
    if (kind == "identity") return Observable::identity();
    if (kind == "const") return Observable::constant(parse_real(args));
    if (kind == "power") {
        auto b = kv("beta"), a = kv("alpha"), sc = kv("scale");
        if (!b || !a) throw InputError("power observable needs beta= and alpha=");
        return Observable::singular_power(parse_number(*b), parse_real(*a), sc ? parse_real(*sc) : 1.0);
    }
    if (kind == "linear") {
        auto sl = kv("slope"), ic = kv("intercept");
        return Observable::linear(sl ? parse_real(*sl) : 0.0, ic ? parse_real(*ic) : 0.0);
    }
    if (kind == "density") {
        auto r = kv("r");
        if (!r) throw InputError("density observable needs r=");
        return Observable::density(MapParameter(parse_real(*r)));
    }
    if (kind == "indicator") {
        if (args.size() < 5) throw InputError("indicator needs an interval like [0.5,1]");
        char o = args.front(), c = args.back();
        if ((o != '[' && o != '(') || (c != ']' && c != ')')) throw InputError("indicator needs an interval like [0.5,1]");
        auto parts = split_top(args.substr(1, args.size() - 2), ',');
        if (parts.size() != 2) throw InputError("indicator needs two endpoints");
        return Observable::indicator(parse_number(parts[0]), parse_number(parts[1]), o == '[', c == ']');
    }
    throw InputError("unknown observable '" + s + "'");
}

} // namespace

Observable parse_observable(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto factors = split_top(s, '*');
    Observable f = parse_factor(factors[0]);
    for (std::size_t i = 1; i < factors.size(); ++i) f = f * parse_factor(factors[i]);
    return f;
}

} // namespace tf
