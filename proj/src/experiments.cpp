#include "tentfarey/experiments.hpp"

#include "tentfarey/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace tf {

std::vector<std::size_t> linear_schedule(std::size_t from, std::size_t to, std::size_t step) {
    if (step == 0) throw InputError("schedule step must be positive");
    std::vector<std::size_t> v;
    for (std::size_t n = from; n <= to; n += step) v.push_back(n);
    return v;
}

std::vector<std::size_t> dyadic_schedule(std::size_t from, std::size_t to) {
    std::vector<std::size_t> v;
    for (std::size_t n = 1; n <= to && n != 0; n <<= 1)
        if (n >= from) v.push_back(n);
    return v;
}

std::vector<std::size_t> resolve_schedule(const ExperimentConfig& c) {
    std::vector<std::size_t> s = c.schedule;
    if (s.empty()) {
        const bool farey = c.r == 1.0;
        std::size_t to = c.n_to ? c.n_to : (farey ? std::size_t{1} << 16 : 16);
        s = farey ? dyadic_schedule(std::max<std::size_t>(c.n_from, 2), to) : linear_schedule(c.n_from, to);
    }
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] <= s[i - 1]) throw InputError("n schedule must be strictly increasing");
    if (s.empty()) throw InputError("empty n schedule");
    return s;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

nlohmann::json typed(const ExtendedReal& v) {
    if (v.is_infinite()) return "inf";
    if (std::isnan(v.value())) return nullptr;
    return v.value();
}

std::string grid_tag(const GridSpec& g) {
    return "grid:N=" + std::to_string(g.N) + ":p=" + format_double(g.grading);
}

} // namespace

std::string ExperimentReport::to_csv() const {
    std::ostringstream os;
    os << "theorem,r,alpha,beta,x,n,backend,value,target,normalized\n";
    for (const auto& r : rows)
        os << csv_field(r.theorem) << ',' << format_double(r.r) << ',' << format_double(r.alpha) << ',' << csv_field(r.beta)
           << ',' << csv_field(r.x) << ',' << r.n << ',' << csv_field(r.backend) << ',' << r.value.str() << ','
           << r.target.str() << ',' << r.normalized.str() << '\n';
    return os.str();
}

std::string ExperimentReport::to_json() const {
    nlohmann::json j;
    j["metadata"] = metadata;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"theorem", r.theorem},
                             {"r", r.r},
                             {"alpha", r.alpha},
                             {"beta", r.beta},
                             {"x", r.x},
                             {"n", r.n},
                             {"backend", r.backend},
                             {"value", typed(r.value)},
                             {"target", typed(r.target)},
                             {"normalized", typed(r.normalized)}});
    return j.dump(2) + "\n";
}

ExperimentSeries ExperimentReport::series() const {
    ExperimentSeries s;
    s.metadata = metadata;
    for (const auto& r : rows) {
        double x = std::nan("");
        try {
            x = parse_point(r.x).approx;
        } catch (const InputError&) {
        }
        s.records.push_back({r.n, x, r.value, r.normalized});
    }
    return s;
}

// ---------------------------------------------------------------------------
// Convergence series

namespace {

// Omega-limit set when it can be decided exactly; empty otherwise.
std::vector<Surd> exact_omega(const MapParameter& r, const Point& beta) {
    if (r.is_farey()) {
        if (!beta.cf || beta.cf->kind() == ContinuedFraction::Kind::Generator) {
            if (beta.exact && beta.exact->is_zero()) return {Surd(0L)};
            return {};
        }
        return omega_limit_preperiodic(*beta.cf).points;
    }
    if (!beta.exact) return {};
    std::vector<Surd> orbit{*beta.exact};
    for (std::size_t step = 0; step < 512; ++step) {
        Surd next = eval_map(r, orbit.back());
        for (std::size_t i = 0; i < orbit.size(); ++i)
            if (orbit[i] == next) {
                std::vector<Surd> cyc(orbit.begin() + static_cast<long>(i), orbit.end());
                std::sort(cyc.begin(), cyc.end());
                return cyc;
            }
        orbit.push_back(next);
    }
    return {};
}

bool in_omega(const std::vector<Surd>& omega, const Point& x) {
    if (!x.exact) return false;
    for (const Surd& z : omega)
        if ((z.is_rational() || x.exact->is_rational() || z.D() == x.exact->D()) && z == *x.exact) return true;
    return false;
}

std::vector<std::string> default_points(const ExperimentConfig& c) {
    if (!c.points.empty()) return c.points;
    if (c.r == 1.0) return {"0.3", "0.6", "0.9"};
    return {"0.2", "0.4", "0.6", "0.8"};
}

} // namespace

std::vector<std::vector<double>> farey_dual_series(const Observable& f, const std::vector<double>& xs,
                                                   const std::vector<std::size_t>& schedule, const GridSpec& grid) {
    if (f.has_singularity_in(0.0, 1.0))
        throw DomainError("grid backend refuses observables with a singularity in [0,1]");
    GridOperator op = GridOperator::farey_dual(grid);
    GridFunction g = GridFunction::sample(grid, [&](double x) { return f.value(x); });
    std::vector<std::vector<double>> out(xs.size(), std::vector<double>(schedule.size()));
    std::vector<double> buf;
    std::size_t done = 0;
    for (std::size_t j = 0; j < schedule.size(); ++j) {
        if (j > 0 && schedule[j] <= schedule[j - 1]) throw InputError("n schedule must be strictly increasing");
        for (; done < schedule[j]; ++done) {
            op.apply(g.values(), buf);
            std::swap(g.values(), buf);
        }
        for (std::size_t i = 0; i < xs.size(); ++i) out[i][j] = g(xs[i]);
    }
    return out;
}

ExperimentReport run_convergence(const ExperimentConfig& c) {
    const MapParameter r(c.r);
    if (!(c.alpha > 0 && c.alpha < 1)) throw InputError("alpha must lie in (0,1)");
    const Point beta = parse_point(c.beta);
    const Observable v = c.observable.empty() ? Observable::singular_power(beta.approx, c.alpha) : parse_observable(c.observable);
    const std::vector<std::size_t> sched = resolve_schedule(c);
    std::vector<Point> xs;
    for (const auto& s : default_points(c)) xs.push_back(parse_point(s));
    const double iv = integral_lebesgue(v);
    const std::vector<Surd> omega = exact_omega(r, beta);

    ExperimentReport rep;
    const std::string tag = r.is_farey() ? "3.2" : "3.1";
    rep.metadata["theorem"] = c.theorem.empty() ? tag : c.theorem;
    rep.metadata["observable"] = v.describe();
    rep.metadata["integral_lebesgue"] = format_double(iv);
    rep.metadata["normalization"] = r.is_farey() ? "ln(n) * P_1^n(v)(x)" : "P_r^n(v)(x) / target";
    std::string flagged, omega_list;
    for (const Surd& z : omega) omega_list += (omega_list.empty() ? "" : " ") + z.str();
    rep.metadata["omega_limit"] = omega.empty() ? "unknown or infinite" : omega_list;

    if (!r.is_farey()) {
        for (const Point& x : xs) {
            const bool diverge = in_omega(omega, x);
            if (diverge) flagged += (flagged.empty() ? "" : " ") + x.text;
            const double target = iv * invariant_density(r, x.approx).value();
            std::vector<double> ns, errs;
            for (std::size_t n : sched) {
                ExtendedReal val;
                if (diverge && n <= kMaxTreeDepth) {
                    SplitResult sp = split_decomposition(r, v, beta, n, x.approx);
                    val = sp.bv_part + sp.tail_part;
                } else {
                    val = pf_iterate_tree(r, v, x.approx, n);
                }
                ExtendedReal norm = val * ExtendedReal(1.0 / target);
                rep.rows.push_back({rep.metadata["theorem"], c.r, c.alpha, beta.text, x.text, n, "exact-tree", val, target, norm});
                if (val.is_finite() && std::fabs(val.value() - target) > 0) {
                    ns.push_back(static_cast<double>(n));
                    errs.push_back(std::fabs(val.value() - target));
                }
            }
            if (ns.size() >= 2) rep.metadata["geometric_ratio[" + x.text + "]"] = format_double(std::exp(fit_log_slope(ns, errs)));
        }
    } else {
        if (v.has_singularity_in(0.0, 1.0))
            throw DomainError("r = 1 series run on the grid backend and need a BV observable; use the tail command for the singular part");
        std::vector<double> xd;
        for (const Point& x : xs) {
            if (!(x.approx > 0)) throw InputError("r = 1 series need points in (0,1]");
            xd.push_back(x.approx);
            if (in_omega(omega, x)) flagged += (flagged.empty() ? "" : " ") + x.text;
        }
        auto vals = farey_dual_series(Observable::identity() * v, xd, sched, c.grid);
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < sched.size(); ++j) {
                const double n = static_cast<double>(sched[j]);
                const double p = vals[i][j] / xd[i]; // P_1^n(v) = T^_1^n(x v) / x
                rep.rows.push_back({rep.metadata["theorem"], c.r, c.alpha, beta.text, xs[i].text, sched[j], grid_tag(c.grid), p,
                                    iv / xd[i], std::log(n) * p});
            }
        rep.metadata["error_model"] = "piecewise-linear interpolation on graded nodes (i/(N-1))^p";
    }
    rep.metadata["expected_divergence"] = flagged;
    return rep;
}

// ---------------------------------------------------------------------------
// Limsup report

LimsupReport run_limsup_report(const std::string& beta_spec, double alpha, const std::vector<std::size_t>& schedule,
                               std::size_t n_fit_from) {
    const Point beta = parse_point(beta_spec);
    if (!beta.cf || beta.cf->kind() == ContinuedFraction::Kind::Generator)
        throw UnsupportedError("limsup report: beta must be rational or a quadratic surd");
    const OmegaLimit om = omega_limit_preperiodic(*beta.cf);
    FareyTail tail(beta, alpha);
    LimsupReport out;
    ExperimentReport& rep = out.report;
    rep.metadata["theorem"] = "limsup";
    rep.metadata["period"] = std::to_string(om.period);
    rep.metadata["preperiod"] = std::to_string(om.preperiod);
    rep.metadata["expected_slope"] = format_double(2 * (alpha - 1));
    rep.metadata["normalized"] = "ln(value)";
    if (beta.cf->is_finite())
        rep.metadata["note"] = "rational beta: T_1^n(beta) = 0 for n >= a_1 + ... + a_L, so the tail at 0 is +inf from then on";

    for (const Surd& z : om.points) {
        Point zp = Point::from_surd(z);
        LimsupFit fit;
        fit.zeta = zp.text;
        fit.period = om.period;
        fit.preperiod = om.preperiod;
        std::set<std::size_t> residues;
        std::vector<double> lq, lv;
        bool all_inf = true;
        for (std::size_t n : schedule) {
            if (n == 0) continue;
            std::optional<double> l = tail.log_value(n, zp);
            ExtendedReal val = l ? ExtendedReal(std::exp(*l)) : ExtendedReal::infinity();
            ExtendedReal nl = l ? ExtendedReal(*l) : ExtendedReal::infinity();
            rep.rows.push_back({"limsup", 1.0, alpha, beta.text, zp.text, n, "exact-cf", val, ExtendedReal(), nl});
            if (!l) {
                residues.insert(n % om.period);
            } else {
                if (n >= om.preperiod) all_inf = false;
                if (n >= n_fit_from) {
                    OrbitBookkeeping b = orbit_bookkeeping(*beta.cf, n);
                    lq.push_back(log_abs(tail.table().q(static_cast<long>(b.m))));
                    lv.push_back(*l);
                }
            }
        }
        fit.infinite_residues.assign(residues.begin(), residues.end());
        fit.all_infinite = all_inf;
        fit.fit_points = lq.size();
        if (lq.size() >= 2) fit.slope = fit_linear_slope(lq, lv);
        std::string res;
        for (auto x : fit.infinite_residues) res += (res.empty() ? "" : " ") + std::to_string(x);
        rep.metadata["infinite_residues[" + fit.zeta + "]"] = res;
        rep.metadata["fitted_slope[" + fit.zeta + "]"] = lq.size() >= 2 ? format_double(fit.slope) : "n/a";
        out.fits.push_back(fit);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Witness tables and S_{k,j}

namespace {

ContinuedFraction golden() { return ContinuedFraction::periodic({}, {mpz_class(1)}); }

// ln of ln(n) / q_{m(n)}^{2(1-alpha)} * |T_1^j(tau) - gamma|^{-alpha} with j = n - (k+1).
double log_bound_quantity(const ContinuedFraction& tau, double alpha, std::size_t n, std::size_t j) {
    OrbitBookkeeping b = orbit_bookkeeping(tau, n);
    ConvergentTable t(tau, b.m);
    double ld = cf_log_distance(farey_shift(tau, mpz_class(static_cast<unsigned long>(j))), golden());
    return std::log(std::log(static_cast<double>(n))) - 2 * (1 - alpha) * log_abs(t.q(static_cast<long>(b.m))) - alpha * ld;
}

} // namespace

ExperimentReport run_thm33(const ExperimentConfig& c) {
    ExperimentReport rep;
    const double alpha = c.alpha;
    if (!(alpha > 0 && alpha < 1)) throw InputError("alpha must lie in (0,1)");
    if (c.theorem == "3.3a") {
        const std::size_t nmax = c.n_to ? c.n_to : 10;
        const std::size_t k = c.k;
        rep.metadata["theorem"] = "3.3a";
        rep.metadata["k"] = std::to_string(k);
        rep.metadata["notion"] = "limsup of the kappa sequence evaluated along n = Lambda(l,kappa) + l + 1; minorant with s = 1";
        for (WitnessVariant wv : {WitnessVariant::Beta, WitnessVariant::Kappa}) {
            const std::string name = wv == WitnessVariant::Beta ? "witness-beta" : "witness-kappa";
            ContinuedFraction tau = theorem33_witness(wv);
            bool all_ok = true;
            for (std::size_t n = 1; n <= nmax; ++n) {
                WitnessReport w = theorem33_witnesses(wv, n);
                all_ok = all_ok && w.check;
                rep.rows.push_back({"3.3a", 1.0, alpha, name, "lambda", n, "exact-cf", w.lambda.get_d(), ExtendedReal(), ExtendedReal()});
                rep.rows.push_back({"3.3a", 1.0, alpha, name, "entry_before_lambda", n, "exact-cf", w.entry_before.get_d(), 2.0,
                                    w.check ? 1.0 : 0.0});
            }
            rep.metadata["entry_checks[" + name + "]"] = all_ok ? "all equal 2" : "some differ from 2";
            // Bounding quantity along the aligned subsequence n - (k+1) = Lambda(l, tau) + l - 1.
            for (std::size_t l = 1; l <= nmax; ++l) {
                mpz_class lam = theorem33_lambda(wv, l);
                std::size_t j = lam.get_ui() + l - 1;
                std::size_t n = j + k + 1;
                if (n < 2) continue;
                double lb = log_bound_quantity(tau, alpha, n, j);
                rep.rows.push_back({"3.3a", 1.0, alpha, name, "bound_aligned", n, "exact-cf", std::exp(lb), ExtendedReal(), lb});
            }
            if (wv == WitnessVariant::Kappa) {
                const double gamma = (std::sqrt(5.0) - 1) / 2;
                for (std::size_t l = 1; l <= nmax; ++l) {
                    std::size_t lam = theorem33_lambda(wv, l).get_ui();
                    std::size_t n = lam + l + 1;
                    ConvergentTable t(tau, lam);
                    double ld = cf_log_distance(farey_shift(tau, mpz_class(static_cast<unsigned long>(n))), golden());
                    double lseq = std::log(std::log(static_cast<double>(n))) - 2 * (1 - alpha) * log_abs(t.q(static_cast<long>(lam))) -
                                  alpha * ld;
                    rep.rows.push_back({"3.3a", 1.0, alpha, name, "kappa_sequence", l, "exact-cf", std::exp(lseq), ExtendedReal(), lseq});
                    const double ll = static_cast<double>(l);
                    double expo = std::pow(2.0, ll + 1) * (1 - 2 * alpha) + 2 * (3 * ll - 2) * (1 - alpha);
                    // gamma^expo multiplies: q_k(gamma) ~ gamma^-k and 2 < gamma^-2 in the preceding bound
                    double lmin = std::log(ll * std::log(2.0)) + expo * std::log(gamma);
                    rep.rows.push_back({"3.3a", 1.0, alpha, name, "kappa_minorant", l, "closed-form", std::exp(lmin), ExtendedReal(), lmin});
                }
            }
        }
        return rep;
    }
    if (c.theorem == "3.3b") {
        const Point beta = parse_point(c.beta);
        if (!beta.cf) throw InputError("3.3b: beta needs a continued fraction");
        const std::size_t jmax = c.n_to ? c.n_to : 30;
        rep.metadata["theorem"] = "3.3b";
        rep.metadata["k"] = std::to_string(c.k);
        std::vector<double> vals;
        for (std::size_t j = 1; j <= jmax; ++j) {
            if (beta.cf->entry(j) < c.k) continue;
            if (beta.cf->entry(j + 1) == 0) break;
            SReport s = compute_S(*beta.cf, alpha, mpz_class(static_cast<unsigned long>(c.k)), j);
            if (!s.value) continue;
            vals.push_back(*s.value);
            rep.rows.push_back({"3.3b", 1.0, alpha, beta.text, "S_k_j", j, "exact-cf", *s.value, ExtendedReal(),
                                s.orbit_confirmed ? 1.0 : 0.0});
        }
        std::string cls = "inconclusive";
        if (vals.size() >= 5) {
            bool dec = true, inc = true;
            for (std::size_t i = vals.size() - 5; i + 1 < vals.size(); ++i) {
                dec = dec && vals[i + 1] < vals[i];
                inc = inc && vals[i + 1] > vals[i];
            }
            if (dec && vals.back() < 1e-6) cls = "tends to 0";
            else if (inc && vals.back() > 1e6) cls = "diverges";
        }
        rep.metadata["limsup_classification"] = cls;
        rep.metadata["normalized"] = "1 when T_1^{n_kj}(beta) was confirmed to start with k, a_{j+1}";
        return rep;
    }
    throw InputError("run_thm33: theorem must be 3.3a or 3.3b");
}

// ---------------------------------------------------------------------------
// Diagnostics

ExperimentReport run_diagnostics(const ExperimentConfig& c) {
    const MapParameter r(c.r);
    const Point beta = parse_point(c.beta);
    ExperimentReport rep;
    rep.metadata["theorem"] = "diagnostics";
    const std::vector<std::size_t> sched = resolve_schedule(c);
    for (std::size_t n : sched) {
        if (n == 0) continue;
        double w = wandering_rate(r, n);
        ExtendedReal target = r.is_farey() ? ExtendedReal(std::log1p(static_cast<double>(n))) : ExtendedReal(1.0);
        rep.rows.push_back({"diagnostics", c.r, c.alpha, beta.text, "wandering_rate", n, "closed-form", w, target,
                            w / target.value()});
    }
    const std::size_t from = sched.front(), to = sched.back();
    CoverSumReport cs = cover_sum_diagnostic(r, beta, c.alpha, c.eta_k, c.s, from, to, c.k);
    for (auto [n, t] : cs.terms)
        rep.rows.push_back({"diagnostics", c.r, c.alpha, beta.text, "cover_term", n, "closed-form", t, ExtendedReal(), ExtendedReal()});
    rep.metadata["cover_partial_sum"] = format_double(cs.partial_sum);
    if (cs.geometric_bound) rep.metadata["cover_geometric_bound"] = format_double(*cs.geometric_bound);
    rep.metadata["eta_K"] = format_double(c.eta_k);
    rep.metadata["s"] = format_double(c.s);
    if (beta.cf && !beta.cf->is_finite()) {
        AlphaTypeReport at = alpha_type_test(*beta.cf, c.alpha, 200);
        rep.metadata["alpha_type"] = at.verdict == AlphaTypeVerdict::CertifiedYes ? "certified" : "inconclusive";
        rep.metadata["alpha_type_reason"] = at.reason;
    }
    return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& c) {
    if (c.theorem == "3.1" || c.theorem == "3.2") return run_convergence(c);
    if (c.theorem == "3.3a" || c.theorem == "3.3b") return run_thm33(c);
    if (c.theorem == "diagnostics") return run_diagnostics(c);
    if (c.theorem == "limsup") {
        std::vector<std::size_t> s = c.schedule.empty() ? linear_schedule(1, c.n_to ? c.n_to : 200) : c.schedule;
        return run_limsup_report(c.beta, c.alpha, s).report;
    }
    throw InputError("unknown theorem tag '" + c.theorem + "'");
}

} // namespace tf
