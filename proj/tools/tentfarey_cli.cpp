#include "tentfarey/contfrac.hpp"
#include "tentfarey/errors.hpp"
#include "tentfarey/experiments.hpp"
#include "tentfarey/map_core.hpp"
#include "tentfarey/observables.hpp"
#include "tentfarey/renewal.hpp"
#include "tentfarey/symbolic.hpp"
#include "tentfarey/transfer.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace tf;
using nlohmann::json;

namespace {

struct OutputOptions {
    std::string format = "csv";
    std::string out;
};

void add_output(CLI::App* app, OutputOptions& o) {
    app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--out", o.out, "Write to this file instead of stdout");
}

void emit(const OutputOptions& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw InputError("cannot open output file " + o.out);
    f << text;
}

// Rows of (quantity, index, value) for the inspection commands.
struct KeyTable {
    struct Row {
        std::string quantity;
        std::string index;
        std::string value;
    };
    std::vector<Row> rows;

    void add(std::string q, std::string v, std::string idx = "") { rows.push_back({std::move(q), std::move(idx), std::move(v)}); }
    void add(std::string q, double v, std::string idx = "") { add(std::move(q), format_double(v), std::move(idx)); }

    std::string render(const std::string& format) const {
        if (format == "json") {
            json j = json::array();
            for (const auto& r : rows) j.push_back({{"quantity", r.quantity}, {"index", r.index}, {"value", r.value}});
            return j.dump(2) + "\n";
        }
        std::ostringstream os;
        os << "quantity,index,value\n";
        auto field = [](const std::string& s) {
            if (s.find_first_of(",\"") == std::string::npos) return s;
            std::string q = "\"";
            for (char c : s) {
                if (c == '"') q += '"';
                q += c;
            }
            return q + "\"";
        };
        for (const auto& r : rows) os << field(r.quantity) << ',' << field(r.index) << ',' << field(r.value) << '\n';
        return os.str();
    }
};

std::string render_series(const ExperimentSeries& s, const std::string& format) {
    return format == "json" ? s.to_json() : s.to_csv();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfer operators of the interpolated tent-Farey maps"};
    app.require_subcommand(1);

    // map
    OutputOptions map_out;
    double map_r = 0.5;
    std::string map_x = "1/3", map_word;
    std::size_t map_n = 10;
    auto* map_cmd = app.add_subcommand("map", "Orbit, coding, density and cylinders of T_r");
    map_cmd->add_option("--r", map_r, "Map parameter in [0,1]");
    map_cmd->add_option("--x", map_x, "Point (p/q, decimal, surd or continued fraction)");
    map_cmd->add_option("--n", map_n, "Orbit and coding length");
    map_cmd->add_option("--word", map_word, "Binary word for the cylinder, e.g. 0110");
    add_output(map_cmd, map_out);

    // cf
    OutputOptions cf_out;
    std::string cf_beta = "[0;(2)]";
    std::size_t cf_depth = 10, cf_n = 0;
    double cf_alpha = 0;
    auto* cf_cmd = app.add_subcommand("cf", "Continued fraction, convergents, Farey coding and omega-limit");
    cf_cmd->add_option("--beta", cf_beta, "Point");
    cf_cmd->add_option("--depth", cf_depth, "Number of entries and convergents");
    cf_cmd->add_option("--n", cf_n, "Also report the Farey coding and branch matrix of length n");
    cf_cmd->add_option("--alpha", cf_alpha, "Run the intermediate alpha-type test for this alpha");
    add_output(cf_cmd, cf_out);

    // tail
    OutputOptions tail_out;
    double tail_r = 1, tail_alpha = 0.5;
    std::string tail_beta = "[0;(2)]", tail_x = "sqrt2/2";
    std::size_t tail_from = 1, tail_to = 20;
    auto* tail_cmd = app.add_subcommand("tail", "The r-tail v_{n,r}(x) of v_{beta,alpha}");
    tail_cmd->add_option("--r", tail_r, "Map parameter");
    tail_cmd->add_option("--beta", tail_beta, "Singularity");
    tail_cmd->add_option("--alpha", tail_alpha, "Exponent in (0,1)");
    tail_cmd->add_option("--x", tail_x, "Evaluation point");
    tail_cmd->add_option("--n-from", tail_from, "First n");
    tail_cmd->add_option("--n-to", tail_to, "Last n");
    add_output(tail_cmd, tail_out);

    // iterate
    OutputOptions it_out;
    double it_r = 0.5;
    std::string it_obs = "identity", it_backend = "exact-tree", it_operator = "pf";
    std::vector<std::string> it_x{"0.25"};
    std::size_t it_from = 1, it_to = 10, it_gridN = std::size_t{1} << 14;
    double it_grading = 1;
    auto* it_cmd = app.add_subcommand("iterate", "Iterates of P_r or of the Farey dual operator");
    it_cmd->add_option("--r", it_r, "Map parameter");
    it_cmd->add_option("--observable", it_obs, "Observable, e.g. power:beta=1/3,alpha=0.4");
    it_cmd->add_option("--x", it_x, "Evaluation points")->expected(1, -1);
    it_cmd->add_option("--n-from", it_from, "First n");
    it_cmd->add_option("--n-to", it_to, "Last n");
    it_cmd->add_option("--backend", it_backend, "Backend")->check(CLI::IsMember({"exact-tree", "grid"}));
    it_cmd->add_option("--operator", it_operator, "pf (P_r) or hat (Farey dual, r = 1)")->check(CLI::IsMember({"pf", "hat"}));
    it_cmd->add_option("--grid-N", it_gridN, "Grid size");
    it_cmd->add_option("--grading", it_grading, "Grid grading exponent (>= 1)");
    add_output(it_cmd, it_out);

    // renewal
    OutputOptions rn_out;
    double rn_x = 0.6;
    std::size_t rn_n = 3, rn_m = 10, rn_k = 2;
    auto* rn_cmd = app.add_subcommand("renewal", "First-return quantities of the induced Farey system on [1/2,1]");
    rn_cmd->add_option("--x", rn_x, "Point of [1/2,1]");
    rn_cmd->add_option("--n", rn_n, "Index of R_n");
    rn_cmd->add_option("--m", rn_m, "Truncation of the R(1) partial sum");
    rn_cmd->add_option("--k", rn_k, "Index of g_k and U_k");
    add_output(rn_cmd, rn_out);

    // experiment
    OutputOptions ex_out;
    ExperimentConfig ex;
    std::string ex_schedule;
    auto* ex_cmd = app.add_subcommand("experiment", "Desk-scale experiments: 3.1, 3.2, 3.3a, 3.3b, limsup, diagnostics");
    ex_cmd->add_option("--theorem", ex.theorem, "Experiment tag")
        ->check(CLI::IsMember({"3.1", "3.2", "3.3a", "3.3b", "limsup", "diagnostics"}));
    ex_cmd->add_option("--r", ex.r, "Map parameter");
    ex_cmd->add_option("--alpha", ex.alpha, "Exponent in (0,1)");
    ex_cmd->add_option("--beta", ex.beta, "Singularity");
    ex_cmd->add_option("--x", ex.points, "Evaluation points")->expected(1, -1);
    ex_cmd->add_option("--observable", ex.observable, "Observable (default v_{beta,alpha})");
    ex_cmd->add_option("--n-from", ex.n_from, "First n of the default schedule");
    ex_cmd->add_option("--n-to", ex.n_to, "Last n of the default schedule");
    ex_cmd->add_option("--schedule", ex_schedule, "linear or dyadic (default: dyadic at r = 1)")
        ->check(CLI::IsMember({"linear", "dyadic"}));
    ex_cmd->add_option("--grid-N", ex.grid.N, "Grid size for r = 1");
    ex_cmd->add_option("--grading", ex.grid.grading, "Grid grading exponent for r = 1");
    ex_cmd->add_option("--k", ex.k, "k for S_{k,j}, the 3.3a bounds and cover sums");
    ex_cmd->add_option("--eta-k", ex.eta_k, "The constant eta*K of the cover sums");
    ex_cmd->add_option("--s", ex.s, "Exponent of the cover sums");
    add_output(ex_cmd, ex_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*map_cmd) {
            MapParameter r(map_r);
            Point x = parse_point(map_x);
            KeyTable t;
            t.add("x", x.text);
            std::vector<double> orbit = orbit_points(r, x, map_n);
            for (std::size_t i = 0; i < orbit.size(); ++i) t.add("orbit", orbit[i], std::to_string(i));
            t.add("coding", word_str(code_point(r, x, map_n)));
            t.add("density", invariant_density(r, x.approx).str());
            t.add("fixed_point", fixed_point_nonzero(r));
            if (!map_word.empty()) {
                Word w;
                for (char c : map_word) {
                    if (c != '0' && c != '1') throw InputError("word must consist of 0 and 1");
                    w.push_back(static_cast<std::uint8_t>(c - '0'));
                }
                Cylinder cyl = cylinder_interval(r, w);
                t.add("cylinder_left", cyl.left.get_str());
                t.add("cylinder_right", cyl.right.get_str());
                MobiusMatrix m = compose_branches(r, w);
                t.add("branch_value_at_x", static_cast<double>(m(x.approx)));
                t.add("branch_derivative_at_x", branch_derivative(m, x.approx));
            }
            emit(map_out, t.render(map_out.format));
        } else if (*cf_cmd) {
            Point b = parse_point(cf_beta);
            if (!b.cf) throw InputError("point has no continued fraction expansion (it must lie in (0,1])");
            const ContinuedFraction& cf = *b.cf;
            KeyTable t;
            t.add("expansion", cf.str(cf_depth));
            if (b.exact) t.add("exact_value", b.exact->str());
            t.add("value", b.approx);
            std::size_t depth = cf_depth;
            if (auto len = cf.length()) depth = std::min(depth, *len);
            ConvergentTable ct(cf, depth);
            for (std::size_t i = 1; i <= ct.depth(); ++i) {
                const long li = static_cast<long>(i);
                t.add("entry", cf.entry(i).get_str(), std::to_string(i));
                t.add("convergent", ct.p(li).get_str() + "/" + ct.q(li).get_str(), std::to_string(i));
            }
            if (cf_n > 0) {
                t.add("farey_coding", word_str(farey_coding(cf, cf_n)));
                FareyBranch fb = farey_branch_closed_form(cf, cf_n);
                t.add("bookkeeping_k", std::to_string(fb.bookkeeping.k));
                t.add("bookkeeping_m", std::to_string(fb.bookkeeping.m));
                t.add("bookkeeping_r", std::to_string(fb.bookkeeping.r));
                t.add("branch_matrix", fb.matrix.str());
            }
            if (cf.kind() != ContinuedFraction::Kind::Generator) {
                OmegaLimit om = omega_limit_preperiodic(cf);
                for (std::size_t i = 0; i < om.points.size(); ++i) t.add("omega_limit", om.points[i].str(), std::to_string(i));
                t.add("period", std::to_string(om.period));
                t.add("preperiod", std::to_string(om.preperiod));
            }
            if (cf_alpha > 0 && !cf.is_finite()) {
                AlphaTypeReport at = alpha_type_test(cf, cf_alpha, 200);
                t.add("alpha_type", at.verdict == AlphaTypeVerdict::CertifiedYes ? "certified" : "inconclusive");
                t.add("alpha_type_reason", at.reason);
            }
            emit(cf_out, t.render(cf_out.format));
        } else if (*tail_cmd) {
            MapParameter r(tail_r);
            Point b = parse_point(tail_beta), x = parse_point(tail_x);
            ExperimentSeries s;
            s.metadata = {{"r", format_double(tail_r)}, {"alpha", format_double(tail_alpha)}, {"beta", b.text},
                          {"normalization", r.is_farey() ? "ln(n) * value" : "value"}};
            std::optional<FareyTail> ft;
            if (r.is_farey()) ft.emplace(b, tail_alpha);
            for (std::size_t n = tail_from; n <= tail_to; ++n) {
                ExtendedReal v = ft ? (*ft)(n, x) : tail_eval(r, b, tail_alpha, n, x);
                ExtendedReal norm = r.is_farey() ? v * ExtendedReal(std::log(static_cast<double>(n))) : v;
                s.records.push_back({n, x.approx, v, norm});
            }
            emit(tail_out, render_series(s, tail_out.format));
        } else if (*it_cmd) {
            MapParameter r(it_r);
            Observable f = parse_observable(it_obs);
            const bool hat = it_operator == "hat";
            if (hat && !r.is_farey()) throw InputError("the Farey dual operator needs r = 1");
            ExperimentSeries s;
            s.metadata = {{"r", format_double(it_r)}, {"observable", f.describe()}, {"operator", it_operator}, {"backend", it_backend}};
            std::vector<double> xs;
            for (const auto& p : it_x) xs.push_back(parse_point(p).approx);
            if (it_backend == "grid") {
                GridSpec g{it_gridN, it_grading};
                s.metadata["backend"] = "grid:N=" + std::to_string(g.N) + ":p=" + format_double(g.grading);
                GridOperator op = hat ? GridOperator::farey_dual(g) : GridOperator::perron_frobenius(r, g);
                if (f.has_singularity_in(0.0, 1.0)) throw DomainError("grid backend refuses observables with a singularity in [0,1]");
                GridFunction gf = GridFunction::sample(g, [&](double y) { return f.value(y); });
                for (std::size_t n = 1; n <= it_to; ++n) {
                    gf = op.apply(gf);
                    if (n < it_from) continue;
                    for (double x : xs) s.records.push_back({n, x, gf(x), gf(x)});
                }
            } else {
                for (double x : xs)
                    for (std::size_t n = it_from; n <= it_to; ++n) {
                        ExtendedReal v = hat ? transfer_hat_tree(f, x, n) : pf_iterate_tree(r, f, x, n);
                        s.records.push_back({n, x, v, v});
                    }
                std::stable_sort(s.records.begin(), s.records.end(),
                                 [](const SeriesRecord& a, const SeriesRecord& b) { return a.n < b.n; });
            }
            emit(it_out, render_series(s, it_out.format));
        } else if (*rn_cmd) {
            KeyTable t;
            Observable oneY = Observable::indicator(0.5, 1.0);
            Observable intY = Observable::indicator(0.5, 1.0, false, false);
            if (rn_x >= 0.5 && rn_x <= 1.0) t.add("first_return_time", std::to_string(first_return_time(rn_x)));
            t.add("R_n(1_Y)(x)", first_return_operator(oneY, rn_n, rn_x), std::to_string(rn_n));
            t.add("r1_partial_sum(1_intY)(x)", r1_partial_sum(intY, rn_m, rn_x), std::to_string(rn_m));
            t.add("closed_form_xm/(1+mx)", rn_x * static_cast<double>(rn_m) / (1 + static_cast<double>(rn_m) * rn_x),
                  std::to_string(rn_m));
            t.add("mu1(U_k)", mu1_u(rn_k), std::to_string(rn_k));
            SupVariation tab = g_k_table(rn_k), comp = g_k_computed(rn_k);
            t.add("g_k_sup_table", tab.sup, std::to_string(rn_k));
            t.add("g_k_sup_computed", comp.sup, std::to_string(rn_k));
            t.add("g_k_variation_table", tab.variation, std::to_string(rn_k));
            t.add("g_k_variation_computed", comp.variation, std::to_string(rn_k));
            RenewalBoundReport br = renewal_bound_report(oneY, rn_n);
            t.add("bv_norm_R_n(1_Y)", br.rn_bv_norm, std::to_string(rn_n));
            t.add("bound_8(n+1)^-3||1_Y||", br.bound, std::to_string(rn_n));
            t.add("bound_ratio", br.ratio, std::to_string(rn_n));
            emit(rn_out, t.render(rn_out.format));
        } else if (*ex_cmd) {
            if (!ex_schedule.empty()) {
                std::size_t to = ex.n_to ? ex.n_to : (ex.r == 1.0 ? std::size_t{1} << 16 : 16);
                ex.schedule = ex_schedule == "dyadic" ? dyadic_schedule(ex.n_from, to) : linear_schedule(ex.n_from, to);
            }
            ExperimentReport rep = run_experiment(ex);
            emit(ex_out, ex_out.format == "json" ? rep.to_json() : rep.to_csv());
        }
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
