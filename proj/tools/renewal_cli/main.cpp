#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "renewal/expansion.hpp"
#include "renewal/model_io.hpp"
#include "renewal/oracles.hpp"
#include "renewal/ruin.hpp"
#include "renewal/validate.hpp"

namespace {

using nlohmann::json;
using namespace renewal;

// "a:b:step" (inclusive of a, exclusive of b + step/2) or a comma list.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> xs;
    if (spec.find(':') != std::string::npos) {
        double a, b, step;
        char c1, c2;
        std::istringstream in(spec);
        if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw Error("x grid: expected a:b:step with step > 0, got \"" + spec + "\"");
        for (double x = a; x < b + step / 2; x += step) xs.push_back(x);
    } else {
        std::istringstream in(spec);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) continue;
            xs.push_back(std::stod(tok));
        }
    }
    if (xs.empty()) throw Error("x grid: empty");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1]) throw Error("x grid: must be strictly increasing");
    return xs;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << text;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json root_to_json(const Root& r) {
    return json{{"re", r.location.real()},
                {"im", r.location.imag()},
                {"multiplicity", r.multiplicity},
                {"g_prime_re", r.g_prime.real()},
                {"g_prime_im", r.g_prime.imag()}};
}

int cmd_roots(const std::string& model_path, double r0, double im_max, bool has_im,
              const std::string& out) {
    Distribution model = load_model_file(model_path);
    SearchRegion region{r0, model.lattice(),
                        has_im ? std::optional<double>(im_max) : std::nullopt};
    std::vector<Root> roots = find_roots(model, region);
    json arr = json::array();
    for (const Root& r : roots) arr.push_back(root_to_json(r));
    write_text(out, arr.dump(2) + "\n");
    return 0;
}

int cmd_expand(const std::string& what, const std::string& model_path, double r0,
               const std::string& xspec, const std::string& out) {
    Distribution model = load_model_file(model_path);
    std::vector<double> xs = parse_grid(xspec);

    Expansion e = (what == "density")  ? expand_density(model, r0)
                  : (what == "mass")   ? expand_mass(model, r0)
                                       : expand_v(model, r0);
    exact_mode_check(model, e);
    if (e.growth_warning)
        std::cerr << "note: the growth diagnostic suggests sup |1/(1-g)| may be unbounded in "
                     "this strip; the remainder contract may not hold\n";

    std::ostringstream csv;
    csv << "x,value,linear_part";
    for (std::size_t i = 1; i <= e.terms.size(); ++i) csv << ",term_" << i;
    csv << ",remainder_bound\n";
    for (double x : xs) {
        EvalBreakdown b = evaluate_with_breakdown(e, x);
        double linear = b.linear_part;
        double value = b.value;
        if (what == "U") {
            linear += e.slope * x + e.intercept;
            value += e.slope * x + e.intercept;
        }
        csv << format_double(x) << "," << format_double(value) << "," << format_double(linear);
        for (double t : b.term_values) csv << "," << format_double(t);
        csv << "," << format_double(b.remainder_scale) << "\n";
    }
    write_text(out, csv.str());
    return 0;
}

json ruin_terms_json(const RuinExpansion& e) {
    json terms = json::array();
    for (const RuinTerm& t : e.terms) {
        json coeff = json::array();
        for (const Complex& c : t.coeff) coeff.push_back({{"re", c.real()}, {"im", c.imag()}});
        terms.push_back({{"exponent_re", t.exponent.real()},
                         {"exponent_im", t.exponent.imag()},
                         {"multiplicity", t.multiplicity},
                         {"paired", t.paired},
                         {"coeff", coeff}});
    }
    return json{{"kappa", e.kappa},
                {"remainder_exponent", e.remainder_exponent},
                {"x_min", e.x_min},
                {"terms", terms}};
}

void maybe_write_curve(const std::string& csv_path, const RuinExpansion& e,
                       const std::vector<double>& xs) {
    if (csv_path.empty() || xs.empty()) return;
    std::ostringstream csv;
    csv << "x,psi\n";
    for (double x : xs) csv << format_double(x) << "," << format_double(evaluate(e, x)) << "\n";
    write_text(csv_path, csv.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-order renewal-function expansions and ruin probabilities"};
    app.require_subcommand(1);

    // roots
    std::string model_path, out_path, xspec, csv_path;
    double r0 = 1.0, im_max = 0.0;
    auto* roots_cmd = app.add_subcommand("roots", "solve g(z)=1 in a strip");
    roots_cmd->add_option("--model", model_path, "model JSON file")->required();
    roots_cmd->add_option("--r0", r0, "strip abscissa")->required();
    auto* im_opt = roots_cmd->add_option("--im-max", im_max, "non-lattice box half-height");
    roots_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

    // expand
    std::string expand_what;
    auto* expand_cmd = app.add_subcommand("expand", "renewal-function expansions");
    expand_cmd->add_option("what", expand_what, "one of v|U|density|mass")
        ->required()
        ->check(CLI::IsMember({"v", "U", "density", "mass"}));
    expand_cmd->add_option("--model", model_path, "model JSON file")->required();
    expand_cmd->add_option("--r0", r0, "strip abscissa")->required();
    expand_cmd->add_option("--x", xspec, "comma list or a:b:step")->required();
    expand_cmd->add_option("--out", out_path, "write CSV here instead of stdout");

    // ruin
    auto* ruin_cmd = app.add_subcommand("ruin", "ruin-probability expansions");
    ruin_cmd->require_subcommand(1);
    std::string claims_path, m1_path, m2_path;
    double alpha = 1.0, premium = 1.0, rr = 1.0, q = 1.0;
    double alpha1 = 1.0, c1 = 1.0, alpha2 = 1.0, c2 = 1.0;

    auto* rc = ruin_cmd->add_subcommand("continuous", "compound Poisson model");
    rc->add_option("--claims", claims_path, "claim law JSON file")->required();
    rc->add_option("--alpha", alpha, "Poisson intensity")->required();
    rc->add_option("--premium", premium, "premium rate c")->required();
    rc->add_option("--r", rr, "strip abscissa for the tilted transform")->required();
    rc->add_option("--x", xspec, "curve grid (comma list or a:b:step)");
    rc->add_option("--csv", csv_path, "write the psi curve CSV here");
    rc->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* rd = ruin_cmd->add_subcommand("discrete", "binomial model");
    rd->add_option("--claims", claims_path, "claim pmf JSON file")->required();
    rd->add_option("--r", rr, "fundamental-domain abscissa")->required();
    rd->add_option("--x", xspec, "curve grid");
    rd->add_option("--csv", csv_path, "write the psi curve CSV here");
    rd->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* rb = ruin_cmd->add_subcommand("bivariate", "two-company dominance ordering");
    rb->add_option("--m1", m1_path, "company-1 claim law JSON")->required();
    rb->add_option("--alpha1", alpha1, "company-1 intensity")->required();
    rb->add_option("--c1", c1, "company-1 premium")->required();
    rb->add_option("--m2", m2_path, "company-2 claim law JSON")->required();
    rb->add_option("--alpha2", alpha2, "company-2 intensity")->required();
    rb->add_option("--c2", c2, "company-2 premium")->required();
    rb->add_option("--q", q, "direction x2/x1")->required();
    rb->add_option("--x", xspec, "curve grid for the two-term evaluation");
    rb->add_option("--csv", csv_path, "write the curve CSV here");
    rb->add_option("--out", out_path, "write JSON here instead of stdout");

    // validate
    std::string suite = "all", json_path;
    std::uint64_t seed = 42;
    auto* val_cmd = app.add_subcommand("validate", "cross-check expansions against oracles");
    val_cmd->add_option("--suite", suite, "lattice|continuous|ruin|bivariate|all")
        ->check(CLI::IsMember({"lattice", "continuous", "ruin", "bivariate", "all"}));
    val_cmd->add_option("--seed", seed, "Monte Carlo seed");
    val_cmd->add_option("--json", json_path, "also write a machine-readable report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (roots_cmd->parsed())
            return cmd_roots(model_path, r0, im_max, im_opt->count() > 0, out_path);
        if (expand_cmd->parsed()) return cmd_expand(expand_what, model_path, r0, xspec, out_path);
        if (ruin_cmd->parsed()) {
            if (rc->parsed()) {
                auto model =
                    ContinuousRiskModel::build(load_model_file(claims_path), alpha, premium);
                RuinExpansion e = ruin_continuous(model, rr);
                write_text(out_path, ruin_terms_json(e).dump(2) + "\n");
                maybe_write_curve(csv_path, e, xspec.empty() ? std::vector<double>{}
                                                             : parse_grid(xspec));
            } else if (rd->parsed()) {
                auto model = DiscreteRiskModel::build(load_model_file(claims_path));
                RuinExpansion e = ruin_discrete(model, rr);
                write_text(out_path, ruin_terms_json(e).dump(2) + "\n");
                maybe_write_curve(csv_path, e, xspec.empty() ? std::vector<double>{}
                                                             : parse_grid(xspec));
            } else {
                auto m1 = ContinuousRiskModel::build(load_model_file(m1_path), alpha1, c1);
                auto m2 = ContinuousRiskModel::build(load_model_file(m2_path), alpha2, c2);
                auto biv = BivariateModel::build(std::move(m1), std::move(m2), q);
                BivariateOutcome o = ruin_bivariate(biv);
                json doc{{"region", o.region},
                         {"degenerate", o.degenerate},
                         {"d0", {{"re", o.d0.real()}, {"im", o.d0.imag()}}},
                         {"D0", {{"re", o.coeff0.real()}, {"im", o.coeff0.imag()}}},
                         {"d1", {{"re", o.d1.real()}, {"im", o.d1.imag()}}},
                         {"D1", {{"re", o.coeff1.real()}, {"im", o.coeff1.imag()}}},
                         {"orderings", o.orderings}};
                write_text(out_path, doc.dump(2) + "\n");
                if (!csv_path.empty() && !xspec.empty()) {
                    std::ostringstream csv;
                    csv << "x,psi_or_two_term\n";
                    for (double x : parse_grid(xspec))
                        csv << format_double(x) << "," << format_double(o.evaluate(x)) << "\n";
                    write_text(csv_path, csv.str());
                }
            }
            return 0;
        }
        if (val_cmd->parsed()) {
            ValidationReport report = run_validation(suite, seed);
            print_validation_table(report, std::cout);
            if (!json_path.empty()) write_text(json_path, validation_report_json(report) + "\n");
            return report.all_pass() ? 0 : 2;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
