#include "renewal/validate.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "renewal/expansion.hpp"
#include "renewal/oracles.hpp"
#include "renewal/ruin.hpp"

namespace renewal {

namespace {

struct Collector {
    ValidationReport report;

    void close(const std::string& suite, const std::string& name, double value, double reference,
               double tol, const std::string& detail = "") {
        ValidationCheck c{suite, name, std::abs(value - reference) <= tol, value, reference, tol,
                          detail};
        report.checks.push_back(std::move(c));
    }
    void truth(const std::string& suite, const std::string& name, bool ok,
               const std::string& detail = "") {
        report.checks.push_back(ValidationCheck{suite, name, ok, ok ? 1.0 : 0.0, 1.0, 0.0, detail});
    }
};

void suite_lattice(Collector& col) {
    // negative binomial mass expansions against the convolution recursion
    for (int n : {2, 3}) {
        Distribution nb = Distribution::negative_binomial(0.4, n);
        Expansion mass = expand_mass(nb, 4.0);
        std::vector<double> u = renewal_mass_exact(nb.pmf_table(1e-15), 50);
        double worst = 0;
        for (int k = 0; k <= 50; ++k)
            worst = std::max(worst, std::abs(evaluate(mass, k) - u[k]));
        col.close("lattice", "negbin(0.4," + std::to_string(n) + ") mass vs recursion", worst, 0.0,
                  1e-9);
    }
    // geometric: u_0 = 1, u_k = p for k >= 1
    {
        Distribution geo = Distribution::geometric(0.5);
        Expansion mass = expand_mass(geo, 0.5);
        std::vector<double> u = renewal_mass_exact(geo.pmf_table(1e-15), 30);
        double worst = 0;
        for (int k = 0; k <= 30; ++k)
            worst = std::max(worst, std::abs(evaluate(mass, k) - u[k]));
        col.close("lattice", "geometric(0.5) mass vs recursion", worst, 0.0, 1e-9);
        col.close("lattice", "geometric(0.5) u_1 = 1/mu", u[1], 0.5, 1e-14);
    }
    // deterministic unit step: u identically 1
    {
        std::vector<double> u = renewal_mass_exact({0.0, 1.0}, 20);
        double worst = 0;
        for (double v : u) worst = std::max(worst, std::abs(v - 1.0));
        col.close("lattice", "delta_1 recursion u == 1", worst, 0.0, 1e-15);
    }
}

void suite_continuous(Collector& col) {
    // Erlang-2(2): renewal density 1 - e^{-4x} along three independent paths
    Distribution erl = Distribution::erlang(2, 2.0);
    Expansion dens = expand_density(erl, 5.0);
    double worst_closed = 0, worst_pt = 0;
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        double closed = 1.0 - std::exp(-4.0 * x);
        worst_closed = std::max(worst_closed, std::abs(evaluate(dens, x) - closed));
        double pt = phase_type_renewal_density({1.0, 0.0}, {{-2.0, 2.0}, {0.0, -2.0}}, x);
        worst_pt = std::max(worst_pt, std::abs(pt - closed));
    }
    col.close("continuous", "erlang(2,2) residue density vs closed form", worst_closed, 0.0, 1e-8);
    col.close("continuous", "erlang(2,2) phase-type density vs closed form", worst_pt, 0.0, 1e-8);
    {
        std::vector<double> grid = renewal_grid_continuous(erl, 3.0, 1e-3);
        double x = 2.0;
        double closed = x + 0.75 + 0.25 * std::exp(-4.0 * x);
        col.close("continuous", "erlang(2,2) grid renewal function", grid[2000], closed, 1e-4);
    }
    {
        Distribution uni = Distribution::uniform01();
        Expansion v = expand_v(uni, 4.5);
        GridRichardson grid = renewal_grid_richardson(uni, 3.0, 1e-3);
        double u_expansion = evaluate_renewal_function(v, 3.0);
        col.close("continuous", "uniform01 U(3) expansion vs grid oracle", u_expansion,
                  grid.value.back(), 2e-3);
    }
    {
        Distribution expo = Distribution::exponential(2.0);
        std::vector<double> grid = renewal_grid_continuous(expo, 5.0, 1e-3);
        col.close("continuous", "exponential(2) grid U(5) = 1 + 2x", grid.back(), 11.0, 1e-5);
    }
}

void suite_ruin(Collector& col, std::uint64_t seed) {
    // exponential claims: single exact term alpha/(c lambda) e^{-(lambda-alpha/c)x}
    {
        auto model = ContinuousRiskModel::build(Distribution::exponential(3.0), 1.0, 1.0);
        RuinExpansion e = ruin_continuous(model, 2.0);
        col.truth("ruin", "exponential claims: single term", e.terms.size() == 1);
        col.close("ruin", "exponential claims kappa", model.kappa, 2.0, 1e-12);
        col.close("ruin", "exponential claims C0", e.terms[0].coeff[0].real(), 1.0 / 3.0, 1e-12);
        McEstimate mc = ruin_mc_continuous(model, 1.0, 100000, 1e7, seed);
        double truth = (1.0 / 3.0) * std::exp(-2.0);
        col.close("ruin", "exponential claims MC at x=1 (3 sigma)", mc.value, truth,
                  3.0 * mc.std_err + 1e-12);
    }
    // discrete {0,2} claims: DP ratio converges to the term-0 coefficient
    {
        auto model = DiscreteRiskModel::build(Distribution::discrete_pmf({0.7, 0.0, 0.3}));
        col.close("ruin", "discrete {0,2} kappa = ln(7/3)", model.kappa, std::log(7.0 / 3.0),
                  1e-12);
        RuinExpansion e = ruin_discrete(model, 1.0);
        std::vector<double> dp = ruin_discrete_dp(model.claims, 30);
        double ratio = dp[30] * std::exp(model.kappa * 30);
        col.close("ruin", "discrete {0,2} DP ratio vs C at x=30", ratio,
                  e.terms[0].coeff[0].real(), 1e-3);
    }
    // stop-loss: Lundberg residual and CL-constant route agreement
    {
        auto model = ContinuousRiskModel::build(Distribution::truncated_exponential(1.0, 2.0), 1.0,
                                                1.5);
        double residual = std::abs(model.ladder.mgf(0.0).real() - 1.0);
        col.close("ruin", "stop-loss ladder law integrates to 1", residual, 0.0, 1e-10);
        RuinExpansion e = ruin_continuous(model, 2.0);
        col.close("ruin", "stop-loss term0 == CL constant", e.terms[0].coeff[0].real(),
                  cramer_lundberg_constant(model), 0.0);
    }
}

void suite_bivariate(Collector& col, std::uint64_t seed) {
    const double lambda = 1.0, d = 2.0, alpha = 1.0, c1 = 1.5, c2 = 0.5;
    auto m1 = ContinuousRiskModel::build(Distribution::truncated_exponential(lambda, d), alpha, c1);
    auto m2 = ContinuousRiskModel::build(Distribution::exponential(lambda),
                                         alpha * std::exp(-lambda * d), c2);
    // coarse q sweep: exactly three regions, monotone in q
    std::vector<std::string> labels;
    for (int i = 0; i < 24; ++i) {
        double q = 0.1 + 2.9 * i / 23.0;
        auto biv = BivariateModel::build(m1, m2, q);
        auto out = ruin_bivariate(biv);
        if (labels.empty() || labels.back() != out.region) labels.push_back(out.region);
    }
    col.truth("bivariate", "stop-loss pair sweeps three regions",
              labels.size() == 3, "saw " + std::to_string(labels.size()));
    // sandwich at one point per extreme region with a small Monte Carlo run
    for (double q : {0.4, 2.5}) {
        double x = 8.0;
        auto biv = BivariateModel::build(m1, m2, q);
        auto out = ruin_bivariate(biv);
        McEstimate orr = ruin_mc_or_stoploss(lambda, d, alpha, c1, c2, x, q * x, 20000, seed);
        RuinExpansion e1 = ruin_continuous(m1, 2.0);
        RuinExpansion e2 = ruin_continuous(m2, 2.0);
        double psi1 = evaluate(e1, x), psi2 = evaluate(e2, q * x);
        bool sandwich = orr.value >= psi1 - 3 * orr.std_err - 1e-6 &&
                        orr.value <= psi1 + psi2 + 3 * orr.std_err + 1e-6;
        std::ostringstream os;
        os << "psi1=" << psi1 << " or=" << orr.value << " psi1+psi2=" << psi1 + psi2;
        col.truth("bivariate", "sandwich at q=" + std::to_string(q), sandwich, os.str());
        col.truth("bivariate", "two-term eval finite at q=" + std::to_string(q),
                  std::isfinite(out.evaluate(x)));
    }
}

} // namespace

ValidationReport run_validation(const std::string& suite, std::uint64_t seed) {
    Collector col;
    col.report.seed = seed;
    bool all = suite == "all";
    if (all || suite == "lattice") suite_lattice(col);
    if (all || suite == "continuous") suite_continuous(col);
    if (all || suite == "ruin") suite_ruin(col, seed);
    if (all || suite == "bivariate") suite_bivariate(col, seed);
    if (col.report.checks.empty())
        throw Error("run_validation: unknown suite \"" + suite +
                    "\" (expected lattice|continuous|ruin|bivariate|all)");
    return col.report;
}

void print_validation_table(const ValidationReport& report, std::ostream& os) {
    os << std::left << std::setw(12) << "suite" << std::setw(52) << "check" << std::setw(8)
       << "status"
       << "value / reference (tolerance)\n";
    for (const auto& c : report.checks) {
        os << std::left << std::setw(12) << c.suite << std::setw(52) << c.name << std::setw(8)
           << (c.pass ? "pass" : "FAIL") << std::setprecision(12) << c.value << " / "
           << c.reference << " (" << c.tolerance << ")";
        if (!c.detail.empty()) os << "  [" << c.detail << "]";
        os << "\n";
    }
    os << (report.all_pass() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
}

std::string validation_report_json(const ValidationReport& report) {
    nlohmann::json doc;
    doc["seed"] = report.seed;
    doc["all_pass"] = report.all_pass();
    doc["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        doc["checks"].push_back({{"suite", c.suite},
                                 {"name", c.name},
                                 {"pass", c.pass},
                                 {"value", c.value},
                                 {"reference", c.reference},
                                 {"tolerance", c.tolerance},
                                 {"detail", c.detail}});
    }
    return doc.dump(2);
}

} // namespace renewal
