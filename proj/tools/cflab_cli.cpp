// Command-line front end for the continued-fraction laboratory.
//
// Exit codes: 0 success; 2 bad input (arguments, power-sum syntax, config,
// domain preconditions); 3 a computational budget was exhausted; 4 a fit,
// validation, or membership check failed; 1 unexpected internal error.

#include "cflab/approx.hpp"
#include "cflab/cf.hpp"
#include "cflab/hypothesis.hpp"
#include "cflab/lab.hpp"
#include "cflab/powersum.hpp"
#include "cflab/rational.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

using namespace cflab;

int exit_code_for(Errc c) {
    switch (c) {
        case Errc::parse_error:
        case Errc::invalid_argument:
        case Errc::zero_root:
        case Errc::unit_mismatch:
        case Errc::zero_power_sum:
        case Errc::negative_root:
        case Errc::negative_leading:
        case Errc::perfect_square:
        case Errc::square_power_sum:
        case Errc::non_integer_value:
            return 2;
        case Errc::step_budget_exceeded:
        case Errc::precision_exhausted:
            return 3;
        case Errc::non_positive_tail:
        case Errc::no_recurrence:
        case Errc::repeated_root:
        case Errc::non_integer_root:
        case Errc::non_integer_coefficient:
        case Errc::inconsistent:
        case Errc::holdout_mismatch:
        case Errc::fit_failed:
        case Errc::membership_failed:
            return 4;
    }
    return 1;
}

// "a..b" with a <= b.
std::pair<long, long> parse_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos)
        throw Error(Errc::parse_error, "range must look like a..b, got '" + s + "'");
    long lo = static_cast<long>(parse_int(s.substr(0, dots)).get_si());
    long hi = static_cast<long>(parse_int(s.substr(dots + 2)).get_si());
    if (lo > hi)
        throw Error(Errc::invalid_argument, "empty range '" + s + "'");
    return {lo, hi};
}

void print_expansion(const std::string& label, const CFExpansion& cf) {
    std::cout << label << " = " << cf.str() << "\n";
    if (!cf.preperiod.empty())
        std::cout << "preperiod " << cf.preperiod.size() << "\n";
    std::cout << "period " << cf.period.size() << "\n";
}

int cmd_cf_sqrt(const std::string& d_text, uint64_t budget) {
    mpz_class D = parse_int(d_text);
    print_expansion("sqrt(" + D.get_str() + ")", sqrt_cf(D, budget));
    return 0;
}

int cmd_cf_surd(const std::string& p, const std::string& q, const std::string& d,
                uint64_t budget) {
    QuadSurd s(parse_int(p), parse_int(q), parse_int(d));
    print_expansion(s.str(), surd_cf(s, budget));
    return 0;
}

int cmd_ps_eval(const std::string& alpha_text, unsigned long n) {
    PowerSum alpha = PowerSum::parse(alpha_text);
    std::cout << alpha.str() << " at " << n << " = " << to_string(alpha.eval(n)) << "\n";
    return 0;
}

int cmd_hypothesis(const std::string& alpha_text) {
    PowerSum alpha = PowerSum::parse(alpha_text);
    PeriodForecast f = forecast_period(alpha);
    std::cout << f.str() << "\n";
    return 0;
}

int cmd_eta(const std::string& alpha_text, const std::string& beta_text,
            const std::string& gamma_text, unsigned r, const std::string& t_text,
            const std::string& check_range) {
    PowerSum alpha = PowerSum::parse(alpha_text);
    PowerSum beta = PowerSum::parse(beta_text);
    PowerSum gamma = PowerSum::parse(gamma_text);
    mpq_class t = parse_rational(t_text);
    SurdRatioApprox a = approximate_surd_ratio(alpha, beta, gamma, r, t);
    std::cout << "approximation(m) = " << a.approx.str() << "\n";
    std::cout << "sqrt series order " << a.sqrt_order << ", inverse series order "
              << a.inverse_order << "\n";
    std::cout << "error decays like (" << to_string(a.error_root) << ")^m, target ("
              << to_string(mpq_class(t * t)) << ")^m\n";
    if (!check_range.empty()) {
        auto [lo, hi] = parse_range(check_range);
        if (lo < 0) throw Error(Errc::invalid_argument, "check range must be nonnegative");
        ApproxCheck chk = check_surd_ratio(a, alpha, beta, gamma, r,
                                           static_cast<unsigned long>(lo),
                                           static_cast<unsigned long>(hi));
        for (const auto& row : chk.rows) {
            std::cout << "m=" << row.m << " ";
            if (row.skipped)
                std::cout << "skipped\n";
            else
                std::cout << "|error|/target^(2m) <= " << row.ratio << "\n";
        }
        std::cout << "bounded: " << (chk.bounded ? "yes" : "no") << "\n";
        if (!chk.bounded)
            throw Error(Errc::holdout_mismatch, "error/target ratio is not bounded");
    }
    return 0;
}

int cmd_fit(const std::string& alpha_text, unsigned r, const std::string& m_range,
            size_t window, uint64_t budget, bool no_integrality) {
    PowerSum alpha = PowerSum::parse(alpha_text);
    auto [lo, hi] = parse_range(m_range);
    ScanOptions sopt;
    sopt.step_budget = budget;
    PeriodScan scan = period_scan(alpha, r, lo, hi, sopt);
    FitOptions fopt;
    fopt.window = window;
    fopt.integrality_required = !no_integrality;
    FunctionalCF fit = fit_functional_cf(scan, fopt);
    std::cout << "sqrt(" << alpha.str() << ") at n = 2m" << (r ? " + 1" : "") << ":\n";
    std::cout << fit.str() << "\n";
    return 0;
}

int cmd_experiment(const std::string& config_path) {
    ExperimentConfig cfg = ExperimentConfig::load(config_path);
    ExperimentResult res = run_experiment(cfg);
    std::cout << res.findings;
    std::cout << "csv: " << cfg.csv_path << "\n";
    std::cout << "findings: " << cfg.findings_path << "\n";
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact continued fractions of sqrt(power sum): scans, fits, approximations"};
    app.require_subcommand(1);

    // cf sqrt / cf surd
    auto* cf_cmd = app.add_subcommand("cf", "Expand a continued fraction exactly");
    cf_cmd->require_subcommand(1);
    std::string cf_d, cf_p, cf_q;
    uint64_t budget = cflab::kDefaultStepBudget;
    auto* cf_sqrt = cf_cmd->add_subcommand("sqrt", "CF of sqrt(D) for nonsquare D > 0");
    cf_sqrt->add_option("D", cf_d, "radicand")->required();
    cf_sqrt->add_option("--budget", budget, "max quotients before giving up");
    auto* cf_surd = cf_cmd->add_subcommand("surd", "CF of (P + sqrt(D))/Q");
    cf_surd->add_option("P", cf_p)->required();
    cf_surd->add_option("Q", cf_q)->required();
    cf_surd->add_option("D", cf_d)->required();
    cf_surd->add_option("--budget", budget, "max quotients before giving up");

    // ps eval
    auto* ps_cmd = app.add_subcommand("ps", "Power-sum utilities");
    ps_cmd->require_subcommand(1);
    std::string ps_alpha;
    unsigned long ps_n = 0;
    auto* ps_eval = ps_cmd->add_subcommand("eval", "Evaluate a power sum at an index");
    ps_eval->add_option("alpha", ps_alpha, "power sum, e.g. '3*2^n + 1*1^n'")->required();
    ps_eval->add_option("n", ps_n, "index")->required();

    // hypothesis
    std::string hy_alpha;
    auto* hy = app.add_subcommand(
        "hypothesis", "Square-approximability test on both parity classes");
    hy->add_option("alpha", hy_alpha, "power sum in n")->required();

    // eta
    std::string eta_alpha, eta_beta, eta_gamma, eta_t, eta_check;
    unsigned eta_r = 0;
    auto* eta = app.add_subcommand(
        "eta", "Closed-form approximation of (sqrt(alpha)+beta)/gamma on n = 2m+r");
    eta->add_option("alpha", eta_alpha)->required();
    eta->add_option("beta", eta_beta)->required();
    eta->add_option("gamma", eta_gamma)->required();
    eta->add_option("r", eta_r, "parity class, 0 or 1")->required();
    eta->add_option("t", eta_t, "decay target in (0,1), e.g. 1/9")->required();
    eta->add_option("--check", eta_check, "numerically verify over m range a..b");

    // fit
    std::string fit_alpha, fit_range;
    unsigned fit_r = 0;
    size_t fit_window = 5;
    bool fit_no_integrality = false;
    auto* fit = app.add_subcommand(
        "fit", "Scan periods of sqrt(alpha(2m+r)) and fit each quotient as a power sum");
    fit->add_option("alpha", fit_alpha)->required();
    fit->add_option("r", fit_r, "parity class, 0 or 1")->required();
    fit->add_option("--m-range", fit_range, "scan range a..b")->required();
    fit->add_option("--window", fit_window, "stabilization window");
    fit->add_option("--budget", budget, "max quotients per row");
    fit->add_flag("--no-integrality", fit_no_integrality,
                  "allow rational coefficients in fitted quotients");

    // experiment run
    auto* ex_cmd = app.add_subcommand("experiment", "Config-driven experiment");
    ex_cmd->require_subcommand(1);
    std::string ex_config;
    auto* ex_run = ex_cmd->add_subcommand("run", "Run scan -> fit -> reports");
    ex_run->add_option("config", ex_config, "key = value config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cf_sqrt->parsed()) return cmd_cf_sqrt(cf_d, budget);
        if (cf_surd->parsed()) return cmd_cf_surd(cf_p, cf_q, cf_d, budget);
        if (ps_eval->parsed()) return cmd_ps_eval(ps_alpha, ps_n);
        if (hy->parsed()) return cmd_hypothesis(hy_alpha);
        if (eta->parsed())
            return cmd_eta(eta_alpha, eta_beta, eta_gamma, eta_r, eta_t, eta_check);
        if (fit->parsed())
            return cmd_fit(fit_alpha, fit_r, fit_range, fit_window, budget,
                           fit_no_integrality);
        if (ex_run->parsed()) return cmd_experiment(ex_config);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const cflab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
