// Acceptance harness: one self-contained check per shipped guarantee, each
// printed as a single PASS/FAIL line with its runtime.  Exits nonzero if any
// criterion fails or exceeds its time budget.

#include "cflab/approx.hpp"
#include "cflab/cf.hpp"
#include "cflab/hypothesis.hpp"
#include "cflab/interval.hpp"
#include "cflab/lab.hpp"
#include "cflab/powersum.hpp"
#include "cflab/rational.hpp"
#include "cflab/recurrence.hpp"
#include "cflab/sweep.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cflab;

namespace {

struct Failure {
    std::string what;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure{what};
}

PowerSum ps(const std::string& s) { return PowerSum::parse(s); }

double run_timed(std::function<void()> body) {
    auto t0 = std::chrono::steady_clock::now();
    body();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(bool(in), "cannot read back " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --- criterion bodies -------------------------------------------------------

// Functional CF families: 16^m + 1 -> [t; (2t)], 16^m + 2 -> [t; (t, 2t)],
// recovered by the scan+fit pipeline and exact row by row.
void criterion1() {
    double ta = run_timed([] {
        PeriodScan scan = period_scan(ps("1*4^n + 1*1^n"), 0, 1, 12);
        FunctionalCF fit = fit_functional_cf(scan);
        require(fit.R == 1, "alpha = 4^n+1: expected R = 1, got " + std::to_string(fit.R));
        require(fit.betas[0] == ps("1*4^m"), "alpha = 4^n+1: a0 != 4^m");
        require(fit.betas[1] == ps("2*4^m"), "alpha = 4^n+1: a1 != 2*4^m");
        for (long m = 1; m <= 8; ++m) {
            const ScanRow& row = scan.rows[static_cast<size_t>(m - 1)];
            mpz_class t = pow_z(4, static_cast<unsigned long>(m));
            require(row.status == RowStatus::ok, "alpha = 4^n+1: unusable row");
            require(row.a0 == t && row.period == std::vector<mpz_class>{2 * t},
                    "alpha = 4^n+1: row m=" + std::to_string(m) +
                        " differs from [t; (2t)]");
            unsigned long um = static_cast<unsigned long>(m);
            require(fit.betas[0].eval_int(um) == row.a0 &&
                        fit.betas[1].eval_int(um) == row.period[0],
                    "alpha = 4^n+1: fitted quotients not exact at m=" + std::to_string(m));
        }
    });
    require(ta < 10.0, "4^n+1 family exceeded 10 s");

    double tb = run_timed([] {
        PeriodScan scan = period_scan(ps("1*4^n + 2*1^n"), 0, 1, 12);
        FunctionalCF fit = fit_functional_cf(scan);
        require(fit.R == 2, "alpha = 4^n+2: expected R = 2, got " + std::to_string(fit.R));
        require(fit.betas[0] == ps("1*4^m"), "alpha = 4^n+2: a0 != 4^m");
        require(fit.betas[1] == ps("1*4^m"), "alpha = 4^n+2: a1 != 4^m");
        require(fit.betas[2] == ps("2*4^m"), "alpha = 4^n+2: a2 != 2*4^m");
        for (long m = 1; m <= 6; ++m) {
            const ScanRow& row = scan.rows[static_cast<size_t>(m - 1)];
            mpz_class t = pow_z(4, static_cast<unsigned long>(m));
            require(row.status == RowStatus::ok, "alpha = 4^n+2: unusable row");
            require(row.a0 == t && row.period == (std::vector<mpz_class>{t, 2 * t}),
                    "alpha = 4^n+2: row m=" + std::to_string(m) +
                        " differs from [t; (t, 2t)]");
        }
    });
    require(tb < 10.0, "4^n+2 family exceeded 10 s");
}

// Unbounded-period forecast for 2*4^n + 1, with the measured period lengths
// actually growing across the scanned range.
void criterion2() {
    PowerSum alpha = ps("2*4^n + 1*1^n");
    PeriodForecast fc = forecast_period(alpha);
    require(fc.overall == Forecast::unbounded_period, "forecast is not 'unbounded'");
    require(fc.even.holds && fc.odd.holds, "hypothesis must hold on both parity classes");

    PeriodScan scan = period_scan(alpha, 0, 1, 10);
    for (const ScanRow& row : scan.rows)
        require(row.status == RowStatus::ok, "unusable row in 2*16^m + 1 scan");

    // Cross-check the smallest instance against a hand oracle: sqrt(33).
    const ScanRow& first = scan.rows[0];
    require(first.value == 33 && first.a0 == 5 &&
                first.period == (std::vector<mpz_class>{1, 2, 1, 10}),
            "sqrt(33) row does not match [5; (1, 2, 1, 10)]");

    auto R = [&](long m) { return scan.rows[static_cast<size_t>(m - 1)].period_len; };
    uint64_t first3 = std::max({R(2), R(3), R(4)});
    uint64_t last3 = std::max({R(8), R(9), R(10)});
    require(last3 > first3,
            "period lengths do not grow: max(R(2..4)) = " + std::to_string(first3) +
                ", max(R(8..10)) = " + std::to_string(last3));
}

// Square-approximability witness for 2^n + 1: the even class admits the
// witness xi = 2^m with residual root 1 below threshold 2; the odd class has
// a non-square leading scalar, so the hypothesis holds there.
void criterion3() {
    ParityReport even = check_hypothesis(ps("1*2^n + 1*1^n"), 0);
    require(!even.holds, "even class: hypothesis should fail");
    require(even.xi.has_value() && *even.xi == ps("1*2^m"), "even class: xi != 2^m");
    require(even.residual_root.has_value() && *even.residual_root == 1,
            "even class: residual root != 1");
    require(even.threshold == 2, "even class: threshold != 2");

    ParityReport odd = check_hypothesis(ps("1*2^n + 1*1^n"), 1);
    require(odd.holds, "odd class: hypothesis should hold");
    require(odd.obstruction == Obstruction::non_square_leading_scalar,
            "odd class: expected the non-square leading scalar obstruction");
}

// Error decay of the truncated sqrt expansion: for sqrt(16^m + 4^m) with
// target 1/9, the order-4 approximation's error, scaled by 81^m, is
// certifiably non-increasing over m = 3..12 at 300-bit interval precision.
void criterion4() {
    PowerSum alpha = ps("1*4^n + 1*2^n");
    PowerSum beta = ps("0");
    PowerSum gamma = ps("1*1^n");
    SurdRatioApprox a = approximate_surd_ratio(alpha, beta, gamma, 0, mpq_class(1, 9));
    require(a.sqrt_order == 4, "expected sqrt truncation order 4, got " +
                                   std::to_string(a.sqrt_order));
    require(a.error_root == mpq_class(1, 256),
            "expected error decay root 1/256, got " + a.error_root.get_str());
    require(a.approx.pure_rational(), "approximation should carry no radical part");

    const mpfr_prec_t prec = 300;
    std::optional<Interval> prev;
    for (unsigned long m = 3; m <= 12; ++m) {
        mpz_class v = alpha.eval_int(2 * m);
        Interval x = sqrt_interval(mpq_class(v), prec);
        mpq_class eta = a.approx.rational_part.eval(m);
        Interval ratio = (x - Interval::from(eta, prec)).abs() *
                         Interval::from(mpq_class(pow_z(81, m)), prec);
        if (prev) {
            std::optional<int> s = (*prev - ratio).sign();
            require(s.has_value() && *s > 0,
                    "scaled error not certifiably decreasing at m=" + std::to_string(m));
        }
        prev = ratio;
    }

    // The generic checker agrees.
    ApproxCheck chk = check_surd_ratio(a, alpha, beta, gamma, 0, 3, 12);
    require(chk.declared_root_ok, "attained decay root exceeds the declared one");
    require(chk.bounded, "scaled error not bounded over the window");
}

// Structural identities across every nonsquare D up to 10^4: closing quotient
// 2*a0, trace identity over the tail convergents, unimodular convergents, and
// the 1/(q_i q_{i+1}) approximation bound for i <= 10.
void criterion5() {
    SweepOptions opt;
    opt.d_max = 10000;
    opt.convergent_checks = 11; // bound checked for i = 0..10
    SweepResult res = structural_sweep(opt);
    if (!res.clean()) {
        const SweepFailure& f = res.failures.front();
        require(false, "D=" + std::to_string(f.D) + ": " + f.what + " (and " +
                           std::to_string(res.failures.size() - 1) + " more)");
    }
    require(res.nonsquare_count == 9900,
            "expected 9900 nonsquare D, saw " + std::to_string(res.nonsquare_count));
}

// Fit round-trip: 200 seeded random power sums recovered exactly from 10
// samples; a sequence with no exact linear structure is rejected.
void criterion6() {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> n_terms(1, 3);
    std::uniform_int_distribution<int> root_pick(-9, 9);
    std::uniform_int_distribution<int> coeff_pick(-20, 20);

    for (int trial = 0; trial < 200; ++trial) {
        int k = n_terms(rng);
        std::vector<Term> terms;
        while (static_cast<int>(terms.size()) < k) {
            int c = root_pick(rng);
            if (c == 0) continue;
            bool dup = false;
            for (const Term& t : terms) dup = dup || t.root == c;
            if (dup) continue;
            int b = coeff_pick(rng);
            while (b == 0) b = coeff_pick(rng);
            terms.push_back({mpq_class(b), mpz_class(c)});
        }
        PowerSum planted(terms, IndexVar::m);

        SequenceSample s;
        s.m0 = 0;
        for (unsigned long m = 0; m < 10; ++m) s.values.push_back(planted.eval_int(m));
        RecurrenceFit fit = fit_power_sum(s, true);
        require(fit.fitted == planted,
                "trial " + std::to_string(trial) + ": recovered " + fit.fitted.str() +
                    ", planted " + planted.str());
    }

    // floor(sqrt(2) * 2^m) admits no exact recurrence.
    SequenceSample fl{0, {1, 2, 5, 11, 22, 45, 90, 181, 362, 724}};
    bool rejected = false;
    try {
        fit_power_sum(fl, true);
    } catch (const Error&) {
        rejected = true;
    }
    require(rejected, "negative control floor(sqrt(2)*2^m) was not rejected");
}

// Determinism: the same experiment config, run twice, produces byte-identical
// CSV and findings files.
void criterion7() {
    const std::string cfg_path = "/tmp/cflab_acceptance_c1.cfg";
    const std::string csv_path = "/tmp/cflab_acceptance_scan.csv";
    const std::string fnd_path = "/tmp/cflab_acceptance_findings.txt";
    {
        std::ofstream out(cfg_path, std::ios::binary);
        require(bool(out), "cannot write " + cfg_path);
        out << "alpha = 1*4^n + 1*1^n\n"
            << "r = 0\n"
            << "m_lo = 1\n"
            << "m_hi = 12\n"
            << "window = 5\n"
            << "csv_path = " << csv_path << "\n"
            << "findings_path = " << fnd_path << "\n";
    }
    ExperimentConfig cfg = ExperimentConfig::load(cfg_path);

    ExperimentResult first = run_experiment(cfg);
    require(first.exit_code == 0, "first run exited " + std::to_string(first.exit_code));
    std::string csv1 = slurp(csv_path), fnd1 = slurp(fnd_path);

    ExperimentResult second = run_experiment(cfg);
    std::string csv2 = slurp(csv_path), fnd2 = slurp(fnd_path);

    require(csv1 == csv2, "CSV differs between runs");
    require(fnd1 == fnd2, "findings differ between runs");
    require(first.csv == csv1 && second.csv == csv2, "returned CSV != written CSV");

    std::remove(cfg_path.c_str());
    std::remove(csv_path.c_str());
    std::remove(fnd_path.c_str());
}

struct Criterion {
    int number;
    const char* label;
    double budget_s;
    void (*body)();
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {1, "functional CF families 16^m+1 and 16^m+2 fitted exactly", 20.0, criterion1},
        {2, "unbounded-period forecast and growth for 2*16^m+1", 60.0, criterion2},
        {3, "square-approximability witness for 2^n+1, both parities", 1.0, criterion3},
        {4, "truncation error decay for sqrt(16^m+4^m) at target 1/9", 5.0, criterion4},
        {5, "structural sweep over all nonsquare D <= 10000", 60.0, criterion5},
        {6, "recurrence fit round-trip, 200 seeded sums + negative control", 30.0,
         criterion6},
        {7, "byte-identical experiment outputs across runs", 30.0, criterion7},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string fail;
        double elapsed = 0.0;
        try {
            elapsed = run_timed(c.body);
            if (elapsed >= c.budget_s)
                fail = "exceeded time budget of " + std::to_string(c.budget_s) + " s";
        } catch (const Failure& f) {
            fail = f.what;
        } catch (const std::exception& e) {
            fail = std::string("unexpected exception: ") + e.what();
        }
        char line[512];
        if (fail.empty()) {
            std::snprintf(line, sizeof(line), "PASS criterion %d: %s [%.2f s]", c.number,
                          c.label, elapsed);
        } else {
            std::snprintf(line, sizeof(line), "FAIL criterion %d: %s -- %s [%.2f s]",
                          c.number, c.label, fail.c_str(), elapsed);
            ++failures;
        }
        std::cout << line << std::endl;
    }
    if (failures == 0) {
        std::cout << "acceptance: all 7 criteria passed" << std::endl;
        return 0;
    }
    std::cout << "acceptance: " << failures << " criteria FAILED" << std::endl;
    return 1;
}
