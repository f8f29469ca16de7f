#pragma once

// Experiment drivers: scan the continued fractions of sqrt(alpha(2m+r))
// across a range of m, detect period-length stabilization, fit each partial
// quotient as a power sum in m (the "functional expansion"), and run the
// whole pipeline off a config file with deterministic CSV / findings output.
//
// Scan rows are independent, so the scan kernel has a serial and an OpenMP
// path computing identical results (rows land in preallocated slots).

#include "cflab/cf.hpp"
#include "cflab/errors.hpp"
#include "cflab/hypothesis.hpp"
#include "cflab/powersum.hpp"
#include "cflab/ratpowersum.hpp"
#include "cflab/recurrence.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cflab {

enum class RowStatus : unsigned char {
    ok,           // nonsquare positive integer value, period closed
    square,       // value is a perfect square: no CF period (recorded, excluded)
    nonpositive,  // value <= 0
    non_integer,  // alpha(2m+r) not an integer
    budget,       // period not closed within the step budget
};

const char* row_status_name(RowStatus s);

struct ScanRow {
    long m = 0;
    RowStatus status = RowStatus::ok;
    mpz_class value;                 // alpha(2m+r) when integer
    mpz_class a0;                    // floor sqrt (ok and square rows)
    uint64_t period_len = 0;         // ok rows
    std::vector<mpz_class> period_head; // first min(8,R) cycle quotients
    mpz_class period_last;
    bool full_period_stored = false;
    std::vector<mpz_class> period;   // full cycle, when R <= store threshold
    bool trace_checked = false;      // trace accumulators available for this row
    bool trace_ok = false;           // trace identity held (when checked)

    std::string digest() const; // "a1,a2,...|last" or "!status" marker
};

struct ScanOptions {
    uint64_t step_budget = kDefaultStepBudget;
    uint64_t store_full_threshold = 10000; // keep full cycle only if R <= this
    bool parallel = true;
};

struct PeriodScan {
    PowerSum alpha; // indexed by n
    unsigned r = 0;
    long m_lo = 0, m_hi = 0;
    std::vector<ScanRow> rows; // one per m, in order
};

PeriodScan period_scan(const PowerSum& alpha, unsigned r, long m_lo, long m_hi,
                       const ScanOptions& opt = {});

// First m from which the period length is constant through the end of the
// scan over >= window consecutive usable rows (skipped rows break the run).
// nullopt when no such tail run exists.
std::optional<long> detect_stabilization(const PeriodScan& scan, size_t window = 5);

// The functional expansion: period length R and power sums beta_0..beta_R
// with a_i(m) = beta_i(m) for every scanned m >= validated_from.
struct FunctionalCF {
    uint64_t R = 0;
    std::vector<PowerSum> betas; // size R+1, indexed by m
    long validated_from = 0;
    long validated_to = 0;
    std::string str() const;
};

struct FitOptions {
    size_t window = 5;                // stabilization window
    bool integrality_required = true; // quotient power sums must have integer coeffs
};

// Fits beta_i for i = 0..R from the stabilized tail of a scan.  The last two
// stabilized rows are held out of fitting entirely (validated only), the
// recurrence fitter internally holds out two more, and every stabilized row
// is then validated quotient-by-quotient.  Enforces beta_R == 2*beta_0.
// Errors: invalid_argument (no stabilization / too few rows), fit_failed
// (naming the quotient index), holdout_mismatch.
FunctionalCF fit_functional_cf(const PeriodScan& scan, const FitOptions& opt = {});

// Membership check floor(sqrt(alpha(2m+r))) in {eta(m), eta(m)-1} for an
// integer-valued power sum eta, over a range of m.  Throws membership_failed
// naming the first failing m; otherwise reports which branch each m took and
// whether the branch is eventually constant.
struct FloorBranchRow {
    long m;
    mpz_class a0;
    mpz_class eta;
    int branch; // 0: a0 == eta, 1: a0 == eta - 1
};

struct FloorBranchReport {
    std::vector<FloorBranchRow> rows;
    int final_branch = 0;
    long stable_from = 0;    // m from which the branch no longer changes
    bool eventually_constant = false;
};

FloorBranchReport floor_branch_report(const PowerSum& alpha, unsigned r,
                                      const PowerSum& eta, long m_lo, long m_hi);

// The reciprocal remainder after h expansion steps of sqrt(alpha(2m+r)): an
// exact surd (the h-th complete quotient) whose expansion is the h-shifted
// tail of the full one -- its quotient i equals quotient i+h of the sqrt.
// For h = 1 this is 1/(sqrt(D) - a0).  h must be >= 1 and at most one full
// cycle past a0.
QuadSurd tail_surd(const PowerSum& alpha, unsigned r, long m, size_t h,
                   uint64_t max_steps = kDefaultStepBudget);

// Sign conditions controlling where a quotient's floor can sit: for exact
// power sums gamma1, tau, xi (a surd (sqrt(gamma1)+tau)/xi in m) and an
// integer-valued candidate quotient b, evaluates
//   s1 = gamma1 - (b*xi - tau)^2   >= 0
//   s2 = gamma1 - ((b+1)*xi - tau)^2 < 0
// across a window of m and reports whether each condition's truth value is
// eventually constant (trailing run of >= 3; shorter windows are
// inconclusive).
struct SignWindowRow {
    long m;
    int sign1, sign2; // -1/0/+1 of s1(m), s2(m)
    bool cond1, cond2;
};

struct SignWindowReport {
    std::vector<SignWindowRow> rows;
    bool cond1_eventually_constant = false;
    bool cond2_eventually_constant = false;
    bool cond1_final = false, cond2_final = false;
    bool conclusive = false; // window long enough to judge
};

SignWindowReport sign_window_check(const PowerSum& gamma1, const PowerSum& tau,
                                   const PowerSum& xi, const PowerSum& b,
                                   long m_lo, long m_hi);

// ---------------------------------------------------------------------------
// Config-driven experiments.

struct ExperimentConfig {
    PowerSum alpha;            // required
    unsigned r = 0;            // parity class
    long m_lo = 1, m_hi = 12;
    size_t window = 5;
    uint64_t step_budget = kDefaultStepBudget;
    uint64_t store_full_threshold = 10000;
    bool integrality_required = true;
    bool parallel = true;
    std::string csv_path = "scan.csv";
    std::string findings_path = "findings.txt";

    // Parses "key = value" lines; '#' comments; unknown keys rejected.
    // Validates m_hi - m_lo + 1 >= window + 6 so stabilization + fit holdout
    // are possible.  Throws parse_error / invalid_argument.
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);
};

struct ExperimentResult {
    PeriodScan scan;
    PeriodForecast forecast;  // both parity classes, regardless of configured r
    std::optional<long> stabilized_from;
    std::optional<FunctionalCF> fit;
    std::string fit_error;   // message when fitting was attempted and failed
    std::string csv;         // exact bytes written to csv_path
    std::string findings;    // exact bytes written to findings_path
    int exit_code = 0;       // 0 ok; 3 all rows budget-exhausted; 4 fit failed
};

// Runs scan -> hypothesis forecast -> stabilization -> fit -> reports.
// Deterministic: two runs on the same config produce byte-identical csv and
// findings.  Writes the two files; also returns their contents.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

} // namespace cflab
