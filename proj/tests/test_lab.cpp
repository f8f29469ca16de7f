#include "cflab/cf.hpp"
#include "cflab/lab.hpp"
#include "cflab/powersum.hpp"
#include "cflab/rational.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace cflab;

namespace {

PowerSum ps(const std::string& s) { return PowerSum::parse(s); }

ScanOptions serial_opts() {
    ScanOptions o;
    o.parallel = false;
    return o;
}

bool is_rotation(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    size_t n = a.size();
    for (size_t s = 0; s < n; ++s) {
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i) ok = a[(s + i) % n] == b[i];
        if (ok) return true;
    }
    return false;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// A forged scan whose quotient sequences we control exactly: every row ok,
// R = 1, full period stored.
PeriodScan forged_scan(const std::vector<mpz_class>& a0s,
                       const std::vector<mpz_class>& a1s) {
    PeriodScan scan;
    scan.alpha = ps("1*4^n + 1*1^n");
    scan.m_lo = 0;
    scan.m_hi = static_cast<long>(a0s.size()) - 1;
    for (size_t i = 0; i < a0s.size(); ++i) {
        ScanRow row;
        row.m = static_cast<long>(i);
        row.status = RowStatus::ok;
        row.value = a0s[i] * a0s[i] + 1;
        row.a0 = a0s[i];
        row.period_len = 1;
        row.period_head = {a1s[i]};
        row.period_last = a1s[i];
        row.full_period_stored = true;
        row.period = {a1s[i]};
        scan.rows.push_back(row);
    }
    return scan;
}

} // namespace

TEST_CASE("scan rows carry per-m status") {
    // 4^m - 100: negative until m = 4, then ordinary nonsquare values.
    PeriodScan scan = period_scan(ps("1*2^n - 100*1^n"), 0, 0, 6, serial_opts());
    REQUIRE(scan.rows.size() == 7);
    for (int i = 0; i <= 3; ++i) {
        CHECK(scan.rows[i].status == RowStatus::nonpositive);
        CHECK(scan.rows[i].digest() == "!nonpositive");
    }
    for (int i = 4; i <= 6; ++i) CHECK(scan.rows[i].status == RowStatus::ok);
    CHECK(scan.rows[4].value == 156);
    CHECK(scan.rows[4].a0 == 12);
    CHECK(scan.rows[4].period_len == 2);
    CHECK(scan.rows[4].digest() == "2,24|24");
    CHECK(scan.rows[4].trace_checked);
    CHECK(scan.rows[4].trace_ok);

    // 16^m is always a perfect square.
    PeriodScan sq = period_scan(ps("1*4^n"), 0, 1, 4, serial_opts());
    mpz_class t(4);
    for (const ScanRow& row : sq.rows) {
        CHECK(row.status == RowStatus::square);
        CHECK(row.a0 == t);
        CHECK(row.digest() == "!square");
        t *= 4;
    }

    // 4^m / 3 is never an integer.
    PeriodScan ni = period_scan(ps("1/3*2^n"), 0, 0, 3, serial_opts());
    for (const ScanRow& row : ni.rows) {
        CHECK(row.status == RowStatus::non_integer);
        CHECK(row.digest() == "!noninteger");
    }

    CHECK_THROWS_AS(period_scan(ps("1*2^n"), 2, 0, 5, serial_opts()), Error);
    CHECK_THROWS_AS(period_scan(ps("1*2^n"), 0, 3, 1, serial_opts()), Error);
    CHECK_THROWS_AS(period_scan(ps("1*2^n"), 0, -1, 1, serial_opts()), Error);
}

TEST_CASE("step budget marks rows instead of aborting the scan") {
    ScanOptions opt = serial_opts();
    opt.step_budget = 10;
    // 2*16^m + 1: period 4 at m=1, 16 at m=2, 74 at m=3.
    PeriodScan scan = period_scan(ps("2*4^n + 1*1^n"), 0, 1, 3, opt);
    CHECK(scan.rows[0].status == RowStatus::ok);
    CHECK(scan.rows[0].period_len == 4);
    CHECK(scan.rows[1].status == RowStatus::budget);
    CHECK(scan.rows[1].digest() == "!budget");
    CHECK(scan.rows[2].status == RowStatus::budget);
}

TEST_CASE("full cycles are stored only up to the threshold") {
    ScanOptions opt = serial_opts();
    opt.store_full_threshold = 2;
    PeriodScan scan = period_scan(ps("2*4^n + 1*1^n"), 0, 1, 1, opt);
    const ScanRow& row = scan.rows[0];
    REQUIRE(row.status == RowStatus::ok);
    CHECK(row.period_len == 4);
    CHECK_FALSE(row.full_period_stored);
    CHECK(row.period.empty());
    CHECK(row.period_head.size() == 4);
    CHECK(row.digest() == "1,2,1,10|10");

    PeriodScan full = period_scan(ps("2*4^n + 1*1^n"), 0, 1, 1, serial_opts());
    REQUIRE(full.rows[0].full_period_stored);
    CHECK(full.rows[0].period == std::vector<mpz_class>{1, 2, 1, 10});
}

TEST_CASE("stabilization detection walks the trailing run") {
    // 16^m - 2: nonpositive at m=0, then period 4 for every m >= 1.
    PeriodScan scan = period_scan(ps("1*4^n - 2*1^n"), 0, 0, 6, serial_opts());
    CHECK(scan.rows[0].status == RowStatus::nonpositive);
    for (size_t i = 1; i < scan.rows.size(); ++i) CHECK(scan.rows[i].period_len == 4);
    CHECK(detect_stabilization(scan, 5) == 1);
    CHECK(detect_stabilization(scan, 6) == 1);
    CHECK_FALSE(detect_stabilization(scan, 7).has_value());

    // 4^m - 100: the three usable rows all have different period lengths.
    PeriodScan mixed = period_scan(ps("1*2^n - 100*1^n"), 0, 0, 6, serial_opts());
    CHECK_FALSE(detect_stabilization(mixed, 3).has_value());
    CHECK(detect_stabilization(mixed, 1) == 6);

    CHECK_THROWS_AS(detect_stabilization(scan, 0), Error);
}

TEST_CASE("functional expansion fit on square-plus-constant families") {
    // 16^m + 1 = (4^m)^2 + 1: expansion [t; (2t)].
    PeriodScan s1 = period_scan(ps("1*4^n + 1*1^n"), 0, 1, 12, serial_opts());
    FunctionalCF f1 = fit_functional_cf(s1);
    CHECK(f1.R == 1);
    REQUIRE(f1.betas.size() == 2);
    CHECK(f1.betas[0] == ps("1*4^m"));
    CHECK(f1.betas[1] == ps("2*4^m"));
    CHECK(f1.validated_from == 1);
    CHECK(f1.validated_to == 12);
    CHECK(f1.str().find("R = 1") != std::string::npos);

    // 16^m + 2 = t^2 + 2: expansion [t; (t, 2t)].
    FunctionalCF f2 =
        fit_functional_cf(period_scan(ps("1*4^n + 2*1^n"), 0, 1, 12, serial_opts()));
    CHECK(f2.R == 2);
    CHECK(f2.betas[0] == ps("1*4^m"));
    CHECK(f2.betas[1] == ps("1*4^m"));
    CHECK(f2.betas[2] == ps("2*4^m"));

    // 16^m + 4^m = t^2 + t: expansion [t; (2, 2t)] -- a constant quotient.
    FunctionalCF f3 =
        fit_functional_cf(period_scan(ps("1*4^n + 1*2^n"), 0, 1, 12, serial_opts()));
    CHECK(f3.R == 2);
    CHECK(f3.betas[0] == ps("1*4^m"));
    CHECK(f3.betas[1] == ps("2*1^m"));
    CHECK(f3.betas[2] == ps("2*4^m"));
}

TEST_CASE("functional fit preconditions") {
    // Too few stabilized rows: the fit cannot be performed on this data.
    PeriodScan short_scan = period_scan(ps("1*4^n + 1*1^n"), 0, 1, 7, serial_opts());
    try {
        fit_functional_cf(short_scan);
        FAIL("expected fit_failed");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::fit_failed);
        CHECK(std::string(e.what()).find("8 stabilized rows") != std::string::npos);
    }

    // No stabilization at all.
    PeriodScan unstable = period_scan(ps("1*2^n - 100*1^n"), 0, 0, 6, serial_opts());
    try {
        fit_functional_cf(unstable);
        FAIL("expected fit_failed");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::fit_failed);
        CHECK(std::string(e.what()).find("stabilize") != std::string::npos);
    }

    // Full cycles discarded by a zero threshold.
    ScanOptions opt = serial_opts();
    opt.store_full_threshold = 0;
    PeriodScan no_cycles = period_scan(ps("1*4^n + 1*1^n"), 0, 1, 12, opt);
    try {
        fit_functional_cf(no_cycles);
        FAIL("expected invalid_argument");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_argument);
        CHECK(std::string(e.what()).find("store_full_threshold") != std::string::npos);
    }
}

TEST_CASE("functional fit failure modes, on forged scans") {
    std::vector<mpz_class> pow2, pow4, doubled, tripled, fib;
    mpz_class f0 = 1, f1 = 1;
    for (int m = 0; m < 10; ++m) {
        pow2.push_back(pow_z(2, m));
        pow4.push_back(pow_z(4, m));
        doubled.push_back(2 * pow_z(4, m));
        tripled.push_back(3 * pow_z(4, m));
        fib.push_back(f0);
        mpz_class next = f0 + f1;
        f0 = f1;
        f1 = next;
    }

    // A quotient sequence with no power-sum structure.
    try {
        fit_functional_cf(forged_scan(pow2, fib));
        FAIL("expected fit_failed");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::fit_failed);
        CHECK(std::string(e.what()).find("a1") != std::string::npos);
    }

    // Quotients fit fine but violate the closing-quotient doubling law.
    try {
        fit_functional_cf(forged_scan(pow4, tripled));
        FAIL("expected fit_failed");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::fit_failed);
        CHECK(std::string(e.what()).find("2*a0") != std::string::npos);
    }

    // A row outside the fitting window deviates from the fitted form.
    std::vector<mpz_class> tampered = pow4;
    tampered.back() += 1;
    try {
        fit_functional_cf(forged_scan(tampered, doubled));
        FAIL("expected holdout_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::holdout_mismatch);
    }

    // The untampered forged scan fits cleanly.
    FunctionalCF ok = fit_functional_cf(forged_scan(pow4, doubled));
    CHECK(ok.R == 1);
    CHECK(ok.betas[0] == ps("1*4^m"));
}

TEST_CASE("floor branch membership") {
    // 16^m + 4 against eta = 4^m + 1: branch 0 at m=0 ( floor sqrt 5 = 2 = eta ),
    // branch 1 afterwards.
    FloorBranchReport rep =
        floor_branch_report(ps("1*4^n + 4*1^n"), 0, ps("1*4^m + 1*1^m"), 0, 5);
    REQUIRE(rep.rows.size() == 6);
    CHECK(rep.rows[0].branch == 0);
    for (size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].branch == 1);
    CHECK(rep.final_branch == 1);
    CHECK(rep.stable_from == 1);
    CHECK(rep.eventually_constant);

    // 16^m + 1 against eta = 4^m: always branch 0.
    FloorBranchReport same =
        floor_branch_report(ps("1*4^n + 1*1^n"), 0, ps("1*4^m"), 0, 5);
    CHECK(same.final_branch == 0);
    CHECK(same.stable_from == 0);
    CHECK(same.eventually_constant);

    // eta off by 7: not a member of {eta, eta-1}.
    try {
        floor_branch_report(ps("1*4^n + 1*1^n"), 0, ps("1*4^m + 7*1^m"), 0, 5);
        FAIL("expected membership_failed");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::membership_failed);
    }

    CHECK_THROWS_AS(floor_branch_report(ps("1*4^n"), 2, ps("1*4^m"), 0, 3), Error);
}

TEST_CASE("reciprocal remainder surds are the shifted tails") {
    // D = 17, h = 1: 1/(sqrt(17) - 4) = 4 + sqrt(17).
    PowerSum alpha = ps("1*4^n + 1*1^n");
    CHECK(tail_surd(alpha, 0, 1, 1) == QuadSurd(4, 1, 17));

    // D = 7 (via 16^m - 9 at m = 1), h = 1: (2 + sqrt(7))/3, same period length.
    PowerSum a7 = ps("1*4^n - 9*1^n");
    QuadSurd s7 = tail_surd(a7, 0, 1, 1);
    CHECK(s7 == QuadSurd(2, 3, 7));
    CHECK(surd_cf(s7).period.size() == sqrt_cf(7).period.size());

    // D = 19 (period length 6): the h-th remainder surd expands to exactly
    // the h-shifted quotient sequence, so its cycle is a rotation of the
    // sqrt(19) cycle.
    PowerSum a19 = ps("1*4^n + 3*1^n");
    CFExpansion base = sqrt_cf(19);
    REQUIRE(base.period.size() == 6);
    for (size_t h = 1; h <= 7; ++h) {
        CFExpansion t = surd_cf(tail_surd(a19, 0, 1, h));
        CHECK(t.preperiod.empty());
        CHECK(t.period.size() == 6);
        CHECK(is_rotation(t.period, base.period));
        for (size_t i = 0; i <= 12; ++i) CHECK(t.quotient(i) == base.quotient(i + h));
    }
    CHECK_THROWS_AS(tail_surd(a19, 0, 1, 0), Error);
    CHECK_THROWS_AS(tail_surd(a19, 0, 1, 8), Error);
    CHECK_THROWS_AS(tail_surd(ps("1*4^m + 3*1^m"), 0, 1, 1), Error); // m-indexed
}

TEST_CASE("sign window for quotient floors") {
    // gamma1 = 16^m, tau = 0, xi = 1, b = 4^m:
    // s1 = 16^m - (4^m)^2 = 0 (>= 0 holds), s2 = 16^m - (4^m+1)^2 < 0.
    SignWindowReport rep =
        sign_window_check(ps("1*16^m"), ps("0"), ps("1*1^m"), ps("1*4^m"), 1, 5);
    REQUIRE(rep.rows.size() == 5);
    for (const SignWindowRow& row : rep.rows) {
        CHECK(row.sign1 == 0);
        CHECK(row.sign2 == -1);
        CHECK(row.cond1);
        CHECK(row.cond2);
    }
    CHECK(rep.conclusive);
    CHECK(rep.cond1_eventually_constant);
    CHECK(rep.cond2_eventually_constant);
    CHECK(rep.cond1_final);
    CHECK(rep.cond2_final);

    // b = 2^m sits too low: (b+1)^2 stays below gamma1, so s2 >= 0.
    SignWindowReport low =
        sign_window_check(ps("1*16^m"), ps("0"), ps("1*1^m"), ps("1*2^m"), 1, 5);
    CHECK(low.cond1_final);
    CHECK_FALSE(low.cond2_final);
    CHECK(low.cond2_eventually_constant);

    // Two rows are not enough to judge.
    SignWindowReport tiny =
        sign_window_check(ps("1*16^m"), ps("0"), ps("1*1^m"), ps("1*4^m"), 1, 2);
    CHECK_FALSE(tiny.conclusive);
    CHECK_FALSE(tiny.cond1_eventually_constant);

    CHECK_THROWS_AS(sign_window_check(ps("1*16^m"), ps("0"), ps("1*1^m"), ps("1*4^m"),
                                      3, 1),
                    Error);
}

TEST_CASE("experiment config parsing") {
    std::string text =
        "# demo configuration\n"
        "alpha = 2*4^n + 1*1^n\n"
        "r = 0\n"
        "m_lo = 1\n"
        "m_hi = 12\n"
        "window = 5   # trailing run length\n"
        "step_budget = 50000\n"
        "store_full_threshold = 2000\n"
        "integrality_required = true\n"
        "parallel = false\n"
        "csv_path = /tmp/x.csv\n"
        "findings_path = /tmp/x.txt\n";
    ExperimentConfig cfg = ExperimentConfig::parse(text);
    CHECK(cfg.alpha == ps("2*4^n + 1*1^n"));
    CHECK(cfg.r == 0);
    CHECK(cfg.m_lo == 1);
    CHECK(cfg.m_hi == 12);
    CHECK(cfg.window == 5);
    CHECK(cfg.step_budget == 50000);
    CHECK(cfg.store_full_threshold == 2000);
    CHECK(cfg.integrality_required);
    CHECK_FALSE(cfg.parallel);
    CHECK(cfg.csv_path == "/tmp/x.csv");
    CHECK(cfg.findings_path == "/tmp/x.txt");

    // Defaults fill everything except alpha.
    ExperimentConfig min = ExperimentConfig::parse("alpha = 1*4^n + 1*1^n\n");
    CHECK(min.r == 0);
    CHECK(min.m_lo == 1);
    CHECK(min.m_hi == 12);
    CHECK(min.window == 5);
    CHECK(min.integrality_required);
    CHECK(min.parallel);
    CHECK(min.csv_path == "scan.csv");

    auto code_of = [](const std::string& t) {
        try {
            ExperimentConfig::parse(t);
            return std::optional<Errc>{};
        } catch (const Error& e) {
            return std::optional<Errc>{e.code()};
        }
    };
    CHECK(code_of("alpha = 1*4^n + 1*1^n\nbogus_key = 3\n") == Errc::parse_error);
    CHECK(code_of("r = 0\n") == Errc::parse_error);                        // no alpha
    CHECK(code_of("alpha = 1*4^m + 1*1^m\n") == Errc::invalid_argument);   // m-indexed
    CHECK(code_of("alpha = 0\n") == Errc::invalid_argument);               // zero
    CHECK(code_of("alpha = 1*4^n\nm_lo = 1\nm_hi = 9\n") == Errc::invalid_argument);
    CHECK(code_of("alpha = 1*4^n\nwindow = 2\n") == Errc::invalid_argument);
    CHECK(code_of("alpha = 1*4^n\nwindow = soon\n") == Errc::parse_error);
    CHECK(code_of("alpha = 1*4^n\nparallel = maybe\n") == Errc::parse_error);
    CHECK(code_of("alpha = 1*4^n\njust some words\n") == Errc::parse_error);

    // Line numbers point at the offending line.
    try {
        ExperimentConfig::parse("alpha = 1*4^n + 1*1^n\nbogus_key = 3\n");
        FAIL("expected parse_error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/cflab/config"), Error);
}

TEST_CASE("experiment run is deterministic and reproducible") {
    ExperimentConfig cfg;
    cfg.alpha = ps("1*4^n + 1*1^n");
    cfg.r = 0;
    cfg.m_lo = 1;
    cfg.m_hi = 12;
    cfg.window = 5;
    cfg.parallel = false;
    cfg.csv_path = "/tmp/cflab_ut_scan.csv";
    cfg.findings_path = "/tmp/cflab_ut_findings.txt";

    ExperimentResult a = run_experiment(cfg);
    CHECK(a.exit_code == 0);
    CHECK(a.stabilized_from == 1);
    REQUIRE(a.fit.has_value());
    CHECK(a.fit->R == 1);

    // CSV: header plus one fixed-format row per m.
    std::istringstream csv(a.csv);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "m,value_digits,is_square,a0_digits,R,period_digest");
    std::getline(csv, line);
    CHECK(line == "1,2,0,1,1,8|8"); // m=1: value 17, a0 4, period (8)
    std::getline(csv, line);
    CHECK(line == "2,3,0,2,1,32|32"); // m=2: value 257, a0 16, period (32)

    CHECK(a.findings.find("alpha: 1*4^n + 1*1^n") != std::string::npos);
    CHECK(a.findings.find("ok_rows: 12") != std::string::npos);
    CHECK(a.findings.find("hypothesis:\n  r=0: fails (witness 1*4^m") !=
          std::string::npos);
    CHECK(a.findings.find("  forecast: no conclusion") != std::string::npos);
    CHECK(a.findings.find("trace_identity: ok(12)") != std::string::npos);
    CHECK(a.findings.find("period_trend: first3_max=1 last3_max=1 growing=no") !=
          std::string::npos);
    CHECK(a.findings.find("stabilized_from: 1") != std::string::npos);
    CHECK(a.findings.find("  R: 1") != std::string::npos);
    CHECK(a.findings.find("  a0(m): 1*4^m") != std::string::npos);
    CHECK(a.findings.find("  a1(m): 2*4^m") != std::string::npos);
    CHECK(a.findings.find("  valid_m: 1..12") != std::string::npos);

    // The written files hold exactly the returned bytes.
    CHECK(slurp(cfg.csv_path) == a.csv);
    CHECK(slurp(cfg.findings_path) == a.findings);

    // Byte-identical on a second run.
    ExperimentResult b = run_experiment(cfg);
    CHECK(a.csv == b.csv);
    CHECK(a.findings == b.findings);

    std::remove(cfg.csv_path.c_str());
    std::remove(cfg.findings_path.c_str());
}

TEST_CASE("experiment exit codes") {
    // Every row blows the (tiny) step budget: computational-budget exit.
    ExperimentConfig starved;
    starved.alpha = ps("2*4^n + 1*1^n");
    starved.m_lo = 3;
    starved.m_hi = 11;
    starved.window = 3;
    starved.step_budget = 5;
    starved.parallel = false;
    starved.csv_path = "/tmp/cflab_ut_starved.csv";
    starved.findings_path = "/tmp/cflab_ut_starved.txt";
    ExperimentResult res = run_experiment(starved);
    CHECK(res.exit_code == 3);
    CHECK(res.findings.find("budget_rows: 9") != std::string::npos);
    CHECK(res.findings.find("  forecast: period length unbounded on both parity classes") !=
          std::string::npos);
    CHECK(res.findings.find("stabilized_from: none") != std::string::npos);
    CHECK(res.csv.find("!budget") != std::string::npos);
    std::remove(starved.csv_path.c_str());
    std::remove(starved.findings_path.c_str());

    // Unwritable output path.
    ExperimentConfig bad = starved;
    bad.csv_path = "/nonexistent-dir-cflab/out.csv";
    CHECK_THROWS_AS(run_experiment(bad), Error);
    std::remove(bad.findings_path.c_str());
}
