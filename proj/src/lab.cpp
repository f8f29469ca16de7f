#include "cflab/lab.hpp"

#include "cflab/rational.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>

namespace cflab {

const char* row_status_name(RowStatus s) {
    switch (s) {
        case RowStatus::ok: return "ok";
        case RowStatus::square: return "square";
        case RowStatus::nonpositive: return "nonpositive";
        case RowStatus::non_integer: return "noninteger";
        case RowStatus::budget: return "budget";
    }
    return "?";
}

std::string ScanRow::digest() const {
    if (status != RowStatus::ok) return std::string("!") + row_status_name(status);
    std::string out;
    for (size_t i = 0; i < period_head.size(); ++i)
        out += (i ? "," : "") + period_head[i].get_str();
    out += "|" + period_last.get_str();
    return out;
}

namespace {

void require_n_indexed(const PowerSum& alpha) {
    if (!alpha.is_zero() && alpha.var() != IndexVar::n)
        throw Error(Errc::invalid_argument, "alpha must be indexed by n");
}

void require_m_indexed(const PowerSum& p, const char* name) {
    if (!p.is_zero() && p.var() != IndexVar::m)
        throw Error(Errc::invalid_argument, std::string(name) + " must be indexed by m");
}

ScanRow scan_row(const PowerSum& alpha, unsigned r, long m, const ScanOptions& opt) {
    ScanRow row;
    row.m = m;
    unsigned long n = 2 * static_cast<unsigned long>(m) + r;
    mpq_class v = alpha.eval(n);
    if (v.get_den() != 1) {
        row.status = RowStatus::non_integer;
        return row;
    }
    row.value = v.get_num();
    if (row.value <= 0) {
        row.status = RowStatus::nonpositive;
        return row;
    }
    if (is_perfect_square(row.value)) {
        row.status = RowStatus::square;
        row.a0 = isqrt(row.value);
        return row;
    }

    SqrtCFDigest d;
    try {
        d = sqrt_cf_digest(row.value, opt.step_budget);
    } catch (const Error& e) {
        if (e.code() == Errc::step_budget_exceeded) {
            row.status = RowStatus::budget;
            return row;
        }
        throw;
    }

    row.status = RowStatus::ok;
    row.a0 = d.a0;
    row.period_len = d.period_len;
    row.period_head = std::move(d.period_head);
    row.period_last = std::move(d.period_last);
    row.trace_checked = d.trace_available;
    row.trace_ok = d.trace_available && trace_identity_holds(d);

    // Cycles short enough to keep are also cheap enough to re-expand.
    if (d.period_len <= opt.store_full_threshold) {
        row.period = sqrt_cf(row.value, opt.step_budget).period;
        row.full_period_stored = true;
    }
    return row;
}

} // namespace

PeriodScan period_scan(const PowerSum& alpha, unsigned r, long m_lo, long m_hi,
                       const ScanOptions& opt) {
    if (r > 1) throw Error(Errc::invalid_argument, "parity class must be 0 or 1");
    if (m_lo < 0 || m_lo > m_hi)
        throw Error(Errc::invalid_argument, "need 0 <= m_lo <= m_hi");
    require_n_indexed(alpha);

    PeriodScan scan;
    scan.alpha = alpha;
    scan.r = r;
    scan.m_lo = m_lo;
    scan.m_hi = m_hi;
    size_t count = static_cast<size_t>(m_hi - m_lo + 1);
    scan.rows.resize(count);
    std::vector<std::exception_ptr> errors(count);

    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (size_t i = 0; i < count; ++i) {
            try {
                scan.rows[i] = scan_row(alpha, r, m_lo + static_cast<long>(i), opt);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        for (size_t i = 0; i < count; ++i) {
            try {
                scan.rows[i] = scan_row(alpha, r, m_lo + static_cast<long>(i), opt);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return scan;
}

std::optional<long> detect_stabilization(const PeriodScan& scan, size_t window) {
    if (window == 0) throw Error(Errc::invalid_argument, "window must be positive");
    size_t run = 0;
    uint64_t R = 0;
    long start = 0;
    for (size_t i = scan.rows.size(); i-- > 0;) {
        const ScanRow& row = scan.rows[i];
        if (row.status != RowStatus::ok) break;
        if (run == 0) {
            R = row.period_len;
        } else if (row.period_len != R) {
            break;
        }
        ++run;
        start = row.m;
    }
    if (run >= window) return start;
    return std::nullopt;
}

std::string FunctionalCF::str() const {
    std::string out = "R = " + std::to_string(R) + "\n";
    for (size_t i = 0; i < betas.size(); ++i)
        out += "a" + std::to_string(i) + "(m) = " + betas[i].str() + "\n";
    out += "valid for m = " + std::to_string(validated_from) + ".." +
           std::to_string(validated_to);
    return out;
}

FunctionalCF fit_functional_cf(const PeriodScan& scan, const FitOptions& opt) {
    auto st = detect_stabilization(scan, opt.window);
    if (!st)
        throw Error(Errc::fit_failed,
                    "period length does not stabilize over a trailing window of " +
                        std::to_string(opt.window));

    std::vector<const ScanRow*> rows;
    for (const ScanRow& row : scan.rows)
        if (row.m >= *st) rows.push_back(&row);
    if (rows.size() < 8)
        throw Error(Errc::fit_failed,
                    "need at least 8 stabilized rows to fit, have " +
                        std::to_string(rows.size()));
    for (const ScanRow* row : rows)
        if (!row->full_period_stored)
            throw Error(Errc::invalid_argument,
                        "full cycle not stored for m=" + std::to_string(row->m) +
                            "; raise store_full_threshold");

    FunctionalCF out;
    out.R = rows.front()->period_len;
    out.validated_from = *st;
    out.validated_to = rows.back()->m;

    // Fit each quotient sequence on all but the last two stabilized rows;
    // those two stay completely out of the fit as an end-to-end holdout
    // (the recurrence fitter reserves two more internally).
    size_t fit_rows = rows.size() - 2;
    for (size_t i = 0; i <= out.R; ++i) {
        SequenceSample sample;
        sample.m0 = *st;
        for (size_t k = 0; k < fit_rows; ++k)
            sample.values.push_back(i == 0 ? rows[k]->a0 : rows[k]->period[i - 1]);
        try {
            out.betas.push_back(fit_power_sum(sample, opt.integrality_required).fitted);
        } catch (const Error& e) {
            throw Error(Errc::fit_failed,
                        "quotient a" + std::to_string(i) + ": " + e.what());
        }
    }

    // Structural constraint of sqrt cycles: the closing quotient is twice
    // the leading one, as power sums, not just per-m.
    if (!(out.betas[out.R] == out.betas[0] * mpq_class(2)))
        throw Error(Errc::fit_failed, "a" + std::to_string(out.R) + " != 2*a0: got " +
                                          out.betas[out.R].str() + " vs a0 = " +
                                          out.betas[0].str());

    // Validate every stabilized row (including the two end-to-end holdouts)
    // against the fitted forms.
    for (const ScanRow* row : rows) {
        unsigned long m = static_cast<unsigned long>(row->m);
        for (size_t i = 0; i <= out.R; ++i) {
            const mpz_class& truth = i == 0 ? row->a0 : row->period[i - 1];
            if (out.betas[i].eval(m) != truth)
                throw Error(Errc::holdout_mismatch,
                            "a" + std::to_string(i) + "(" + std::to_string(row->m) +
                                ") != scanned quotient");
        }
    }
    return out;
}

FloorBranchReport floor_branch_report(const PowerSum& alpha, unsigned r,
                                      const PowerSum& eta, long m_lo, long m_hi) {
    if (r > 1) throw Error(Errc::invalid_argument, "parity class must be 0 or 1");
    if (m_lo < 0 || m_lo > m_hi)
        throw Error(Errc::invalid_argument, "need 0 <= m_lo <= m_hi");
    require_n_indexed(alpha);
    require_m_indexed(eta, "eta");

    FloorBranchReport rep;
    for (long m = m_lo; m <= m_hi; ++m) {
        unsigned long um = static_cast<unsigned long>(m);
        mpz_class value = alpha.eval_int(2 * um + r);
        if (value < 0)
            throw Error(Errc::invalid_argument,
                        "alpha negative at m=" + std::to_string(m));
        mpz_class a0 = isqrt(value);
        mpz_class e = eta.eval_int(um);
        int branch;
        if (a0 == e)
            branch = 0;
        else if (a0 == e - 1)
            branch = 1;
        else
            throw Error(Errc::membership_failed,
                        "floor sqrt at m=" + std::to_string(m) + " is " + a0.get_str() +
                            ", not in {" + e.get_str() + ", " + mpz_class(e - 1).get_str() + "}");
        rep.rows.push_back({m, a0, e, branch});
    }

    rep.final_branch = rep.rows.back().branch;
    size_t run = 0;
    for (size_t i = rep.rows.size(); i-- > 0;) {
        if (rep.rows[i].branch != rep.final_branch) break;
        ++run;
        rep.stable_from = rep.rows[i].m;
    }
    rep.eventually_constant = run >= std::min<size_t>(3, rep.rows.size());
    return rep;
}

QuadSurd tail_surd(const PowerSum& alpha, unsigned r, long m, size_t h, uint64_t max_steps) {
    if (r > 1) throw Error(Errc::invalid_argument, "parity class must be 0 or 1");
    if (m < 0) throw Error(Errc::invalid_argument, "m must be nonnegative");
    if (h < 1) throw Error(Errc::invalid_argument, "h must be at least 1");
    require_n_indexed(alpha);

    mpz_class D = alpha.eval_int(2 * static_cast<unsigned long>(m) + r);
    CFExpansion cf = sqrt_cf(D, max_steps);
    if (h > cf.period.size() + 1)
        throw Error(Errc::invalid_argument,
                    "h=" + std::to_string(h) + " exceeds the computed quotients (1 cycle = " +
                        std::to_string(cf.period.size()) + ")");

    // Peel h quotients off x_0 = sqrt(D) = (0 + sqrt(D))/1 with the state
    // recurrence behind the expansion: taking the reciprocal of x_i - a_i
    // sends (P, Q) to (a_i Q - P, (D - P'^2)/Q).  The result x_h is the
    // reciprocal of the remainder after h steps, and its quotient i is
    // quotient i + h of sqrt(D) -- the shifted tail.
    mpz_class P = 0, Q = 1;
    for (size_t i = 0; i < h; ++i) {
        const mpz_class& a = cf.quotient(i);
        P = a * Q - P;
        Q = (D - P * P) / Q;
    }
    return QuadSurd(P, Q, D);
}

SignWindowReport sign_window_check(const PowerSum& gamma1, const PowerSum& tau,
                                   const PowerSum& xi, const PowerSum& b,
                                   long m_lo, long m_hi) {
    if (m_lo < 0 || m_lo > m_hi)
        throw Error(Errc::invalid_argument, "need 0 <= m_lo <= m_hi");
    require_m_indexed(gamma1, "gamma1");
    require_m_indexed(tau, "tau");
    require_m_indexed(xi, "xi");
    require_m_indexed(b, "b");

    PowerSum inner1 = b * xi - tau;
    PowerSum inner2 = b * xi + xi - tau;
    PowerSum s1 = gamma1 - inner1 * inner1;
    PowerSum s2 = gamma1 - inner2 * inner2;

    SignWindowReport rep;
    for (long m = m_lo; m <= m_hi; ++m) {
        unsigned long um = static_cast<unsigned long>(m);
        int g1 = static_cast<int>(sgn(s1.eval(um)));
        int g2 = static_cast<int>(sgn(s2.eval(um)));
        rep.rows.push_back({m, g1, g2, g1 >= 0, g2 < 0});
    }

    auto trailing_constant = [&](auto get) {
        bool last = get(rep.rows.back());
        size_t run = 0;
        for (size_t i = rep.rows.size(); i-- > 0;) {
            if (get(rep.rows[i]) != last) break;
            ++run;
        }
        return std::pair(last, run);
    };
    auto [f1, run1] = trailing_constant([](const SignWindowRow& r) { return r.cond1; });
    auto [f2, run2] = trailing_constant([](const SignWindowRow& r) { return r.cond2; });
    rep.conclusive = rep.rows.size() >= 3;
    rep.cond1_final = f1;
    rep.cond2_final = f2;
    rep.cond1_eventually_constant = rep.conclusive && run1 >= 3;
    rep.cond2_eventually_constant = rep.conclusive && run2 >= 3;
    return rep;
}

// --- config -----------------------------------------------------------------

namespace {

std::string trim_copy(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        unsigned long long r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw Error(Errc::parse_error, key + ": not a nonnegative integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error(Errc::parse_error, key + ": expected true/false, got '" + v + "'");
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    bool have_alpha = false;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim_copy(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::parse_error,
                        "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim_copy(line.substr(0, eq));
        std::string val = trim_copy(line.substr(eq + 1));

        if (key == "alpha") {
            cfg.alpha = PowerSum::parse(val);
            have_alpha = true;
        } else if (key == "r") {
            uint64_t r = parse_u64(key, val);
            if (r > 1) throw Error(Errc::invalid_argument, "r must be 0 or 1");
            cfg.r = static_cast<unsigned>(r);
        } else if (key == "m_lo") {
            cfg.m_lo = static_cast<long>(parse_u64(key, val));
        } else if (key == "m_hi") {
            cfg.m_hi = static_cast<long>(parse_u64(key, val));
        } else if (key == "window") {
            cfg.window = parse_u64(key, val);
        } else if (key == "step_budget") {
            cfg.step_budget = parse_u64(key, val);
        } else if (key == "store_full_threshold") {
            cfg.store_full_threshold = parse_u64(key, val);
        } else if (key == "integrality_required") {
            cfg.integrality_required = parse_bool(key, val);
        } else if (key == "parallel") {
            cfg.parallel = parse_bool(key, val);
        } else if (key == "csv_path") {
            cfg.csv_path = val;
        } else if (key == "findings_path") {
            cfg.findings_path = val;
        } else {
            throw Error(Errc::parse_error,
                        "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!have_alpha) throw Error(Errc::parse_error, "missing required key 'alpha'");
    if (!cfg.alpha.is_zero() && cfg.alpha.var() != IndexVar::n)
        throw Error(Errc::invalid_argument, "alpha must be indexed by n");
    if (cfg.alpha.is_zero())
        throw Error(Errc::invalid_argument, "alpha must be nonzero");
    if (cfg.m_lo > cfg.m_hi)
        throw Error(Errc::invalid_argument, "m_lo must not exceed m_hi");
    if (cfg.window < 3)
        throw Error(Errc::invalid_argument, "window must be at least 3");
    long span = cfg.m_hi - cfg.m_lo + 1;
    if (span < static_cast<long>(cfg.window) + 6)
        throw Error(Errc::invalid_argument,
                    "m range must cover at least window + 6 = " +
                        std::to_string(cfg.window + 6) + " values, covers " +
                        std::to_string(span));
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::parse_error, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

// --- experiment -------------------------------------------------------------

namespace {

size_t decimal_digits(const mpz_class& v) {
    if (v == 0) return 1;
    return mpz_class(abs(v)).get_str().size();
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult res;
    ScanOptions sopt;
    sopt.step_budget = cfg.step_budget;
    sopt.store_full_threshold = cfg.store_full_threshold;
    sopt.parallel = cfg.parallel;
    res.scan = period_scan(cfg.alpha, cfg.r, cfg.m_lo, cfg.m_hi, sopt);
    res.forecast = forecast_period(cfg.alpha);
    res.stabilized_from = detect_stabilization(res.scan, cfg.window);

    if (res.stabilized_from) {
        FitOptions fopt;
        fopt.window = cfg.window;
        fopt.integrality_required = cfg.integrality_required;
        try {
            res.fit = fit_functional_cf(res.scan, fopt);
        } catch (const Error& e) {
            res.fit_error = e.what();
        }
    }

    // CSV: one row per m, fixed formatting, no floats -- byte-reproducible.
    std::string csv = "m,value_digits,is_square,a0_digits,R,period_digest\n";
    size_t counts[5] = {0, 0, 0, 0, 0};
    for (const ScanRow& row : res.scan.rows) {
        counts[static_cast<size_t>(row.status)]++;
        bool has_value = row.status != RowStatus::non_integer;
        bool has_a0 = row.status == RowStatus::ok || row.status == RowStatus::square;
        csv += std::to_string(row.m) + ",";
        csv += (has_value ? std::to_string(decimal_digits(row.value)) : "0") + ",";
        csv += (row.status == RowStatus::square ? "1" : "0") + std::string(",");
        csv += (has_a0 ? std::to_string(decimal_digits(row.a0)) : "0") + ",";
        csv += std::to_string(row.status == RowStatus::ok ? row.period_len : 0) + ",";
        csv += row.digest() + "\n";
    }
    res.csv = csv;

    std::string f;
    f += "alpha: " + cfg.alpha.str() + "\n";
    f += "r: " + std::to_string(cfg.r) + "\n";
    f += "m_range: " + std::to_string(cfg.m_lo) + ".." + std::to_string(cfg.m_hi) + "\n";
    f += "rows: " + std::to_string(res.scan.rows.size()) + "\n";
    f += "ok_rows: " + std::to_string(counts[0]) + "\n";
    f += "square_rows: " + std::to_string(counts[1]) + "\n";
    f += "nonpositive_rows: " + std::to_string(counts[2]) + "\n";
    f += "noninteger_rows: " + std::to_string(counts[3]) + "\n";
    f += "budget_rows: " + std::to_string(counts[4]) + "\n";

    f += "hypothesis:\n";
    {
        std::istringstream lines(res.forecast.str());
        for (std::string line; std::getline(lines, line);) f += "  " + line + "\n";
    }

    size_t trace_checked = 0, trace_bad = 0;
    for (const ScanRow& row : res.scan.rows) {
        if (row.status == RowStatus::ok && row.trace_checked) {
            ++trace_checked;
            if (!row.trace_ok) ++trace_bad;
        }
    }
    if (trace_checked == 0)
        f += "trace_identity: unchecked\n";
    else if (trace_bad == 0)
        f += "trace_identity: ok(" + std::to_string(trace_checked) + ")\n";
    else
        f += "trace_identity: violations(" + std::to_string(trace_bad) + "/" +
             std::to_string(trace_checked) + ")\n";

    // Period trend over usable rows: compare the first and last three.
    {
        std::vector<uint64_t> Rs;
        for (const ScanRow& row : res.scan.rows)
            if (row.status == RowStatus::ok) Rs.push_back(row.period_len);
        if (Rs.size() >= 6) {
            uint64_t first3 = std::max({Rs[0], Rs[1], Rs[2]});
            uint64_t last3 = std::max({Rs[Rs.size() - 3], Rs[Rs.size() - 2], Rs.back()});
            f += "period_trend: first3_max=" + std::to_string(first3) +
                 " last3_max=" + std::to_string(last3) +
                 (last3 > first3 ? " growing=yes" : " growing=no") + "\n";
        } else {
            f += "period_trend: insufficient\n";
        }
    }

    if (res.stabilized_from) {
        f += "stabilized_from: " + std::to_string(*res.stabilized_from) + "\n";
        if (res.fit) {
            f += "functional_cf:\n";
            f += "  R: " + std::to_string(res.fit->R) + "\n";
            for (size_t i = 0; i < res.fit->betas.size(); ++i)
                f += "  a" + std::to_string(i) + "(m): " + res.fit->betas[i].str() + "\n";
            f += "  valid_m: " + std::to_string(res.fit->validated_from) + ".." +
                 std::to_string(res.fit->validated_to) + "\n";
        } else {
            f += "fit_error: " + res.fit_error + "\n";
        }
    } else {
        f += "stabilized_from: none\n";
    }
    res.findings = f;

    if (counts[0] == 0 && counts[4] > 0)
        res.exit_code = 3;
    else if (res.stabilized_from && !res.fit)
        res.exit_code = 4;
    else
        res.exit_code = 0;

    std::ofstream csv_out(cfg.csv_path, std::ios::binary);
    if (!csv_out)
        throw Error(Errc::invalid_argument, "cannot write '" + cfg.csv_path + "'");
    csv_out << res.csv;
    std::ofstream fnd_out(cfg.findings_path, std::ios::binary);
    if (!fnd_out)
        throw Error(Errc::invalid_argument, "cannot write '" + cfg.findings_path + "'");
    fnd_out << res.findings;
    return res;
}

} // namespace cflab
