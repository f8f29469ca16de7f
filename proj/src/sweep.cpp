#include "cflab/sweep.hpp"

#include "cflab/rational.hpp"

#include <omp.h>

#include <exception>

namespace cflab {

namespace {

// Checks one D and reports its period length; returns an empty string on
// success, a description of the first failed check otherwise.
std::string check_one(uint64_t Du, const SweepOptions& opt, uint32_t& period_out) {
    mpz_class D(static_cast<unsigned long>(Du));
    CFExpansion cf = sqrt_cf(D, opt.step_budget);
    period_out = static_cast<uint32_t>(cf.period.size());

    if (!last_quotient_is_2a0(cf)) return "last cycle quotient != 2*a0";
    if (!trace_identity_holds(cf)) return "trace identity failed";

    size_t cc = opt.convergent_checks;
    Convergents c = convergents(cf, cc + 1);

    // Neighboring convergents are unimodular: p_i q_{i-1} - p_{i-1} q_i = (-1)^{i-1}.
    for (size_t i = 1; i < cc; ++i) {
        mpz_class det = c.p[i] * c.q[i - 1] - c.p[i - 1] * c.q[i];
        mpz_class want = (i % 2 == 1) ? 1 : -1;
        if (det != want)
            return "determinant at convergent " + std::to_string(i) + " is " + det.get_str();
    }

    // Approximation quality |sqrt(D) - p_i/q_i| < 1/(q_i q_{i+1}), decided in
    // integers: scaling by q_i q_{i+1} turns it into (u - v sqrt(D))^2 < 1
    // with u = p_i q_{i+1}, v = q_i q_{i+1}, i.e. u^2 + v^2 D - 1 < 2uv sqrt(D);
    // when the left side is nonnegative, squaring gives an exact integer test.
    for (size_t i = 0; i < cc; ++i) {
        mpz_class u = c.p[i] * c.q[i + 1];
        mpz_class v = c.q[i] * c.q[i + 1];
        mpz_class lhs = u * u + v * v * D - 1;
        if (lhs < 0) continue; // (u - v sqrt(D))^2 < 1 holds trivially
        mpz_class rhs = 4 * u * u * v * v * D;
        if (!(lhs * lhs < rhs))
            return "convergent " + std::to_string(i) + " misses the 1/(q_i q_{i+1}) bound";
    }
    return "";
}

} // namespace

SweepResult structural_sweep(const SweepOptions& opt) {
    if (opt.d_max < 2) throw Error(Errc::invalid_argument, "d_max must be at least 2");
    if (opt.convergent_checks < 1)
        throw Error(Errc::invalid_argument, "convergent_checks must be at least 1");

    SweepResult res;
    res.d_max = opt.d_max;
    size_t count = static_cast<size_t>(opt.d_max - 1); // D = 2..d_max
    res.period_len.assign(count, 0);
    std::vector<std::string> what(count);

    auto run_one = [&](size_t i) {
        uint64_t D = 2 + static_cast<uint64_t>(i);
        mpz_class Dz(static_cast<unsigned long>(D));
        if (is_perfect_square(Dz)) return; // period_len stays 0
        try {
            what[i] = check_one(D, opt, res.period_len[i]);
        } catch (const std::exception& e) {
            what[i] = e.what();
        }
    };

    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (size_t i = 0; i < count; ++i) run_one(i);
    } else {
        for (size_t i = 0; i < count; ++i) run_one(i);
    }

    // Serial aggregation keeps the output independent of thread scheduling.
    for (size_t i = 0; i < count; ++i) {
        uint64_t D = 2 + static_cast<uint64_t>(i);
        mpz_class Dz(static_cast<unsigned long>(D));
        if (is_perfect_square(Dz)) continue;
        ++res.nonsquare_count;
        if (!what[i].empty()) res.failures.push_back({D, what[i]});
        if (res.period_len[i] > res.max_period) {
            res.max_period = res.period_len[i];
            res.max_period_at = D;
        }
    }
    return res;
}

} // namespace cflab
