// Timings for the two data-parallel kernels (structural sweep and period
// scan), serial vs OpenMP, with a cross-check that both paths produce
// identical results.

#include "cflab/lab.hpp"
#include "cflab/sweep.hpp"

#include <omp.h>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

using namespace cflab;

namespace {

bool same_scan(const PeriodScan& a, const PeriodScan& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (size_t i = 0; i < a.rows.size(); ++i) {
        const ScanRow &x = a.rows[i], &y = b.rows[i];
        if (x.m != y.m || x.status != y.status || x.value != y.value || x.a0 != y.a0 ||
            x.period_len != y.period_len || x.period != y.period ||
            x.digest() != y.digest())
            return false;
    }
    return true;
}

bool same_sweep(const SweepResult& a, const SweepResult& b) {
    if (a.nonsquare_count != b.nonsquare_count || a.max_period != b.max_period ||
        a.max_period_at != b.max_period_at || a.period_len != b.period_len ||
        a.failures.size() != b.failures.size())
        return false;
    for (size_t i = 0; i < a.failures.size(); ++i)
        if (a.failures[i].D != b.failures[i].D || a.failures[i].what != b.failures[i].what)
            return false;
    return true;
}

void report(const std::string& name, double serial_s, double parallel_s, bool equal) {
    std::cout << name << ": serial " << serial_s * 1e3 << " ms, parallel "
              << parallel_s * 1e3 << " ms, speedup " << serial_s / parallel_s
              << "x, results " << (equal ? "identical" : "DIFFER") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    uint64_t d_max = 10000;
    if (argc > 1) d_max = std::strtoull(argv[1], nullptr, 10);
    std::cout << "threads: " << omp_get_max_threads() << "\n";

    bool all_equal = true;

    {
        SweepOptions opt;
        opt.d_max = d_max;
        opt.parallel = false;
        double t0 = omp_get_wtime();
        SweepResult serial = structural_sweep(opt);
        double t1 = omp_get_wtime();
        opt.parallel = true;
        SweepResult parallel = structural_sweep(opt);
        double t2 = omp_get_wtime();
        bool eq = same_sweep(serial, parallel);
        all_equal = all_equal && eq;
        report("structural sweep to " + std::to_string(d_max), t1 - t0, t2 - t1, eq);
        std::cout << "  nonsquare D: " << serial.nonsquare_count << ", max period "
                  << serial.max_period << " at D=" << serial.max_period_at
                  << (serial.clean() ? ", all checks passed" : ", CHECKS FAILED") << "\n";
        all_equal = all_equal && serial.clean();
    }

    {
        PowerSum alpha = PowerSum::parse("2*4^n + 1*1^n");
        ScanOptions opt;
        opt.parallel = false;
        double t0 = omp_get_wtime();
        PeriodScan serial = period_scan(alpha, 0, 1, 9, opt);
        double t1 = omp_get_wtime();
        opt.parallel = true;
        PeriodScan parallel = period_scan(alpha, 0, 1, 9, opt);
        double t2 = omp_get_wtime();
        bool eq = same_scan(serial, parallel);
        all_equal = all_equal && eq;
        report("period scan of sqrt(2*4^n + 1), m = 1..9", t1 - t0, t2 - t1, eq);
        uint64_t max_r = 0;
        for (const auto& row : serial.rows) max_r = std::max(max_r, row.period_len);
        std::cout << "  longest period: " << max_r << "\n";
    }

    return all_equal ? 0 : 1;
}
