#pragma once

// Exact continued fractions of quadratic surds (P + sqrt(D))/Q via the
// classical P,Q recurrence.  All arithmetic is integer-exact; the period is
// detected as the first repetition of a complete-quotient state, so results
// are certificates, not floating-point guesses.

#include "cflab/errors.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cflab {

// (P + sqrt(D)) / Q with D > 0 not a perfect square, Q != 0, and the
// divisibility Q | D - P^2 that the expansion step preserves.  Construction
// normalizes an arbitrary surd into that form (multiplying through by |Q|).
struct QuadSurd {
    mpz_class P, Q, D;

    QuadSurd(mpz_class p, mpz_class q, mpz_class d);

    bool operator==(const QuadSurd&) const = default;
    std::string str() const;
};

struct CFExpansion {
    mpz_class a0;
    std::vector<mpz_class> preperiod; // quotients between a0 and the cycle
    std::vector<mpz_class> period;    // nonempty for quadratic irrationals

    size_t period_len() const { return period.size(); }

    // Quotient a_i of the infinite expansion (i = 0 gives a0).
    const mpz_class& quotient(size_t i) const;

    std::string str() const;
};

inline constexpr uint64_t kDefaultStepBudget = 1000000;

// CF of sqrt(D).  D must be positive and not a perfect square
// (perfect_square / invalid_argument); throws step_budget_exceeded if the
// period is not closed within max_steps quotients.
CFExpansion sqrt_cf(const mpz_class& D, uint64_t max_steps = kDefaultStepBudget);

// CF of a general quadratic surd.  Same budget behavior.
CFExpansion surd_cf(const QuadSurd& s, uint64_t max_steps = kDefaultStepBudget);

// Streaming summary of sqrt_cf for scans that must not hold the whole cycle
// in memory: keeps a0, the period length, the first 8 and last quotient of
// the cycle, and the tail-convergent state needed for the trace identity.
// The tail convergents grow linearly in bit size with the step count, so
// they are only accumulated through trace_cutoff quotients; longer cycles
// report trace_available = false.
struct SqrtCFDigest {
    mpz_class a0;
    uint64_t period_len = 0;
    std::vector<mpz_class> period_head; // first min(8, R) cycle quotients
    mpz_class period_last;
    bool trace_available = false;
    // Tail convergents over the cycle: numerators/denominators of
    // [a1; ..., a_R] and its one-shorter prefix.
    mpz_class tp_last, tp_prev; // p'_R, p'_{R-1}
    mpz_class tq_last, tq_prev; // q'_R, q'_{R-1}
};

SqrtCFDigest sqrt_cf_digest(const mpz_class& D, uint64_t max_steps = kDefaultStepBudget,
                            uint64_t trace_cutoff = 20000);

// Convergents p_i/q_i of the full expansion, i = 0..count-1 (p_0 = a0,
// q_0 = 1).  The expansion's period is unrolled as needed.
struct Convergents {
    std::vector<mpz_class> p, q;
};

Convergents convergents(const CFExpansion& cf, size_t count);

// Convergents p'_i/q'_i of the tail [a_1; a_2, ...] (p'_0 = a_1, q'_0 = 1,
// with seeds p'_{-1} = 1... the standard recurrence started one step in).
Convergents tail_convergents(const CFExpansion& cf, size_t count);

// The value x = [period...] repeated forever (the purely periodic tail of
// sqrt(D)) satisfies A x^2 + B x + C = 0 with the coefficients below, built
// from the tail convergents over one cycle.  Returns {A, B, C}.
struct TailQuadratic {
    mpz_class A, B, C;
};

TailQuadratic tail_quadratic(const CFExpansion& cf);

// Checks the two structural facts about sqrt(D) cycles on an expansion:
// the last cycle quotient equals 2*a0, and the tail convergents satisfy
// 2*a0 * p'_{R-1} == p'_R - q'_{R-1}.
bool last_quotient_is_2a0(const CFExpansion& cf);
bool trace_identity_holds(const CFExpansion& cf);
bool trace_identity_holds(const SqrtCFDigest& d);

// 1 / (sqrt(D) - p/q) as a quadratic surd, for p/q < sqrt(D) (q > 0):
// (sqrt(D q^4) + p q) / (q^2 D - p^2).  Throws non_positive_tail when
// p/q >= sqrt(D).
QuadSurd surd_reciprocal_tail(const mpz_class& D, const mpz_class& p, const mpz_class& q);

// |sqrt(D) - p/q|^{-1} as a surd, either side.
QuadSurd surd_abs_reciprocal(const mpz_class& D, const mpz_class& p, const mpz_class& q);

} // namespace cflab
