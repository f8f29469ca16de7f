#pragma once

// Effective approximation of (sqrt(alpha(n)) + beta(n)) / gamma(n) on a
// parity class n = 2m + r by a closed-form radical expression in m.
//
// After restricting to the parity class, sqrt is expanded by the binomial
// series ( sqrt(B1*C1^m) * sum_j binom(1/2,j) sigma(m)^j with sigma the
// normalized sub-leading part ) and 1/gamma by a geometric series; both are
// truncated at the smallest orders that push the approximation-error decay
// root below target^2, so the error at index m decays like error_root^m with
// error_root < target^2.  All truncation terms are kept exactly, so the
// result is a RadicalSum that can be evaluated or inspected symbolically.

#include "cflab/errors.hpp"
#include "cflab/powersum.hpp"
#include "cflab/ratpowersum.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <vector>

namespace cflab {

// binom(1/2, j): the Taylor coefficients of sqrt(1 + x).
mpq_class binom_half(unsigned long j);

// Truncated expansion of sqrt of a parity-restricted power sum.
struct SqrtExpansion {
    RadicalSum value;        // sqrt(radicand) * series, exact terms
    mpq_class tail_root;     // discarded tail decays like tail_root^m (0 = exact)
    RatPowerSum ratio_series; // sigma: sub-leading part / leading term (in m)
    unsigned long order;      // truncation order (series has order+1 terms max)
};

// sqrt(alpha(2m+r)) to the given truncation order.  alpha is indexed by n;
// the result lives in m.  Requires the restricted sum's leading coefficient
// to be positive (negative_leading).  A restriction that cancels to zero
// yields an exact zero expansion.
SqrtExpansion sqrt_expansion(const PowerSum& alpha, unsigned r, unsigned long order);

// Truncated expansion of 1/gamma for gamma with positive roots, in gamma's
// own index variable.
struct InverseExpansion {
    RatPowerSum value;
    mpq_class tail_root;      // 0 when exact (single-term gamma)
    RatPowerSum ratio_series; // phi: the geometric ratio power sum
    unsigned long order;
};

InverseExpansion inverse_expansion(const PowerSum& gamma, unsigned long order);

// The assembled approximation of (sqrt(alpha) + beta)/gamma on n = 2m + r.
struct SurdRatioApprox {
    RadicalSum approx;          // the approximation, a function of m
    unsigned long sqrt_order;   // chosen truncation order of the sqrt series
    unsigned long inverse_order;// chosen truncation order of the 1/gamma series
    mpq_class target;           // requested decay target t (error << t^{2m})
    mpq_class error_root;       // attained decay root, < target^2
    RatPowerSum sqrt_ratio_series;    // sigma, for inspection
    RatPowerSum inverse_ratio_series; // phi, for inspection
};

// Builds the approximation.  Preconditions: gamma nonzero with positive
// roots after restriction (automatic) and nonzero at the restriction;
// 0 < target < 1; the restricted alpha, if nonzero, has positive leading
// coefficient.  alpha == 0 is allowed (no radical part).  Orders are chosen
// minimal such that both truncation-error decay roots are < target^2.
SurdRatioApprox approximate_surd_ratio(const PowerSum& alpha, const PowerSum& beta,
                                       const PowerSum& gamma, unsigned r,
                                       const mpq_class& target);

// Numeric spot check of a SurdRatioApprox over a range of m: evaluates
// |(sqrt(alpha(2m+r)) + beta(2m+r))/gamma(2m+r)  -  approx(m)| / target^{2m}
// with interval arithmetic, escalating precision until each ratio's floor
// comparison is decided.
struct ApproxCheckRow {
    unsigned long m;
    double ratio;     // upper bound of the decided interval
    bool skipped;     // gamma vanished or alpha negative at this index
};

struct ApproxCheck {
    std::vector<ApproxCheckRow> rows;
    double max_ratio = 0.0;
    bool declared_root_ok = false; // error_root < target^2 as declared
    bool bounded = false;          // no row exceeds 2x the first row's ratio
};

ApproxCheck check_surd_ratio(const SurdRatioApprox& a, const PowerSum& alpha,
                             const PowerSum& beta, const PowerSum& gamma, unsigned r,
                             unsigned long m_lo, unsigned long m_hi,
                             mpfr_prec_t start_prec = 300, mpfr_prec_t max_prec = 4096);

} // namespace cflab
