#pragma once

// Recovering a power sum from integer samples: find the minimal
// integer-coefficient linear recurrence satisfied by the samples, read the
// candidate roots off its characteristic polynomial (which must be
// squarefree with integer roots), solve for the coefficients exactly, and
// validate on held-out samples.  Everything is exact; "no recurrence found"
// and "roots not integers" are first-class outcomes, not numerical noise.

#include "cflab/errors.hpp"
#include "cflab/powersum.hpp"

#include <gmpxx.h>

#include <utility>
#include <vector>

namespace cflab {

// Consecutive integer samples v(m0), v(m0+1), ..., v(m0+k-1).
struct SequenceSample {
    long m0 = 0;
    std::vector<mpz_class> values;

    size_t size() const { return values.size(); }
};

// Monic integer polynomial c[0] + c[1] X + ... + X^deg.
struct MonicIntPoly {
    std::vector<mpz_class> coeffs; // coeffs.back() == 1; empty means the constant 1

    size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    mpz_class eval(const mpz_class& x) const;
    std::string str() const;
};

// Minimal-order recurrence v(k+d) = sum_i x_i v(k+i) with integer x_i that
// holds across the whole sample.  Orders are tried from 1 up to
// floor(size/2) - 1 so at least d+2 equations constrain every attempt;
// exact-rational solutions with non-integer x are skipped (the minimal
// integer recurrence can have higher order than the minimal rational one
// only through window artifacts).  Throws no_recurrence if nothing fits.
// Returns the characteristic polynomial X^d - x_{d-1} X^{d-1} - ... - x_0.
MonicIntPoly min_recurrence(const SequenceSample& s);

// All roots of a squarefree monic integer polynomial, or errors:
// repeated_root if gcd(p, p') is nonconstant, zero_root if X | p,
// non_integer_root if an irreducible factor of degree > 0 remains after
// dividing out all integer roots.  Roots come back in canonical power-sum
// order (decreasing |root|, positive first on ties).
std::vector<mpz_class> integer_roots(const MonicIntPoly& p);

// Solve v(m) = sum_j b_j c_j^m for the b_j given the roots, using the first
// |roots| samples, then check the rest; throws inconsistent if any remaining
// sample disagrees.
std::vector<mpq_class> solve_coefficients(const std::vector<mpz_class>& roots,
                                          const SequenceSample& s);

struct RecurrenceFit {
    MonicIntPoly char_poly;
    std::vector<mpz_class> roots;
    std::vector<mpq_class> coeffs;
    PowerSum fitted;                       // indexed by m
    std::pair<long, long> train_range;    // samples used for fitting
    std::pair<long, long> holdout_range;  // samples used only for validation
};

// End-to-end fit with the last `holdout` samples reserved for validation
// (holdout_mismatch on failure).  integrality_required additionally demands
// integer coefficients b_j (non_integer_coefficient).  An all-zero sample
// fits the zero power sum with char_poly 1.
RecurrenceFit fit_power_sum(const SequenceSample& s, bool integrality_required,
                            size_t holdout = 2);

} // namespace cflab
