#pragma once

// Power sums with positive *rational* roots.  These show up as soon as a
// square root or an inverse is expanded: the expansion terms have roots like
// c1, 1, 1/c1, 1/c1^2, ... that leave the integer-root ring.  Same canonical
// form as PowerSum (distinct roots, decreasing; roots are positive so the
// order is just numeric).
//
// RadicalSum augments that with a single surd: sqrt(rho) * A + B with
// rational rho >= 0 and power-sum parts A, B.  That is exactly the shape of
// the truncated expansion of (sqrt(alpha) + beta)/gamma.

#include "cflab/errors.hpp"
#include "cflab/powersum.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace cflab {

struct RatTerm {
    mpq_class coeff; // nonzero
    mpq_class root;  // > 0

    bool operator==(const RatTerm&) const = default;
};

class RatPowerSum {
  public:
    RatPowerSum() : var_(IndexVar::m) {}
    explicit RatPowerSum(IndexVar v) : var_(v) {}
    RatPowerSum(std::vector<RatTerm> terms, IndexVar v);

    // Lift an integer-root power sum (roots must be positive).
    static RatPowerSum from(const PowerSum& p);

    static RatPowerSum constant(const mpq_class& value, IndexVar v);

    const std::vector<RatTerm>& terms() const { return terms_; }
    IndexVar var() const { return var_; }
    bool is_zero() const { return terms_.empty(); }

    const mpq_class& dominant_root() const; // throws zero_power_sum on zero
    const mpq_class& leading_coeff() const;

    mpq_class eval(unsigned long k) const;

    RatPowerSum operator-() const;
    RatPowerSum operator+(const RatPowerSum& o) const;
    RatPowerSum operator-(const RatPowerSum& o) const;
    RatPowerSum operator*(const RatPowerSum& o) const;
    RatPowerSum operator*(const mpq_class& s) const;
    bool operator==(const RatPowerSum& o) const;

    // Multiplies every root by f > 0 (e.g. to fold a c1^m prefactor into the
    // terms of a series in (C2/C1)^m).
    RatPowerSum scale_roots(const mpq_class& f) const;

    // Keeps only terms whose root satisfies the predicate-by-threshold
    // root >= bound.
    RatPowerSum terms_with_root_at_least(const mpq_class& bound) const;

    // Conversion back to integer roots; throws non_integer_root naming the
    // offending root otherwise.
    PowerSum to_integer_roots() const;

    std::string str() const;

  private:
    std::vector<RatTerm> terms_;
    IndexVar var_;

    friend IndexVar unify_vars(const RatPowerSum& a, const RatPowerSum& b);
};

IndexVar unify_vars(const RatPowerSum& a, const RatPowerSum& b);

// sqrt(radicand) * radical_part + rational_part, the value of a truncated
// surd expansion.  Canonical: if radicand is 0 or a perfect rational square,
// or radical_part is zero, everything is folded into rational_part and
// radicand becomes 0.
struct RadicalSum {
    mpq_class radicand;      // >= 0
    RatPowerSum radical_part;
    RatPowerSum rational_part;

    RadicalSum() : radicand(0) {}
    RadicalSum(mpq_class rho, RatPowerSum radical, RatPowerSum rational);

    bool pure_rational() const { return radical_part.is_zero(); }
    bool operator==(const RadicalSum& o) const;

    std::string str() const;
};

} // namespace cflab
