#pragma once

// Directed-rounding interval arithmetic on MPFR numbers: every operation
// rounds the lower endpoint down and the upper endpoint up, so the true real
// value is always enclosed.  Used wherever an exact comparison has to be
// settled numerically (floor of a surd expression, approximation-error
// ratios): a comparison is only reported when the interval decides it, and
// callers escalate precision otherwise.

#include "cflab/errors.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>

namespace cflab {

class Interval {
  public:
    explicit Interval(mpfr_prec_t prec);
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(Interval o);
    ~Interval();

    mpfr_prec_t prec() const { return prec_; }

    static Interval from(const mpq_class& x, mpfr_prec_t prec);
    static Interval from(const mpz_class& x, mpfr_prec_t prec);
    static Interval from_long(long x, mpfr_prec_t prec);

    Interval operator+(const Interval& o) const;
    Interval operator-(const Interval& o) const;
    Interval operator*(const Interval& o) const;
    Interval operator/(const Interval& o) const; // o must not contain 0
    Interval sqrt() const;                        // lower endpoint must be >= 0
    Interval abs() const;
    Interval neg() const;

    bool contains_zero() const;
    // Strict sign if decided: -1, +1, or nullopt when the interval straddles 0.
    std::optional<int> sign() const;

    // Floor of the enclosed value if both endpoints agree on it.
    std::optional<mpz_class> floor() const;

    // Comparison against an exact rational: true/false when decided.
    std::optional<bool> less_than(const mpq_class& x) const;

    double upper_double() const; // rounded up
    double lower_double() const; // rounded down
    mpq_class upper_rational() const;

    std::string str() const;

  private:
    mpfr_t lo_, hi_;
    mpfr_prec_t prec_;
};

// sqrt of an exact nonnegative rational as an interval.
Interval sqrt_interval(const mpq_class& x, mpfr_prec_t prec);

} // namespace cflab
