#pragma once

// Exact power sums: finite expressions  sum_i  b_i * c_i^x  with rational
// coefficients b_i and nonzero integer roots c_i, indexed either by the
// original variable n or by the half-index m (n = 2m + r after restricting to
// a parity class).  The index variable is part of the type state: combining
// an n-sum with an m-sum is an error, except that the zero sum is neutral.
//
// Terms are kept canonical: roots pairwise distinct, ordered by decreasing
// |root| with the positive root first on ties, no zero coefficients.  Under
// that normal form two power sums are equal as functions iff they are equal
// term-by-term, so equality is structural.

#include "cflab/errors.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace cflab {

enum class IndexVar : unsigned char { n, m };

char index_var_letter(IndexVar v);

struct Term {
    mpq_class coeff; // nonzero in canonical form
    mpz_class root;  // nonzero integer

    bool operator==(const Term&) const = default;
};

class PowerSum {
  public:
    // Zero sum; the index variable of a zero sum is irrelevant (it unifies
    // with anything), but we store one for printing.
    PowerSum() : var_(IndexVar::n) {}
    explicit PowerSum(IndexVar v) : var_(v) {}

    // Normalizes: merges equal roots, drops zero coefficients, sorts.
    // Throws zero_root if any term has root 0.
    PowerSum(std::vector<Term> terms, IndexVar v);

    static PowerSum constant(const mpq_class& value, IndexVar v);

    const std::vector<Term>& terms() const { return terms_; }
    IndexVar var() const { return var_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    // Largest root in the canonical order (the growth-dominating one).
    // Throws zero_power_sum on the zero sum.
    const mpz_class& dominant_root() const;
    const mpq_class& leading_coeff() const;

    bool all_roots_positive() const;

    // True iff every coefficient is an integer (then the sum is
    // integer-valued at every index where the roots' powers are integers,
    // i.e. everywhere).
    bool integer_coefficients() const;

    // Exact evaluation at index value k >= 0.
    mpq_class eval(unsigned long k) const;
    // Evaluation when the result must be an integer; throws
    // non_integer_value otherwise.
    mpz_class eval_int(unsigned long k) const;

    PowerSum operator-() const;
    PowerSum operator+(const PowerSum& o) const;
    PowerSum operator-(const PowerSum& o) const;
    PowerSum operator*(const PowerSum& o) const;
    PowerSum operator*(const mpq_class& s) const;
    bool operator==(const PowerSum& o) const;

    // Restriction to the arithmetic progression x = t*m + s (t >= 1,
    // 0 <= s < t): roots become c^t, coefficients pick up c^s, and the result
    // is indexed by m.  This is how a parity class n = 2m + r is entered.
    PowerSum restrict(unsigned long t, unsigned long s) const;

    // Exact square root in the ring, if one with positive integer roots
    // exists: returns xi with xi^2 == *this (leading coefficient positive).
    // Requires all roots positive; works greedily from the dominant root
    // down.  Returns nullopt when *this is not a perfect square.
    std::optional<PowerSum> symbolic_sqrt() const;

    // Canonical text form, e.g. "3*2^n + 1*1^n", "1/2*(-3)^m - 2*1^m".
    std::string str() const;

    // Parses the canonical form back (strict; round-trips bit-exactly with
    // str()).  "0" parses as the zero sum.  Throws parse_error.
    static PowerSum parse(const std::string& text);

  private:
    std::vector<Term> terms_;
    IndexVar var_;

    friend IndexVar unify_vars(const PowerSum& a, const PowerSum& b);
};

// Common index variable of two sums, treating zero as neutral; throws
// unit_mismatch when both are nonzero with different variables.
IndexVar unify_vars(const PowerSum& a, const PowerSum& b);

} // namespace cflab
