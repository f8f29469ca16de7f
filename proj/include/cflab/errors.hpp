#pragma once

// Error taxonomy shared across the library.  Every failure that a caller can
// meaningfully dispatch on carries a code from Errc; the message is for humans.

#include <stdexcept>
#include <string>

namespace cflab {

enum class Errc {
    // input / construction
    parse_error,            // text did not parse as a power sum / rational / config
    invalid_argument,       // precondition on an argument violated
    zero_root,              // a power-sum term with root 0
    unit_mismatch,          // mixing n-indexed and m-indexed power sums
    zero_power_sum,         // operation requires a nonzero power sum
    negative_root,          // operation requires positive roots
    negative_leading,       // leading coefficient must be positive
    perfect_square,         // CF of sqrt(D) undefined for square D
    square_power_sum,       // alpha is the square of a power sum (degenerate)
    non_integer_value,      // power sum expected to be integer-valued was not

    // resource limits
    step_budget_exceeded,   // CF expansion exceeded its step budget
    precision_exhausted,    // interval evaluation hit the precision cap undecided

    // approximation / tail construction
    non_positive_tail,      // reciprocal tail requires p/q < sqrt(D)

    // recurrence fitting
    no_recurrence,          // no linear recurrence of admissible order fits
    repeated_root,          // characteristic polynomial not squarefree
    non_integer_root,       // characteristic root (or expansion root) not an integer
    non_integer_coefficient,// fitted coefficients not integral where required
    inconsistent,           // linear system for coefficients has no solution
    holdout_mismatch,       // fitted model fails on held-out samples

    // lab orchestration
    fit_failed,             // functional CF fit failed for some quotient index
    membership_failed,      // floor(sqrt(alpha)) escaped {eta, eta-1}
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

} // namespace cflab
