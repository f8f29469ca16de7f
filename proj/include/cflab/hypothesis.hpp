#pragma once

// The square-approximability test behind the period-growth criterion: on a
// parity class n = 2m + r, can alpha(2m+r) be written as xi(m)^2 + small,
// with xi an integer-root power sum and the remainder's growth root below
// sqrt of alpha's dominant root?  If no such xi exists on either parity
// class, the period length of the continued fraction of sqrt(alpha(n)) is
// unbounded along that class.

#include "cflab/errors.hpp"
#include "cflab/powersum.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>

namespace cflab {

enum class Obstruction {
    none,                      // a candidate xi exists (hypothesis fails)
    non_square_leading_scalar, // leading restricted coefficient not a rational square
    non_integer_root,          // a retained expansion root is not an integer
    no_exact_match,            // candidate exists but no exact certificate (reserved)
};

const char* obstruction_name(Obstruction o);

// The unique candidate for xi on parity class r: the part of the sqrt
// expansion of the restricted alpha whose roots are >= 1.  Everything below
// root 1 decays, so any xi that works must equal this retained part.
struct WitnessCandidate {
    std::optional<PowerSum> xi;  // set when no obstruction
    Obstruction obstruction = Obstruction::none;
    mpq_class obstruction_root;  // the offending root for non_integer_root
    mpz_class threshold;         // c1 = sqrt of the restricted dominant root
};

WitnessCandidate witness_candidate(const PowerSum& alpha, unsigned r);

struct ParityReport {
    unsigned r = 0;
    bool holds = false;               // hypothesis holds on this class
    Obstruction obstruction = Obstruction::none;
    mpq_class obstruction_root;
    std::optional<PowerSum> xi;       // witness when the hypothesis fails
    std::optional<mpz_class> residual_root; // dominant root of alpha_r - xi^2 (0 if exact square)
    mpz_class threshold;              // c1; residual_root < threshold certifies the witness
    std::string str() const;
};

// Decides the hypothesis on one parity class.  alpha must be nonzero with
// positive leading coefficient after restriction (negative_leading), and the
// restriction must not vanish (zero_power_sum).
ParityReport check_hypothesis(const PowerSum& alpha, unsigned r);

enum class Forecast {
    unbounded_period, // hypothesis holds on both parity classes
    no_conclusion,    // some class admits a witness: the test is silent
};

struct PeriodForecast {
    ParityReport even, odd;
    Forecast overall = Forecast::no_conclusion;
    std::string str() const;
};

// Runs both parity classes.  Rejects alpha that is itself a perfect square
// power sum (square_power_sum): sqrt(alpha(n)) is then rational for all n
// and periods are not defined.  (The square test runs only when all roots
// are positive; a square with mixed-sign roots is still caught per class via
// a zero residual, which reports as a witness.)
PeriodForecast forecast_period(const PowerSum& alpha);

} // namespace cflab
