#include "cflab/errors.hpp"

namespace cflab {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::parse_error: return "parse error";
        case Errc::invalid_argument: return "invalid argument";
        case Errc::zero_root: return "zero root";
        case Errc::unit_mismatch: return "index variable mismatch";
        case Errc::zero_power_sum: return "zero power sum";
        case Errc::negative_root: return "negative root";
        case Errc::negative_leading: return "negative leading coefficient";
        case Errc::perfect_square: return "perfect square";
        case Errc::square_power_sum: return "square power sum";
        case Errc::non_integer_value: return "non-integer value";
        case Errc::step_budget_exceeded: return "step budget exceeded";
        case Errc::precision_exhausted: return "precision exhausted";
        case Errc::non_positive_tail: return "non-positive tail";
        case Errc::no_recurrence: return "no recurrence";
        case Errc::repeated_root: return "repeated root";
        case Errc::non_integer_root: return "non-integer root";
        case Errc::non_integer_coefficient: return "non-integer coefficient";
        case Errc::inconsistent: return "inconsistent samples";
        case Errc::holdout_mismatch: return "holdout mismatch";
        case Errc::fit_failed: return "fit failed";
        case Errc::membership_failed: return "membership failed";
    }
    return "unknown error";
}

} // namespace cflab
