#include "cflab/hypothesis.hpp"

#include "cflab/approx.hpp"
#include "cflab/rational.hpp"
#include "cflab/ratpowersum.hpp"

namespace cflab {

const char* obstruction_name(Obstruction o) {
    switch (o) {
        case Obstruction::none: return "none";
        case Obstruction::non_square_leading_scalar: return "non-square leading scalar";
        case Obstruction::non_integer_root: return "non-integer expansion root";
        case Obstruction::no_exact_match: return "no exact match";
    }
    return "?";
}

WitnessCandidate witness_candidate(const PowerSum& alpha, unsigned r) {
    if (r > 1) throw Error(Errc::invalid_argument, "parity class must be 0 or 1");
    PowerSum am = alpha.restrict(2, r);
    if (am.is_zero())
        throw Error(Errc::zero_power_sum,
                    alpha.str() + " vanishes on parity class r=" + std::to_string(r));
    if (am.leading_coeff() <= 0)
        throw Error(Errc::negative_leading,
                    "restricted " + am.str() + " has nonpositive leading coefficient");

    WitnessCandidate wc;
    const mpz_class& C1 = am.dominant_root(); // a perfect square by construction
    wc.threshold = isqrt(C1);

    // Any xi with alpha_r - xi^2 decaying below sqrt(C1) must match the sqrt
    // expansion of alpha_r term by term; its terms are the expansion terms
    // with root >= 1.  First requirement: the leading scalar is a square.
    auto s = rational_sqrt(am.leading_coeff());
    if (!s) {
        wc.obstruction = Obstruction::non_square_leading_scalar;
        return wc;
    }

    // Expand far enough that every dropped term has root < 1.
    RatPowerSum sigma(IndexVar::m);
    {
        std::vector<RatTerm> t;
        for (size_t i = 1; i < am.terms().size(); ++i)
            t.push_back({am.terms()[i].coeff / am.leading_coeff(),
                         mpq_class(am.terms()[i].root) / mpq_class(C1)});
        sigma = RatPowerSum(std::move(t), IndexVar::m);
    }
    unsigned long H = 0;
    if (!sigma.is_zero()) {
        mpq_class rho = sigma.dominant_root() * wc.threshold; // H = 0
        while (rho >= 1) {
            ++H;
            rho *= sigma.dominant_root();
        }
    }

    RatPowerSum series = RatPowerSum::constant(*s, IndexVar::m);
    {
        RatPowerSum acc = RatPowerSum::constant(1, IndexVar::m);
        RatPowerSum power = RatPowerSum::constant(1, IndexVar::m);
        for (unsigned long j = 1; j <= H; ++j) {
            power = power * sigma;
            acc = acc + power * binom_half(j);
        }
        series = (acc * *s).scale_roots(mpq_class(wc.threshold));
    }

    RatPowerSum retained = series.terms_with_root_at_least(1);
    for (const RatTerm& t : retained.terms()) {
        if (t.root.get_den() != 1) {
            wc.obstruction = Obstruction::non_integer_root;
            wc.obstruction_root = t.root;
            return wc;
        }
    }
    wc.xi = retained.to_integer_roots();
    return wc;
}

ParityReport check_hypothesis(const PowerSum& alpha, unsigned r) {
    WitnessCandidate wc = witness_candidate(alpha, r);
    ParityReport rep;
    rep.r = r;
    rep.threshold = wc.threshold;
    rep.obstruction = wc.obstruction;
    rep.obstruction_root = wc.obstruction_root;

    if (wc.obstruction != Obstruction::none) {
        rep.holds = true;
        return rep;
    }

    // Independent recheck of the candidate's certificate: the residual's
    // dominant root must sit strictly below the threshold.
    PowerSum am = alpha.restrict(2, r);
    PowerSum residual = am - *wc.xi * *wc.xi;
    if (residual.is_zero()) {
        rep.residual_root = mpz_class(0);
        rep.xi = wc.xi;
        rep.holds = false;
        return rep;
    }
    mpz_class root = abs(residual.dominant_root());
    rep.residual_root = root;
    if (root < wc.threshold) {
        rep.xi = wc.xi;
        rep.holds = false;
    } else {
        // The forced candidate misses the bound, and no other xi can do
        // better (the expansion is forced from the dominant root down), so
        // the hypothesis holds on this class.
        rep.holds = true;
        rep.obstruction = Obstruction::no_exact_match;
    }
    return rep;
}

std::string ParityReport::str() const {
    std::string out = "r=" + std::to_string(r) + ": ";
    if (holds) {
        out += "holds (" + std::string(obstruction_name(obstruction));
        if (obstruction == Obstruction::non_integer_root)
            out += " " + to_string(obstruction_root);
        if (obstruction == Obstruction::no_exact_match && residual_root)
            out += ", residual root " + residual_root->get_str() + " >= threshold " +
                   threshold.get_str();
        out += ")";
        return out;
    }
    out += "fails (witness " + (xi ? xi->str() : std::string("?"));
    if (residual_root)
        out += ", residual root " + residual_root->get_str() + " < threshold " +
               threshold.get_str();
    out += ")";
    return out;
}

std::string PeriodForecast::str() const {
    std::string out = even.str() + "\n" + odd.str() + "\n";
    out += overall == Forecast::unbounded_period
               ? "forecast: period length unbounded on both parity classes"
               : "forecast: no conclusion (a square-approximation witness exists)";
    return out;
}

PeriodForecast forecast_period(const PowerSum& alpha) {
    if (alpha.is_zero())
        throw Error(Errc::zero_power_sum, "alpha must be nonzero");
    if (alpha.all_roots_positive()) {
        if (auto xi = alpha.symbolic_sqrt(); xi)
            throw Error(Errc::square_power_sum,
                        alpha.str() + " = (" + xi->str() + ")^2; sqrt is rational everywhere");
    }
    PeriodForecast f;
    f.even = check_hypothesis(alpha, 0);
    f.odd = check_hypothesis(alpha, 1);
    f.overall = f.even.holds && f.odd.holds ? Forecast::unbounded_period
                                            : Forecast::no_conclusion;
    return f;
}

} // namespace cflab
