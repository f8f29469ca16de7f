#include "cflab/approx.hpp"

#include "cflab/interval.hpp"
#include "cflab/rational.hpp"

namespace cflab {

mpq_class binom_half(unsigned long j) {
    // binom(1/2, 0) = 1;  binom(1/2, j) = binom(1/2, j-1) * (1/2 - (j-1)) / j.
    mpq_class b(1);
    for (unsigned long k = 1; k <= j; ++k)
        b *= (mpq_class(1, 2) - mpq_class(k - 1)) / mpq_class(k);
    return b;
}

namespace {

// sum_{j=0..order} binom(1/2, j) * sigma^j
RatPowerSum binomial_series(const RatPowerSum& sigma, unsigned long order) {
    RatPowerSum acc = RatPowerSum::constant(1, sigma.var());
    RatPowerSum power = RatPowerSum::constant(1, sigma.var());
    for (unsigned long j = 1; j <= order; ++j) {
        power = power * sigma;
        acc = acc + power * binom_half(j);
    }
    return acc;
}

// sum_{j=0..order} phi^j
RatPowerSum geometric_series(const RatPowerSum& phi, unsigned long order) {
    RatPowerSum acc = RatPowerSum::constant(1, phi.var());
    RatPowerSum power = RatPowerSum::constant(1, phi.var());
    for (unsigned long j = 1; j <= order; ++j) {
        power = power * phi;
        acc = acc + power;
    }
    return acc;
}

// The normalized sub-leading series of a power sum with positive leading
// coefficient: sum_{i>=2} (b_i/b_1) (c_i/c_1)^x, roots all in (0, 1).
RatPowerSum ratio_series_of(const PowerSum& p) {
    const Term& lead = p.terms().front();
    std::vector<RatTerm> t;
    for (size_t i = 1; i < p.terms().size(); ++i) {
        const Term& x = p.terms()[i];
        t.push_back({x.coeff / lead.coeff, mpq_class(x.root) / mpq_class(lead.root)});
    }
    return RatPowerSum(std::move(t), p.var());
}

} // namespace

SqrtExpansion sqrt_expansion(const PowerSum& alpha, unsigned r, unsigned long order) {
    if (r > 1) throw Error(Errc::invalid_argument, "parity class must be 0 or 1");
    PowerSum am = alpha.restrict(2, r);

    SqrtExpansion ex;
    ex.order = order;
    ex.tail_root = 0;
    ex.ratio_series = RatPowerSum(IndexVar::m);
    if (am.is_zero()) {
        ex.value = RadicalSum(); // exact 0
        return ex;
    }
    if (am.leading_coeff() <= 0)
        throw Error(Errc::negative_leading,
                    "restricted " + am.str() + " has nonpositive leading coefficient");

    // Roots of the restricted sum are squares c^2, so the dominant root has
    // an exact integer sqrt.
    const mpz_class& C1 = am.dominant_root();
    mpz_class c1 = isqrt(C1);

    ex.ratio_series = ratio_series_of(am);
    RatPowerSum series = binomial_series(ex.ratio_series, order);
    ex.value = RadicalSum(am.leading_coeff(), series.scale_roots(mpq_class(c1)),
                          RatPowerSum(IndexVar::m));
    if (!ex.ratio_series.is_zero())
        ex.tail_root = pow_q(ex.ratio_series.dominant_root(), static_cast<long>(order) + 1) *
                       mpq_class(c1);
    return ex;
}

InverseExpansion inverse_expansion(const PowerSum& gamma, unsigned long order) {
    if (gamma.is_zero())
        throw Error(Errc::zero_power_sum, "cannot invert the zero power sum");
    if (!gamma.all_roots_positive())
        throw Error(Errc::negative_root, "inverse expansion needs positive roots: " + gamma.str());

    const Term& lead = gamma.terms().front();
    InverseExpansion ex;
    ex.order = order;
    ex.tail_root = 0;
    // phi = -(sub-leading)/(leading); 1/gamma = (1/(b1 c1^x)) sum_j phi^j + tail.
    ex.ratio_series = -ratio_series_of(gamma);
    RatPowerSum series = geometric_series(ex.ratio_series, order);
    ex.value = (series * (1 / lead.coeff)).scale_roots(1 / mpq_class(lead.root));
    if (!ex.ratio_series.is_zero()) {
        mpq_class g_ratio = mpq_class(gamma.terms()[1].root) / mpq_class(lead.root);
        ex.tail_root = pow_q(g_ratio, static_cast<long>(order) + 1) / mpq_class(lead.root);
    }
    return ex;
}

SurdRatioApprox approximate_surd_ratio(const PowerSum& alpha, const PowerSum& beta,
                                       const PowerSum& gamma, unsigned r,
                                       const mpq_class& target) {
    if (r > 1) throw Error(Errc::invalid_argument, "parity class must be 0 or 1");
    if (!(target > 0 && target < 1))
        throw Error(Errc::invalid_argument, "target must lie in (0, 1)");
    if (gamma.is_zero())
        throw Error(Errc::zero_power_sum, "gamma must be nonzero");

    PowerSum am = alpha.restrict(2, r);
    PowerSum bm = beta.restrict(2, r);
    PowerSum gm = gamma.restrict(2, r);
    if (gm.is_zero())
        throw Error(Errc::zero_power_sum, "gamma vanishes on parity class r=" + std::to_string(r));
    if (!am.is_zero() && am.leading_coeff() <= 0)
        throw Error(Errc::negative_leading,
                    "restricted " + am.str() + " has nonpositive leading coefficient");

    const mpq_class t2 = target * target;
    const mpq_class G1(gm.dominant_root());

    // Growth scale of the numerator: c1 from the sqrt part and/or the
    // dominant root of beta's restriction.
    mpq_class c1(0);
    if (!am.is_zero()) c1 = mpq_class(isqrt(am.dominant_root()));
    mpq_class E1 = bm.is_zero() ? mpq_class(0) : mpq_class(bm.dominant_root());
    mpq_class num_scale = std::max(c1, E1);
    if (num_scale == 0) num_scale = 1; // alpha == beta == 0: the value is exactly 0

    // Smallest sqrt truncation order with decay root below target^2.  The
    // sqrt tail is divided by gamma ~ G1^m, which helps.
    unsigned long H = 0;
    mpq_class rho_sqrt(0);
    if (am.size() >= 2) {
        mpq_class ratio = mpq_class(am.terms()[1].root) / mpq_class(am.dominant_root());
        rho_sqrt = ratio * c1 / G1; // H = 0
        while (rho_sqrt >= t2) {
            ++H;
            rho_sqrt *= ratio;
        }
    }

    // Smallest inverse truncation order, weighted by the numerator scale.
    unsigned long s = 0;
    mpq_class rho_inv(0);
    if (gm.size() >= 2) {
        mpq_class ratio = mpq_class(gm.terms()[1].root) / G1;
        rho_inv = ratio / G1 * num_scale; // s = 0
        while (rho_inv >= t2) {
            ++s;
            rho_inv *= ratio;
        }
    }

    SqrtExpansion sq = sqrt_expansion(alpha, r, H);
    InverseExpansion inv = inverse_expansion(gm, s);

    RadicalSum head(sq.value.radicand, sq.value.radical_part,
                    sq.value.rational_part + RatPowerSum::from(bm));
    RadicalSum approx(head.radicand, head.radical_part * inv.value,
                      head.rational_part * inv.value);

    SurdRatioApprox out;
    out.approx = approx;
    out.sqrt_order = H;
    out.inverse_order = s;
    out.target = target;
    out.error_root = std::max(rho_sqrt, rho_inv);
    out.sqrt_ratio_series = sq.ratio_series;
    out.inverse_ratio_series = inv.ratio_series;
    if (!(out.error_root < t2))
        throw Error(Errc::invalid_argument, "internal: attained decay root not below target^2");
    return out;
}

ApproxCheck check_surd_ratio(const SurdRatioApprox& a, const PowerSum& alpha,
                             const PowerSum& beta, const PowerSum& gamma, unsigned r,
                             unsigned long m_lo, unsigned long m_hi,
                             mpfr_prec_t start_prec, mpfr_prec_t max_prec) {
    if (m_lo > m_hi) throw Error(Errc::invalid_argument, "empty m range");

    ApproxCheck out;
    out.declared_root_ok = a.error_root < a.target * a.target;

    for (unsigned long m = m_lo; m <= m_hi; ++m) {
        unsigned long n = 2 * m + r;
        mpq_class av = alpha.eval(n);
        mpq_class bv = beta.eval(n);
        mpq_class gv = gamma.eval(n);
        if (gv == 0 || av < 0) {
            out.rows.push_back({m, 0.0, true});
            continue;
        }
        mpq_class A = a.approx.radical_part.eval(m);
        mpq_class B = a.approx.rational_part.eval(m);
        mpq_class den = pow_q(a.target, 2 * static_cast<long>(m));

        double ratio = 0.0;
        bool decided = false;
        for (mpfr_prec_t p = start_prec; p <= max_prec; p *= 2) {
            Interval value = (sqrt_interval(av, p) + Interval::from(bv, p)) / Interval::from(gv, p);
            Interval approx = sqrt_interval(a.approx.radicand, p) * Interval::from(A, p) +
                              Interval::from(B, p);
            Interval rat = (value - approx).abs() * Interval::from(mpq_class(1) / den, p);
            double hi = rat.upper_double();
            double lo = rat.lower_double();
            if (hi - lo <= 1e-9 * std::max(hi, 1e-30)) {
                ratio = hi;
                decided = true;
                break;
            }
        }
        if (!decided)
            throw Error(Errc::precision_exhausted,
                        "ratio at m=" + std::to_string(m) + " undecided at " +
                            std::to_string(max_prec) + " bits");
        out.rows.push_back({m, ratio, false});
        if (ratio > out.max_ratio) out.max_ratio = ratio;
    }

    // Bounded: no row exceeds twice the first usable row's ratio.
    double first = -1.0;
    bool ok = true;
    for (const auto& row : out.rows) {
        if (row.skipped) continue;
        if (first < 0) {
            first = row.ratio;
            continue;
        }
        if (row.ratio > 2 * first + 1e-300) ok = false;
    }
    out.bounded = first >= 0 && ok;
    return out;
}

} // namespace cflab
