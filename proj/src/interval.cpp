#include "cflab/interval.hpp"

#include <utility>

namespace cflab {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, 2);
    mpfr_init2(hi_, 2);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(Interval o) {
    std::swap(prec_, o.prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::from(const mpq_class& x, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, x.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from(const mpz_class& x, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_z(r.lo_, x.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, x.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_long(long x, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, x, MPFR_RNDD);
    mpfr_set_si(r.hi_, x, MPFR_RNDU);
    return r;
}

Interval Interval::operator+(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::operator-(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator*(const Interval& o) const {
    // All four endpoint products, rounded both ways.
    Interval r(std::max(prec_, o.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    bool first = true;
    const mpfr_srcptr as[2] = {lo_, hi_};
    const mpfr_srcptr bs[2] = {o.lo_, o.hi_};
    for (auto a : as)
        for (auto b : bs) {
            mpfr_mul(t, a, b, MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, a, b, MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval Interval::operator/(const Interval& o) const {
    if (o.contains_zero())
        throw Error(Errc::invalid_argument, "interval division by interval containing 0");
    Interval r(std::max(prec_, o.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    bool first = true;
    const mpfr_srcptr as[2] = {lo_, hi_};
    const mpfr_srcptr bs[2] = {o.lo_, o.hi_};
    for (auto a : as)
        for (auto b : bs) {
            mpfr_div(t, a, b, MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_div(t, a, b, MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval Interval::sqrt() const {
    if (mpfr_sgn(lo_) < 0)
        throw Error(Errc::invalid_argument, "interval sqrt of possibly-negative value");
    Interval r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::abs() const {
    Interval r(prec_);
    if (mpfr_sgn(lo_) >= 0) {
        mpfr_set(r.lo_, lo_, MPFR_RNDD);
        mpfr_set(r.hi_, hi_, MPFR_RNDU);
    } else if (mpfr_sgn(hi_) <= 0) {
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    } else {
        mpfr_set_zero(r.lo_, 1);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        if (mpfr_cmp(hi_, r.hi_) > 0) mpfr_set(r.hi_, hi_, MPFR_RNDU);
    }
    return r;
}

Interval Interval::neg() const {
    Interval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

bool Interval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

std::optional<int> Interval::sign() const {
    if (mpfr_sgn(lo_) > 0) return 1;
    if (mpfr_sgn(hi_) < 0) return -1;
    if (mpfr_zero_p(lo_) && mpfr_zero_p(hi_)) return 0;
    return std::nullopt;
}

std::optional<mpz_class> Interval::floor() const {
    mpz_class flo, fhi;
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(lo_));
    mpfr_floor(t, lo_);
    mpfr_get_z(flo.get_mpz_t(), t, MPFR_RNDD);
    mpfr_floor(t, hi_);
    mpfr_get_z(fhi.get_mpz_t(), t, MPFR_RNDD);
    mpfr_clear(t);
    if (flo == fhi) return flo;
    return std::nullopt;
}

std::optional<bool> Interval::less_than(const mpq_class& x) const {
    if (mpfr_cmp_q(hi_, x.get_mpq_t()) < 0) return true;
    if (mpfr_cmp_q(lo_, x.get_mpq_t()) >= 0) return false;
    return std::nullopt;
}

double Interval::upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
double Interval::lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }

mpq_class Interval::upper_rational() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), hi_);
    return q;
}

std::string Interval::str() const {
    char* lo = nullptr;
    char* hi = nullptr;
    mpfr_asprintf(&lo, "%.8Re", lo_);
    mpfr_asprintf(&hi, "%.8Re", hi_);
    std::string out = std::string("[") + lo + ", " + hi + "]";
    mpfr_free_str(lo);
    mpfr_free_str(hi);
    return out;
}

Interval sqrt_interval(const mpq_class& x, mpfr_prec_t prec) {
    if (x < 0)
        throw Error(Errc::invalid_argument, "sqrt of negative rational");
    return Interval::from(x, prec).sqrt();
}

} // namespace cflab
