#include "cflab/cf.hpp"

#include "cflab/rational.hpp"

#include <map>
#include <utility>

namespace cflab {

namespace {

void check_d(const mpz_class& D) {
    if (D <= 0)
        throw Error(Errc::invalid_argument, "radicand must be positive, got " + D.get_str());
    if (is_perfect_square(D))
        throw Error(Errc::perfect_square, "sqrt(" + D.get_str() + ") is rational");
}

// floor((P + sqrt(D)) / Q) using only s = floor(sqrt(D)); exact because
// sqrt(D) is irrational, so it lies strictly between s and s+1.
mpz_class surd_floor(const mpz_class& P, const mpz_class& Q, const mpz_class& s) {
    mpz_class num = Q > 0 ? mpz_class(P + s) : mpz_class(P + s + 1);
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
    return q;
}

} // namespace

QuadSurd::QuadSurd(mpz_class p, mpz_class q, mpz_class d)
    : P(std::move(p)), Q(std::move(q)), D(std::move(d)) {
    check_d(D);
    if (Q == 0) throw Error(Errc::invalid_argument, "surd denominator is zero");
    // The expansion step needs Q | D - P^2; scale by |Q| if necessary.
    if ((D - P * P) % Q != 0) {
        mpz_class aq = abs(Q);
        P *= aq;
        D *= aq * aq;
        Q *= aq;
    }
}

std::string QuadSurd::str() const {
    return "(sqrt(" + D.get_str() + ") + " + P.get_str() + ")/" + Q.get_str();
}

const mpz_class& CFExpansion::quotient(size_t i) const {
    if (i == 0) return a0;
    --i;
    if (i < preperiod.size()) return preperiod[i];
    i -= preperiod.size();
    return period[i % period.size()];
}

std::string CFExpansion::str() const {
    std::string out = "[" + a0.get_str() + ";";
    for (const mpz_class& a : preperiod) out += " " + a.get_str() + ",";
    out += " (";
    for (size_t i = 0; i < period.size(); ++i)
        out += (i ? ", " : "") + period[i].get_str();
    out += ")]";
    return out;
}

// --- sqrt(D) ----------------------------------------------------------------

// The cycle of sqrt(D) starts right after a0, so closing it only needs the
// state that produced the first cycle quotient; no state table.
namespace {

template <typename F>
std::pair<mpz_class, uint64_t> sqrt_stream(const mpz_class& D, uint64_t max_steps, F&& f) {
    check_d(D);
    mpz_class s = isqrt(D);
    mpz_class a0 = s;
    mpz_class P = a0;          // P_1
    mpz_class Q = D - a0 * a0; // Q_1  (> 0 since D nonsquare)
    const mpz_class P1 = P, Q1 = Q;
    uint64_t R = 0;
    for (;;) {
        if (R >= max_steps)
            throw Error(Errc::step_budget_exceeded,
                        "sqrt(" + D.get_str() + "): no cycle within " +
                            std::to_string(max_steps) + " quotients");
        mpz_class a = surd_floor(P, Q, s);
        f(a);
        ++R;
        P = a * Q - P;
        Q = (D - P * P) / Q;
        if (P == P1 && Q == Q1) return {a0, R};
    }
}

} // namespace

CFExpansion sqrt_cf(const mpz_class& D, uint64_t max_steps) {
    CFExpansion cf;
    auto [a0, R] = sqrt_stream(D, max_steps, [&](const mpz_class& a) { cf.period.push_back(a); });
    (void)R;
    cf.a0 = a0;
    return cf;
}

SqrtCFDigest sqrt_cf_digest(const mpz_class& D, uint64_t max_steps, uint64_t trace_cutoff) {
    SqrtCFDigest d;
    // Tail-convergent seeds: p'_0 = 1, p'_{-1} = 0; q'_0 = 0, q'_{-1} = 1.
    mpz_class pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
    uint64_t steps = 0;
    bool tracing = true;
    auto [a0, R] = sqrt_stream(D, max_steps, [&](const mpz_class& a) {
        ++steps;
        if (d.period_head.size() < 8) d.period_head.push_back(a);
        d.period_last = a;
        if (tracing && steps > trace_cutoff) tracing = false;
        if (tracing) {
            mpz_class p = a * pm1 + pm2;
            mpz_class q = a * qm1 + qm2;
            pm2 = pm1; pm1 = p;
            qm2 = qm1; qm1 = q;
        }
    });
    d.a0 = a0;
    d.period_len = R;
    d.trace_available = tracing;
    if (tracing) {
        d.tp_last = pm1;
        d.tp_prev = pm2;
        d.tq_last = qm1;
        d.tq_prev = qm2;
    }
    return d;
}

// --- general surds ----------------------------------------------------------

CFExpansion surd_cf(const QuadSurd& surd, uint64_t max_steps) {
    const mpz_class& D = surd.D;
    mpz_class s = isqrt(D);
    mpz_class P = surd.P, Q = surd.Q;

    CFExpansion cf;
    cf.a0 = surd_floor(P, Q, s);
    P = cf.a0 * Q - P;
    Q = (D - P * P) / Q;

    // Quotients a_1, a_2, ... with their generating states; the first state
    // repetition closes the cycle.
    std::vector<mpz_class> quots;
    std::map<std::pair<mpz_class, mpz_class>, size_t> seen;
    for (uint64_t step = 0; step < max_steps; ++step) {
        auto [it, fresh] = seen.try_emplace({P, Q}, quots.size());
        if (!fresh) {
            size_t start = it->second;
            cf.preperiod.assign(quots.begin(), quots.begin() + start);
            cf.period.assign(quots.begin() + start, quots.end());
            return cf;
        }
        mpz_class a = surd_floor(P, Q, s);
        quots.push_back(a);
        P = a * Q - P;
        Q = (D - P * P) / Q;
    }
    throw Error(Errc::step_budget_exceeded,
                surd.str() + ": no cycle within " + std::to_string(max_steps) + " quotients");
}

// --- convergents ------------------------------------------------------------

Convergents convergents(const CFExpansion& cf, size_t count) {
    Convergents c;
    mpz_class pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
    for (size_t i = 0; i < count; ++i) {
        const mpz_class& a = cf.quotient(i);
        mpz_class p = a * pm1 + pm2;
        mpz_class q = a * qm1 + qm2;
        c.p.push_back(p);
        c.q.push_back(q);
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
    }
    return c;
}

Convergents tail_convergents(const CFExpansion& cf, size_t count) {
    Convergents c;
    mpz_class pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
    for (size_t i = 0; i < count; ++i) {
        const mpz_class& a = cf.quotient(i + 1);
        mpz_class p = a * pm1 + pm2;
        mpz_class q = a * qm1 + qm2;
        c.p.push_back(p);
        c.q.push_back(q);
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
    }
    return c;
}

namespace {

void need_pure_cycle(const CFExpansion& cf, const char* who) {
    if (!cf.preperiod.empty())
        throw Error(Errc::invalid_argument,
                    std::string(who) + " needs a sqrt-type expansion (empty preperiod)");
    if (cf.period.empty())
        throw Error(Errc::invalid_argument, std::string(who) + " needs a nonempty cycle");
}

} // namespace

TailQuadratic tail_quadratic(const CFExpansion& cf) {
    need_pure_cycle(cf, "tail_quadratic");
    size_t R = cf.period.size();
    Convergents t = tail_convergents(cf, R);
    // x = [cycle...] forever satisfies x = (p'_R x + p'_{R-1})/(q'_R x + q'_{R-1}).
    mpz_class pR = t.p[R - 1];
    mpz_class pRm1 = R >= 2 ? t.p[R - 2] : mpz_class(1);
    mpz_class qR = t.q[R - 1];
    mpz_class qRm1 = R >= 2 ? t.q[R - 2] : mpz_class(0);
    return {qR, qRm1 - pR, -pRm1};
}

bool last_quotient_is_2a0(const CFExpansion& cf) {
    need_pure_cycle(cf, "last_quotient_is_2a0");
    return cf.period.back() == 2 * cf.a0;
}

bool trace_identity_holds(const CFExpansion& cf) {
    need_pure_cycle(cf, "trace_identity_holds");
    size_t R = cf.period.size();
    Convergents t = tail_convergents(cf, R);
    mpz_class pR = t.p[R - 1];
    mpz_class pRm1 = R >= 2 ? t.p[R - 2] : mpz_class(1);
    mpz_class qRm1 = R >= 2 ? t.q[R - 2] : mpz_class(0);
    return 2 * cf.a0 * pRm1 == pR - qRm1;
}

bool trace_identity_holds(const SqrtCFDigest& d) {
    if (!d.trace_available)
        throw Error(Errc::invalid_argument, "digest cycle exceeded the trace cutoff");
    return 2 * d.a0 * d.tp_prev == d.tp_last - d.tq_prev;
}

// --- reciprocal tails -------------------------------------------------------

QuadSurd surd_reciprocal_tail(const mpz_class& D, const mpz_class& p, const mpz_class& q) {
    check_d(D);
    if (q <= 0) throw Error(Errc::invalid_argument, "denominator must be positive");
    // p/q < sqrt(D)  <=>  p^2 < q^2 D (p may be negative).
    if (p >= 0 && p * p >= q * q * D)
        throw Error(Errc::non_positive_tail,
                    p.get_str() + "/" + q.get_str() + " >= sqrt(" + D.get_str() + ")");
    // 1/(sqrt(D) - p/q) = q/(q sqrt(D) - p), rationalized:
    // q (q sqrt(D) + p) / (q^2 D - p^2) = (sqrt(q^4 D) + p q)/(q^2 D - p^2).
    return QuadSurd(p * q, q * q * D - p * p, pow_z(q, 4) * D);
}

QuadSurd surd_abs_reciprocal(const mpz_class& D, const mpz_class& p, const mpz_class& q) {
    check_d(D);
    if (q <= 0) throw Error(Errc::invalid_argument, "denominator must be positive");
    if (p < 0 || p * p < q * q * D) return surd_reciprocal_tail(D, p, q);
    // p/q > sqrt(D): 1/(p/q - sqrt(D)) = q/(p - q sqrt(D)), rationalized:
    // q (p + q sqrt(D)) / (p^2 - q^2 D) = (sqrt(q^4 D) + p q)/(p^2 - q^2 D).
    return QuadSurd(p * q, p * p - q * q * D, pow_z(q, 4) * D);
}

} // namespace cflab
