#include "cflab/rational.hpp"

#include "cflab/errors.hpp"

#include <cctype>

namespace cflab {

mpz_class isqrt(const mpz_class& n) {
    if (n < 0)
        throw Error(Errc::invalid_argument, "isqrt of negative " + n.get_str());
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const mpz_class& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (!is_perfect_square(num) || !is_perfect_square(den)) return std::nullopt;
    return mpq_class(isqrt(num), isqrt(den));
}

mpz_class pow_z(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

mpq_class pow_q(const mpq_class& base, long e) {
    if (e == 0) return mpq_class(1);
    if (base == 0 && e < 0)
        throw Error(Errc::invalid_argument, "0 raised to negative power");
    unsigned long ae = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    mpq_class r(pow_z(base.get_num(), ae), pow_z(base.get_den(), ae));
    r.canonicalize();
    if (e < 0) r = 1 / r;
    return r;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

mpz_class parse_int(const std::string& text) {
    std::string body = text;
    bool neg = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
        neg = body[0] == '-';
        body.erase(0, 1);
    }
    if (!all_digits(body))
        throw Error(Errc::parse_error, "not an integer: '" + text + "'");
    mpz_class v(body, 10);
    return neg ? mpz_class(-v) : v;
}

mpq_class parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return mpq_class(parse_int(text));
    mpz_class num = parse_int(text.substr(0, slash));
    std::string den_text = text.substr(slash + 1);
    if (!all_digits(den_text))
        throw Error(Errc::parse_error, "bad denominator in '" + text + "'");
    mpz_class den(den_text, 10);
    if (den == 0)
        throw Error(Errc::parse_error, "zero denominator in '" + text + "'");
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const mpq_class& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const mpz_class& z) { return z.get_str(); }

} // namespace cflab
