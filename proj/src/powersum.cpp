#include "cflab/powersum.hpp"

#include "cflab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace cflab {

char index_var_letter(IndexVar v) { return v == IndexVar::n ? 'n' : 'm'; }

namespace {

// Canonical term order: decreasing |root|, positive root first on ties.
bool root_before(const mpz_class& a, const mpz_class& b) {
    mpz_class aa = abs(a), ab = abs(b);
    if (aa != ab) return aa > ab;
    return a > b;
}

} // namespace

PowerSum::PowerSum(std::vector<Term> terms, IndexVar v) : var_(v) {
    for (const Term& t : terms)
        if (t.root == 0)
            throw Error(Errc::zero_root, "power-sum term with root 0");
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return root_before(a.root, b.root); });
    for (Term& t : terms) {
        if (t.root == 0) continue;
        if (!terms_.empty() && terms_.back().root == t.root)
            terms_.back().coeff += t.coeff;
        else
            terms_.push_back(t);
        if (!terms_.empty() && terms_.back().coeff == 0) terms_.pop_back();
    }
}

PowerSum PowerSum::constant(const mpq_class& value, IndexVar v) {
    if (value == 0) return PowerSum(v);
    return PowerSum({{value, mpz_class(1)}}, v);
}

const mpz_class& PowerSum::dominant_root() const {
    if (is_zero())
        throw Error(Errc::zero_power_sum, "zero power sum has no dominant root");
    return terms_.front().root;
}

const mpq_class& PowerSum::leading_coeff() const {
    if (is_zero())
        throw Error(Errc::zero_power_sum, "zero power sum has no leading coefficient");
    return terms_.front().coeff;
}

bool PowerSum::all_roots_positive() const {
    for (const Term& t : terms_)
        if (t.root <= 0) return false;
    return true;
}

bool PowerSum::integer_coefficients() const {
    for (const Term& t : terms_)
        if (t.coeff.get_den() != 1) return false;
    return true;
}

mpq_class PowerSum::eval(unsigned long k) const {
    mpq_class acc(0);
    for (const Term& t : terms_)
        acc += t.coeff * mpq_class(pow_z(t.root, k));
    return acc;
}

mpz_class PowerSum::eval_int(unsigned long k) const {
    mpq_class v = eval(k);
    if (v.get_den() != 1)
        throw Error(Errc::non_integer_value,
                    str() + " at " + std::to_string(k) + " = " + to_string(v));
    return v.get_num();
}

IndexVar unify_vars(const PowerSum& a, const PowerSum& b) {
    if (a.is_zero()) return b.var_;
    if (b.is_zero()) return a.var_;
    if (a.var_ != b.var_)
        throw Error(Errc::unit_mismatch, "combining " + a.str() + " with " + b.str());
    return a.var_;
}

PowerSum PowerSum::operator-() const {
    std::vector<Term> t = terms_;
    for (Term& x : t) x.coeff = -x.coeff;
    return PowerSum(std::move(t), var_);
}

PowerSum PowerSum::operator+(const PowerSum& o) const {
    IndexVar v = unify_vars(*this, o);
    std::vector<Term> t = terms_;
    t.insert(t.end(), o.terms_.begin(), o.terms_.end());
    return PowerSum(std::move(t), v);
}

PowerSum PowerSum::operator-(const PowerSum& o) const { return *this + (-o); }

PowerSum PowerSum::operator*(const PowerSum& o) const {
    IndexVar v = unify_vars(*this, o);
    std::vector<Term> t;
    t.reserve(terms_.size() * o.terms_.size());
    for (const Term& a : terms_)
        for (const Term& b : o.terms_)
            t.push_back({a.coeff * b.coeff, a.root * b.root});
    return PowerSum(std::move(t), v);
}

PowerSum PowerSum::operator*(const mpq_class& s) const {
    std::vector<Term> t = terms_;
    for (Term& x : t) x.coeff *= s;
    return PowerSum(std::move(t), var_);
}

bool PowerSum::operator==(const PowerSum& o) const {
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    return var_ == o.var_ && terms_ == o.terms_;
}

PowerSum PowerSum::restrict(unsigned long t, unsigned long s) const {
    if (t == 0 || s >= t)
        throw Error(Errc::invalid_argument, "restriction needs t >= 1, 0 <= s < t");
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const Term& x : terms_)
        out.push_back({x.coeff * mpq_class(pow_z(x.root, s)), pow_z(x.root, t)});
    return PowerSum(std::move(out), IndexVar::m);
}

std::optional<PowerSum> PowerSum::symbolic_sqrt() const {
    if (is_zero()) return PowerSum(var_);
    if (!all_roots_positive())
        throw Error(Errc::negative_root, "symbolic sqrt needs positive roots: " + str());

    // Leading term of the root must be the square of an integer-rooted term.
    auto s = rational_sqrt(leading_coeff());
    if (!s) return std::nullopt;
    const mpz_class& A1 = dominant_root();
    if (!is_perfect_square(A1)) return std::nullopt;
    mpz_class e1 = isqrt(A1);

    PowerSum xi({{*s, e1}}, var_);
    PowerSum residual = *this - xi * xi;
    // Each round cancels the residual's dominant term; that root strictly
    // decreases through positive integers (times e1), so this terminates.
    while (!residual.is_zero()) {
        const Term& lead = residual.terms().front();
        mpz_class q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), lead.root.get_mpz_t(), e1.get_mpz_t());
        if (rem != 0 || q <= 0) return std::nullopt; // root of next term not a positive integer
        PowerSum u({{lead.coeff / (2 * *s), q}}, var_);
        xi = xi + u;
        residual = *this - xi * xi;
    }
    if (xi.leading_coeff() < 0) xi = -xi;
    return xi;
}

// --- text form --------------------------------------------------------------

namespace {

std::string root_str(const mpz_class& r) {
    if (r < 0) return "(" + r.get_str() + ")";
    return r.get_str();
}

} // namespace

std::string PowerSum::str() const {
    if (is_zero()) return "0";
    std::string out;
    char v = index_var_letter(var_);
    for (size_t i = 0; i < terms_.size(); ++i) {
        const Term& t = terms_[i];
        bool neg = t.coeff < 0;
        mpq_class a = neg ? mpq_class(-t.coeff) : t.coeff;
        if (i == 0)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        out += to_string(a) + "*" + root_str(t.root) + "^" + v;
    }
    return out;
}

namespace {

// Strict recursive-descent parser for the canonical text form; whitespace is
// allowed between tokens.
struct Parser {
    const std::string& s;
    size_t i = 0;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& why) const {
        throw Error(Errc::parse_error,
                    why + " at offset " + std::to_string(i) + " in '" + s + "'");
    }

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    std::string digits() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("expected digits");
        return s.substr(start, i - start);
    }

    mpq_class unsigned_rational() {
        mpz_class num(digits(), 10);
        if (eat('/')) {
            mpz_class den(digits(), 10);
            if (den == 0) fail("zero denominator");
            mpq_class r(num, den);
            r.canonicalize();
            return r;
        }
        return mpq_class(num);
    }

    mpz_class root() {
        if (eat('(')) {
            if (!eat('-')) fail("expected '-' in parenthesized root");
            mpz_class r(digits(), 10);
            if (!eat(')')) fail("expected ')'");
            return -r;
        }
        return mpz_class(digits(), 10);
    }

    IndexVar var() {
        skip_ws();
        if (i < s.size() && (s[i] == 'n' || s[i] == 'm'))
            return s[i++] == 'n' ? IndexVar::n : IndexVar::m;
        fail("expected index variable 'n' or 'm'");
    }
};

} // namespace

PowerSum PowerSum::parse(const std::string& text) {
    Parser p(text);
    p.skip_ws();
    if (p.i >= p.s.size()) p.fail("empty power sum");

    // Bare "0" is the zero sum.
    {
        size_t save = p.i;
        if (p.s[p.i] == '0') {
            ++p.i;
            p.skip_ws();
            if (p.i == p.s.size()) return PowerSum();
            p.i = save;
        }
    }

    std::vector<Term> terms;
    std::optional<IndexVar> v;
    bool neg = p.eat('-');
    for (;;) {
        mpq_class coeff = p.unsigned_rational();
        if (neg) coeff = -coeff;
        if (!p.eat('*')) p.fail("expected '*'");
        mpz_class r = p.root();
        if (r == 0) p.fail("root 0 not allowed");
        if (!p.eat('^')) p.fail("expected '^'");
        IndexVar tv = p.var();
        if (v && *v != tv) p.fail("mixed index variables");
        v = tv;
        terms.push_back({coeff, r});

        p.skip_ws();
        if (p.i == p.s.size()) break;
        if (p.eat('+'))
            neg = false;
        else if (p.eat('-'))
            neg = true;
        else
            p.fail("expected '+', '-', or end");
    }
    return PowerSum(std::move(terms), *v);
}

} // namespace cflab
