#include "cflab/ratpowersum.hpp"

#include "cflab/rational.hpp"

#include <algorithm>

namespace cflab {

RatPowerSum::RatPowerSum(std::vector<RatTerm> terms, IndexVar v) : var_(v) {
    for (const RatTerm& t : terms)
        if (t.root <= 0)
            throw Error(Errc::negative_root,
                        "rational-root power sums require positive roots, got " +
                            to_string(t.root));
    std::sort(terms.begin(), terms.end(),
              [](const RatTerm& a, const RatTerm& b) { return a.root > b.root; });
    for (RatTerm& t : terms) {
        if (!terms_.empty() && terms_.back().root == t.root)
            terms_.back().coeff += t.coeff;
        else
            terms_.push_back(t);
        if (!terms_.empty() && terms_.back().coeff == 0) terms_.pop_back();
    }
}

RatPowerSum RatPowerSum::from(const PowerSum& p) {
    if (!p.all_roots_positive())
        throw Error(Errc::negative_root, "cannot lift " + p.str() + ": negative root");
    std::vector<RatTerm> t;
    t.reserve(p.terms().size());
    for (const Term& x : p.terms())
        t.push_back({x.coeff, mpq_class(x.root)});
    return RatPowerSum(std::move(t), p.var());
}

RatPowerSum RatPowerSum::constant(const mpq_class& value, IndexVar v) {
    if (value == 0) return RatPowerSum(v);
    return RatPowerSum({{value, mpq_class(1)}}, v);
}

const mpq_class& RatPowerSum::dominant_root() const {
    if (is_zero())
        throw Error(Errc::zero_power_sum, "zero power sum has no dominant root");
    return terms_.front().root;
}

const mpq_class& RatPowerSum::leading_coeff() const {
    if (is_zero())
        throw Error(Errc::zero_power_sum, "zero power sum has no leading coefficient");
    return terms_.front().coeff;
}

mpq_class RatPowerSum::eval(unsigned long k) const {
    mpq_class acc(0);
    for (const RatTerm& t : terms_)
        acc += t.coeff * pow_q(t.root, static_cast<long>(k));
    return acc;
}

IndexVar unify_vars(const RatPowerSum& a, const RatPowerSum& b) {
    if (a.is_zero()) return b.var_;
    if (b.is_zero()) return a.var_;
    if (a.var_ != b.var_)
        throw Error(Errc::unit_mismatch, "combining " + a.str() + " with " + b.str());
    return a.var_;
}

RatPowerSum RatPowerSum::operator-() const {
    std::vector<RatTerm> t = terms_;
    for (RatTerm& x : t) x.coeff = -x.coeff;
    return RatPowerSum(std::move(t), var_);
}

RatPowerSum RatPowerSum::operator+(const RatPowerSum& o) const {
    IndexVar v = unify_vars(*this, o);
    std::vector<RatTerm> t = terms_;
    t.insert(t.end(), o.terms_.begin(), o.terms_.end());
    return RatPowerSum(std::move(t), v);
}

RatPowerSum RatPowerSum::operator-(const RatPowerSum& o) const { return *this + (-o); }

RatPowerSum RatPowerSum::operator*(const RatPowerSum& o) const {
    IndexVar v = unify_vars(*this, o);
    std::vector<RatTerm> t;
    t.reserve(terms_.size() * o.terms_.size());
    for (const RatTerm& a : terms_)
        for (const RatTerm& b : o.terms_)
            t.push_back({a.coeff * b.coeff, a.root * b.root});
    return RatPowerSum(std::move(t), v);
}

RatPowerSum RatPowerSum::operator*(const mpq_class& s) const {
    std::vector<RatTerm> t = terms_;
    for (RatTerm& x : t) x.coeff *= s;
    return RatPowerSum(std::move(t), var_);
}

bool RatPowerSum::operator==(const RatPowerSum& o) const {
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    return var_ == o.var_ && terms_ == o.terms_;
}

RatPowerSum RatPowerSum::scale_roots(const mpq_class& f) const {
    if (f <= 0)
        throw Error(Errc::invalid_argument, "root scale must be positive");
    std::vector<RatTerm> t = terms_;
    for (RatTerm& x : t) x.root *= f;
    return RatPowerSum(std::move(t), var_);
}

RatPowerSum RatPowerSum::terms_with_root_at_least(const mpq_class& bound) const {
    std::vector<RatTerm> t;
    for (const RatTerm& x : terms_)
        if (x.root >= bound) t.push_back(x);
    return RatPowerSum(std::move(t), var_);
}

PowerSum RatPowerSum::to_integer_roots() const {
    std::vector<Term> t;
    t.reserve(terms_.size());
    for (const RatTerm& x : terms_) {
        if (x.root.get_den() != 1)
            throw Error(Errc::non_integer_root, "root " + to_string(x.root));
        t.push_back({x.coeff, x.root.get_num()});
    }
    return PowerSum(std::move(t), var_);
}

std::string RatPowerSum::str() const {
    if (is_zero()) return "0";
    std::string out;
    char v = index_var_letter(var_);
    for (size_t i = 0; i < terms_.size(); ++i) {
        const RatTerm& t = terms_[i];
        bool neg = t.coeff < 0;
        mpq_class a = neg ? mpq_class(-t.coeff) : t.coeff;
        if (i == 0)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string root = to_string(t.root);
        if (t.root.get_den() != 1) root = "(" + root + ")";
        out += to_string(a) + "*" + root + "^" + v;
    }
    return out;
}

// --- RadicalSum -------------------------------------------------------------

RadicalSum::RadicalSum(mpq_class rho, RatPowerSum radical, RatPowerSum rational)
    : radicand(std::move(rho)), radical_part(std::move(radical)),
      rational_part(std::move(rational)) {
    if (radicand < 0)
        throw Error(Errc::invalid_argument, "negative radicand " + to_string(radicand));
    if (radicand == 0 || radical_part.is_zero()) {
        radicand = 0;
        radical_part = RatPowerSum(rational_part.var());
        return;
    }
    // Fold a perfect-square radicand into the rational part.
    if (auto s = rational_sqrt(radicand); s) {
        rational_part = rational_part + radical_part * *s;
        radical_part = RatPowerSum(rational_part.var());
        radicand = 0;
    }
}

bool RadicalSum::operator==(const RadicalSum& o) const {
    return radicand == o.radicand && radical_part == o.radical_part &&
           rational_part == o.rational_part;
}

std::string RadicalSum::str() const {
    if (pure_rational()) return rational_part.str();
    std::string out = "sqrt(" + to_string(radicand) + ")*(" + radical_part.str() + ")";
    if (!rational_part.is_zero()) out += " + (" + rational_part.str() + ")";
    return out;
}

} // namespace cflab
