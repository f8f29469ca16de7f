#include "cflab/recurrence.hpp"

#include "cflab/rational.hpp"

#include <algorithm>
#include <map>

namespace cflab {

namespace {

// Exact row reduction of an augmented system (cols unknowns + rhs).  Returns
// a solution with free variables set to 0, or nullopt when inconsistent.
std::optional<std::vector<mpq_class>> solve_augmented(std::vector<std::vector<mpq_class>> A,
                                                      size_t cols) {
    size_t rows = A.size();
    std::vector<std::pair<size_t, size_t>> pivots; // (row, col)
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t r = row;
        while (r < rows && A[r][col] == 0) ++r;
        if (r == rows) continue;
        std::swap(A[row], A[r]);
        for (size_t rr = row + 1; rr < rows; ++rr) {
            if (A[rr][col] == 0) continue;
            mpq_class f = A[rr][col] / A[row][col];
            for (size_t c = col; c <= cols; ++c) A[rr][c] -= f * A[row][c];
        }
        pivots.emplace_back(row, col);
        ++row;
    }
    for (size_t r = row; r < rows; ++r)
        if (A[r][cols] != 0) return std::nullopt;

    std::vector<mpq_class> x(cols, mpq_class(0));
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        auto [pr, pc] = *it;
        mpq_class acc = A[pr][cols];
        for (size_t c = pc + 1; c < cols; ++c) acc -= A[pr][c] * x[c];
        x[pc] = acc / A[pr][pc];
    }
    return x;
}

bool all_zero(const std::vector<mpz_class>& v) {
    return std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
}

} // namespace

mpz_class MonicIntPoly::eval(const mpz_class& x) const {
    if (coeffs.empty()) return mpz_class(1);
    mpz_class acc = coeffs.back();
    for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

std::string MonicIntPoly::str() const {
    if (coeffs.empty()) return "1";
    std::string out;
    for (size_t i = coeffs.size(); i-- > 0;) {
        const mpz_class& c = coeffs[i];
        if (c == 0 && i != 0) continue;
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        mpz_class a = abs(c);
        bool show_coeff = i == 0 || a != 1;
        if (show_coeff) out += a.get_str();
        if (i > 0) {
            if (show_coeff) out += "*";
            out += "X";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

MonicIntPoly min_recurrence(const SequenceSample& s) {
    size_t N = s.size();
    if (N < 4)
        throw Error(Errc::invalid_argument, "need at least 4 samples, got " + std::to_string(N));
    if (all_zero(s.values)) return MonicIntPoly{{mpz_class(0), mpz_class(1)}}; // X: v(k+1) = 0

    size_t d_max = N / 2 - 1;
    for (size_t d = 1; d <= d_max; ++d) {
        std::vector<std::vector<mpq_class>> A;
        for (size_t k = 0; k + d < N; ++k) {
            std::vector<mpq_class> row;
            row.reserve(d + 1);
            for (size_t i = 0; i < d; ++i) row.emplace_back(s.values[k + i]);
            row.emplace_back(s.values[k + d]);
            A.push_back(std::move(row));
        }
        auto x = solve_augmented(std::move(A), d);
        if (!x) continue;
        // Insist on integer recurrence coefficients; a fractional solution at
        // this order is a window artifact, not the integer minimum.
        bool integral = std::all_of(x->begin(), x->end(),
                                    [](const mpq_class& q) { return q.get_den() == 1; });
        if (!integral) continue;
        MonicIntPoly p;
        p.coeffs.resize(d + 1);
        for (size_t i = 0; i < d; ++i) p.coeffs[i] = -(*x)[i].get_num();
        p.coeffs[d] = 1;
        return p;
    }
    throw Error(Errc::no_recurrence,
                "no integer recurrence of order <= " + std::to_string(d_max) + " fits " +
                    std::to_string(N) + " samples");
}

// --- integer roots ----------------------------------------------------------

namespace {

// Polynomials over Q as dense coefficient vectors, constant term first.
using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly derivative(const QPoly& p) {
    QPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * mpq_class(static_cast<long>(i)));
    trim(d);
    return d;
}

QPoly rem(QPoly a, const QPoly& b) {
    // b is nonzero and trimmed; each pass cancels a's top term exactly, so
    // the degree strictly drops and the loop terminates.
    while (a.size() >= b.size() && !a.empty()) {
        mpq_class f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        trim(a);
    }
    return a;
}

size_t gcd_degree(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? 0 : a.size() - 1;
}

void factorize(mpz_class n, std::map<mpz_class, unsigned>& out);

void pollard_rho(const mpz_class& n, std::map<mpz_class, unsigned>& out) {
    // n is odd, composite, with no small factors.  Brent's cycle variant
    // with deterministic restarts.
    for (unsigned long c = 1;; ++c) {
        mpz_class x(2), y(2), d(1);
        auto step = [&](mpz_class v) {
            return mpz_class((v * v + c) % n);
        };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            mpz_class diff = abs(x - y);
            if (diff == 0) break; // cycle without factor; retry with next c
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) {
            factorize(d, out);
            factorize(n / d, out);
            return;
        }
    }
}

void factorize(mpz_class n, std::map<mpz_class, unsigned>& out) {
    if (n <= 1) return;
    for (mpz_class p(2); p * p <= n && p < 1000000; p == 2 ? p = 3 : p += 2) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
        ++out[n];
        return;
    }
    pollard_rho(n, out);
}

std::vector<mpz_class> divisors_of(const mpz_class& n) {
    std::map<mpz_class, unsigned> f;
    factorize(abs(n), f);
    std::vector<mpz_class> divs{mpz_class(1)};
    for (const auto& [p, e] : f) {
        size_t base = divs.size();
        if (base * (e + 1) > 200000)
            throw Error(Errc::invalid_argument, "constant term has too many divisors");
        mpz_class pk(1);
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

// Divides p by (X - r) exactly; p(r) must be 0.
std::vector<mpz_class> deflate(const std::vector<mpz_class>& p, const mpz_class& r) {
    std::vector<mpz_class> q(p.size() - 1);
    mpz_class carry = p.back();
    for (size_t i = p.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = p[i] + carry * r;
    }
    // carry == p(r) == 0
    return q;
}

} // namespace

std::vector<mpz_class> integer_roots(const MonicIntPoly& poly) {
    if (poly.coeffs.empty() || poly.coeffs.size() == 1) return {};
    if (poly.coeffs.back() != 1)
        throw Error(Errc::invalid_argument, "polynomial must be monic");

    {
        QPoly p(poly.coeffs.begin(), poly.coeffs.end());
        if (gcd_degree(p, derivative(p)) > 0)
            throw Error(Errc::repeated_root, poly.str() + " is not squarefree");
    }
    if (poly.coeffs[0] == 0)
        throw Error(Errc::zero_root, "X divides " + poly.str());

    std::vector<mpz_class> roots;
    std::vector<mpz_class> work = poly.coeffs;
    for (const mpz_class& d : divisors_of(poly.coeffs[0])) {
        for (int sign : {1, -1}) {
            mpz_class cand = sign * d;
            if (work.size() <= 1) break;
            // Horner on the deflated polynomial.
            mpz_class acc = work.back();
            for (size_t i = work.size() - 1; i-- > 0;) acc = acc * cand + work[i];
            if (acc == 0) {
                roots.push_back(cand);
                work = deflate(work, cand);
            }
        }
    }
    if (work.size() > 1)
        throw Error(Errc::non_integer_root,
                    poly.str() + " has an irreducible factor of degree " +
                        std::to_string(work.size() - 1));

    std::sort(roots.begin(), roots.end(), [](const mpz_class& a, const mpz_class& b) {
        mpz_class aa = abs(a), ab = abs(b);
        if (aa != ab) return aa > ab;
        return a > b;
    });
    return roots;
}

std::vector<mpq_class> solve_coefficients(const std::vector<mpz_class>& roots,
                                          const SequenceSample& s) {
    if (s.m0 < 0)
        throw Error(Errc::invalid_argument, "sample must start at m >= 0");
    size_t k = roots.size();
    if (k == 0) {
        if (!all_zero(s.values))
            throw Error(Errc::inconsistent, "no roots but nonzero samples");
        return {};
    }
    if (s.size() < k)
        throw Error(Errc::invalid_argument, "fewer samples than roots");

    std::vector<std::vector<mpq_class>> A;
    for (size_t i = 0; i < k; ++i) {
        std::vector<mpq_class> row;
        for (const mpz_class& c : roots)
            row.emplace_back(pow_z(c, static_cast<unsigned long>(s.m0) + i));
        row.emplace_back(s.values[i]);
        A.push_back(std::move(row));
    }
    auto b = solve_augmented(std::move(A), k);
    if (!b)
        throw Error(Errc::inconsistent, "degenerate root system"); // distinct roots: unreachable

    for (size_t i = k; i < s.size(); ++i) {
        mpq_class acc(0);
        for (size_t j = 0; j < k; ++j)
            acc += (*b)[j] * mpq_class(pow_z(roots[j], static_cast<unsigned long>(s.m0) + i));
        if (acc != s.values[i])
            throw Error(Errc::inconsistent,
                        "sample at m=" + std::to_string(s.m0 + static_cast<long>(i)) +
                            " deviates from the solved coefficients");
    }
    return *b;
}

RecurrenceFit fit_power_sum(const SequenceSample& s, bool integrality_required,
                            size_t holdout) {
    size_t N = s.size();
    if (N < holdout + 4)
        throw Error(Errc::invalid_argument,
                    "need at least " + std::to_string(holdout + 4) + " samples, got " +
                        std::to_string(N));

    RecurrenceFit fit;
    fit.train_range = {s.m0, s.m0 + static_cast<long>(N - holdout) - 1};
    fit.holdout_range = {s.m0 + static_cast<long>(N - holdout), s.m0 + static_cast<long>(N) - 1};

    if (all_zero(s.values)) {
        fit.char_poly = MonicIntPoly{};
        fit.fitted = PowerSum(IndexVar::m);
        return fit;
    }

    SequenceSample train{s.m0, {s.values.begin(), s.values.end() - holdout}};
    fit.char_poly = min_recurrence(train);
    fit.roots = integer_roots(fit.char_poly);
    fit.coeffs = solve_coefficients(fit.roots, train);

    if (integrality_required)
        for (const mpq_class& c : fit.coeffs)
            if (c.get_den() != 1)
                throw Error(Errc::non_integer_coefficient,
                            "coefficient " + to_string(c) + " is not an integer");

    std::vector<Term> terms;
    for (size_t j = 0; j < fit.roots.size(); ++j) terms.push_back({fit.coeffs[j], fit.roots[j]});
    fit.fitted = PowerSum(std::move(terms), IndexVar::m);

    for (size_t i = N - holdout; i < N; ++i) {
        unsigned long m = static_cast<unsigned long>(s.m0) + i;
        if (fit.fitted.eval(m) != s.values[i])
            throw Error(Errc::holdout_mismatch,
                        "held-out sample at m=" + std::to_string(m) + ": expected " +
                            s.values[i].get_str() + ", model gives " +
                            to_string(fit.fitted.eval(m)));
    }
    return fit;
}

} // namespace cflab
