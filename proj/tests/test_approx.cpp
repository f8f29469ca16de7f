#include "cflab/approx.hpp"
#include "cflab/powersum.hpp"
#include "cflab/ratpowersum.hpp"

#include <doctest.h>

using namespace cflab;

namespace {

PowerSum ps(const std::string& s) { return PowerSum::parse(s); }

RatPowerSum rat(std::initializer_list<std::pair<mpq_class, mpq_class>> ts) {
    std::vector<RatTerm> v;
    for (const auto& [c, r] : ts) v.push_back({c, r});
    return RatPowerSum(std::move(v), IndexVar::m);
}

} // namespace

TEST_CASE("binomial coefficients of sqrt(1+x)") {
    CHECK(binom_half(0) == 1);
    CHECK(binom_half(1) == mpq_class(1, 2));
    CHECK(binom_half(2) == mpq_class(-1, 8));
    CHECK(binom_half(3) == mpq_class(1, 16));
    CHECK(binom_half(4) == mpq_class(-5, 128));
    CHECK(binom_half(5) == mpq_class(7, 256));
}

TEST_CASE("sqrt expansion: three-term worked example") {
    // sqrt(4^n + 2^n) on even n (so 16^m + 4^m) truncated at order 2:
    // 4^m + 1/2 - (1/8)(1/4)^m, with the discarded tail decaying like (1/16)^m.
    SqrtExpansion e = sqrt_expansion(ps("1*4^n + 1*2^n"), 0, 2);
    CHECK(e.order == 2);
    CHECK(e.value.pure_rational()); // leading coefficient 1 folds into the rational part
    CHECK(e.value.rational_part ==
          rat({{1, 4}, {mpq_class(1, 2), 1}, {mpq_class(-1, 8), mpq_class(1, 4)}}));
    CHECK(e.tail_root == mpq_class(1, 16));
    CHECK(e.ratio_series == rat({{1, mpq_class(1, 4)}}));

    // Nonsquare leading coefficient stays under the radical.
    SqrtExpansion f = sqrt_expansion(ps("2*4^n + 1*1^n"), 0, 1);
    CHECK(f.value.radicand == 2);
    CHECK(f.value.radical_part ==
          rat({{1, 4}, {mpq_class(1, 4), mpq_class(1, 4)}}));
    CHECK(f.value.rational_part.is_zero());
    // sigma root is 1/16, scale c1 = 4: tail decays like (1/16)^2 * 4 = (1/64)^m.
    CHECK(f.tail_root == mpq_class(1, 64));

    // Parity class can cancel everything: expansion of the zero sum is 0.
    SqrtExpansion z = sqrt_expansion(ps("1*2^n - 1*(-2)^n"), 0, 3);
    CHECK(z.value.pure_rational());
    CHECK(z.value.rational_part.is_zero());
    CHECK(z.tail_root == 0);

    // Single-term alpha is exact at any order: sqrt(9*16^m) = 3*4^m.
    SqrtExpansion one = sqrt_expansion(ps("9*4^n"), 0, 0);
    CHECK(one.value.pure_rational());
    CHECK(one.value.rational_part == rat({{3, 4}}));
    CHECK(one.tail_root == 0);

    CHECK_THROWS_AS(sqrt_expansion(ps("-1*4^n + 1*2^n"), 0, 2), Error);
    CHECK_THROWS_AS(sqrt_expansion(ps("1*4^n"), 2, 1), Error);
}

TEST_CASE("inverse expansion") {
    // 1/(2^n - 1) ~ (1/2)^n + (1/4)^n + (1/8)^n, tail root 1/16.
    InverseExpansion e = inverse_expansion(ps("1*2^n - 1*1^n"), 2);
    CHECK(e.value.terms().size() == 3);
    RatPowerSum want({{1, mpq_class(1, 2)}, {1, mpq_class(1, 4)}, {1, mpq_class(1, 8)}},
                     IndexVar::n);
    CHECK(e.value == want);
    CHECK(e.tail_root == mpq_class(1, 16));
    CHECK(e.ratio_series == RatPowerSum({{1, mpq_class(1, 2)}}, IndexVar::n));

    // Exact for single-term gamma.
    InverseExpansion s = inverse_expansion(ps("4*2^m"), 7);
    CHECK(s.value == RatPowerSum({{mpq_class(1, 4), mpq_class(1, 2)}}, IndexVar::m));
    CHECK(s.tail_root == 0);

    CHECK_THROWS_AS(inverse_expansion(PowerSum(), 2), Error);
    CHECK_THROWS_AS(inverse_expansion(ps("1*(-2)^n"), 2), Error);
}

TEST_CASE("assembled approximation: sqrt worked example, orders and terms") {
    // (sqrt(4^n + 2^n) + 0)/1 on even n with target 1/9:
    // order selection walks H up until (1/4)^{H+1} * 4 < 1/81 => H = 4.
    PowerSum alpha = ps("1*4^n + 1*2^n");
    PowerSum beta;
    PowerSum gamma = PowerSum::constant(1, IndexVar::n);
    SurdRatioApprox a = approximate_surd_ratio(alpha, beta, gamma, 0, mpq_class(1, 9));
    CHECK(a.sqrt_order == 4);
    CHECK(a.inverse_order == 0);
    CHECK(a.error_root == mpq_class(1, 256));
    CHECK(a.approx.pure_rational());
    CHECK(a.approx.rational_part ==
          rat({{1, 4},
               {mpq_class(1, 2), 1},
               {mpq_class(-1, 8), mpq_class(1, 4)},
               {mpq_class(1, 16), mpq_class(1, 16)},
               {mpq_class(-5, 128), mpq_class(1, 64)}}));

    // gamma == 1 and beta == 0 reduce to the bare sqrt expansion.
    SqrtExpansion bare = sqrt_expansion(alpha, 0, a.sqrt_order);
    CHECK(a.approx == bare.value);
}

TEST_CASE("assembled approximation: inverse-dominated example") {
    // (0 + 2^n + 1)/(2^n - 1), target 1/9: on even n, (4^m + 1)/(4^m - 1).
    // Numerator scale 4 forces s = 3: (1/4)^{s+1}/4 * 4 < 1/81.
    PowerSum beta = ps("1*2^n + 1*1^n");
    PowerSum gamma = ps("1*2^n - 1*1^n");
    SurdRatioApprox a = approximate_surd_ratio(PowerSum(), beta, gamma, 0, mpq_class(1, 9));
    CHECK(a.sqrt_order == 0);
    CHECK(a.inverse_order == 3);
    CHECK(a.error_root == mpq_class(1, 256));
    CHECK(a.approx.pure_rational());
    // (4^m + 1) * ((1/4)^m + (1/16)^m + (1/64)^m + (1/256)^m).
    CHECK(a.approx.rational_part == rat({{1, 1},
                                         {2, mpq_class(1, 4)},
                                         {2, mpq_class(1, 16)},
                                         {2, mpq_class(1, 64)},
                                         {1, mpq_class(1, 256)}}));

    CHECK_THROWS_AS(approximate_surd_ratio(PowerSum(), beta, PowerSum(), 0, mpq_class(1, 9)),
                    Error);
    CHECK_THROWS_AS(approximate_surd_ratio(PowerSum(), beta, gamma, 0, mpq_class(2)), Error);
    // gamma vanishing on the parity class is rejected.
    CHECK_THROWS_AS(
        approximate_surd_ratio(PowerSum(), beta, ps("1*2^n - 1*(-2)^n"), 0, mpq_class(1, 9)),
        Error);
}

TEST_CASE("numeric check: error/target ratio stays bounded") {
    PowerSum alpha = ps("1*4^n + 1*2^n");
    PowerSum beta = ps("1*2^n + 1*1^n");
    PowerSum gamma = ps("1*2^n - 1*1^n");
    SurdRatioApprox a = approximate_surd_ratio(alpha, beta, gamma, 0, mpq_class(1, 9));
    ApproxCheck chk = check_surd_ratio(a, alpha, beta, gamma, 0, 2, 10);
    CHECK(chk.declared_root_ok);
    CHECK(chk.bounded);
    REQUIRE(chk.rows.size() == 9);
    for (const auto& row : chk.rows) CHECK_FALSE(row.skipped);
    // The attained root beats the target, so the ratio even decays.
    CHECK(chk.rows.back().ratio <= chk.rows.front().ratio);

    // m = 0 makes gamma vanish: included as a skipped row.
    ApproxCheck with_skip = check_surd_ratio(a, alpha, beta, gamma, 0, 0, 4);
    CHECK(with_skip.rows.front().skipped);
    CHECK(with_skip.bounded);

    // A forged declaration is reported, not trusted.
    SurdRatioApprox forged = a;
    forged.error_root = 1;
    ApproxCheck bad = check_surd_ratio(forged, alpha, beta, gamma, 0, 2, 6);
    CHECK_FALSE(bad.declared_root_ok);
}
