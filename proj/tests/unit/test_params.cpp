#include <doctest.h>

#include <trailmine/params.hpp>

#include <cmath>
#include <numeric>

using namespace trailmine;

TEST_CASE("validate_params accepts the closed domain and rejects the rest")
{
    CHECK_NOTHROW(validate_params(0.0, 0.0));
    CHECK_NOTHROW(validate_params(0.4999, 1.0));
    const auto p = validate_params(0.4, 0.5, 600.0, 6.25);
    CHECK(p.p() == doctest::Approx(0.6));
    CHECK(p.lambda() == doctest::Approx(2.0 / 3.0));
    CHECK(p.tau0() == 600.0);
    CHECK(p.reward() == 6.25);

    const auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InternalInconsistency;
    };
    CHECK(code_of([] { validate_params(0.5, 0.0); }) == ErrorCode::QOutOfRange);
    CHECK(code_of([] { validate_params(-0.01, 0.0); }) == ErrorCode::QOutOfRange);
    CHECK(code_of([] { validate_params(NAN, 0.0); }) == ErrorCode::QOutOfRange);
    CHECK(code_of([] { validate_params(0.1, 1.5); }) == ErrorCode::GammaOutOfRange);
    CHECK(code_of([] { validate_params(0.1, -0.1); }) == ErrorCode::GammaOutOfRange);
    CHECK(code_of([] { validate_params(0.1, 0.2, 0.0); }) == ErrorCode::NonPositiveScale);
    CHECK(code_of([] { validate_params(0.1, 0.2, 1.0, -1.0); }) == ErrorCode::NonPositiveScale);
}

TEST_CASE("strategy ids order, print and parse")
{
    CHECK(StrategyId::honest() < StrategyId::selfish());
    CHECK(StrategyId::selfish() < StrategyId::lead_stubborn());
    CHECK(StrategyId::lead_stubborn() == StrategyId::trail_stubborn(1));
    CHECK(StrategyId::trail_stubborn(2) < StrategyId::trail_stubborn(7));
    CHECK_THROWS_AS(StrategyId::trail_stubborn(0), Error);

    for (const auto& s : {StrategyId::honest(), StrategyId::selfish(), StrategyId::lead_stubborn(),
                          StrategyId::trail_stubborn(3), StrategyId::trail_stubborn(12)}) {
        CHECK(parse_strategy(to_string(s)) == s);
    }
    CHECK(to_string(StrategyId::trail_stubborn(4)) == "tsm:4");
    CHECK(parse_strategy("tsm5") == StrategyId::trail_stubborn(5));
    CHECK(parse_strategy("hm") == StrategyId::honest());
    CHECK_THROWS_AS(parse_strategy("efsm"), Error);
    CHECK_THROWS_AS(parse_strategy("tsm:"), Error);
    CHECK_THROWS_AS(parse_strategy("tsm:0"), Error);
    CHECK_THROWS_AS(parse_strategy("tsm:2x"), Error);
}

TEST_CASE("bracket")
{
    CHECK(bracket(0, 0.3) == 0.0);
    CHECK(bracket(1, 0.3) == 1.0);
    CHECK(bracket(3, 0.5) == doctest::Approx(1.75));
    CHECK(bracket(4, 0.0) == 1.0);
    // [n](1 - lambda) = 1 - lambda^n
    for (int n = 1; n < 40; ++n) {
        CHECK(bracket(n, 0.9) * 0.1 == doctest::Approx(1.0 - std::pow(0.9, n)).epsilon(1e-13));
    }
}

TEST_CASE("P_A has integer coefficients")
{
    CHECK(pa_coefficients(1).empty());
    CHECK(pa_coefficients(2) == std::vector<std::int64_t>{1, 1});
    CHECK(pa_coefficients(3) == std::vector<std::int64_t>{1, 3, 3, 1});
    for (int a = 1; a <= 50; ++a) {
        const auto c = pa_coefficients(a);
        // P_A(1) = A(A-1)(A+1)/3 from the third derivative of the numerator at 1.
        const double at_one{std::accumulate(c.begin(), c.end(), 0.0, [](double s, std::int64_t v) { return s + v; })};
        const double x{0.37};
        const double numerator{1.0 - a * std::pow(x, a - 1) + a * std::pow(x, a + 1) - std::pow(x, 2 * a)};
        CHECK(pa_eval(a, x) == doctest::Approx(numerator / std::pow(1.0 - x, 3)).epsilon(1e-12));
        CHECK(at_one == static_cast<double>(a) * (a - 1) * (a + 1) / 3.0);
    }
    const std::vector<std::int64_t> not_divisible{1, 1};
    CHECK_THROWS_AS(divide_by_one_minus_x_cubed(not_divisible), Error);
}

TEST_CASE("Catalan numbers and the first-passage law")
{
    const double expected[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862};
    for (int n = 0; n < 10; ++n) CHECK(catalan(n) == expected[n]);
    CHECK(catalan(30) == 3814986502092304.0);
    CHECK(catalan(35) == doctest::Approx(3116285494907301262.0).epsilon(1e-12));

    const auto params = validate_params(0.3, 0.0);
    CHECK(cycle_length_pmf(0, params) == doctest::Approx(0.7));
    CHECK(cycle_length_pmf(1, params) == doctest::Approx(0.21));
    CHECK(cycle_length_pmf(2, params) == doctest::Approx(0.21 * 0.21));
    CHECK(cycle_length_pmf(3, validate_params(0.0, 0.0)) == 0.0);

    // Mass sums to p + q = 1; the series is truncated where the tail is below 1e-12.
    for (double q : {0.1, 0.3, 0.45}) {
        const auto pr = validate_params(q, 0.0);
        double total{0.0};
        for (int n = 0; n <= 4000; ++n) total += cycle_length_pmf(n, pr);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}
