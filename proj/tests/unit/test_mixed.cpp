#include <doctest.h>

#include <trailmine/analytic.hpp>
#include <trailmine/mixed.hpp>
#include <trailmine/simulator.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace trailmine;

TEST_CASE("weights")
{
    CHECK(weight(1.0, 1.0) == 1.0);
    CHECK(weight(5.0, 2.0) == 2.5);
    const auto p = validate_params(0.4, 0.0);
    const AnalyticMetrics m{tsm_metrics(p, 2)};
    CHECK(weight(m.e_duration, m.delta) == doctest::Approx(m.e_official).epsilon(1e-14));
    CHECK(weight(m.e_duration, m.delta) == doctest::Approx(2.51579).epsilon(1e-5));
    CHECK_THROWS_AS(weight(0.0, 1.0), Error);
    CHECK_THROWS_AS(weight(1.0, -2.0), Error);
    CHECK_THROWS_AS(weight(NAN, 1.0), Error);
}

TEST_CASE("composition is a weighted barycenter")
{
    const auto p = validate_params(0.4, 0.0);
    const StrategySummary hm{summarize(StrategyId::honest(), p)};
    const StrategySummary tsm{summarize(StrategyId::trail_stubborn(2), p)};
    CHECK(hm.mu == 1.0);
    CHECK(hm.gamma_tilde == doctest::Approx(0.4));

    const std::vector<StrategySummary> single{tsm};
    const Composition one{compose(single)};
    CHECK(one.d == doctest::Approx(tsm.d).epsilon(1e-15));
    CHECK(one.gamma_tilde == doctest::Approx(tsm.gamma_tilde).epsilon(1e-15));

    const std::vector<StrategySummary> twice{tsm, tsm};
    CHECK(compose(twice).gamma_tilde == doctest::Approx(tsm.gamma_tilde).epsilon(1e-15));

    const std::vector<StrategySummary> mix{hm, tsm};
    const Composition c{compose(mix)};
    const double expected{(1.0 * 0.4 + tsm.mu * tsm.gamma_tilde) / (1.0 + tsm.mu)};
    CHECK(c.gamma_tilde == doctest::Approx(expected).epsilon(1e-14));
    CHECK(c.mu == doctest::Approx(1.0 + tsm.mu).epsilon(1e-14));
    CHECK(c.d == doctest::Approx((1.0 + tsm.e_duration) / (1.0 + tsm.mu)).epsilon(1e-14));

    const NoAdvantageReport r{no_advantage_check(mix)};
    CHECK(r.holds);
    CHECK_FALSE(r.components_share_max);
    CHECK(r.composed < r.max_component);
    CHECK(no_advantage_check(twice).components_share_max);
    CHECK(no_advantage_check(twice).holds);

    CHECK_THROWS_AS(compose(std::vector<StrategySummary>{}), Error);
}

TEST_CASE("barycenter is permutation invariant and associative")
{
    std::mt19937_64 rng{12345};
    const StrategyId pool[] = {StrategyId::honest(), StrategyId::lead_stubborn(), StrategyId::trail_stubborn(2),
                               StrategyId::trail_stubborn(3)};
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = validate_params(0.05 + 0.4 * std::uniform_real_distribution<>{}(rng),
                                       std::uniform_real_distribution<>{}(rng));
        std::vector<StrategySummary> parts;
        for (int i = 0; i < 3; ++i) parts.push_back(summarize(pool[rng() % 4], p));
        const Composition whole{compose(parts)};

        auto shuffled = parts;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(compose(shuffled).gamma_tilde == doctest::Approx(whole.gamma_tilde).epsilon(1e-12));
        CHECK(compose(shuffled).d == doctest::Approx(whole.d).epsilon(1e-12));

        const std::vector<StrategySummary> head{parts[0], parts[1]};
        const std::vector<StrategySummary> nested{as_summary(compose(head)), parts[2]};
        CHECK(compose(nested).gamma_tilde == doctest::Approx(whole.gamma_tilde).epsilon(1e-12));
        CHECK(compose(nested).d == doctest::Approx(whole.d).epsilon(1e-12));
        CHECK(no_advantage_check(parts).holds);
    }
}

TEST_CASE("pattern parsing and analysis")
{
    const auto pattern = parse_pattern("tsm:2, honest,lsm");
    REQUIRE(pattern.size() == 3);
    CHECK(pattern[0] == StrategyId::trail_stubborn(2));
    CHECK(pattern[2] == StrategyId::lead_stubborn());
    CHECK_THROWS_AS(parse_pattern(""), Error);
    CHECK_THROWS_AS(parse_pattern("tsm:2,,honest"), Error);
    CHECK_THROWS_AS(parse_pattern("tsm:2,efsm"), Error);

    const auto p = validate_params(0.4, 0.0, 2.0, 3.0);
    const MixedResult r{analyze_pattern(parse_pattern("tsm:2,honest"), p)};
    CHECK(r.apparent_hashrate == doctest::Approx(r.composition.gamma_tilde * 2.0 / 3.0));
    CHECK_THROWS_AS(analyze_pattern(parse_pattern("sm,honest"), p), Error);
}

TEST_CASE("alternating cycles reproduce the composition")
{
    const auto p = validate_params(0.4, 0.0);
    const auto pattern = parse_pattern("tsm:2,honest");
    const MixedResult r{analyze_pattern(pattern, p)};
    const EstimateSummary s{estimate_pattern(pattern, p, 300'000, 17)};
    CHECK(std::abs(s.apparent_hashrate.mean - r.apparent_hashrate) < 4.0 * s.apparent_hashrate.std_error);
    CHECK(std::abs(s.delta.mean - r.composition.d) < 4.0 * s.delta.std_error);
}
