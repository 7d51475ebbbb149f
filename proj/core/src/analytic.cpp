#include <trailmine/analytic.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace trailmine {

namespace {

void require_trail(int a)
{
    if (a < 1) {
        throw Error{ErrorCode::InvalidArgument, "trail threshold A must be >= 1, got " + std::to_string(a)};
    }
}

// S_A = sum_(k=2..A) ([k] + lambda [k-1]).
double trail_sum_s(int a, double lambda)
{
    double sum{0.0};
    for (int k = 2; k <= a; ++k) {
        sum += bracket(k, lambda) + lambda * bracket(k - 1, lambda);
    }
    return sum;
}

// K_A = sum_(k=2..A) [k].
double trail_sum_k(int a, double lambda)
{
    double sum{0.0};
    for (int k = 2; k <= a; ++k) {
        sum += bracket(k, lambda);
    }
    return sum;
}

// p + pq - q^2, which is (p - q) E[tau_LSM] / tau0.
double lsm_scale(double p, double q)
{
    return p + p * q - q * q;
}

// p - q + pq, which is (p - q) E[N v N' | LSM].
double official_scale(double p, double q)
{
    return (p - q) + p * q;
}

// s = sqrt(1 - 4(1-gamma)pq); its square exceeds (p - q)^2 by 4 gamma pq.
double catalan_root(const NetworkParams& params)
{
    return std::sqrt(1.0 - 4.0 * (1.0 - params.gamma()) * params.p() * params.q());
}

/*
 * With d = p - q and s as above,
 *   scale (s + d) - 2 (1-gamma) p^2 d
 *     = 4 gamma pq scale / (s + d) + 2 d q (2p - q) + 2 gamma p^2 d,
 * a sum of non-negative terms. Subtracting directly loses most digits when
 * q is small, where revenue is O(q^2).
 */
double lsm_revenue_core(const NetworkParams& params)
{
    const double p{params.p()};
    const double q{params.q()};
    const double g{params.gamma()};
    const double d{p - q};
    const double sd{catalan_root(params) + d};
    return 4.0 * g * p * q * lsm_scale(p, q) / sd + 2.0 * d * q * (2.0 * p - q) + 2.0 * g * p * p * d;
}

// [A-1] + P_A / (p [A+1]), the trail-win contribution before the lambda^2 factor.
double trail_win_term(const NetworkParams& params, int a)
{
    const double lambda{params.lambda()};
    return bracket(a - 1, lambda) + pa_eval(a, lambda) / (params.p() * bracket(a + 1, lambda));
}

/*
 * E[R] / b = q K / (p - q) + P[Sigma] lambda^2 W / [A+1] with W from
 * trail_win_term and
 *   K = (core / p + scale lambda^2 [A-1] (s + d)) / ([A+1] (s + d)),
 * which folds the negative Catalan term into non-negative pieces.
 */
double revenue_core(const NetworkParams& params, int a)
{
    const double p{params.p()};
    const double q{params.q()};
    const double lambda{params.lambda()};
    const double sd{catalan_root(params) + (p - q)};
    const double upper{bracket(a + 1, lambda)};
    return (lsm_revenue_core(params) / p + lsm_scale(p, q) * lambda * lambda * bracket(a - 1, lambda) * sd) /
           (upper * sd);
}

// (p - q) E[R] / (b scale), the numerator shared by both ratio forms.
double revenue_numerator(const NetworkParams& params, int a)
{
    const double p{params.p()};
    const double q{params.q()};
    const double lambda{params.lambda()};
    const double scale{lsm_scale(p, q)};
    return q * revenue_core(params, a) / scale +
           prob_sigma(params) * (p - q) * lambda * lambda * trail_win_term(params, a) /
               (scale * bracket(a + 1, lambda));
}

} // namespace

double expected_sigma(const NetworkParams& params, int a)
{
    require_trail(a);
    const double lambda{params.lambda()};
    return trail_sum_s(a, lambda) / (params.p() * bracket(a + 1, lambda));
}

double prob_sigma(const NetworkParams& params)
{
    return (1.0 - params.gamma()) * params.p() * params.q();
}

double expected_cycle_duration(const NetworkParams& params, int a)
{
    const double p{params.p()};
    const double q{params.q()};
    // E[xi] = E[tau_LSM] + P[Sigma] E[sigma].
    return p / (p - q) + q + prob_sigma(params) * expected_sigma(params, a);
}

double expected_cycle_revenue(const NetworkParams& params, int a)
{
    require_trail(a);
    const double p{params.p()};
    const double q{params.q()};
    const double lambda{params.lambda()};
    return q * revenue_core(params, a) / (p - q) +
           prob_sigma(params) * lambda * lambda * trail_win_term(params, a) / bracket(a + 1, lambda);
}

double expected_cycle_revenue_event_form(const NetworkParams& params, int a)
{
    if (a < 2) {
        throw Error{ErrorCode::InvalidArgument, "event form needs A >= 2"};
    }
    const double p{params.p()};
    const double q{params.q()};
    const double lambda{params.lambda()};
    const double l2{lambda * lambda};
    const double la_minus{std::pow(lambda, a - 1)};
    const double la_plus{std::pow(lambda, a + 1)};
    const double l2a{std::pow(lambda, 2 * a)};

    const double stern_part{(1.0 - a * la_minus + a * la_plus - l2a) /
                            ((1.0 - lambda) * (1.0 - la_minus) * (1.0 - la_plus))};
    const double win_trail{(l2 - la_plus) / (1.0 - la_plus)};
    const double lose_trail{(1.0 - l2) / (1.0 - la_plus)};
    const double root{std::sqrt(1.0 - 4.0 * (1.0 - params.gamma()) * p * q)};

    return lsm_scale(p, q) / (p - q) * q +
           prob_sigma(params) * ((1.0 + stern_part / p) * win_trail - 2.0 * p / (root + p - q) * lose_trail);
}

double expected_official_blocks(const NetworkParams& params, int a)
{
    require_trail(a);
    const double p{params.p()};
    const double q{params.q()};
    const double lambda{params.lambda()};
    return official_scale(p, q) / (p - q) +
           (1.0 - params.gamma()) * q * trail_sum_k(a, lambda) / bracket(a + 1, lambda);
}

double difficulty_adjustment(const NetworkParams& params, int a)
{
    return expected_cycle_duration(params, a) / expected_official_blocks(params, a);
}

double revenue_ratio(const NetworkParams& params, int a)
{
    require_trail(a);
    const double p{params.p()};
    const double q{params.q()};
    const double lambda{params.lambda()};
    const double scale{lsm_scale(p, q)};
    const double upper{bracket(a + 1, lambda)};
    const double sigma{prob_sigma(params)};

    const double numerator{revenue_numerator(params, a)};
    // (A+1)([2]/[A+1] - 2/(A+1)) = (1 - lambda) S_A / [A+1].
    const double trail_duration{(1.0 - lambda) * trail_sum_s(a, lambda) / upper};
    const double denominator{1.0 + sigma / scale * trail_duration};
    return numerator / denominator;
}

double apparent_hashrate_tsm(const NetworkParams& params, int a)
{
    require_trail(a);
    const double p{params.p()};
    const double q{params.q()};
    const double lambda{params.lambda()};
    const double scale{lsm_scale(p, q)};
    const double upper{bracket(a + 1, lambda)};
    const double sigma{prob_sigma(params)};

    const double numerator{revenue_numerator(params, a)};
    // (A + lambda)(1/[A+1] - 1/(A + lambda)) = (1 - lambda) K_A / [A+1].
    const double trail_height{(1.0 - lambda) * trail_sum_k(a, lambda) / upper};
    const double denominator{official_scale(p, q) / scale + sigma / scale * trail_height};
    return numerator / denominator;
}

double revenue_ratio_lsm(const NetworkParams& params)
{
    // q - 2p P[Sigma] d / (scale (s + d)), regrouped so that nothing cancels.
    const double p{params.p()};
    const double q{params.q()};
    const double g{params.gamma()};
    const double d{p - q};
    const double s{std::sqrt(1.0 - 4.0 * (1.0 - g) * p * q)};
    const double scale{p + p * q - q * q};
    const double kept{4.0 * g * p * q * scale / (s + d) + 2.0 * d * q * (2.0 * p - q) + 2.0 * g * p * p * d};
    return q * kept / (scale * (s + d));
}

double apparent_hashrate_lsm(const NetworkParams& params)
{
    const double p{params.p()};
    const double q{params.q()};
    return revenue_ratio_lsm(params) * lsm_scale(p, q) / ((p - q) + p * q);
}

double apparent_hashrate_sm_gamma0(double q)
{
    if (!(q >= 0.0 && q < 0.5)) {
        throw Error{ErrorCode::QOutOfRange, "q must lie in [0, 1/2), got " + std::to_string(q)};
    }
    const double p{1.0 - q};
    return (p * q * q + (p - q) * (q + p * q * q - p * p * q)) / (p * p * q + p - q);
}

double apparent_hashrate_honest(double q)
{
    return q;
}

AnalyticMetrics tsm_metrics(const NetworkParams& params, int a)
{
    AnalyticMetrics metrics{};
    metrics.e_duration = expected_cycle_duration(params, a);
    metrics.e_revenue = expected_cycle_revenue(params, a);
    metrics.e_official = expected_official_blocks(params, a);
    metrics.delta = metrics.e_duration / metrics.e_official;
    metrics.revenue_ratio = metrics.e_revenue / metrics.e_duration;
    metrics.apparent_hashrate = metrics.e_revenue / metrics.e_official;
    return metrics;
}

AnalyticMetrics honest_metrics(const NetworkParams& params)
{
    const double q{params.q()};
    return AnalyticMetrics{
        .e_duration = 1.0,
        .e_revenue = q,
        .e_official = 1.0,
        .delta = 1.0,
        .revenue_ratio = q,
        .apparent_hashrate = apparent_hashrate_honest(q),
    };
}

AnalyticMetrics analytic_metrics(const StrategyId& strategy, const NetworkParams& params)
{
    switch (strategy.kind()) {
    case StrategyId::Kind::Honest: return honest_metrics(params);
    case StrategyId::Kind::TrailStubborn: return tsm_metrics(params, strategy.trail());
    case StrategyId::Kind::SelfishMining: break;
    }
    throw Error{ErrorCode::BackendMismatch, "selfish mining has no closed-form cycle metrics; use simulation"};
}

double analytic_apparent_hashrate(const StrategyId& strategy, const NetworkParams& params)
{
    switch (strategy.kind()) {
    case StrategyId::Kind::Honest: return apparent_hashrate_honest(params.q());
    case StrategyId::Kind::TrailStubborn: return apparent_hashrate_tsm(params, strategy.trail());
    case StrategyId::Kind::SelfishMining:
        if (params.gamma() == 0.0) return apparent_hashrate_sm_gamma0(params.q());
        break;
    }
    throw Error{ErrorCode::BackendMismatch, "selfish mining apparent hashrate has a closed form only at gamma = 0"};
}

bool same_value(double a, double b) noexcept
{
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

} // namespace trailmine
