#ifndef TRAILMINE_ANALYTIC_HPP
#define TRAILMINE_ANALYTIC_HPP

#include <trailmine/params.hpp>

namespace trailmine {

/**
 * Cycle-level expectations of one (strategy, parameters) pair. Durations
 * are in units of tau0, revenues in blocks (units of b), so revenue_ratio
 * is expressed in b/tau0 and apparent_hashrate = revenue_ratio * delta.
 */
struct AnalyticMetrics {
    //! E[xi] / tau0.
    double e_duration;
    //! E[R(xi)] / b.
    double e_revenue;
    //! E[N(xi) v N'(xi)], official blocks per cycle.
    double e_official;
    //! Difficulty adjustment e_duration / e_official.
    double delta;
    //! Gamma in b/tau0 units.
    double revenue_ratio;
    //! Share of the official chain mined by the attacker after retargeting.
    double apparent_hashrate;
};

/*
 * Closed forms for the A-trail-stubborn strategy (TSM_A, LSM for A = 1).
 * Every function taking `a` throws InvalidArgument for a < 1.
 *
 * The recurring ratio (A+1)([2]/[A+1] - 2/(A+1)) equals
 * (1 - lambda) S_A / [A+1] with S_A = sum_(k=2..A) ([k] + lambda [k-1]),
 * and (A + lambda)/[A+1] - 1 equals (1 - lambda) K_A / [A+1] with
 * K_A = sum_(k=2..A) [k]. Both sums have positive terms, which keeps the
 * formulas accurate as q approaches 1/2.
 */

//! E[sigma] / tau0, expected length of the trail phase once it starts.
double expected_sigma(const NetworkParams& params, int a);

//! P[Sigma] = (1 - gamma) p q, the probability that a trail phase starts.
double prob_sigma(const NetworkParams& params);

double expected_cycle_duration(const NetworkParams& params, int a);

//! E[R(xi)] / b written with [n] and P_A; valid for every A >= 1.
double expected_cycle_revenue(const NetworkParams& params, int a);

//! The same expectation in its conditioning-sum form; A >= 2 only (0/0 at A = 1).
double expected_cycle_revenue_event_form(const NetworkParams& params, int a);

//! E[N(xi) v N'(xi)].
double expected_official_blocks(const NetworkParams& params, int a);

double difficulty_adjustment(const NetworkParams& params, int a);

//! Gamma in b/tau0 units, as the single closed-form fraction.
double revenue_ratio(const NetworkParams& params, int a);

//! q-tilde as the single closed-form fraction.
double apparent_hashrate_tsm(const NetworkParams& params, int a);

//! LSM revenue ratio coded directly with [0] = 0 and P_1 = 0.
double revenue_ratio_lsm(const NetworkParams& params);
double apparent_hashrate_lsm(const NetworkParams& params);

//! Selfish mining apparent hashrate, gamma = 0 only.
double apparent_hashrate_sm_gamma0(double q);

double apparent_hashrate_honest(double q);

//! Metrics assembled from the individual expectations above.
AnalyticMetrics tsm_metrics(const NetworkParams& params, int a);
AnalyticMetrics honest_metrics(const NetworkParams& params);

/**
 * Metrics for any strategy with a closed form in scope. Selfish mining has
 * none (only its gamma = 0 apparent hashrate), so it throws BackendMismatch.
 */
AnalyticMetrics analytic_metrics(const StrategyId& strategy, const NetworkParams& params);

/**
 * Apparent hashrate for any strategy; selfish mining is accepted only at
 * gamma = 0 and throws BackendMismatch otherwise.
 */
double analytic_apparent_hashrate(const StrategyId& strategy, const NetworkParams& params);

/**
 * True when two closed-form values agree to a relative 1e-12. Mathematically
 * equal values reached through different A differ only by rounding, and
 * rankings treat them as ties.
 */
bool same_value(double a, double b) noexcept;

} // namespace trailmine

#endif // TRAILMINE_ANALYTIC_HPP
