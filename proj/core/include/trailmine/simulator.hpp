#ifndef TRAILMINE_SIMULATOR_HPP
#define TRAILMINE_SIMULATOR_HPP

#include <trailmine/params.hpp>
#include <trailmine/rng.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace trailmine {

/** One simulated attack cycle. */
struct CycleOutcome {
    //! Cycle length in units of tau0.
    double duration{0.0};
    //! Attacker blocks that end up in the official chain.
    std::uint64_t revenue_blocks{0};
    //! N(xi) v N'(xi), height gained by the official chain.
    std::uint64_t official_height{0};
    bool sigma_occurred{false};
    //! N'(tau): attacker blocks mined before the honest miners catch up.
    std::uint64_t n_prime_tau{0};
    //! Z(tau): attacker blocks already referenced by the honest chain at tau.
    std::uint64_t z_tau{0};
    //! Attacker (left) and honest (right) blocks of the trail phase.
    std::uint64_t trail_left{0};
    std::uint64_t trail_right{0};
    double trail_duration{0.0};
    //! Trail phase ended with the attacker one block ahead.
    bool trail_won{false};
};

/**
 * A-trail-stubborn cycle:
 *  1. First block: an honest block ends the cycle immediately.
 *  2. Otherwise the attacker mines in secret. After every honest block he
 *     publishes his prefix of equal height; the next honest block extends
 *     that prefix with probability gamma. Ends when the honest chain has
 *     caught up (N = N').
 *  3. Decisive block: attacker (q) wins n+1 blocks, honest-on-attacker
 *     (gamma p) leaves n attacker blocks official, honest-on-honest
 *     ((1 - gamma) p) is the event Sigma.
 *  4. After Sigma the attacker trails by one block and keeps mining until
 *     he leads by one or trails by A.
 * Throws InvalidArgument for a < 1, EventCapExceeded after 10^7 events.
 */
CycleOutcome run_cycle_tsm(const NetworkParams& params, int a, RandomStream& stream);

//! Lead-stubborn mining, the A = 1 trail-stubborn cycle.
CycleOutcome run_cycle_lsm(const NetworkParams& params, RandomStream& stream);

/**
 * Selfish mining as in Eyal and Sirer: withhold blocks; a matched lead of
 * one becomes a tie resolved by the next block (q / gamma p /
 * (1 - gamma) p); from a lead of two, an honest block makes the attacker
 * publish his whole branch. No trail phase; the first-phase and trail
 * fields stay zero.
 */
CycleOutcome run_cycle_sm(const NetworkParams& params, RandomStream& stream);

//! One honest block; the attacker's with probability q.
CycleOutcome run_cycle_honest(const NetworkParams& params, RandomStream& stream);

CycleOutcome run_cycle(const StrategyId& strategy, const NetworkParams& params, RandomStream& stream);

struct Estimate {
    double mean{0.0};
    double std_error{0.0};
    std::uint64_t n{0};
};

struct ZTableRow {
    //! Conditioning value N'(tau) = n.
    int n{0};
    Estimate z;
};

/**
 * Monte Carlo estimates. Ratio metrics are ratios of sums over all cycles
 * (total revenue / total duration etc.) with delta-method standard errors.
 * When a pattern of strategies is simulated, one observation is one full
 * repetition of the pattern.
 */
struct EstimateSummary {
    //! Number of observations (cycles, or pattern repetitions).
    std::uint64_t n_cycles{0};
    Estimate revenue_ratio;
    Estimate delta;
    Estimate apparent_hashrate;
    Estimate e_duration;
    Estimate e_revenue;
    Estimate e_official;
    Estimate prob_sigma;
    //! E[N'(tau)]; only when every simulated strategy is trail-stubborn.
    std::optional<Estimate> e_n_prime_tau;
    //! Mean trail-phase length over the cycles in which Sigma occurred.
    std::optional<Estimate> e_trail_duration;
    //! E[Z(tau) | N'(tau) = n] for every n seen (trail-stubborn cycles only).
    std::vector<ZTableRow> z_table;
};

//! Largest N'(tau) tracked by the Z table.
inline constexpr int Z_TABLE_MAX{64};

/**
 * Runs n_cycles independent cycles. Cycle i draws from
 * RandomStream(master_seed, i) and partial sums are reduced in a fixed
 * order, so the result is bit-identical for any thread count (0 means
 * hardware concurrency). Throws InvalidArgument for n_cycles = 0.
 */
EstimateSummary estimate_metrics(const StrategyId& strategy, const NetworkParams& params, std::uint64_t n_cycles,
                                 std::uint64_t master_seed, unsigned threads = 0);

//! Repeats the cycle pattern n_repetitions times; slot j of repetition r uses stream r * size + j.
EstimateSummary estimate_pattern(std::span<const StrategyId> pattern, const NetworkParams& params,
                                 std::uint64_t n_repetitions, std::uint64_t master_seed, unsigned threads = 0);

struct EmbeddingReport {
    std::uint64_t n_paths{0};
    Estimate exit_low_frequency;
    //! Exit time in units of tau0.
    Estimate exit_time;
    double closed_form_exit_prob_low{0.0};
    double closed_form_exit_time{0.0};
};

/**
 * Drives two independent Poisson clocks (honest rate p/tau0, attacker rate
 * q/tau0) in continuous time, follows m + N - N' until it leaves (0, M) and
 * compares the exit side and time against the hiker closed forms.
 */
EmbeddingReport poisson_embedding_check(const NetworkParams& params, int start, int upper, std::uint64_t n_paths,
                                        std::uint64_t master_seed, unsigned threads = 0);

} // namespace trailmine

#endif // TRAILMINE_SIMULATOR_HPP
