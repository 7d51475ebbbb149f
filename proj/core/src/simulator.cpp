#include <trailmine/simulator.hpp>

#include <trailmine/hiker.hpp>

#include "parallel.hpp"

#include <array>
#include <cmath>
#include <string>

namespace trailmine {

namespace {

constexpr std::uint64_t CYCLE_EVENT_CAP{10'000'000};
//! Observations per reduction block; fixed so sums never depend on thread count.
constexpr std::uint64_t BLOCK_SIZE{1 << 14};

enum class Finder { Attacker, HonestOnAttacker, HonestOnHonest };

/*
 * Block arrivals of the whole network: exponential gaps with mean tau0
 * (1 in tau0 units), each block found by the attacker with probability q.
 * An honest block is labelled as extending the attacker's branch with
 * probability gamma; the label only matters when two tips compete.
 */
class BlockEvents
{
public:
    BlockEvents(const NetworkParams& params, RandomStream& stream)
        : m_q{params.q()}, m_gamma{params.gamma()}, m_p{params.p()}, m_stream{stream} {}

    Finder next()
    {
        if (++m_events > CYCLE_EVENT_CAP) {
            throw Error{ErrorCode::EventCapExceeded, "attack cycle exceeded 10^7 block events"};
        }
        m_elapsed += m_stream.exponential();
        const double u{m_stream.uniform()};
        if (u < m_q) return Finder::Attacker;
        const bool on_attacker{m_gamma >= 1.0 || (m_gamma > 0.0 && u - m_q < m_gamma * m_p)};
        return on_attacker ? Finder::HonestOnAttacker : Finder::HonestOnHonest;
    }

    double elapsed() const { return m_elapsed; }

private:
    double m_q;
    double m_gamma;
    double m_p;
    RandomStream& m_stream;
    double m_elapsed{0.0};
    std::uint64_t m_events{0};
};

struct Moments {
    double sum{0.0};
    double sum_sq{0.0};
    std::uint64_t count{0};

    void add(double x)
    {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    void merge(const Moments& other)
    {
        sum += other.sum;
        sum_sq += other.sum_sq;
        count += other.count;
    }
};

Estimate mean_estimate(const Moments& m)
{
    Estimate est;
    est.n = m.count;
    if (m.count == 0) return est;
    const double n{static_cast<double>(m.count)};
    est.mean = m.sum / n;
    if (m.count > 1) {
        const double var{std::max(0.0, (m.sum_sq - n * est.mean * est.mean) / (n - 1.0))};
        est.std_error = std::sqrt(var / n);
    }
    return est;
}

// Revenue, duration and height per observation, with the cross products
// needed for delta-method errors on their ratios.
struct Accumulator {
    std::uint64_t n{0};
    Moments revenue;
    Moments duration;
    Moments height;
    double revenue_duration{0.0};
    double revenue_height{0.0};
    double duration_height{0.0};

    std::uint64_t cycles{0};
    std::uint64_t sigma_cycles{0};
    Moments n_prime;
    Moments trail_duration;
    std::array<Moments, Z_TABLE_MAX + 1> z_by_n{};

    void add_observation(double r, double d, double h)
    {
        ++n;
        revenue.add(r);
        duration.add(d);
        height.add(h);
        revenue_duration += r * d;
        revenue_height += r * h;
        duration_height += d * h;
    }

    void add_cycle(const CycleOutcome& c, bool trail_family)
    {
        ++cycles;
        if (c.sigma_occurred) {
            ++sigma_cycles;
            trail_duration.add(c.trail_duration);
        }
        if (trail_family) {
            n_prime.add(static_cast<double>(c.n_prime_tau));
            if (c.n_prime_tau >= 1 && c.n_prime_tau <= Z_TABLE_MAX) {
                z_by_n[c.n_prime_tau].add(static_cast<double>(c.z_tau));
            }
        }
    }

    void merge(const Accumulator& o)
    {
        n += o.n;
        revenue.merge(o.revenue);
        duration.merge(o.duration);
        height.merge(o.height);
        revenue_duration += o.revenue_duration;
        revenue_height += o.revenue_height;
        duration_height += o.duration_height;
        cycles += o.cycles;
        sigma_cycles += o.sigma_cycles;
        n_prime.merge(o.n_prime);
        trail_duration.merge(o.trail_duration);
        for (std::size_t i = 0; i < z_by_n.size(); ++i) z_by_n[i].merge(o.z_by_n[i]);
    }
};

// sum(x) / sum(y) with its delta-method standard error.
Estimate ratio_estimate(const Moments& x, const Moments& y, double sum_xy, std::uint64_t n_obs)
{
    Estimate est;
    est.n = n_obs;
    if (n_obs == 0 || y.sum == 0.0) return est;
    const double n{static_cast<double>(n_obs)};
    const double r{x.sum / y.sum};
    est.mean = r;
    if (n_obs > 1) {
        const double mx{x.sum / n};
        const double my{y.sum / n};
        const double var_x{(x.sum_sq - n * mx * mx) / (n - 1.0)};
        const double var_y{(y.sum_sq - n * my * my) / (n - 1.0)};
        const double cov{(sum_xy - n * mx * my) / (n - 1.0)};
        const double var_r{std::max(0.0, var_x - 2.0 * r * cov + r * r * var_y) / (my * my)};
        est.std_error = std::sqrt(var_r / n);
    }
    return est;
}

EstimateSummary summarize(const Accumulator& acc, bool trail_family)
{
    EstimateSummary s;
    s.n_cycles = acc.n;
    s.revenue_ratio = ratio_estimate(acc.revenue, acc.duration, acc.revenue_duration, acc.n);
    s.delta = ratio_estimate(acc.duration, acc.height, acc.duration_height, acc.n);
    s.apparent_hashrate = ratio_estimate(acc.revenue, acc.height, acc.revenue_height, acc.n);
    s.e_duration = mean_estimate(acc.duration);
    s.e_revenue = mean_estimate(acc.revenue);
    s.e_official = mean_estimate(acc.height);

    const double cycles{static_cast<double>(acc.cycles)};
    const double freq{acc.cycles > 0 ? static_cast<double>(acc.sigma_cycles) / cycles : 0.0};
    s.prob_sigma.mean = freq;
    s.prob_sigma.n = acc.cycles;
    s.prob_sigma.std_error = acc.cycles > 0 ? std::sqrt(freq * (1.0 - freq) / cycles) : 0.0;

    if (trail_family) s.e_n_prime_tau = mean_estimate(acc.n_prime);
    if (acc.trail_duration.count > 0) s.e_trail_duration = mean_estimate(acc.trail_duration);
    for (int n = 1; n <= Z_TABLE_MAX; ++n) {
        if (acc.z_by_n[n].count > 0) s.z_table.push_back(ZTableRow{.n = n, .z = mean_estimate(acc.z_by_n[n])});
    }
    return s;
}

void validate_pattern(std::span<const StrategyId> pattern)
{
    if (pattern.empty()) {
        throw Error{ErrorCode::EmptyPattern, "strategy pattern is empty"};
    }
}

} // namespace

CycleOutcome run_cycle_tsm(const NetworkParams& params, int a, RandomStream& stream)
{
    if (a < 1) {
        throw Error{ErrorCode::InvalidArgument, "trail threshold A must be >= 1, got " + std::to_string(a)};
    }
    BlockEvents events{params, stream};
    CycleOutcome out;

    if (events.next() != Finder::Attacker) {
        out.duration = events.elapsed();
        out.official_height = 1;
        return out;
    }

    // Secret lead until the honest chain catches up.
    std::uint64_t attacker{1};
    std::uint64_t honest{0};
    std::uint64_t z{0};
    while (honest < attacker) {
        const Finder f{events.next()};
        if (f == Finder::Attacker) {
            ++attacker;
        } else {
            ++honest;
            // Honest block number h competes between the honest tip and the
            // attacker's published prefix of height h - 1.
            if (honest >= 2 && f == Finder::HonestOnAttacker) z = honest - 1;
        }
    }
    out.n_prime_tau = attacker;
    out.z_tau = z;

    const Finder decisive{events.next()};
    if (decisive == Finder::Attacker) {
        out.revenue_blocks = attacker + 1;
        out.official_height = attacker + 1;
    } else if (decisive == Finder::HonestOnAttacker) {
        out.revenue_blocks = attacker;
        out.official_height = attacker + 1;
    } else {
        out.sigma_occurred = true;
        // Hiker on [0, A+1] from 2: position = 2 + honest - attacker blocks since Sigma.
        const int upper{a + 1};
        int position{2};
        const double trail_start{events.elapsed()};
        while (position > 0 && position < upper) {
            if (events.next() == Finder::Attacker) {
                --position;
                ++out.trail_left;
            } else {
                ++position;
                ++out.trail_right;
            }
        }
        out.trail_duration = events.elapsed() - trail_start;
        out.trail_won = position == 0;
        if (out.trail_won) {
            out.revenue_blocks = attacker + out.trail_left;
            out.official_height = attacker + out.trail_left;
        } else {
            out.revenue_blocks = z;
            out.official_height = attacker + 1 + out.trail_right;
        }
    }
    out.duration = events.elapsed();
    return out;
}

CycleOutcome run_cycle_lsm(const NetworkParams& params, RandomStream& stream)
{
    return run_cycle_tsm(params, 1, stream);
}

CycleOutcome run_cycle_sm(const NetworkParams& params, RandomStream& stream)
{
    BlockEvents events{params, stream};
    CycleOutcome out;

    if (events.next() != Finder::Attacker) {
        out.duration = events.elapsed();
        out.official_height = 1;
        return out;
    }
    if (events.next() == Finder::Attacker) {
        // Lead of two or more: every honest block is answered by publishing
        // one block; when the lead falls back to one the whole branch goes out.
        std::uint64_t attacker{2};
        std::uint64_t lead{2};
        while (true) {
            if (events.next() == Finder::Attacker) {
                ++attacker;
                ++lead;
            } else if (lead == 2) {
                break;
            } else {
                --lead;
            }
        }
        out.revenue_blocks = attacker;
        out.official_height = attacker;
    } else {
        // Matched lead of one: a one-block race.
        const Finder decisive{events.next()};
        out.official_height = 2;
        if (decisive == Finder::Attacker) {
            out.revenue_blocks = 2;
        } else if (decisive == Finder::HonestOnAttacker) {
            out.revenue_blocks = 1;
        }
    }
    out.duration = events.elapsed();
    return out;
}

CycleOutcome run_cycle_honest(const NetworkParams& params, RandomStream& stream)
{
    BlockEvents events{params, stream};
    CycleOutcome out;
    out.revenue_blocks = events.next() == Finder::Attacker ? 1 : 0;
    out.official_height = 1;
    out.duration = events.elapsed();
    return out;
}

CycleOutcome run_cycle(const StrategyId& strategy, const NetworkParams& params, RandomStream& stream)
{
    switch (strategy.kind()) {
    case StrategyId::Kind::Honest: return run_cycle_honest(params, stream);
    case StrategyId::Kind::SelfishMining: return run_cycle_sm(params, stream);
    case StrategyId::Kind::TrailStubborn: return run_cycle_tsm(params, strategy.trail(), stream);
    }
    throw Error{ErrorCode::InternalInconsistency, "unknown strategy kind"};
}

EstimateSummary estimate_pattern(std::span<const StrategyId> pattern, const NetworkParams& params,
                                 std::uint64_t n_repetitions, std::uint64_t master_seed, unsigned threads)
{
    validate_pattern(pattern);
    if (n_repetitions == 0) {
        throw Error{ErrorCode::InvalidArgument, "need at least one cycle"};
    }
    bool trail_family{true};
    for (const auto& s : pattern) trail_family = trail_family && s.is_trail_stubborn();

    const std::uint64_t width{pattern.size()};
    const std::uint64_t n_blocks{(n_repetitions + BLOCK_SIZE - 1) / BLOCK_SIZE};
    std::vector<Accumulator> partial(n_blocks);

    detail::parallel_for(n_blocks, threads, [&](std::size_t block) {
        Accumulator& acc{partial[block]};
        const std::uint64_t begin{block * BLOCK_SIZE};
        const std::uint64_t end{std::min(n_repetitions, begin + BLOCK_SIZE)};
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            double revenue{0.0};
            double duration{0.0};
            double height{0.0};
            for (std::uint64_t slot = 0; slot < width; ++slot) {
                RandomStream stream{master_seed, rep * width + slot};
                const CycleOutcome c{run_cycle(pattern[slot], params, stream)};
                revenue += static_cast<double>(c.revenue_blocks);
                duration += c.duration;
                height += static_cast<double>(c.official_height);
                acc.add_cycle(c, trail_family);
            }
            acc.add_observation(revenue, duration, height);
        }
    });

    Accumulator total;
    for (const auto& acc : partial) total.merge(acc);
    return summarize(total, trail_family);
}

EstimateSummary estimate_metrics(const StrategyId& strategy, const NetworkParams& params, std::uint64_t n_cycles,
                                 std::uint64_t master_seed, unsigned threads)
{
    const std::array<StrategyId, 1> pattern{strategy};
    return estimate_pattern(pattern, params, n_cycles, master_seed, threads);
}

EmbeddingReport poisson_embedding_check(const NetworkParams& params, int start, int upper, std::uint64_t n_paths,
                                        std::uint64_t master_seed, unsigned threads)
{
    const HikerProblem problem{start, upper, params.p()};
    if (n_paths == 0) {
        throw Error{ErrorCode::InvalidArgument, "need at least one path"};
    }
    const double honest_rate{params.p() / params.tau0()};
    const double attacker_rate{params.q() / params.tau0()};

    struct Partial {
        Moments low;
        Moments time;
    };
    const std::uint64_t n_blocks{(n_paths + BLOCK_SIZE - 1) / BLOCK_SIZE};
    std::vector<Partial> partial(n_blocks);

    detail::parallel_for(n_blocks, threads, [&](std::size_t block) {
        const std::uint64_t begin{block * BLOCK_SIZE};
        const std::uint64_t end{std::min(n_paths, begin + BLOCK_SIZE)};
        for (std::uint64_t path = begin; path < end; ++path) {
            RandomStream stream{master_seed, path};
            // Each clock keeps its own pending arrival; only the one that fires is redrawn.
            double next_honest{stream.exponential() / honest_rate};
            double next_attacker{attacker_rate > 0.0 ? stream.exponential() / attacker_rate : INFINITY};
            double now{0.0};
            int position{start};
            std::uint64_t events{0};
            while (position > 0 && position < upper) {
                if (++events > CYCLE_EVENT_CAP) {
                    throw Error{ErrorCode::EventCapExceeded, "embedding path exceeded 10^7 events"};
                }
                if (next_honest <= next_attacker) {
                    now = next_honest;
                    ++position;
                    next_honest = now + stream.exponential() / honest_rate;
                } else {
                    now = next_attacker;
                    --position;
                    next_attacker = now + stream.exponential() / attacker_rate;
                }
            }
            partial[block].low.add(position == 0 ? 1.0 : 0.0);
            partial[block].time.add(now / params.tau0());
        }
    });

    Partial total;
    for (const auto& part : partial) {
        total.low.merge(part.low);
        total.time.merge(part.time);
    }
    EmbeddingReport report;
    report.n_paths = n_paths;
    report.exit_low_frequency = mean_estimate(total.low);
    report.exit_time = mean_estimate(total.time);
    report.closed_form_exit_prob_low = exit_prob_low(problem);
    report.closed_form_exit_time = expected_exit_time(problem);
    return report;
}

} // namespace trailmine
