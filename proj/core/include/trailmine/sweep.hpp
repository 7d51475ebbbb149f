#ifndef TRAILMINE_SWEEP_HPP
#define TRAILMINE_SWEEP_HPP

#include <trailmine/params.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace trailmine {

enum class Backend { Analytic, Simulation };
enum class SweepMetric { ApparentHashrate, RevenueRatio };

/**
 * A rectangular (q, gamma) grid. Each axis holds `steps` evenly spaced
 * points from min to max inclusive. The evaluated strategies are
 * `strategies` together with TSM_A for every A in `a_values`.
 */
struct GridSpec {
    double q_min{0.001};
    double q_max{0.499};
    int q_steps{101};
    double gamma_min{0.0};
    double gamma_max{1.0};
    int gamma_steps{101};
    std::vector<int> a_values{1, 2, 3, 4, 5, 6, 7};
    std::vector<StrategyId> strategies;
    Backend backend{Backend::Analytic};
    SweepMetric metric{SweepMetric::ApparentHashrate};
    std::uint64_t n_cycles{100'000};
    std::uint64_t seed{1};
    unsigned threads{0};
    double tau0{1.0};
    double reward{1.0};
};

struct DominanceCell {
    double q{0.0};
    double gamma{0.0};
    std::map<StrategyId, double> values;
    StrategyId best{StrategyId::honest()};
    //! best minus runner-up; 0 with a single strategy.
    double margin{0.0};
};

//! Throws InvalidArgument (or the parameter-domain codes) for an unusable grid.
void validate_grid(const GridSpec& grid);

//! Axis points; the last one is exactly max.
std::vector<double> grid_axis(double min, double max, int steps);

//! Sorted, duplicate-free strategy set evaluated by a sweep.
std::vector<StrategyId> grid_strategies(const GridSpec& grid);

/**
 * Fills best and margin from values. Ties go to the earliest strategy in
 * declared order. Throws InvalidArgument for an empty map.
 */
void resolve_best(DominanceCell& cell);

/**
 * Evaluates every cell, row-major by q then gamma. Throws BackendMismatch
 * for an analytic sweep that needs selfish mining at gamma > 0 (or its
 * revenue ratio at any gamma).
 */
std::vector<DominanceCell> sweep(const GridSpec& grid);

struct TrailComparisonCell {
    double q{0.0};
    double gamma{0.0};
    double lsm{0.0};
    int best_a{2};
    double best_trailing{0.0};
    //! best_trailing - lsm.
    double difference{0.0};
    //! Sign of difference: +1 trailing wins, -1 LSM wins, 0 tie.
    int sign{0};
};

/**
 * Analytic apparent hashrate of LSM against the best TSM_A over the A >= 2
 * entries of grid.a_values. Throws InvalidArgument if there are none.
 */
std::vector<TrailComparisonCell> trail_comparison_map(const GridSpec& grid);

//! Long CSV `q,gamma,strategy,value` at `path` and `q,gamma,best,margin` at best_table_path(path).
void emit_csv(const std::vector<DominanceCell>& cells, const std::filesystem::path& path);
std::filesystem::path best_table_path(const std::filesystem::path& path);
void emit_json(const std::vector<DominanceCell>& cells, const std::filesystem::path& path);
void emit_trail_csv(const std::vector<TrailComparisonCell>& cells, const std::filesystem::path& path);

//! Inverses of emit_csv / emit_json. Throw IoError or ParseError.
std::vector<DominanceCell> parse_csv(const std::filesystem::path& path);
std::vector<DominanceCell> parse_json(const std::filesystem::path& path);

/**
 * Applies one `key = value` setting. Keys: q_min, q_max, q_steps,
 * gamma_min, gamma_max, gamma_steps, a_values, strategies, backend,
 * metric, cycles, seed, threads, tau0, reward. Throws ParseError.
 */
void apply_grid_setting(GridSpec& grid, const std::string& key, const std::string& value);

//! Reads a flat `key = value` file; blank lines and `#` comments are skipped.
GridSpec read_grid_config(const std::filesystem::path& path);

std::string to_string(Backend backend);
std::string to_string(SweepMetric metric);

} // namespace trailmine

#endif // TRAILMINE_SWEEP_HPP
