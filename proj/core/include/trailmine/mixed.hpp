#ifndef TRAILMINE_MIXED_HPP
#define TRAILMINE_MIXED_HPP

#include <trailmine/params.hpp>

#include <span>
#include <string>
#include <vector>

namespace trailmine {

/**
 * Long-run figures of one pure strategy. gamma_tilde is the apparent
 * revenue rate after retargeting in b/tau0 units, so the apparent hashrate
 * is gamma_tilde * tau0 / b.
 */
struct StrategySummary {
    double d{1.0};
    double gamma_tilde{0.0};
    //! E[tau] in units of tau0.
    double e_duration{1.0};
    //! Official blocks per cycle, e_duration / d.
    double mu{1.0};
};

//! mu = e_duration / d. Throws NonPositiveInput unless both are positive.
double weight(double e_duration, double d);

/**
 * Builds a summary from the given figures and checks it (positive d and
 * e_duration, mu recomputed from them). Throws NonPositiveInput.
 */
StrategySummary make_summary(double e_duration, double d, double gamma_tilde);

//! Analytic summary of a pure strategy. Selfish mining throws BackendMismatch.
StrategySummary summarize(const StrategyId& strategy, const NetworkParams& params);

struct Composition {
    double d{1.0};
    double gamma_tilde{0.0};
    //! Total weight of the pattern.
    double mu{0.0};
    //! mu * d, the expected duration of one pattern repetition.
    double e_duration{0.0};
};

/**
 * Weighted barycenter of (D_i, Gamma~_i) with weights mu_i for one
 * repetition of the pattern. Throws EmptyPattern.
 */
Composition compose(std::span<const StrategySummary> pattern);

//! The composition viewed as a pure strategy again, for nesting.
StrategySummary as_summary(const Composition& composition);

struct NoAdvantageReport {
    double composed{0.0};
    double max_component{0.0};
    //! Every component attains max_component (all weights are positive).
    bool components_share_max{false};
    bool holds{false};
};

/**
 * Checks composed Gamma~ <= max_i Gamma~_i + 1e-12, with equality (within
 * 1e-12) exactly when all components share the maximum. Throws EmptyPattern.
 */
NoAdvantageReport no_advantage_check(std::span<const StrategySummary> pattern);

//! Comma-separated strategy ids, e.g. "tsm:2,honest". Throws ParseError or EmptyPattern.
std::vector<StrategyId> parse_pattern(const std::string& text);

struct MixedResult {
    std::vector<StrategyId> pattern;
    std::vector<StrategySummary> components;
    Composition composition;
    //! gamma_tilde * tau0 / b.
    double apparent_hashrate{0.0};
};

//! Analytic composition of a pattern of pure strategies.
MixedResult analyze_pattern(std::span<const StrategyId> pattern, const NetworkParams& params);

} // namespace trailmine

#endif // TRAILMINE_MIXED_HPP
