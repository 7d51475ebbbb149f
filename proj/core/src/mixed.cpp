#include <trailmine/mixed.hpp>

#include <trailmine/analytic.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trailmine {

namespace {

void require_nonempty(std::size_t n)
{
    if (n == 0) throw Error{ErrorCode::EmptyPattern, "strategy pattern is empty"};
}

} // namespace

double weight(double e_duration, double d)
{
    if (!(e_duration > 0.0) || !(d > 0.0) || !std::isfinite(e_duration) || !std::isfinite(d)) {
        throw Error{ErrorCode::NonPositiveInput, "weight needs e_duration > 0 and d > 0"};
    }
    return e_duration / d;
}

StrategySummary make_summary(double e_duration, double d, double gamma_tilde)
{
    return StrategySummary{.d = d, .gamma_tilde = gamma_tilde, .e_duration = e_duration, .mu = weight(e_duration, d)};
}

StrategySummary summarize(const StrategyId& strategy, const NetworkParams& params)
{
    const AnalyticMetrics m{analytic_metrics(strategy, params)};
    const double gamma_tilde{m.apparent_hashrate * params.reward() / params.tau0()};
    return make_summary(m.e_duration, m.delta, gamma_tilde);
}

Composition compose(std::span<const StrategySummary> pattern)
{
    require_nonempty(pattern.size());
    double mu{0.0};
    double d_sum{0.0};
    double g_sum{0.0};
    for (const auto& s : pattern) {
        const double mu_i{weight(s.e_duration, s.d)};
        mu += mu_i;
        d_sum += mu_i * s.d;
        g_sum += mu_i * s.gamma_tilde;
    }
    return Composition{.d = d_sum / mu, .gamma_tilde = g_sum / mu, .mu = mu, .e_duration = d_sum};
}

StrategySummary as_summary(const Composition& composition)
{
    return make_summary(composition.e_duration, composition.d, composition.gamma_tilde);
}

NoAdvantageReport no_advantage_check(std::span<const StrategySummary> pattern)
{
    const Composition c{compose(pattern)};
    NoAdvantageReport report;
    report.composed = c.gamma_tilde;
    report.max_component = std::ranges::max(pattern, {}, &StrategySummary::gamma_tilde).gamma_tilde;
    report.components_share_max = std::ranges::all_of(
        pattern, [&](const StrategySummary& s) { return same_value(s.gamma_tilde, report.max_component); });

    const double gap{report.max_component - report.composed};
    if (report.components_share_max) {
        report.holds = same_value(report.composed, report.max_component);
    } else {
        report.holds = gap > 0.0;
    }
    return report;
}

std::vector<StrategyId> parse_pattern(const std::string& text)
{
    std::vector<StrategyId> out;
    std::istringstream in{text};
    std::string token;
    while (std::getline(in, token, ',')) {
        const auto first = token.find_first_not_of(" \t");
        const auto last = token.find_last_not_of(" \t");
        if (first == std::string::npos) {
            throw Error{ErrorCode::ParseError, "empty entry in pattern '" + text + "'"};
        }
        out.push_back(parse_strategy(token.substr(first, last - first + 1)));
    }
    require_nonempty(out.size());
    return out;
}

MixedResult analyze_pattern(std::span<const StrategyId> pattern, const NetworkParams& params)
{
    require_nonempty(pattern.size());
    MixedResult result;
    result.pattern.assign(pattern.begin(), pattern.end());
    for (const auto& s : pattern) result.components.push_back(summarize(s, params));
    result.composition = compose(result.components);
    result.apparent_hashrate = result.composition.gamma_tilde * params.tau0() / params.reward();
    return result;
}

} // namespace trailmine
