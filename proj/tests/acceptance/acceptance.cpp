// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <exact.hpp>

#include <cli.hpp>
#include <trailmine/analytic.hpp>
#include <trailmine/hiker.hpp>
#include <trailmine/mixed.hpp>
#include <trailmine/simulator.hpp>
#include <trailmine/sweep.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace trailmine;

namespace {

struct Outcome {
    bool pass{true};
    std::string detail;
};

double rel_err(double a, double b)
{
    const double scale{std::max(std::abs(a), std::abs(b))};
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

//! Relative error with an absolute floor of 1, for quantities that may vanish.
double rel_err_floor(double a, double b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

const std::vector<double>& p_grid()
{
    static const std::vector<double> grid{0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
    return grid;
}

Outcome hiker_oracle()
{
    double worst{0.0};
    int checked{0};
    for (int upper = 2; upper <= 12; ++upper) {
        for (int m = 1; m < upper; ++m) {
            for (double p : p_grid()) {
                const HikerProblem h{m, upper, p};
                const HikerClosedForms c{closed_forms(h)};
                const HikerOracle o{absorption_oracle(h)};
                for (const auto& [closed, oracle] :
                     {std::pair{c.exit_prob_low, o.exit_prob_low}, std::pair{c.e_exit_time, o.e_exit_time},
                      std::pair{c.e_exit_time_given_low, *o.e_exit_time_given_low},
                      std::pair{c.e_left_given_low, *o.e_left_given_low},
                      std::pair{c.e_right_given_high, *o.e_right_given_high}}) {
                    worst = std::max(worst, rel_err_floor(closed, oracle));
                    ++checked;
                }
            }
        }
    }
    return {worst <= 1e-10, std::to_string(checked) + " comparisons, max rel err " + fmt("%.2e", worst)};
}

Outcome u_identities()
{
    double worst_seq{0.0};
    double worst_partial{0.0};
    for (double p : p_grid()) {
        const double lambda{(1.0 - p) / p};
        for (int n = 0; n <= 100; ++n) worst_seq = std::max(worst_seq, rel_err(u_closed(n, lambda), u_sequence(n, lambda)));
        for (int upper = 2; upper <= 12; ++upper) {
            for (int m = 1; m < upper; ++m) {
                double literal{0.0};
                for (int i = upper - 1 - m; i <= upper - 2; ++i) literal += u_sequence(i, lambda);
                worst_partial = std::max(worst_partial, rel_err(stern_conditional_time(HikerProblem{m, upper, p}), literal));
            }
        }
    }
    bool exact_ok{true};
    for (const exact::Q& q : {exact::Q{3, 10}, exact::Q{1, 20}, exact::Q{2, 5}, exact::Q{49, 100}}) {
        const exact::Q p{exact::Q{1} - q};
        const exact::Q u0{exact::u(0, p)}, u1{exact::u(1, p)}, u2{exact::u(2, p)};
        exact_ok = exact_ok && (u0 + u1) / exact::Q{2} == exact::Q{1} / (exact::Q{1} - p * q);
        exact_ok = exact_ok && (u1 + u2) / exact::Q{2} == exact::Q{1} / (exact::Q{1} - exact::Q{2} * p * q);
        // The floating u_sequence must agree with the exact values as well.
        const double lambda{exact::to_double(q / p)};
        exact_ok = exact_ok && rel_err(u_sequence(1, lambda), exact::to_double(u1)) < 1e-13;
        exact_ok = exact_ok && rel_err(u_sequence(2, lambda), exact::to_double(u2)) < 1e-13;
    }
    return {worst_seq <= 1e-12 && worst_partial <= 1e-12 && exact_ok,
            "closed vs recursion " + fmt("%.2e", worst_seq) + ", partial sums " + fmt("%.2e", worst_partial) +
                ", exact u identities " + (exact_ok ? "hold" : "FAIL")};
}

Outcome pa_integer()
{
    bool ok{true};
    for (int a = 1; a <= 50; ++a) {
        std::vector<std::int64_t> c;
        try {
            c = pa_coefficients(a);
        } catch (const Error&) {
            ok = false;
            continue;
        }
        // Multiply back by (1 - X)^3 in exact integers and compare with the numerator.
        std::vector<exact::Int> product(c.size() + 3, exact::Int{0});
        const int cube[] = {1, -3, 3, -1};
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (int k = 0; k < 4; ++k) product[i + k] += exact::Int{c[i]} * cube[k];
        }
        std::vector<exact::Int> numerator(2 * a + 1, exact::Int{0});
        numerator[0] += 1;
        numerator[a - 1] -= a;
        numerator[a + 1] += a;
        numerator[2 * a] -= 1;
        product.resize(std::max(product.size(), numerator.size()), exact::Int{0});
        numerator.resize(product.size(), exact::Int{0});
        ok = ok && product == numerator;
    }
    ok = ok && pa_coefficients(2) == std::vector<std::int64_t>{1, 1};
    ok = ok && pa_coefficients(3) == std::vector<std::int64_t>{1, 3, 3, 1};
    return {ok, "A = 1..50 divide exactly; P2 = 1+X, P3 = (1+X)^3"};
}

Outcome monte_carlo()
{
    int failures{0};
    int compared{0};
    double worst_z{0.0};
    std::uint64_t seed{1000};
    for (double q : {0.1, 0.25, 0.4}) {
        for (double g : {0.0, 0.5, 1.0}) {
            const auto params = validate_params(q, g);
            for (int a : {1, 2, 3}) {
                const AnalyticMetrics m{tsm_metrics(params, a)};
                const EstimateSummary s{estimate_metrics(StrategyId::trail_stubborn(a), params, 1'000'000, ++seed)};
                for (const auto& [est, target] :
                     {std::pair{s.revenue_ratio, m.revenue_ratio}, std::pair{s.delta, m.delta},
                      std::pair{s.apparent_hashrate, m.apparent_hashrate}, std::pair{s.e_duration, m.e_duration},
                      std::pair{s.prob_sigma, prob_sigma(params)}}) {
                    const double dev{std::abs(est.mean - target)};
                    ++compared;
                    if (dev > 4.0 * est.std_error) {
                        ++failures;
                        std::printf("    q=%g gamma=%g A=%d: estimate %.6f vs %.6f (se %.2e)\n", q, g, a, est.mean,
                                    target, est.std_error);
                    }
                    if (est.std_error > 0.0) worst_z = std::max(worst_z, dev / est.std_error);
                }
            }
        }
    }
    // Worked point against values frozen from the exact rational cycle.
    const auto c = exact::cycle(exact::Q{2, 5}, exact::Q{0}, exact::Q{1, 5}, 2);
    const AnalyticMetrics w{tsm_metrics(validate_params(0.4, 0.0), 2)};
    const bool frozen{rel_err(w.revenue_ratio, exact::to_double(c.e_revenue / c.e_duration)) < 1e-13 &&
                      rel_err(w.delta, exact::to_double(c.e_duration / c.e_official)) < 1e-13 &&
                      rel_err(w.apparent_hashrate, exact::to_double(c.e_revenue / c.e_official)) < 1e-13 &&
                      std::abs(w.revenue_ratio - 0.23648) < 5e-6 && std::abs(w.delta - 1.52720) < 5e-6 &&
                      std::abs(w.apparent_hashrate - 0.36115) < 5e-6};
    return {failures == 0 && frozen, std::to_string(compared - failures) + "/" + std::to_string(compared) +
                                         " within 4 SE (max " + fmt("%.2f", worst_z) + " SE); worked point " +
                                         fmt("Gamma=%.5f", w.revenue_ratio) + fmt(" delta=%.5f", w.delta) +
                                         fmt(" q~=%.5f", w.apparent_hashrate)};
}

Outcome triple_identity()
{
    const auto qs = grid_axis(0.001, 0.499, 101);
    const auto gammas = grid_axis(0.0, 1.0, 101);
    double worst{0.0};
    for (double q : qs) {
        for (double g : gammas) {
            const auto params = validate_params(q, g);
            for (int a = 1; a <= 7; ++a) {
                const double closed{apparent_hashrate_tsm(params, a)};
                const double via_gamma{revenue_ratio(params, a) * difficulty_adjustment(params, a) * params.tau0() /
                                       params.reward()};
                const double via_blocks{expected_cycle_revenue(params, a) / expected_official_blocks(params, a)};
                worst = std::max({worst, rel_err(closed, via_gamma), rel_err(closed, via_blocks),
                                  rel_err(via_gamma, via_blocks)});
            }
        }
    }
    return {worst <= 1e-12, "101x101x7 grid, max rel err " + fmt("%.2e", worst)};
}

Outcome lsm_specialization()
{
    const auto qs = grid_axis(0.001, 0.499, 101);
    const auto gammas = grid_axis(0.0, 1.0, 101);
    double worst{0.0};
    for (double q : qs) {
        for (double g : gammas) {
            const auto params = validate_params(q, g);
            worst = std::max({worst, rel_err(revenue_ratio(params, 1), revenue_ratio_lsm(params)),
                              rel_err(apparent_hashrate_tsm(params, 1), apparent_hashrate_lsm(params))});
        }
    }
    return {worst <= 1e-14, "101x101 grid, max rel err " + fmt("%.2e", worst)};
}

Outcome limits()
{
    const auto params = validate_params(0.4999, 0.0);
    const double sm{apparent_hashrate_sm_gamma0(0.4999)};
    bool ok{std::abs(sm - 1.0) < 2e-3};
    double worst{std::abs(sm - 1.0)};
    for (int a = 1; a <= 7; ++a) {
        const double value{apparent_hashrate_tsm(params, a)};
        const double err{std::abs(value - (1.0 - 1.0 / (a + 1)))};
        worst = std::max(worst, err);
        ok = ok && err < 2e-3 && sm > value;
    }
    return {ok, "max deviation " + fmt("%.2e", worst) + fmt(", q~_SM = %.6f", sm)};
}

Outcome trailing_dominance()
{
    GridSpec grid;
    grid.q_min = 0.05;
    grid.q_max = 0.45;
    grid.q_steps = 9;
    grid.gamma_min = 0.2;
    grid.gamma_max = 1.0;
    grid.gamma_steps = 17;
    grid.a_values = {2, 3, 4, 5, 6, 7};
    grid.threads = 1;
    const auto cells = sweep(grid);
    int wins{0};
    for (const auto& c : cells) wins += c.best == StrategyId::trail_stubborn(2);
    return {wins == static_cast<int>(cells.size()),
            "A = 2 best in " + std::to_string(wins) + "/" + std::to_string(cells.size()) + " cells"};
}

Outcome conditional_z()
{
    const double g{0.5};
    const auto params = validate_params(0.35, g);
    const EstimateSummary s{estimate_metrics(StrategyId::lead_stubborn(), params, 2'500'000, 4242)};
    bool ok{true};
    std::uint64_t fewest{UINT64_MAX};
    for (int n = 1; n <= 6; ++n) {
        const ZTableRow* row{nullptr};
        for (const auto& r : s.z_table) {
            if (r.n == n) row = &r;
        }
        if (row == nullptr) {
            ok = false;
            continue;
        }
        const double expected{n - (1.0 - std::pow(1.0 - g, n)) / g};
        fewest = std::min(fewest, row->z.n);
        ok = ok && row->z.n >= 10'000 && std::abs(row->z.mean - expected) <= 4.0 * row->z.std_error;
    }
    return {ok, "n = 1..6, fewest samples " + std::to_string(fewest)};
}

Outcome mixed_corollary()
{
    std::mt19937_64 rng{20240611};
    const double qs[] = {0.1, 0.25, 0.4};
    const double gs[] = {0.0, 0.5, 1.0};
    const StrategyId pool[] = {StrategyId::honest(), StrategyId::trail_stubborn(1), StrategyId::trail_stubborn(2),
                               StrategyId::trail_stubborn(3)};
    int held{0};
    int equal_cases{0};
    for (int trial = 0; trial < 1000; ++trial) {
        const auto params = validate_params(qs[rng() % 3], gs[rng() % 3]);
        const std::size_t length{1 + rng() % 5};
        std::vector<StrategySummary> parts;
        for (std::size_t i = 0; i < length; ++i) parts.push_back(summarize(pool[rng() % 4], params));
        const NoAdvantageReport r{no_advantage_check(parts)};
        held += r.holds && r.composed <= r.max_component + 1e-12;
        equal_cases += r.components_share_max;
    }

    const auto params = validate_params(0.4, 0.0);
    const auto pattern = parse_pattern("honest,tsm:2");
    const MixedResult mix{analyze_pattern(pattern, params)};
    const EstimateSummary s{estimate_pattern(pattern, params, 1'000'000, 777)};
    const double z_rate{std::abs(s.apparent_hashrate.mean - mix.apparent_hashrate) / s.apparent_hashrate.std_error};
    const double z_d{std::abs(s.delta.mean - mix.composition.d) / s.delta.std_error};
    return {held == 1000 && z_rate <= 4.0 && z_d <= 4.0,
            std::to_string(held) + "/1000 patterns (" + std::to_string(equal_cases) + " with a shared max); " +
                "HM+TSM2 simulation " + fmt("%.2f SE", z_rate) + fmt(" (q~), %.2f SE (D)", z_d)};
}

Outcome determinism()
{
    const std::vector<std::string> base{"simulate", "--strategy", "tsm",     "--a",    "3",  "--q",
                                        "0.3",      "--gamma",    "0.5",     "--cycles", "300000", "--seed",
                                        "2718",     "--json"};
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "4", "16"}) {
        auto args = base;
        args.insert(args.end(), {"--threads", threads});
        std::ostringstream out, err;
        if (cli::run(args, out, err) != 0) return {false, "simulate failed: " + err.str()};
        outputs.push_back(out.str());
    }
    const bool same{outputs[0] == outputs[1] && outputs[0] == outputs[2]};
    return {same, same ? "identical output at 1, 4 and 16 workers (" + std::to_string(outputs[0].size()) + " bytes)"
                       : "outputs differ"};
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "hiker closed forms vs absorbing-chain oracle", 5.0, hiker_oracle},
        {2, "u sequence identities", 1.0, u_identities},
        {3, "P_A has integer coefficients", 1.0, pa_integer},
        {4, "closed forms vs Monte Carlo on the smoke grid", 180.0, monte_carlo},
        {5, "apparent hashrate triple identity", 30.0, triple_identity},
        {6, "A = 1 reduces to lead-stubborn mining", 30.0, lsm_specialization},
        {7, "limits as q approaches 1/2", 1.0, limits},
        {8, "A = 2 dominates the trailing strategies for gamma >= 0.2", 10.0, trailing_dominance},
        {9, "conditional mean of Z given N'", 60.0, conditional_z},
        {10, "mixed strategies bring no advantage", 120.0, mixed_corollary},
        {11, "simulate output independent of worker count", 600.0, determinism},
    };

    int failed{0};
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string{"exception: "} + e.what()};
        }
        const double seconds{std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
        const bool in_time{seconds <= c.budget_seconds};
        const bool pass{outcome.pass && in_time};
        failed += !pass;
        std::printf("%s [%2d] %s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str(), seconds,
                    in_time ? "" : ", over time budget");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
