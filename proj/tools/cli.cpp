#include <cli.hpp>

#include <trailmine/analytic.hpp>
#include <trailmine/hiker.hpp>
#include <trailmine/mixed.hpp>
#include <trailmine/simulator.hpp>
#include <trailmine/sweep.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <optional>

namespace trailmine::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt17(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::IoError: return EXIT_IO;
    case ErrorCode::InternalInconsistency:
    case ErrorCode::SingularSystem:
    case ErrorCode::StepCapExceeded:
    case ErrorCode::EventCapExceeded: return EXIT_INTERNAL;
    default: return EXIT_BAD_ARGUMENTS;
    }
}

struct Network {
    double q{0.0};
    double gamma{0.0};
    double tau0{1.0};
    double reward{1.0};

    void add_to(CLI::App& cmd, bool with_scale)
    {
        cmd.add_option("--q", q, "Attacker hashrate share, 0 <= q < 1/2")->required();
        cmd.add_option("--gamma", gamma, "Connectivity, 0 <= gamma <= 1")->required();
        if (with_scale) {
            cmd.add_option("--tau0", tau0, "Mean block interval");
            cmd.add_option("--reward", reward, "Block reward b");
        }
    }
    NetworkParams params() const { return validate_params(q, gamma, tau0, reward); }
};

/** Prints flat name/value pairs either as aligned text or as one JSON object. */
class Report
{
public:
    void add(const std::string& name, double value) { m_doc[name] = value; }
    void add(const std::string& name, const std::string& value) { m_doc[name] = value; }
    void add(const std::string& name, std::uint64_t value) { m_doc[name] = value; }
    void add(const std::string& name, const Estimate& e)
    {
        m_doc[name] = Json{{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}};
    }
    Json& doc() { return m_doc; }

    void print(std::ostream& out, bool json) const
    {
        if (json) {
            out << m_doc.dump(2) << '\n';
            return;
        }
        print_text(out, m_doc, "");
    }

private:
    static void print_text(std::ostream& out, const Json& node, const std::string& prefix)
    {
        for (const auto& [key, value] : node.items()) {
            const std::string name{prefix.empty() ? key : prefix + "." + key};
            if (value.is_object() && value.contains("mean") && value.contains("std_error")) {
                out << name << ' ' << fmt17(value["mean"].get<double>()) << " +- "
                    << fmt17(value["std_error"].get<double>()) << " (n=" << value["n"].get<std::uint64_t>() << ")\n";
            } else if (value.is_object()) {
                print_text(out, value, name);
            } else if (value.is_array()) {
                for (std::size_t i = 0; i < value.size(); ++i) {
                    print_text(out, value[i], name + "[" + std::to_string(i) + "]");
                }
            } else if (value.is_number_float()) {
                out << name << ' ' << fmt17(value.get<double>()) << '\n';
            } else if (value.is_string()) {
                out << name << ' ' << value.get<std::string>() << '\n';
            } else {
                out << name << ' ' << value.dump() << '\n';
            }
        }
    }

    Json m_doc = Json::object();
};

void run_analytic(const Network& net, int a, bool json, std::ostream& out)
{
    const NetworkParams params{net.params()};
    const AnalyticMetrics m{tsm_metrics(params, a)};
    Report r;
    r.add("strategy", to_string(StrategyId::trail_stubborn(a)));
    r.add("q", params.q());
    r.add("gamma", params.gamma());
    r.add("e_duration", m.e_duration * params.tau0());
    r.add("e_revenue", m.e_revenue * params.reward());
    r.add("e_official", m.e_official);
    r.add("delta", m.delta);
    r.add("revenue_ratio", m.revenue_ratio * params.reward() / params.tau0());
    r.add("apparent_hashrate", m.apparent_hashrate);
    r.add("prob_sigma", prob_sigma(params));
    r.add("e_sigma", expected_sigma(params, a) * params.tau0());
    r.print(out, json);
}

StrategyId resolve_strategy(const std::string& name, std::optional<int> a)
{
    if (name == "tsm") {
        if (!a) throw Error{ErrorCode::InvalidArgument, "--strategy tsm needs --a"};
        return StrategyId::trail_stubborn(*a);
    }
    const StrategyId s{parse_strategy(name)};
    if (a && s.is_trail_stubborn() && s.trail() != *a) {
        throw Error{ErrorCode::InvalidArgument, "--a conflicts with --strategy " + name};
    }
    return s;
}

void run_simulate(const Network& net, const StrategyId& strategy, std::uint64_t cycles, std::uint64_t seed,
                  unsigned threads, bool json, std::ostream& out)
{
    const NetworkParams params{net.params()};
    const EstimateSummary s{estimate_metrics(strategy, params, cycles, seed, threads)};
    const double rate_scale{params.reward() / params.tau0()};
    const auto scaled = [](Estimate e, double k) {
        e.mean *= k;
        e.std_error *= k;
        return e;
    };
    Report r;
    r.add("strategy", to_string(strategy));
    r.add("q", params.q());
    r.add("gamma", params.gamma());
    r.add("seed", seed);
    r.add("cycles", s.n_cycles);
    r.add("revenue_ratio", scaled(s.revenue_ratio, rate_scale));
    r.add("delta", s.delta);
    r.add("apparent_hashrate", s.apparent_hashrate);
    r.add("e_duration", scaled(s.e_duration, params.tau0()));
    r.add("e_revenue", scaled(s.e_revenue, params.reward()));
    r.add("e_official", s.e_official);
    r.add("prob_sigma", s.prob_sigma);
    if (s.e_n_prime_tau) r.add("e_n_prime_tau", *s.e_n_prime_tau);
    if (s.e_trail_duration) r.add("e_trail_duration", scaled(*s.e_trail_duration, params.tau0()));
    if (!s.z_table.empty()) {
        Json table = Json::object();
        for (const auto& row : s.z_table) {
            table[std::to_string(row.n)] = Json{{"mean", row.z.mean}, {"std_error", row.z.std_error}, {"n", row.z.n}};
        }
        r.doc()["z_given_n_prime"] = table;
    }
    r.print(out, json);
}

void run_hiker(int m, int upper, double p, bool oracle, bool json, std::ostream& out)
{
    const HikerProblem problem{m, upper, p};
    Report r;
    r.add("m", static_cast<std::uint64_t>(m));
    r.add("capital_m", static_cast<std::uint64_t>(upper));
    r.add("p", p);
    r.add("exit_prob_low", exit_prob_low(problem));
    r.add("e_exit_time", expected_exit_time(problem));
    if (m > 0 && m < upper) {
        r.add("e_exit_time_given_low", stern_conditional_time(problem));
        r.add("e_left_given_low", expected_left_steps_given_ruin(problem));
        r.add("e_right_given_high", expected_right_steps_given_win(problem));
    }
    if (oracle) {
        const HikerOracle o{absorption_oracle(problem)};
        Json node = Json::object();
        node["exit_prob_low"] = o.exit_prob_low;
        node["e_exit_time"] = o.e_exit_time;
        if (o.e_exit_time_given_low) node["e_exit_time_given_low"] = *o.e_exit_time_given_low;
        if (o.e_exit_time_given_high) node["e_exit_time_given_high"] = *o.e_exit_time_given_high;
        if (o.e_left_given_low) node["e_left_given_low"] = *o.e_left_given_low;
        if (o.e_right_given_high) node["e_right_given_high"] = *o.e_right_given_high;
        r.doc()["oracle"] = node;
    }
    r.print(out, json);
}

void run_mixed(const Network& net, const std::string& pattern_text, bool json, std::ostream& out)
{
    const NetworkParams params{net.params()};
    const auto pattern = parse_pattern(pattern_text);
    const MixedResult result{analyze_pattern(pattern, params)};
    const NoAdvantageReport check{no_advantage_check(result.components)};

    Report r;
    r.add("pattern", pattern_text);
    r.add("q", params.q());
    r.add("gamma", params.gamma());
    Json components = Json::array();
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const auto& c = result.components[i];
        components.push_back({{"strategy", to_string(pattern[i])},
                              {"d", c.d},
                              {"gamma_tilde", c.gamma_tilde},
                              {"e_duration", c.e_duration * params.tau0()},
                              {"mu", c.mu}});
    }
    r.doc()["components"] = components;
    r.add("d", result.composition.d);
    r.add("gamma_tilde", result.composition.gamma_tilde);
    r.add("q_tilde", result.apparent_hashrate);
    r.add("mu", result.composition.mu);
    r.add("max_component_gamma_tilde", check.max_component);
    r.add("no_advantage", std::string{check.holds ? "holds" : "violated"});
    r.print(out, json);
}

void run_sweep(const std::string& grid_path, const std::vector<std::string>& overrides, const std::string& out_path,
               const std::string& format, const std::string& map, std::ostream& out)
{
    GridSpec grid{grid_path.empty() ? GridSpec{} : read_grid_config(grid_path)};
    for (const auto& setting : overrides) {
        const auto eq = setting.find('=');
        if (eq == std::string::npos) {
            throw Error{ErrorCode::ParseError, "--set expects key=value, got '" + setting + "'"};
        }
        apply_grid_setting(grid, setting.substr(0, eq), setting.substr(eq + 1));
    }
    if (map == "lsm-vs-trail") {
        if (format != "csv") throw Error{ErrorCode::InvalidArgument, "lsm-vs-trail map is written as csv only"};
        const auto cells = trail_comparison_map(grid);
        emit_trail_csv(cells, out_path);
        out << "wrote " << cells.size() << " cells to " << out_path << '\n';
        return;
    }
    const auto cells = sweep(grid);
    if (format == "json") {
        emit_json(cells, out_path);
    } else {
        emit_csv(cells, out_path);
    }
    out << "wrote " << cells.size() << " cells to " << out_path << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Profitability of trail-stubborn block withholding", "trailmine"};
    app.require_subcommand(1);

    Network net;
    bool json{false};

    auto* analytic = app.add_subcommand("analytic", "Closed-form cycle metrics of TSM_A");
    int a_analytic{1};
    net.add_to(*analytic, true);
    analytic->add_option("--a", a_analytic, "Trail threshold A >= 1")->required();
    analytic->add_flag("--json", json, "JSON output");

    Network sim_net;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates for one strategy");
    std::string strategy_name;
    std::optional<int> a_sim;
    std::uint64_t cycles{0};
    std::uint64_t seed{0};
    unsigned threads{0};
    simulate->add_option("--strategy", strategy_name, "honest, sm, lsm or tsm")->required();
    simulate->add_option("--a", a_sim, "Trail threshold for tsm");
    sim_net.add_to(*simulate, true);
    simulate->add_option("--cycles", cycles, "Number of attack cycles")->required();
    simulate->add_option("--seed", seed, "Master seed")->required();
    simulate->add_option("--threads", threads, "Worker threads (0: all cores)");
    simulate->add_flag("--json", json, "JSON output");

    auto* hiker = app.add_subcommand("hiker", "Absorbing walk on [0, M]");
    int m{0};
    int capital_m{0};
    double p{0.0};
    bool oracle{false};
    hiker->add_option("--m", m, "Start position")->required();
    hiker->add_option("--capital-m", capital_m, "Upper boundary M")->required();
    hiker->add_option("--p", p, "Right-step probability, 1/2 < p < 1")->required();
    hiker->add_flag("--oracle", oracle, "Also solve the absorbing chain numerically");
    hiker->add_flag("--json", json, "JSON output");

    Network mix_net;
    auto* mixed = app.add_subcommand("mixed", "Compose a repeating pattern of attack cycles");
    std::string pattern;
    mixed->add_option("--pattern", pattern, "Comma-separated strategies, e.g. tsm:2,honest")->required();
    mix_net.add_to(*mixed, true);
    mixed->add_flag("--json", json, "JSON output");

    auto* sweep_cmd = app.add_subcommand("sweep", "Dominance map over a (q, gamma) grid");
    std::string grid_path;
    std::string out_path;
    std::string format{"csv"};
    std::string map{"dominance"};
    std::vector<std::string> overrides;
    std::optional<unsigned> sweep_threads;
    sweep_cmd->add_option("--grid", grid_path, "key = value grid file")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--out", out_path, "Output path")->required();
    sweep_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--map", map, "dominance or lsm-vs-trail")
        ->check(CLI::IsMember({"dominance", "lsm-vs-trail"}));
    sweep_cmd->add_option("--set", overrides, "Override a grid key, key=value");
    sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (0: all cores)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? EXIT_OK : EXIT_BAD_ARGUMENTS;
    }

    try {
        if (analytic->parsed()) {
            run_analytic(net, a_analytic, json, out);
        } else if (simulate->parsed()) {
            run_simulate(sim_net, resolve_strategy(strategy_name, a_sim), cycles, seed, threads, json, out);
        } else if (hiker->parsed()) {
            run_hiker(m, capital_m, p, oracle, json, out);
        } else if (mixed->parsed()) {
            run_mixed(mix_net, pattern, json, out);
        } else if (sweep_cmd->parsed()) {
            if (sweep_threads) overrides.push_back("threads=" + std::to_string(*sweep_threads));
            run_sweep(grid_path, overrides, out_path, format, map, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return EXIT_INTERNAL;
    }
    return EXIT_OK;
}

} // namespace trailmine::cli
