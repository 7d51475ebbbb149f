#include <trailmine/sweep.hpp>

#include <trailmine/analytic.hpp>
#include <trailmine/rng.hpp>
#include <trailmine/simulator.hpp>

#include "parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace trailmine {

namespace {

std::string fmt17(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::istringstream in{s};
    std::string token;
    while (std::getline(in, token, sep)) out.push_back(trim(token));
    return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& what)
{
    T value{};
    const char* end{text.data() + text.size()};
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error{ErrorCode::ParseError, "bad " + what + ": '" + text + "'"};
    }
    return value;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out{path};
    if (!out) throw Error{ErrorCode::IoError, "cannot write " + path.string()};
    return out;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in{path};
    if (!in) throw Error{ErrorCode::IoError, "cannot read " + path.string()};
    return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) throw Error{ErrorCode::IoError, "write failed for " + path.string()};
}

bool needs_selfish_closed_form(const GridSpec& grid, const std::vector<StrategyId>& strategies)
{
    return std::ranges::find(strategies, StrategyId::selfish()) != strategies.end() &&
           grid.backend == Backend::Analytic;
}

double analytic_value(const StrategyId& s, const NetworkParams& params, SweepMetric metric)
{
    if (metric == SweepMetric::ApparentHashrate) return analytic_apparent_hashrate(s, params);
    return analytic_metrics(s, params).revenue_ratio * params.reward() / params.tau0();
}

double simulated_value(const StrategyId& s, const NetworkParams& params, const GridSpec& grid, std::uint64_t seed)
{
    // Cells already run in parallel, so each simulation stays on one thread.
    const EstimateSummary est{estimate_metrics(s, params, grid.n_cycles, seed, 1)};
    if (grid.metric == SweepMetric::ApparentHashrate) return est.apparent_hashrate.mean;
    return est.revenue_ratio.mean * params.reward() / params.tau0();
}

} // namespace

std::string to_string(Backend backend)
{
    return backend == Backend::Analytic ? "analytic" : "simulation";
}

std::string to_string(SweepMetric metric)
{
    return metric == SweepMetric::ApparentHashrate ? "apparent_hashrate" : "revenue_ratio";
}

void validate_grid(const GridSpec& grid)
{
    if (grid.q_steps < 1 || grid.gamma_steps < 1) {
        throw Error{ErrorCode::InvalidArgument, "grid steps must be >= 1"};
    }
    if (grid.q_min > grid.q_max || grid.gamma_min > grid.gamma_max) {
        throw Error{ErrorCode::InvalidArgument, "grid range has min > max"};
    }
    // Corners carry the full domain check.
    validate_params(grid.q_min, grid.gamma_min, grid.tau0, grid.reward);
    validate_params(grid.q_max, grid.gamma_max, grid.tau0, grid.reward);
    for (int a : grid.a_values) {
        if (a < 1) throw Error{ErrorCode::InvalidArgument, "A values must be >= 1"};
    }
    if (grid.backend == Backend::Simulation && grid.n_cycles == 0) {
        throw Error{ErrorCode::InvalidArgument, "simulation backend needs cycles >= 1"};
    }
    if (grid_strategies(grid).empty()) {
        throw Error{ErrorCode::InvalidArgument, "grid has no strategies"};
    }
}

std::vector<double> grid_axis(double min, double max, int steps)
{
    if (steps < 1) throw Error{ErrorCode::InvalidArgument, "grid steps must be >= 1"};
    std::vector<double> axis(static_cast<std::size_t>(steps));
    if (steps == 1) {
        axis[0] = min;
        return axis;
    }
    const double step{(max - min) / (steps - 1)};
    for (int k = 0; k < steps; ++k) axis[k] = min + k * step;
    axis.back() = max;
    return axis;
}

std::vector<StrategyId> grid_strategies(const GridSpec& grid)
{
    std::vector<StrategyId> out{grid.strategies};
    for (int a : grid.a_values) out.push_back(StrategyId::trail_stubborn(a));
    std::ranges::sort(out);
    const auto [first, last] = std::ranges::unique(out);
    out.erase(first, last);
    return out;
}

void resolve_best(DominanceCell& cell)
{
    if (cell.values.empty()) {
        throw Error{ErrorCode::InvalidArgument, "cell has no values"};
    }
    // std::map iterates in declared strategy order; ties keep the first.
    auto best = cell.values.begin();
    for (auto it = cell.values.begin(); it != cell.values.end(); ++it) {
        if (it->second > best->second && !same_value(it->second, best->second)) best = it;
    }
    double runner_up{-INFINITY};
    for (auto it = cell.values.begin(); it != cell.values.end(); ++it) {
        if (it != best) runner_up = std::max(runner_up, it->second);
    }
    cell.best = best->first;
    cell.margin = cell.values.size() > 1 && !same_value(best->second, runner_up) ? best->second - runner_up : 0.0;
}

std::vector<DominanceCell> sweep(const GridSpec& grid)
{
    validate_grid(grid);
    const auto strategies = grid_strategies(grid);
    const auto qs = grid_axis(grid.q_min, grid.q_max, grid.q_steps);
    const auto gammas = grid_axis(grid.gamma_min, grid.gamma_max, grid.gamma_steps);

    if (needs_selfish_closed_form(grid, strategies) &&
        (grid.metric == SweepMetric::RevenueRatio || grid.gamma_max > 0.0)) {
        throw Error{ErrorCode::BackendMismatch,
                    "selfish mining has an analytic value only for the apparent hashrate at gamma = 0; "
                    "use the simulation backend"};
    }

    std::vector<DominanceCell> cells(qs.size() * gammas.size());
    detail::parallel_for(cells.size(), grid.threads, [&](std::size_t index) {
        DominanceCell& cell{cells[index]};
        cell.q = qs[index / gammas.size()];
        cell.gamma = gammas[index % gammas.size()];
        const NetworkParams params{validate_params(cell.q, cell.gamma, grid.tau0, grid.reward)};
        for (std::size_t j = 0; j < strategies.size(); ++j) {
            const StrategyId& s{strategies[j]};
            cell.values[s] = grid.backend == Backend::Analytic
                                 ? analytic_value(s, params, grid.metric)
                                 : simulated_value(s, params, grid, seed_mix(seed_mix(grid.seed, index), j));
        }
        resolve_best(cell);
    });
    return cells;
}

std::vector<TrailComparisonCell> trail_comparison_map(const GridSpec& grid)
{
    validate_grid(grid);
    std::vector<int> trailing;
    for (int a : grid.a_values) {
        if (a >= 2) trailing.push_back(a);
    }
    std::ranges::sort(trailing);
    if (trailing.empty()) {
        throw Error{ErrorCode::InvalidArgument, "comparison map needs at least one A >= 2"};
    }
    const auto qs = grid_axis(grid.q_min, grid.q_max, grid.q_steps);
    const auto gammas = grid_axis(grid.gamma_min, grid.gamma_max, grid.gamma_steps);

    std::vector<TrailComparisonCell> cells(qs.size() * gammas.size());
    detail::parallel_for(cells.size(), grid.threads, [&](std::size_t index) {
        TrailComparisonCell& cell{cells[index]};
        cell.q = qs[index / gammas.size()];
        cell.gamma = gammas[index % gammas.size()];
        const NetworkParams params{validate_params(cell.q, cell.gamma, grid.tau0, grid.reward)};
        cell.lsm = apparent_hashrate_tsm(params, 1);
        cell.best_a = trailing.front();
        cell.best_trailing = apparent_hashrate_tsm(params, cell.best_a);
        for (int a : trailing) {
            const double value{apparent_hashrate_tsm(params, a)};
            if (value > cell.best_trailing && !same_value(value, cell.best_trailing)) {
                cell.best_trailing = value;
                cell.best_a = a;
            }
        }
        cell.difference = same_value(cell.best_trailing, cell.lsm) ? 0.0 : cell.best_trailing - cell.lsm;
        cell.sign = (cell.difference > 0.0) - (cell.difference < 0.0);
    });
    return cells;
}

std::filesystem::path best_table_path(const std::filesystem::path& path)
{
    std::filesystem::path out{path};
    out += ".best.csv";
    return out;
}

void emit_csv(const std::vector<DominanceCell>& cells, const std::filesystem::path& path)
{
    auto out = open_output(path);
    out << "q,gamma,strategy,value\n";
    for (const auto& cell : cells) {
        for (const auto& [strategy, value] : cell.values) {
            out << fmt17(cell.q) << ',' << fmt17(cell.gamma) << ',' << to_string(strategy) << ',' << fmt17(value)
                << '\n';
        }
    }
    finish(out, path);

    const auto best_path = best_table_path(path);
    auto best = open_output(best_path);
    best << "q,gamma,best,margin\n";
    for (const auto& cell : cells) {
        best << fmt17(cell.q) << ',' << fmt17(cell.gamma) << ',' << to_string(cell.best) << ','
             << fmt17(cell.margin) << '\n';
    }
    finish(best, best_path);
}

void emit_trail_csv(const std::vector<TrailComparisonCell>& cells, const std::filesystem::path& path)
{
    auto out = open_output(path);
    out << "q,gamma,lsm,best_a,best_trailing,difference,sign\n";
    for (const auto& c : cells) {
        out << fmt17(c.q) << ',' << fmt17(c.gamma) << ',' << fmt17(c.lsm) << ',' << c.best_a << ','
            << fmt17(c.best_trailing) << ',' << fmt17(c.difference) << ',' << c.sign << '\n';
    }
    finish(out, path);
}

void emit_json(const std::vector<DominanceCell>& cells, const std::filesystem::path& path)
{
    nlohmann::ordered_json doc;
    doc["legend"] = {
        {"metric", "value per strategy; best is the argmax with ties to the earliest in declared order"},
        {"efsm", "out of scope"},
    };
    doc["cells"] = nlohmann::ordered_json::array();
    for (const auto& cell : cells) {
        nlohmann::ordered_json values = nlohmann::ordered_json::array();
        for (const auto& [strategy, value] : cell.values) {
            values.push_back({{"strategy", to_string(strategy)}, {"value", value}});
        }
        doc["cells"].push_back({
            {"q", cell.q},
            {"gamma", cell.gamma},
            {"values", values},
            {"best", to_string(cell.best)},
            {"margin", cell.margin},
        });
    }
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
    finish(out, path);
}

std::vector<DominanceCell> parse_csv(const std::filesystem::path& path)
{
    std::vector<DominanceCell> cells;
    {
        auto in = open_input(path);
        std::string line;
        if (!std::getline(in, line) || trim(line) != "q,gamma,strategy,value") {
            throw Error{ErrorCode::ParseError, path.string() + ": missing header"};
        }
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            const auto fields = split(line, ',');
            if (fields.size() != 4) throw Error{ErrorCode::ParseError, "bad row '" + line + "'"};
            const double q{parse_number<double>(fields[0], "q")};
            const double gamma{parse_number<double>(fields[1], "gamma")};
            if (cells.empty() || cells.back().q != q || cells.back().gamma != gamma) {
                DominanceCell cell;
                cell.q = q;
                cell.gamma = gamma;
                cells.push_back(std::move(cell));
            }
            cells.back().values[parse_strategy(fields[2])] = parse_number<double>(fields[3], "value");
        }
    }

    auto in = open_input(best_table_path(path));
    std::string line;
    if (!std::getline(in, line) || trim(line) != "q,gamma,best,margin") {
        throw Error{ErrorCode::ParseError, best_table_path(path).string() + ": missing header"};
    }
    std::size_t index{0};
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 4 || index >= cells.size()) {
            throw Error{ErrorCode::ParseError, "best table does not match value table"};
        }
        DominanceCell& cell{cells[index++]};
        if (parse_number<double>(fields[0], "q") != cell.q || parse_number<double>(fields[1], "gamma") != cell.gamma) {
            throw Error{ErrorCode::ParseError, "best table rows out of order"};
        }
        cell.best = parse_strategy(fields[2]);
        cell.margin = parse_number<double>(fields[3], "margin");
    }
    if (index != cells.size()) {
        throw Error{ErrorCode::ParseError, "best table does not match value table"};
    }
    return cells;
}

std::vector<DominanceCell> parse_json(const std::filesystem::path& path)
{
    auto in = open_input(path);
    std::vector<DominanceCell> cells;
    try {
        const auto doc = nlohmann::json::parse(in);
        for (const auto& c : doc.at("cells")) {
            DominanceCell cell;
            cell.q = c.at("q").get<double>();
            cell.gamma = c.at("gamma").get<double>();
            for (const auto& v : c.at("values")) {
                cell.values[parse_strategy(v.at("strategy").get<std::string>())] = v.at("value").get<double>();
            }
            cell.best = parse_strategy(c.at("best").get<std::string>());
            cell.margin = c.at("margin").get<double>();
            cells.push_back(std::move(cell));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error{ErrorCode::ParseError, path.string() + ": " + e.what()};
    }
    return cells;
}

void apply_grid_setting(GridSpec& grid, const std::string& key_in, const std::string& value_in)
{
    const std::string key{trim(key_in)};
    const std::string value{trim(value_in)};
    if (key == "q_min") {
        grid.q_min = parse_number<double>(value, key);
    } else if (key == "q_max") {
        grid.q_max = parse_number<double>(value, key);
    } else if (key == "q_steps") {
        grid.q_steps = parse_number<int>(value, key);
    } else if (key == "gamma_min") {
        grid.gamma_min = parse_number<double>(value, key);
    } else if (key == "gamma_max") {
        grid.gamma_max = parse_number<double>(value, key);
    } else if (key == "gamma_steps") {
        grid.gamma_steps = parse_number<int>(value, key);
    } else if (key == "a_values") {
        grid.a_values.clear();
        if (!value.empty()) {
            for (const auto& a : split(value, ',')) grid.a_values.push_back(parse_number<int>(a, key));
        }
    } else if (key == "strategies") {
        grid.strategies.clear();
        if (!value.empty()) {
            for (const auto& s : split(value, ',')) grid.strategies.push_back(parse_strategy(s));
        }
    } else if (key == "backend") {
        if (value == "analytic") {
            grid.backend = Backend::Analytic;
        } else if (value == "simulation") {
            grid.backend = Backend::Simulation;
        } else {
            throw Error{ErrorCode::ParseError, "backend must be analytic or simulation, got '" + value + "'"};
        }
    } else if (key == "metric") {
        if (value == "apparent_hashrate") {
            grid.metric = SweepMetric::ApparentHashrate;
        } else if (value == "revenue_ratio") {
            grid.metric = SweepMetric::RevenueRatio;
        } else {
            throw Error{ErrorCode::ParseError, "metric must be apparent_hashrate or revenue_ratio"};
        }
    } else if (key == "cycles") {
        grid.n_cycles = parse_number<std::uint64_t>(value, key);
    } else if (key == "seed") {
        grid.seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "threads") {
        grid.threads = parse_number<unsigned>(value, key);
    } else if (key == "tau0") {
        grid.tau0 = parse_number<double>(value, key);
    } else if (key == "reward") {
        grid.reward = parse_number<double>(value, key);
    } else {
        throw Error{ErrorCode::ParseError, "unknown grid key '" + key + "'"};
    }
}

GridSpec read_grid_config(const std::filesystem::path& path)
{
    auto in = open_input(path);
    GridSpec grid;
    std::string line;
    int line_no{0};
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error{ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected key = value"};
        }
        apply_grid_setting(grid, line.substr(0, eq), line.substr(eq + 1));
    }
    return grid;
}

} // namespace trailmine
