#include <trailmine/hiker.hpp>

#include <trailmine/error.hpp>
#include <trailmine/params.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace trailmine {

namespace {

constexpr int ORACLE_MAX_UPPER{10'000};
constexpr std::uint64_t PATH_STEP_CAP{1'000'000'000};

// Prefix sums B(k) = [0] + [1] + ... + [k] for k in 0..n.
std::vector<double> bracket_prefix_sums(int n, double lambda)
{
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    double bracket_k{0.0}; // [k]
    double power{1.0};     // lambda^k
    double total{0.0};
    for (int k = 0; k <= n; ++k) {
        total += bracket_k;
        prefix[k] = total;
        bracket_k += power;
        power *= lambda;
    }
    return prefix;
}

// E[nu | exit at 0] from start m on [0, M] for a walk with right-step probability p.
double stern_value(int m, int upper, double lambda, double p)
{
    const int gap{upper - m};
    std::vector<std::int64_t> numerator(static_cast<std::size_t>(2 * upper - m) + 1, 0);
    const std::int64_t outer{2 * upper - m};
    numerator[0] += m;
    numerator[gap] -= outer;
    numerator[upper] += outer;
    numerator[2 * upper - m] -= m;
    const auto quotient = divide_by_one_minus_x_cubed(numerator);
    return poly_eval(quotient, lambda) / (p * bracket(gap, lambda) * bracket(upper, lambda));
}

void require_interior_start(const HikerProblem& problem)
{
    if (problem.start() == 0 || problem.start() == problem.upper()) {
        throw Error{ErrorCode::DegenerateConditioning,
                    "conditioning on the exit side needs 1 <= m <= M-1, got m=" + std::to_string(problem.start())};
    }
}

/*
 * Solves x_i = rhs_i + down_i x_(i-1) + up_i x_(i+1) for the interior
 * states i = 1..M-1 with fixed boundary values x_0 and x_M. Vectors are
 * indexed by state (entries 0 and M are ignored).
 */
std::vector<double> solve_chain(const std::vector<double>& up, const std::vector<double>& down,
                                const std::vector<double>& rhs, double x_low, double x_high)
{
    const std::size_t upper{up.size() - 1};
    std::vector<double> x(upper + 1, 0.0);
    x[0] = x_low;
    x[upper] = x_high;
    if (upper < 2) return x;

    // Forward sweep of the Thomas algorithm on diag 1, sub -down, super -up.
    std::vector<double> c_prime(upper, 0.0);
    std::vector<double> d_prime(upper, 0.0);
    for (std::size_t i = 1; i < upper; ++i) {
        double d{rhs[i]};
        if (i == 1) d += down[i] * x_low;
        if (i == upper - 1) d += up[i] * x_high;
        const double sub{i == 1 ? 0.0 : -down[i]};
        const double super{i == upper - 1 ? 0.0 : -up[i]};
        const double pivot{1.0 - sub * (i == 1 ? 0.0 : c_prime[i - 1])};
        if (!(std::abs(pivot) > 1e-300)) {
            throw Error{ErrorCode::SingularSystem, "zero pivot at state " + std::to_string(i)};
        }
        c_prime[i] = super / pivot;
        d_prime[i] = (d - sub * (i == 1 ? 0.0 : d_prime[i - 1])) / pivot;
    }
    x[upper - 1] = d_prime[upper - 1];
    for (std::size_t i = upper - 1; i-- > 1;) {
        x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    }
    return x;
}

} // namespace

HikerProblem::HikerProblem(int start, int upper, double p_right)
    : m_start{start}, m_upper{upper}, m_p{p_right}
{
    if (upper < 2) {
        throw Error{ErrorCode::InvalidArgument, "hiker needs M >= 2, got " + std::to_string(upper)};
    }
    if (start < 0 || start > upper) {
        throw Error{ErrorCode::InvalidArgument, "hiker start must lie in [0, M], got " + std::to_string(start)};
    }
    if (!(p_right > 0.5 && p_right < 1.0)) {
        throw Error{ErrorCode::InvalidArgument, "hiker needs 1/2 < p < 1, got " + std::to_string(p_right)};
    }
}

double exit_prob_low(const HikerProblem& problem)
{
    const int m{problem.start()};
    const int upper{problem.upper()};
    const double lambda{problem.lambda()};
    return std::pow(lambda, m) * bracket(upper - m, lambda) / bracket(upper, lambda);
}

double expected_exit_time(const HikerProblem& problem)
{
    // M [m] - m [M] = (1 - lambda) sum_(i<m) sum_(m<=j<M) lambda^i [j - i], a sum of positive terms.
    const int m{problem.start()};
    const int upper{problem.upper()};
    const double lambda{problem.lambda()};
    const auto prefix = bracket_prefix_sums(upper, lambda);
    double total{0.0};
    double power{1.0};
    for (int i = 0; i < m; ++i) {
        total += power * (prefix[upper - 1 - i] - prefix[m - 1 - i]);
        power *= lambda;
    }
    return total / (problem.p_right() * bracket(upper, lambda));
}

double stern_conditional_time(const HikerProblem& problem)
{
    require_interior_start(problem);
    return stern_value(problem.start(), problem.upper(), problem.lambda(), problem.p_right());
}

double expected_left_steps_given_ruin(const HikerProblem& problem)
{
    return 0.5 * problem.start() + 0.5 * stern_conditional_time(problem);
}

double expected_right_steps_given_win(const HikerProblem& problem)
{
    require_interior_start(problem);
    const int mirrored{problem.upper() - problem.start()};
    const double time_given_high{stern_value(mirrored, problem.upper(), problem.lambda(), problem.p_right())};
    return 0.5 * mirrored + 0.5 * time_given_high;
}

HikerClosedForms closed_forms(const HikerProblem& problem)
{
    return HikerClosedForms{
        .exit_prob_low = exit_prob_low(problem),
        .e_exit_time = expected_exit_time(problem),
        .e_exit_time_given_low = stern_conditional_time(problem),
        .e_left_given_low = expected_left_steps_given_ruin(problem),
        .e_right_given_high = expected_right_steps_given_win(problem),
    };
}

std::pair<double, double> twisted_transitions(int i, const HikerProblem& problem)
{
    const int upper{problem.upper()};
    if (i < 1 || i > upper - 1) {
        throw Error{ErrorCode::InvalidArgument, "twisted kernel is defined on interior states only"};
    }
    const double lambda{problem.lambda()};
    const double p{problem.p_right()};
    // h(j)/h(i) with h(j) = lambda^j - lambda^M, rewritten with brackets.
    const double base{bracket(upper - i, lambda)};
    const double up{p * lambda * bracket(upper - i - 1, lambda) / base};
    const double down{p * bracket(upper - i + 1, lambda) / base};
    return {up, down};
}

double u_sequence(int n, double lambda)
{
    const double inv_p{1.0 + lambda};
    double u{1.0};
    for (int k = 1; k <= n; ++k) {
        const double denom{bracket(k + 2, lambda)};
        u = lambda * bracket(k, lambda) / denom * u + inv_p * bracket(k + 1, lambda) / denom;
    }
    return u;
}

double u_closed(int n, double lambda)
{
    return stern_value(1, n + 2, lambda, 1.0 / (1.0 + lambda));
}

HikerOracle absorption_oracle(const HikerProblem& problem)
{
    const int upper{problem.upper()};
    if (upper > ORACLE_MAX_UPPER) {
        throw Error{ErrorCode::InvalidArgument, "oracle supports M <= 10000"};
    }
    const int m{problem.start()};
    const double p{problem.p_right()};
    const double q{problem.q_left()};
    const std::size_t size{static_cast<std::size_t>(upper) + 1};

    const std::vector<double> up(size, p);
    const std::vector<double> down(size, q);
    const std::vector<double> zeros(size, 0.0);
    const std::vector<double> ones(size, 1.0);

    const auto prob_low = solve_chain(up, down, zeros, 1.0, 0.0);
    const auto prob_high = solve_chain(up, down, zeros, 0.0, 1.0);
    const auto exit_time = solve_chain(up, down, ones, 0.0, 0.0);

    HikerOracle result{
        .exit_prob_low = prob_low[m],
        .e_exit_time = exit_time[m],
        .e_exit_time_given_low = std::nullopt,
        .e_exit_time_given_high = std::nullopt,
        .e_left_given_low = std::nullopt,
        .e_right_given_high = std::nullopt,
    };

    // Chains conditioned on the exit side: weight each step by the ratio of
    // the solved exit probabilities at the destination and the origin.
    const auto twist = [&](const std::vector<double>& h, std::vector<double>& t_up, std::vector<double>& t_down) {
        t_up.assign(size, 0.0);
        t_down.assign(size, 0.0);
        for (int i = 1; i < upper; ++i) {
            t_up[i] = p * h[i + 1] / h[i];
            t_down[i] = q * h[i - 1] / h[i];
        }
    };

    if (m < upper) {
        std::vector<double> t_up, t_down;
        twist(prob_low, t_up, t_down);
        const auto time = solve_chain(t_up, t_down, ones, 0.0, 0.0);
        const auto left = solve_chain(t_up, t_down, t_down, 0.0, 0.0);
        result.e_exit_time_given_low = time[m];
        result.e_left_given_low = left[m];
    }
    if (m > 0) {
        std::vector<double> t_up, t_down;
        twist(prob_high, t_up, t_down);
        const auto time = solve_chain(t_up, t_down, ones, 0.0, 0.0);
        const auto right = solve_chain(t_up, t_down, t_up, 0.0, 0.0);
        result.e_exit_time_given_high = time[m];
        result.e_right_given_high = right[m];
    }
    return result;
}

HikerPath sample_hiker_path(const HikerProblem& problem, RandomStream& stream)
{
    int position{problem.start()};
    const int upper{problem.upper()};
    const double p{problem.p_right()};
    HikerPath path{.side = ExitSide::Low, .total_steps = 0, .left_steps = 0, .right_steps = 0};
    while (position > 0 && position < upper) {
        if (path.total_steps == PATH_STEP_CAP) {
            throw Error{ErrorCode::StepCapExceeded, "hiker path exceeded 10^9 steps"};
        }
        if (stream.uniform() < p) {
            ++position;
            ++path.right_steps;
        } else {
            --position;
            ++path.left_steps;
        }
        ++path.total_steps;
    }
    path.side = position == 0 ? ExitSide::Low : ExitSide::High;
    return path;
}

} // namespace trailmine
