#include <trailmine/params.hpp>

#include <array>
#include <charconv>
#include <cmath>

namespace trailmine {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::QOutOfRange: return "QOutOfRange";
    case ErrorCode::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateConditioning: return "DegenerateConditioning";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::EmptyPattern: return "EmptyPattern";
    case ErrorCode::BackendMismatch: return "BackendMismatch";
    case ErrorCode::StepCapExceeded: return "StepCapExceeded";
    case ErrorCode::EventCapExceeded: return "EventCapExceeded";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

NetworkParams validate_params(double q, double gamma, double tau0, double reward)
{
    // Negated comparisons so that NaN is rejected too.
    if (!(q >= 0.0 && q < 0.5)) {
        throw Error{ErrorCode::QOutOfRange, "q must lie in [0, 1/2), got " + std::to_string(q)};
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw Error{ErrorCode::GammaOutOfRange, "gamma must lie in [0, 1], got " + std::to_string(gamma)};
    }
    if (!(tau0 > 0.0) || !std::isfinite(tau0)) {
        throw Error{ErrorCode::NonPositiveScale, "tau0 must be positive, got " + std::to_string(tau0)};
    }
    if (!(reward > 0.0) || !std::isfinite(reward)) {
        throw Error{ErrorCode::NonPositiveScale, "block reward must be positive, got " + std::to_string(reward)};
    }
    return NetworkParams{q, gamma, tau0, reward};
}

StrategyId StrategyId::trail_stubborn(int a)
{
    if (a < 1) {
        throw Error{ErrorCode::InvalidArgument, "trail threshold A must be >= 1, got " + std::to_string(a)};
    }
    return StrategyId{Kind::TrailStubborn, a};
}

std::string to_string(const StrategyId& id)
{
    switch (id.kind()) {
    case StrategyId::Kind::Honest: return "honest";
    case StrategyId::Kind::SelfishMining: return "sm";
    case StrategyId::Kind::TrailStubborn:
        return id.trail() == 1 ? std::string{"lsm"} : "tsm:" + std::to_string(id.trail());
    }
    return "unknown";
}

StrategyId parse_strategy(const std::string& text)
{
    if (text == "honest" || text == "hm") return StrategyId::honest();
    if (text == "sm" || text == "selfish") return StrategyId::selfish();
    if (text == "lsm") return StrategyId::lead_stubborn();
    std::string_view digits;
    if (text.starts_with("tsm:")) {
        digits = std::string_view{text}.substr(4);
    } else if (text.starts_with("tsm") && text.size() > 3) {
        digits = std::string_view{text}.substr(3);
    } else {
        throw Error{ErrorCode::ParseError, "unknown strategy '" + text + "'"};
    }
    int a{0};
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), a);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw Error{ErrorCode::ParseError, "bad trail threshold in strategy '" + text + "'"};
    }
    if (a < 1) {
        throw Error{ErrorCode::ParseError, "trail threshold must be >= 1 in '" + text + "'"};
    }
    return StrategyId::trail_stubborn(a);
}

double bracket(int n, double lambda)
{
    double sum{0.0};
    double term{1.0};
    for (int k = 0; k < n; ++k) {
        sum += term;
        term *= lambda;
    }
    return sum;
}

std::vector<std::int64_t> divide_by_one_minus_x_cubed(std::span<const std::int64_t> numerator)
{
    std::vector<std::int64_t> quotient(numerator.begin(), numerator.end());
    for (int pass = 0; pass < 3; ++pass) {
        // f = (1 - X) g + r: g_k is the k-th prefix sum of f, r = f(1).
        std::int64_t running{0};
        for (auto& c : quotient) {
            if (__builtin_add_overflow(running, c, &running)) {
                throw Error{ErrorCode::InternalInconsistency, "coefficient overflow in (1-X) division"};
            }
            c = running;
        }
        if (quotient.empty()) continue;
        if (quotient.back() != 0) {
            throw Error{ErrorCode::InternalInconsistency, "nonzero remainder dividing by (1-X)"};
        }
        quotient.pop_back();
    }
    while (!quotient.empty() && quotient.back() == 0) quotient.pop_back();
    return quotient;
}

std::vector<std::int64_t> pa_coefficients(int a)
{
    if (a < 1) {
        throw Error{ErrorCode::InvalidArgument, "P_A needs A >= 1"};
    }
    std::vector<std::int64_t> numerator(2 * static_cast<std::size_t>(a) + 1, 0);
    numerator[0] += 1;
    numerator[a - 1] -= a;
    numerator[a + 1] += a;
    numerator[2 * a] -= 1;
    return divide_by_one_minus_x_cubed(numerator);
}

double poly_eval(std::span<const std::int64_t> coeffs, double x)
{
    double acc{0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * x + static_cast<double>(*it);
    }
    return acc;
}

double pa_eval(int a, double lambda)
{
    const auto coeffs = pa_coefficients(a);
    return poly_eval(coeffs, lambda);
}

namespace {

constexpr int EXACT_CATALAN_LIMIT{30};

constexpr std::array<std::uint64_t, EXACT_CATALAN_LIMIT + 1> exact_catalans()
{
    std::array<std::uint64_t, EXACT_CATALAN_LIMIT + 1> table{};
    table[0] = 1;
    for (std::uint64_t n = 0; n < EXACT_CATALAN_LIMIT; ++n) {
        // C_(n+1) = C_n * 2(2n+1) / (n+2); the product stays below 2^64 for n < 30.
        table[n + 1] = table[n] * 2 * (2 * n + 1) / (n + 2);
    }
    return table;
}

constexpr auto CATALANS{exact_catalans()};

double log_catalan(int n)
{
    return std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0) - std::log(n + 1.0);
}

} // namespace

double catalan(int n)
{
    if (n < 0) return 0.0;
    if (n <= EXACT_CATALAN_LIMIT) return static_cast<double>(CATALANS[n]);
    return std::exp(log_catalan(n));
}

double cycle_length_pmf(int n, const NetworkParams& params)
{
    if (n < 0) return 0.0;
    if (n == 0) return params.p();
    const double pq{params.p() * params.q()};
    if (pq == 0.0) return 0.0;
    if (n - 1 <= EXACT_CATALAN_LIMIT) {
        return catalan(n - 1) * std::pow(pq, n);
    }
    return std::exp(log_catalan(n - 1) + n * std::log(pq));
}

} // namespace trailmine
