#ifndef TRAILMINE_PARAMS_HPP
#define TRAILMINE_PARAMS_HPP

#include <trailmine/error.hpp>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trailmine {

/**
 * Network model shared by every computation: attacker hashrate share q,
 * connectivity gamma (share of honest hashpower that mines on the
 * attacker's branch during a tie), mean network block interval tau0 and
 * block reward b. Only constructible through validate_params().
 */
class NetworkParams
{
public:
    double q() const noexcept { return m_q; }
    double gamma() const noexcept { return m_gamma; }
    double tau0() const noexcept { return m_tau0; }
    double reward() const noexcept { return m_reward; }
    //! Honest hashrate share.
    double p() const noexcept { return 1.0 - m_q; }
    //! q / p, always in [0, 1).
    double lambda() const noexcept { return m_q / (1.0 - m_q); }

    friend NetworkParams validate_params(double q, double gamma, double tau0, double reward);

private:
    NetworkParams(double q, double gamma, double tau0, double reward)
        : m_q{q}, m_gamma{gamma}, m_tau0{tau0}, m_reward{reward} {}

    double m_q;
    double m_gamma;
    double m_tau0;
    double m_reward;
};

/** Throws Error with QOutOfRange, GammaOutOfRange or NonPositiveScale. */
NetworkParams validate_params(double q, double gamma, double tau0 = 1.0, double reward = 1.0);

/**
 * Mining strategy identifier. Declared order (used for tie-breaking in
 * dominance maps) is Honest < SelfishMining < TrailStubborn by ascending A.
 * Lead-stubborn mining is TrailStubborn with A = 1.
 */
class StrategyId
{
public:
    enum class Kind : std::uint8_t { Honest, SelfishMining, TrailStubborn };

    static StrategyId honest() { return StrategyId{Kind::Honest, 0}; }
    static StrategyId selfish() { return StrategyId{Kind::SelfishMining, 0}; }
    static StrategyId lead_stubborn() { return StrategyId{Kind::TrailStubborn, 1}; }
    //! Throws InvalidArgument if a < 1.
    static StrategyId trail_stubborn(int a);

    Kind kind() const noexcept { return m_kind; }
    //! Trail threshold A; 0 for non-stubborn strategies.
    int trail() const noexcept { return m_trail; }
    bool is_trail_stubborn() const noexcept { return m_kind == Kind::TrailStubborn; }

    friend bool operator==(const StrategyId&, const StrategyId&) = default;
    friend auto operator<=>(const StrategyId&, const StrategyId&) = default;

private:
    StrategyId(Kind kind, int trail) : m_kind{kind}, m_trail{trail} {}

    Kind m_kind;
    int m_trail;
};

//! "honest", "sm", "lsm" (A = 1) or "tsm:A".
std::string to_string(const StrategyId& id);
//! Inverse of to_string(); also accepts "tsm" with a separately given A and "tsmA". Throws ParseError.
StrategyId parse_strategy(const std::string& text);

/** [n] = 1 + lambda + ... + lambda^(n-1), summed term by term. */
double bracket(int n, double lambda);

/**
 * Exact quotient of an integer polynomial (coefficients in ascending
 * degree) by (1 - X)^3. Throws InternalInconsistency when the division
 * leaves a remainder. Trailing zero coefficients are trimmed, so the zero
 * polynomial is returned as an empty vector.
 */
std::vector<std::int64_t> divide_by_one_minus_x_cubed(std::span<const std::int64_t> numerator);

/** Coefficients of P_A(X) = (1 - A X^(A-1) + A X^(A+1) - X^(2A)) / (1 - X)^3. */
std::vector<std::int64_t> pa_coefficients(int a);

//! Horner evaluation of an ascending coefficient list.
double poly_eval(std::span<const std::int64_t> coeffs, double x);

//! P_A(lambda) through its integer coefficients.
double pa_eval(int a, double lambda);

//! n-th Catalan number as a double; exact below n = 31.
double catalan(int n);

/** P[N'(tau) = n]: p for n = 0, C_(n-1) (pq)^n otherwise. */
double cycle_length_pmf(int n, const NetworkParams& params);

} // namespace trailmine

#endif // TRAILMINE_PARAMS_HPP
