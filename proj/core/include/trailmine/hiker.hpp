#ifndef TRAILMINE_HIKER_HPP
#define TRAILMINE_HIKER_HPP

#include <trailmine/error.hpp>
#include <trailmine/rng.hpp>

#include <cstdint>
#include <optional>
#include <utility>

namespace trailmine {

/**
 * Nearest-neighbour walk on [0, M] absorbed at both ends, started at m,
 * stepping +1 with probability p_right > 1/2. In the trail phase of a
 * stubborn attack a +1 step is an honest block and a -1 step an attacker
 * block.
 */
class HikerProblem
{
public:
    //! Throws InvalidArgument unless 2 <= M, 0 <= m <= M and 1/2 < p_right < 1.
    HikerProblem(int start, int upper, double p_right);

    int start() const noexcept { return m_start; }
    int upper() const noexcept { return m_upper; }
    double p_right() const noexcept { return m_p; }
    double q_left() const noexcept { return 1.0 - m_p; }
    double lambda() const noexcept { return (1.0 - m_p) / m_p; }

private:
    int m_start;
    int m_upper;
    double m_p;
};

struct HikerClosedForms {
    double exit_prob_low;
    double e_exit_time;
    double e_exit_time_given_low;
    double e_left_given_low;
    double e_right_given_high;
};

//! P[exit at 0] = lambda^m [M - m] / [M].
double exit_prob_low(const HikerProblem& problem);

//! E[nu_m] in steps.
double expected_exit_time(const HikerProblem& problem);

/**
 * E[nu_m | exit at 0]. Evaluated as G(lambda) / (p [M-m] [M]) where
 * G = (m - (2M-m) X^(M-m) + (2M-m) X^M - m X^(2M-m)) / (1-X)^3 is formed
 * with exact integer division. Throws DegenerateConditioning for m = 0 or m = M.
 */
double stern_conditional_time(const HikerProblem& problem);

//! E[left steps | exit at 0] = m/2 + E[nu | exit at 0]/2.
double expected_left_steps_given_ruin(const HikerProblem& problem);

/**
 * E[right steps | exit at M] = (M-m)/2 + E[nu | exit at M]/2. Conditioned on
 * its exit side, the walk's law depends on p only through pq, so the walk
 * from m conditioned to exit at M is the mirror image of the walk from M-m
 * conditioned to exit at 0; E[nu | exit at M] is the conditioned exit time from M-m.
 */
double expected_right_steps_given_win(const HikerProblem& problem);

//! All closed forms at once; conditional fields require 1 <= m <= M-1.
HikerClosedForms closed_forms(const HikerProblem& problem);

/**
 * Transition probabilities of the walk conditioned to exit at 0 (the
 * h-transform with h(i) = lambda^i - lambda^M), from interior state i.
 * Returns {up, down}. Throws InvalidArgument unless 1 <= i <= M-1.
 */
std::pair<double, double> twisted_transitions(int i, const HikerProblem& problem);

//! u_0 = 1, u_n = lambda [n]/[n+2] u_(n-1) + (1/p) [n+1]/[n+2], with p = 1/(1+lambda).
double u_sequence(int n, double lambda);

//! Closed form of u_n; equals stern_conditional_time for m = 1, M = n + 2.
double u_closed(int n, double lambda);

/**
 * Brute-force reference values obtained by solving the tridiagonal
 * absorption equations directly (Thomas algorithm), including the twisted
 * chains built from the solved absorption probabilities. Conditional
 * fields are empty when the conditioning event has probability zero.
 */
struct HikerOracle {
    double exit_prob_low;
    double e_exit_time;
    std::optional<double> e_exit_time_given_low;
    std::optional<double> e_exit_time_given_high;
    std::optional<double> e_left_given_low;
    std::optional<double> e_right_given_high;
};

//! Throws InvalidArgument for M > 10000, SingularSystem if a pivot vanishes.
HikerOracle absorption_oracle(const HikerProblem& problem);

enum class ExitSide { Low, High };

struct HikerPath {
    ExitSide side;
    std::uint64_t total_steps;
    std::uint64_t left_steps;
    std::uint64_t right_steps;
};

//! One walk to absorption. Throws StepCapExceeded after 10^9 steps.
HikerPath sample_hiker_path(const HikerProblem& problem, RandomStream& stream);

} // namespace trailmine

#endif // TRAILMINE_HIKER_HPP
