#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "guesswho/core.hpp"
#include "guesswho/solve_table.hpp"
#include "guesswho/verification.hpp"

namespace guesswho {

/// Pure strategy: the move a player makes with n suspects against m.
using Strategy = std::function<Decision(Mode mode, int n, int m)>;

/// A strategy returned a move the rules do not allow.
class StrategyFault : public std::runtime_error {
public:
    StrategyFault(const std::string& what, BoardState state)
        : std::runtime_error(what), state_(state) {}

    BoardState state() const { return state_; }

private:
    BoardState state_;
};

namespace strategies {

/// theorem1_strategy in bipartite mode, theorem2_candidate in tripartite mode.
Strategy closed_form();
/// First entry of the table's optimal set (Guess when it ties).
Strategy table_backed(std::shared_ptr<const SolveTable> table);
Strategy always_guess();
/// Smallest legal question: Split(1) or Split3(0,1,n-1); guesses at n = 1.
Strategy smallest_question();
/// Halves as evenly as possible: Split(n/2) or the most balanced triple.
Strategy balanced();
/// Guesses whenever the opponent is down to two or fewer, else balanced.
Strategy impatient();

}  // namespace strategies

/// Exact probability that the player to move at `start`, playing `mover`,
/// beats `other`. Throws StrategyFault on an illegal move.
Rational evaluate_pair(const Strategy& mover, const Strategy& other, BoardState start, Mode mode);

/// Optimal counter-strategy against `fixed`: value and argmax set at every
/// state where the responder is to move, 1 <= n, m <= n_max.
SolveTable best_response(const Strategy& fixed, int n_max, Mode mode);

/// Best-response value equals the game value at every state, i.e. deviating
/// against `strategy` gains nothing.
VerificationReport verify_nash(const Strategy& strategy, const SolveTable& game);
VerificationReport verify_nash(const Strategy& strategy, int n_max, Mode mode);

struct MatchReport {
    std::uint64_t trials = 0;
    std::uint64_t wins_a = 0;
    Rational exact_value;
    std::uint64_t seed = 0;

    double empirical_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(wins_a) / static_cast<double>(trials);
    }
    /// Empirical rate as a fixed six-decimal string.
    std::string empirical_rate_str() const;
    nlohmann::json to_json() const;

    friend bool operator==(const MatchReport&, const MatchReport&) = default;
};

/// Plays `trials` seeded games with A moving first from `start`. Trial t
/// draws from its own stream derived from (seed, t), so the result does not
/// depend on how trials are scheduled across threads.
MatchReport simulate_match(const Strategy& a, const Strategy& b, BoardState start, Mode mode,
                           std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

}  // namespace guesswho
