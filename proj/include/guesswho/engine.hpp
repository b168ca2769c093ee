#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "guesswho/core.hpp"
#include "guesswho/rng.hpp"
#include "guesswho/solve_table.hpp"

namespace guesswho {

inline constexpr int kRosterSize = 24;

class InvalidQuestion : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An answer that no remaining suspect could have given.
class RefereeIntegrityError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Move made out of turn or after the game ended.
class IllegalMove : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The 24 named faces, in board order.
class Roster {
public:
    explicit Roster(std::vector<std::string> names);
    static const Roster& standard();

    const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
    std::optional<int> index_of(std::string_view name) const;
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

/// Set of roster indices.
class SuspectSet {
public:
    SuspectSet() = default;
    static SuspectSet all() { return SuspectSet((1u << kRosterSize) - 1u); }
    static SuspectSet from_bits(std::uint32_t bits) { return SuspectSet(bits & all().bits_); }

    bool contains(int i) const { return i >= 0 && i < kRosterSize && ((bits_ >> i) & 1u); }
    int count() const { return std::popcount(bits_); }
    bool empty() const { return bits_ == 0; }
    std::uint32_t bits() const { return bits_; }

    SuspectSet& insert(int i) {
        bits_ |= 1u << i;
        return *this;
    }
    SuspectSet& erase(int i) {
        bits_ &= ~(1u << i);
        return *this;
    }

    /// Members in roster order.
    std::vector<int> members() const;

    friend SuspectSet operator&(SuspectSet a, SuspectSet b) { return SuspectSet(a.bits_ & b.bits_); }
    friend SuspectSet operator|(SuspectSet a, SuspectSet b) { return SuspectSet(a.bits_ | b.bits_); }
    friend SuspectSet operator-(SuspectSet a, SuspectSet b) { return SuspectSet(a.bits_ & ~b.bits_); }
    friend bool operator==(const SuspectSet&, const SuspectSet&) = default;

private:
    explicit SuspectSet(std::uint32_t bits) : bits_(bits) {}
    std::uint32_t bits_ = 0;
};

/// "Is your person in X, OR in Y AND the answer to this question is no?"
/// With Y empty this is the ordinary yes/no membership question.
struct Question {
    SuspectSet x;
    SuspectSet y;
};

enum class Answer { Yes, No, Explode };
std::string_view to_string(Answer a);
Answer parse_answer(std::string_view text);

/// slider: secrets drawn independently from all 24; card: drawn without
/// replacement and each player strikes their own card at the start.
enum class Variant { Slider, Card };
std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

struct NewGameConfig {
    Variant variant = Variant::Slider;
    Mode mode = Mode::Bipartite;
    std::uint64_t seed = 0;
    int first_player = 0;

    friend bool operator==(const NewGameConfig&, const NewGameConfig&) = default;
};

struct PlayerState {
    int secret = 0;
    SuspectSet remaining;

    friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

struct GameState {
    Variant variant = Variant::Slider;
    Mode mode = Mode::Bipartite;
    std::array<PlayerState, 2> players;
    int to_move = 0;
    int turn_number = 0;
    std::optional<int> winner;
    /// Turn numbers of guesses naming a character outside the guesser's own remaining set.
    std::vector<int> irrational_guesses;

    bool over() const { return winner.has_value(); }
    /// Public count: how many suspects `player` still has up.
    int count(int player) const { return players[static_cast<std::size_t>(player)].remaining.count(); }

    friend bool operator==(const GameState&, const GameState&) = default;
};

nlohmann::json state_to_json(const GameState& s, const Roster& roster = Roster::standard());

GameState new_game(const NewGameConfig& config);

/// Yes if secret is in x, Explode if in y, No otherwise.
Answer answer_question(int secret, const Question& q);

/// Throws InvalidQuestion unless q is well formed for `asker` right now: x and
/// y disjoint subsets of the asker's suspects, y empty in bipartite mode, and
/// 1 <= |x| + |y| < asker's count.
void validate_question(const GameState& state, int asker, const Question& q);

/// Restricts the asker's suspects to the part selected by `a` and passes the turn.
GameState apply_answer(const GameState& state, int asker, const Question& q, Answer a);

/// Builds the concrete question for `d`: the first |X| (then |Y|) of the
/// mover's remaining suspects in roster order.
Question realize_decision(const GameState& state, const Decision& d);

/// Ends the game: the guesser wins iff `character` is the opponent's secret.
GameState guess(const GameState& state, int player, int character);

/// One line of a game transcript.
struct TranscriptEvent {
    int turn = 0;
    int player = 0;
    std::string action;  // "start", "question" or "guess"
    std::vector<std::string> x;
    std::vector<std::string> y;
    std::string answer;  // yes/no/explode, or correct/wrong for guesses
    std::array<int, 2> counts_after{};

    friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

/// A game as JSON lines: a "start" line carrying the setup, then one line per move.
struct Transcript {
    NewGameConfig config;
    std::vector<TranscriptEvent> events;

    std::string to_jsonl() const;
    static Transcript from_jsonl(std::string_view text);
};

/// A game that records every move it applies.
class RecordedGame {
public:
    explicit RecordedGame(const NewGameConfig& config);

    const GameState& state() const { return state_; }
    const Transcript& transcript() const { return transcript_; }

    /// Current mover asks `q`; the referee answers from the opponent's secret.
    Answer ask(const Question& q);
    /// Current mover asks `q` and the answer is supplied (checked against the secret).
    void record_answer(const Question& q, Answer a);
    /// Current mover names `character`.
    void guess(int character);

private:
    void push(const std::string& action, std::vector<std::string> x, std::vector<std::string> y,
              std::string answer, int player);

    GameState state_;
    Transcript transcript_;
};

/// Re-applies every move of `t` to the game its start line describes. Throws
/// if any recorded answer or count disagrees with what the referee computes.
GameState replay(const Transcript& t);

/// Plays a full game where both players follow the table's first optimal
/// decision; guesses pick uniformly from the guesser's remaining suspects.
RecordedGame play_table_game(const SolveTable& table, const NewGameConfig& config);

}  // namespace guesswho
