#pragma once

#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "guesswho/rational.hpp"

namespace guesswho {

/// Raised when an integer argument lies outside an operation's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class InvalidMixture : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bipartite questions answer yes/no; tripartite ones add a paradox response.
enum class Mode { Bipartite, Tripartite };

std::string_view to_string(Mode mode);
/// Accepts "bi"/"bipartite" and "tri"/"tripartite".
Mode parse_mode(std::string_view text);

/// The mover has `n` suspects left; the opponent has `m`.
struct BoardState {
    int n = 1;
    int m = 1;

    friend bool operator==(const BoardState&, const BoardState&) = default;
};

/// A move at a board state: take a guess, or ask a question that splits
/// the mover's suspects into two (Split) or three (Split3) parts.
class Decision {
public:
    enum class Kind { Guess, Split, Split3 };

    static Decision guess() { return Decision(Kind::Guess, 0, 0, 0); }
    static Decision split(int k) { return Decision(Kind::Split, 0, 0, k); }
    /// Canonical triple i <= j <= k; |X| = i, |Y| = j and k suspects answer "no".
    static Decision split3(int i, int j, int k) { return Decision(Kind::Split3, i, j, k); }

    Kind kind() const { return kind_; }
    bool is_guess() const { return kind_ == Kind::Guess; }

    /// Size of the asked-about set for Split.
    int k() const { return k_; }
    int first() const { return i_; }
    int second() const { return j_; }
    int third() const { return k_; }

    /// Part sizes the question induces at a state with `n` suspects.
    std::vector<int> parts(int n) const;

    /// Short text form: "guess", "split(3)", "split3(1,2,2)".
    std::string describe() const;

    friend bool operator==(const Decision&, const Decision&) = default;
    friend auto operator<=>(const Decision&, const Decision&) = default;

private:
    Decision(Kind kind, int i, int j, int k) : kind_(kind), i_(i), j_(j), k_(k) {}

    Kind kind_;
    int i_;
    int j_;
    int k_;
};

/// True when `d` is a move the rules allow in `mode` with `n` suspects left.
/// Guess is always legal; Split(k) needs 1 <= k <= n/2; Split3(i,j,k) needs
/// i <= j <= k, j >= 1 and i + j + k = n.
bool is_legal(const Decision& d, int n, Mode mode);

/// Every non-guess decision available with `n` suspects, in canonical order.
std::vector<Decision> enumerate_questions(int n, Mode mode);

/// Opponent's distribution over our post-answer suspect count: part a_i is
/// reached with probability a_i / total. Zero parts carry no mass.
struct Mixture {
    std::vector<int> parts;

    int total() const;
};

/// Lookup of a state value P(m, a): the value for the player to move with
/// `m` suspects when the other has `a`.
template <typename F>
concept ValueLookup = std::invocable<F, int, int> &&
    std::convertible_to<std::invoke_result_t<F, int, int>, const Rational&>;

/// Weighted sum over nonzero parts of (a_i / total) * lookup(m, a_i).
template <ValueLookup F>
Rational mixture_value(F&& lookup, int m, const Mixture& mix) {
    if (mix.parts.empty()) {
        throw InvalidMixture("mixture has no parts");
    }
    const int total = mix.total();
    if (total <= 0) {
        throw InvalidMixture("mixture total must be positive");
    }
    Rational sum(0);
    for (const int a : mix.parts) {
        if (a < 0) {
            throw InvalidMixture("mixture part is negative");
        }
        if (a == 0) {
            continue;
        }
        sum += Rational(a, total) * lookup(m, a);
    }
    return sum;
}

/// Generic bipartite split n_<: 1 at n = 2, floor(n/4) + floor((n+1)/4) from n = 3.
int split_lower(int n);
/// n_> = n - n_<.
int split_upper(int n);

}  // namespace guesswho
