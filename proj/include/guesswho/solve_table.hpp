#pragma once

#include <vector>

#include "guesswho/core.hpp"
#include "guesswho/rational.hpp"

namespace guesswho {

struct TableEntry {
    Rational value;
    /// Every decision attaining `value`, Guess first, then canonical order.
    std::vector<Decision> optimal;
};

/// Exact game values for all states 1 <= n, m <= n_max in one question mode.
/// Immutable once built.
class SolveTable {
public:
    SolveTable(Mode mode, int n_max, std::vector<TableEntry> entries);

    Mode mode() const { return mode_; }
    int n_max() const { return n_max_; }

    bool contains(int n, int m) const {
        return n >= 1 && m >= 1 && n <= n_max_ && m <= n_max_;
    }

    const TableEntry& entry(int n, int m) const;
    const Rational& value(int n, int m) const { return entry(n, m).value; }
    const std::vector<Decision>& optimal(int n, int m) const { return entry(n, m).optimal; }

    /// True when `d` attains the state's value (membership by value, not identity).
    bool attains(int n, int m, const Decision& d) const;

    /// Value of playing `d` at (n, m) against optimal continuation.
    Rational decision_value(int n, int m, const Decision& d) const;

    friend bool operator==(const SolveTable& a, const SolveTable& b);

private:
    std::size_t index(int n, int m) const {
        return static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(n_max_) +
               static_cast<std::size_t>(m - 1);
    }

    Mode mode_;
    int n_max_;
    std::vector<TableEntry> entries_;
};

/// Fundamental-recurrence DP for either mode. States are filled in order of
/// increasing n + m; the guess branch 1/n is always considered.
SolveTable solve(Mode mode, int n_max);

}  // namespace guesswho
