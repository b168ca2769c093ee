#pragma once

#include "guesswho/core.hpp"
#include "guesswho/solve_table.hpp"
#include "guesswho/verification.hpp"

namespace guesswho {

/// Exact values for the yes/no game, 1 <= n, m <= n_max.
SolveTable solve_bipartite(int n_max);

/// Closed-form optimal decision for the yes/no game: guess when either side
/// is down to one suspect, the three sporadic states (4,4), (6,4), (10,4)
/// ask about 1, 3 and 5 suspects, and every other state asks about n_<.
Decision theorem1_strategy(int n, int m);

/// Checks that theorem1_strategy attains the table value at every state with
/// n <= n_limit and m <= m_limit (0 means the full table). The details carry
/// "generic_exceptions": states with n, m >= 2 where Split(n_<) is not optimal.
VerificationReport verify_theorem1(const SolveTable& table, int n_limit = 0, int m_limit = 0);

struct SplitPair {
    int lower;
    int upper;

    friend bool operator==(const SplitPair&, const SplitPair&) = default;
};

/// The tabulated expressions for ((n-k)_<, (n-k)_>) in terms of n_<, n_>,
/// k_< and k_>, selected by n mod 4 and k mod 4 with the k = 2 rows first.
/// The k = 2, n = 2 mod 4 row is kept as tabulated even though it is off by one.
SplitPair lemma1_entry(int n, int k);

/// Sweeps lemma1_entry against direct evaluation of split_lower/upper(n - k).
VerificationReport verify_lemma1(int n_min = 4, int n_max = 200);

/// eq1: P(m,[k:n-k]) >= P(m,[n_<:n_>]) outside (4,4), (6,4), (10,4);
/// eq2: P([k:n-k],m) <= P([n_<:n_>],m); both for n, m >= 2 and 1 <= k <= n/2.
VerificationReport verify_inequalities(const SolveTable& table);

/// Closed forms for small opponent counts: P(1,m) = 1, P(n,1) = 1/n,
/// P(2,m) = (m-1)/m, P(n,2) = 2/n for n >= 4, P(n,4) = 4/n for n >= 10.
/// Also records which reading of P(3,[1:n-1]) the table supports.
VerificationReport verify_closed_forms(const SolveTable& table);

/// Empirical table shape: monotonicity in n and m, and the states where
/// Guess ties the best question. Report-only.
VerificationReport survey_table(const SolveTable& table);

}  // namespace guesswho
