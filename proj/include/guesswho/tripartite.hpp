#pragma once

#include "guesswho/core.hpp"
#include "guesswho/solve_table.hpp"
#include "guesswho/verification.hpp"

namespace guesswho {

/// Sizes of the three answer classes: |X| (yes), |Y| (paradox), the rest (no).
struct TripartiteSplit {
    int lower = 0;
    int middle = 0;
    int upper = 0;

    friend bool operator==(const TripartiteSplit&, const TripartiteSplit&) = default;
};

/// Exact values when paradox questions are allowed, 1 <= n, m <= n_max.
SolveTable solve_tripartite(int n_max);

/// Period-9 generic split: lower = sum_{i=0..2} floor((n+i)/9), middle over
/// i = 3..5, upper over i = 6..8. The parts always sum to n.
TripartiteSplit generic_tri_split(int n);

/// Closed-form candidate move with paradox questions. Explicit case table for
/// n <= 9; for n >= 10 a ladder keyed on K = floor(log3 n) and the threshold
/// m >= 3^K + 3^(K-1). Returned triples are sorted into canonical order.
Decision theorem2_candidate(int n, int m);

/// Hard check for 2 <= n <= 9 (every m in range); for n >= 10 mismatches are
/// listed in details["mismatches"] with the DP-optimal decisions alongside.
VerificationReport verify_theorem2(const SolveTable& table);

/// Checks P3(n, m) >= P2(n, m) cell by cell.
VerificationReport verify_dominance(const SolveTable& tripartite, const SolveTable& bipartite);

}  // namespace guesswho
