#include "guesswho/tripartite.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "guesswho/table_io.hpp"

namespace guesswho {

namespace {

Decision sorted_triple(int a, int b, int c) {
    std::array<int, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return Decision::split3(t[0], t[1], t[2]);
}

int pow3(int e) {
    int p = 1;
    for (int i = 0; i < e; ++i) {
        p *= 3;
    }
    return p;
}

int floor_log3(int n) {
    int k = 0;
    for (int p = 3; p <= n; p *= 3) {
        ++k;
    }
    return k;
}

Decision small_case(int n, int m) {
    switch (n) {
        case 2:
            return Decision::split3(0, 1, 1);
        case 3:
            return Decision::split3(1, 1, 1);
        case 4:
            return Decision::split3(1, 1, 2);
        case 5:
            return m <= 4 ? Decision::split3(1, 2, 2) : Decision::split3(1, 1, 3);
        case 6:
            if (m <= 4) {
                return Decision::split3(2, 2, 2);
            }
            return m <= 7 ? Decision::split3(1, 1, 4) : Decision::split3(1, 2, 3);
        case 7:
            return m <= 4 ? Decision::split3(2, 2, 3) : Decision::split3(1, 3, 3);
        case 8:
            if (m <= 4) {
                return Decision::split3(2, 3, 3);
            }
            return m <= 7 ? Decision::split3(1, 3, 4) : Decision::split3(2, 3, 3);
        default:  // 9
            if (m <= 4) {
                return Decision::split3(3, 3, 3);
            }
            return m <= 7 ? Decision::split3(1, 4, 4) : Decision::split3(3, 3, 3);
    }
}

}  // namespace

SolveTable solve_tripartite(int n_max) { return solve(Mode::Tripartite, n_max); }

TripartiteSplit generic_tri_split(int n) {
    if (n < 2) {
        throw DomainError("generic_tri_split needs n >= 2, got " + std::to_string(n));
    }
    const auto band = [n](int from) { return (n + from) / 9 + (n + from + 1) / 9 + (n + from + 2) / 9; };
    return {band(0), band(3), band(6)};
}

Decision theorem2_candidate(int n, int m) {
    if (n < 1 || m < 1) {
        throw DomainError("board state needs n, m >= 1");
    }
    if (n == 1 || m == 1) {
        return Decision::guess();
    }
    if (n <= 9) {
        return small_case(n, m);
    }
    const int K = floor_log3(n);
    const int lo = pow3(K - 1);
    const int hi = pow3(K);
    if (m < hi + lo) {
        const TripartiteSplit s = generic_tri_split(n);
        return sorted_triple(s.lower, s.middle, s.upper);
    }
    if (n <= hi + 2 * lo) {
        return sorted_triple(lo, lo, n - 2 * lo);
    }
    if (n == hi + 2 * lo + 1) {
        return sorted_triple(lo, lo + 2, hi - 1);
    }
    if (n <= lo + 2 * hi) {
        return sorted_triple(lo, n - hi - lo, hi);
    }
    if (n == lo + 2 * hi + 1) {
        return sorted_triple(lo + 2, hi - 1, hi);
    }
    return sorted_triple(n - 2 * hi, hi, hi);
}

VerificationReport verify_theorem2(const SolveTable& table) {
    if (table.mode() != Mode::Tripartite) {
        throw std::invalid_argument("verify_theorem2 needs a tripartite table");
    }
    VerificationReport report;
    report.check = "theorem2";
    auto mismatches = nlohmann::json::array();
    int large_checked = 0;
    const int top = table.n_max();
    for (int n = 1; n <= top; ++n) {
        for (int m = 1; m <= top; ++m) {
            const Decision d = theorem2_candidate(n, m);
            const bool ok = table.attains(n, m, d);
            if (n <= 9) {
                if (!ok) {
                    report.failures.push_back("(" + std::to_string(n) + "," + std::to_string(m) +
                                              "): " + d.describe() + " worth " +
                                              table.decision_value(n, m, d).str() +
                                              " but P = " + table.value(n, m).str());
                }
                continue;
            }
            ++large_checked;
            if (!ok) {
                mismatches.push_back({{"n", n},
                                      {"m", m},
                                      {"candidate", decision_to_json(d)},
                                      {"candidate_value", table.decision_value(n, m, d).str()},
                                      {"p", table.value(n, m).str()},
                                      {"optimal", decisions_to_json(table.optimal(n, m))}});
            }
        }
    }
    report.details["large_n_checked"] = large_checked;
    report.details["large_n_mismatch_count"] = mismatches.size();
    report.details["mismatches"] = std::move(mismatches);
    if (large_checked > 0) {
        report.notes.push_back(std::to_string(report.details["large_n_mismatch_count"].get<int>()) +
                               " of " + std::to_string(large_checked) +
                               " states with n >= 10 where the closed-form candidate is not optimal");
    }
    return report;
}

VerificationReport verify_dominance(const SolveTable& tripartite, const SolveTable& bipartite) {
    if (tripartite.mode() != Mode::Tripartite || bipartite.mode() != Mode::Bipartite) {
        throw std::invalid_argument("verify_dominance needs a tripartite and a bipartite table");
    }
    VerificationReport report;
    report.check = "dominance";
    report.hard = false;
    auto violations = nlohmann::json::array();
    const int top = std::min(tripartite.n_max(), bipartite.n_max());
    for (int n = 1; n <= top; ++n) {
        for (int m = 1; m <= top; ++m) {
            if (tripartite.value(n, m) < bipartite.value(n, m)) {
                violations.push_back({{"n", n},
                                      {"m", m},
                                      {"tri", tripartite.value(n, m).str()},
                                      {"bi", bipartite.value(n, m).str()}});
                report.failures.push_back("(" + std::to_string(n) + "," + std::to_string(m) +
                                          "): P3 = " + tripartite.value(n, m).str() + " < P2 = " +
                                          bipartite.value(n, m).str());
            }
        }
    }
    report.details["violations"] = std::move(violations);
    if (!report.passed()) {
        report.notes.push_back(
            "the opponent may also ask paradox questions, so extra options for the mover do not "
            "bound the value from below");
    }
    return report;
}

}  // namespace guesswho
