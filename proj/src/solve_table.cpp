#include "guesswho/solve_table.hpp"

#include <string>

namespace guesswho {

SolveTable::SolveTable(Mode mode, int n_max, std::vector<TableEntry> entries)
    : mode_(mode), n_max_(n_max), entries_(std::move(entries)) {
    if (n_max_ < 1) {
        throw DomainError("table n_max must be >= 1");
    }
    if (entries_.size() != static_cast<std::size_t>(n_max_) * static_cast<std::size_t>(n_max_)) {
        throw std::invalid_argument("table entry count does not match n_max");
    }
}

const TableEntry& SolveTable::entry(int n, int m) const {
    if (!contains(n, m)) {
        throw DomainError("state (" + std::to_string(n) + "," + std::to_string(m) +
                          ") outside table range 1.." + std::to_string(n_max_));
    }
    return entries_[index(n, m)];
}

Rational SolveTable::decision_value(int n, int m, const Decision& d) const {
    if (!is_legal(d, n, mode_)) {
        throw DomainError("illegal decision " + d.describe() + " at n=" + std::to_string(n));
    }
    if (d.is_guess()) {
        return Rational(1, n);
    }
    const auto lookup = [this](int mm, int a) -> const Rational& { return value(mm, a); };
    return Rational(1) - mixture_value(lookup, m, Mixture{d.parts(n)});
}

bool SolveTable::attains(int n, int m, const Decision& d) const {
    return is_legal(d, n, mode_) && decision_value(n, m, d) == value(n, m);
}

bool operator==(const SolveTable& a, const SolveTable& b) {
    if (a.mode_ != b.mode_ || a.n_max_ != b.n_max_) {
        return false;
    }
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        if (a.entries_[i].value != b.entries_[i].value ||
            a.entries_[i].optimal != b.entries_[i].optimal) {
            return false;
        }
    }
    return true;
}

SolveTable solve(Mode mode, int n_max) {
    if (n_max < 1) {
        throw DomainError("n_max must be >= 1");
    }
    const auto size = static_cast<std::size_t>(n_max);
    std::vector<TableEntry> entries(size * size);
    const auto at = [&](int n, int m) -> TableEntry& {
        return entries[static_cast<std::size_t>(n - 1) * size + static_cast<std::size_t>(m - 1)];
    };
    const auto lookup = [&](int n, int m) -> const Rational& { return at(n, m).value; };

    std::vector<std::vector<Decision>> questions(size + 1);
    for (int n = 1; n <= n_max; ++n) {
        questions[static_cast<std::size_t>(n)] = enumerate_questions(n, mode);
    }

    // P(n, m) depends only on P(m, a) with a < n, i.e. on a smaller diagonal.
    for (int diagonal = 2; diagonal <= 2 * n_max; ++diagonal) {
        for (int n = std::max(1, diagonal - n_max); n <= std::min(n_max, diagonal - 1); ++n) {
            const int m = diagonal - n;
            const Rational guess_value(1, n);
            Rational best = guess_value;
            std::vector<Rational> values;
            const auto& candidates = questions[static_cast<std::size_t>(n)];
            values.reserve(candidates.size());
            for (const auto& d : candidates) {
                values.push_back(Rational(1) - mixture_value(lookup, m, Mixture{d.parts(n)}));
                if (values.back() > best) {
                    best = values.back();
                }
            }
            TableEntry& e = at(n, m);
            if (guess_value == best) {
                e.optimal.push_back(Decision::guess());
            }
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                if (values[i] == best) {
                    e.optimal.push_back(candidates[i]);
                }
            }
            e.value = std::move(best);
        }
    }
    return SolveTable(mode, n_max, std::move(entries));
}

}  // namespace guesswho
