#include "guesswho/core.hpp"

#include <numeric>

namespace guesswho {

std::string_view to_string(Mode mode) {
    return mode == Mode::Bipartite ? "bi" : "tri";
}

Mode parse_mode(std::string_view text) {
    if (text == "bi" || text == "bipartite") {
        return Mode::Bipartite;
    }
    if (text == "tri" || text == "tripartite") {
        return Mode::Tripartite;
    }
    throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected bi or tri)");
}

std::vector<int> Decision::parts(int n) const {
    switch (kind_) {
        case Kind::Guess:
            return {};
        case Kind::Split:
            return {k_, n - k_};
        case Kind::Split3:
            return {i_, j_, k_};
    }
    return {};
}

std::string Decision::describe() const {
    switch (kind_) {
        case Kind::Guess:
            return "guess";
        case Kind::Split:
            return "split(" + std::to_string(k_) + ")";
        case Kind::Split3:
            return "split3(" + std::to_string(i_) + "," + std::to_string(j_) + "," +
                   std::to_string(k_) + ")";
    }
    return {};
}

bool is_legal(const Decision& d, int n, Mode mode) {
    if (n < 1) {
        return false;
    }
    switch (d.kind()) {
        case Decision::Kind::Guess:
            return true;
        case Decision::Kind::Split:
            return mode == Mode::Bipartite && d.k() >= 1 && 2 * d.k() <= n;
        case Decision::Kind::Split3:
            return mode == Mode::Tripartite && d.first() >= 0 && d.first() <= d.second() &&
                   d.second() <= d.third() && d.second() >= 1 &&
                   d.first() + d.second() + d.third() == n;
    }
    return false;
}

std::vector<Decision> enumerate_questions(int n, Mode mode) {
    std::vector<Decision> out;
    if (mode == Mode::Bipartite) {
        for (int k = 1; 2 * k <= n; ++k) {
            out.push_back(Decision::split(k));
        }
        return out;
    }
    for (int i = 0; 3 * i <= n; ++i) {
        for (int j = std::max(i, 1); 2 * j <= n - i; ++j) {
            out.push_back(Decision::split3(i, j, n - i - j));
        }
    }
    return out;
}

int Mixture::total() const { return std::accumulate(parts.begin(), parts.end(), 0); }

int split_lower(int n) {
    if (n < 2) {
        throw DomainError("split_lower needs n >= 2, got " + std::to_string(n));
    }
    if (n == 2) {
        return 1;
    }
    return n / 4 + (n + 1) / 4;
}

int split_upper(int n) { return n - split_lower(n); }

}  // namespace guesswho
