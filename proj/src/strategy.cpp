#include "guesswho/strategy.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <thread>
#include <vector>

#include "guesswho/bipartite.hpp"
#include "guesswho/rng.hpp"
#include "guesswho/tripartite.hpp"

namespace guesswho {

namespace strategies {

Strategy closed_form() {
    return [](Mode mode, int n, int m) {
        return mode == Mode::Bipartite ? theorem1_strategy(n, m) : theorem2_candidate(n, m);
    };
}

Strategy table_backed(std::shared_ptr<const SolveTable> table) {
    return [table = std::move(table)](Mode mode, int n, int m) {
        if (mode != table->mode()) {
            throw std::invalid_argument("table-backed strategy used in the wrong mode");
        }
        return table->optimal(n, m).front();
    };
}

Strategy always_guess() {
    return [](Mode, int, int) { return Decision::guess(); };
}

Strategy smallest_question() {
    return [](Mode mode, int n, int) {
        if (n == 1) {
            return Decision::guess();
        }
        return mode == Mode::Bipartite ? Decision::split(1) : Decision::split3(0, 1, n - 1);
    };
}

Strategy balanced() {
    return [](Mode mode, int n, int) {
        if (n == 1) {
            return Decision::guess();
        }
        if (mode == Mode::Bipartite) {
            return Decision::split(n / 2);
        }
        const int i = n / 3;
        const int j = (n - i) / 2;
        return Decision::split3(i, j, n - i - j);
    };
}

Strategy impatient() {
    return [inner = balanced()](Mode mode, int n, int m) {
        if (m <= 2) {
            return Decision::guess();
        }
        return inner(mode, n, m);
    };
}

}  // namespace strategies

namespace {

Decision checked_move(const Strategy& s, Mode mode, int n, int m) {
    Decision d = s(mode, n, m);
    if (!is_legal(d, n, mode)) {
        throw StrategyFault("strategy played illegal " + d.describe() + " at state (" +
                                std::to_string(n) + "," + std::to_string(m) + ")",
                            BoardState{n, m});
    }
    return d;
}

class PairEvaluator {
public:
    PairEvaluator(const Strategy& a, const Strategy& b, Mode mode, int dim)
        : players_{&a, &b}, mode_(mode), dim_(dim),
          memo_(2 * static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {}

    // Win probability for `player` to move with n suspects against m.
    const Rational& value(int player, int n, int m) {
        auto& slot = memo_[(static_cast<std::size_t>(player) * dim_ + (n - 1)) * dim_ + (m - 1)];
        if (slot) {
            return *slot;
        }
        const Decision d = checked_move(*players_[player], mode_, n, m);
        Rational v;
        if (d.is_guess()) {
            v = Rational(1, n);
        } else {
            const auto lookup = [this, player](int mm, int a) -> const Rational& {
                return value(1 - player, mm, a);
            };
            v = Rational(1) - mixture_value(lookup, m, Mixture{d.parts(n)});
        }
        slot = std::move(v);
        return *slot;
    }

private:
    const Strategy* players_[2];
    Mode mode_;
    std::size_t dim_;
    std::vector<std::optional<Rational>> memo_;
};

}  // namespace

Rational evaluate_pair(const Strategy& mover, const Strategy& other, BoardState start, Mode mode) {
    if (start.n < 1 || start.m < 1) {
        throw DomainError("start state needs n, m >= 1");
    }
    PairEvaluator eval(mover, other, mode, std::max(start.n, start.m));
    return eval.value(0, start.n, start.m);
}

SolveTable best_response(const Strategy& fixed, int n_max, Mode mode) {
    if (n_max < 1) {
        throw DomainError("n_max must be >= 1");
    }
    const auto size = static_cast<std::size_t>(n_max);
    const auto idx = [size](int n, int m) {
        return static_cast<std::size_t>(n - 1) * size + static_cast<std::size_t>(m - 1);
    };
    std::vector<TableEntry> responder(size * size);
    // Fixed player's win probability when it moves with n against the responder's m.
    std::vector<Rational> fixed_value(size * size);

    const auto responder_lookup = [&](int n, int m) -> const Rational& { return responder[idx(n, m)].value; };
    const auto fixed_lookup = [&](int n, int m) -> const Rational& { return fixed_value[idx(n, m)]; };

    for (int diagonal = 2; diagonal <= 2 * n_max; ++diagonal) {
        for (int n = std::max(1, diagonal - n_max); n <= std::min(n_max, diagonal - 1); ++n) {
            const int m = diagonal - n;

            const Decision fd = checked_move(fixed, mode, n, m);
            fixed_value[idx(n, m)] =
                fd.is_guess() ? Rational(1, n)
                              : Rational(1) - mixture_value(responder_lookup, m, Mixture{fd.parts(n)});

            const Rational guess_value(1, n);
            Rational best = guess_value;
            const auto questions = enumerate_questions(n, mode);
            std::vector<Rational> values;
            values.reserve(questions.size());
            for (const auto& d : questions) {
                values.push_back(Rational(1) - mixture_value(fixed_lookup, m, Mixture{d.parts(n)}));
                best = std::max(best, values.back());
            }
            TableEntry& e = responder[idx(n, m)];
            if (guess_value == best) {
                e.optimal.push_back(Decision::guess());
            }
            for (std::size_t i = 0; i < questions.size(); ++i) {
                if (values[i] == best) {
                    e.optimal.push_back(questions[i]);
                }
            }
            e.value = std::move(best);
        }
    }
    return SolveTable(mode, n_max, std::move(responder));
}

VerificationReport verify_nash(const Strategy& strategy, const SolveTable& game) {
    VerificationReport report;
    report.check = std::string("nash_") + std::string(to_string(game.mode()));
    const SolveTable br = best_response(strategy, game.n_max(), game.mode());
    auto gains = nlohmann::json::array();
    for (int n = 1; n <= game.n_max(); ++n) {
        for (int m = 1; m <= game.n_max(); ++m) {
            if (br.value(n, m) != game.value(n, m)) {
                gains.push_back({{"n", n}, {"m", m}, {"best_response", br.value(n, m).str()},
                                 {"game_value", game.value(n, m).str()}});
                report.failures.push_back("(" + std::to_string(n) + "," + std::to_string(m) +
                                          "): best response " + br.value(n, m).str() +
                                          " vs game value " + game.value(n, m).str());
            }
        }
    }
    report.details["n_max"] = game.n_max();
    report.details["deviations"] = std::move(gains);
    return report;
}

VerificationReport verify_nash(const Strategy& strategy, int n_max, Mode mode) {
    return verify_nash(strategy, solve(mode, n_max));
}

std::string MatchReport::empirical_rate_str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", empirical_rate());
    return buf;
}

nlohmann::json MatchReport::to_json() const {
    return {{"trials", trials},
            {"wins_a", wins_a},
            {"exact_value", exact_value.str()},
            {"empirical_rate", empirical_rate_str()},
            {"seed", seed}};
}

namespace {

// True when A (moving first) wins this game.
bool play_one(const Strategy& a, const Strategy& b, BoardState start, Mode mode, Rng& rng) {
    const Strategy* players[2] = {&a, &b};
    int counts[2] = {start.n, start.m};
    int mover = 0;
    for (;;) {
        const int n = counts[mover];
        const Decision d = checked_move(*players[mover], mode, n, counts[1 - mover]);
        // The secret's position among the mover's n suspects, uniform.
        const auto r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (d.is_guess()) {
            const bool correct = r == 0;
            return (mover == 0) == correct;
        }
        int acc = 0;
        for (const int part : d.parts(n)) {
            acc += part;
            if (r < acc) {
                counts[mover] = part;
                break;
            }
        }
        mover = 1 - mover;
    }
}

}  // namespace

MatchReport simulate_match(const Strategy& a, const Strategy& b, BoardState start, Mode mode,
                           std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    if (trials == 0) {
        throw DomainError("simulate_match needs at least one trial");
    }
    MatchReport report;
    report.trials = trials;
    report.seed = seed;
    report.exact_value = evaluate_pair(a, b, start, mode);

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    std::vector<std::uint64_t> wins(threads, 0);
    std::vector<std::exception_ptr> errors(threads);
    const auto run = [&](unsigned worker) {
        try {
            for (std::uint64_t t = worker; t < trials; t += threads) {
                Rng rng(substream_seed(seed, t));
                wins[worker] += play_one(a, b, start, mode, rng) ? 1 : 0;
            }
        } catch (...) {
            errors[worker] = std::current_exception();
        }
    };
    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back(run, w);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    for (const auto w : wins) {
        report.wins_a += w;
    }
    return report;
}

}  // namespace guesswho
