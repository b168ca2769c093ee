#include <map>
#include <random>

#include <gtest/gtest.h>

#include "guesswho/bipartite.hpp"
#include "guesswho/engine.hpp"
#include "guesswho/tripartite.hpp"

using namespace guesswho;

namespace {

const SolveTable& bi24() {
    static const SolveTable t = solve_bipartite(24);
    return t;
}

const SolveTable& tri24() {
    static const SolveTable t = solve_tripartite(24);
    return t;
}

SuspectSet set_of(std::initializer_list<int> ids) {
    SuspectSet s;
    for (int i : ids) {
        s.insert(i);
    }
    return s;
}

}  // namespace

TEST(Roster, StandardNames) {
    const auto& r = Roster::standard();
    ASSERT_EQ(r.names().size(), 24u);
    EXPECT_EQ(r.name(0), "Alex");
    EXPECT_EQ(r.index_of("Xan"), 23);
    EXPECT_FALSE(r.index_of("Nobody").has_value());
}

TEST(NewGame, SliderStartsFull) {
    const GameState s = new_game({Variant::Slider, Mode::Bipartite, 11, 0});
    EXPECT_EQ(s.count(0), 24);
    EXPECT_EQ(s.count(1), 24);
    EXPECT_EQ(s.to_move, 0);
    EXPECT_FALSE(s.over());
}

TEST(NewGame, CardStrikesOwnCard) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const GameState s = new_game({Variant::Card, Mode::Tripartite, seed, 1});
        EXPECT_EQ(s.count(0), 23);
        EXPECT_EQ(s.count(1), 23);
        EXPECT_NE(s.players[0].secret, s.players[1].secret);
        // Each player's own card cannot be the opponent's, so it starts face down.
        EXPECT_FALSE(s.players[0].remaining.contains(s.players[0].secret));
        EXPECT_TRUE(s.players[0].remaining.contains(s.players[1].secret));
        EXPECT_EQ(s.to_move, 1);
    }
}

TEST(NewGame, SeedDetermines) {
    const NewGameConfig c{Variant::Card, Mode::Bipartite, 99, 0};
    EXPECT_EQ(new_game(c), new_game(c));
    EXPECT_THROW(new_game({Variant::Slider, Mode::Bipartite, 1, 2}), std::invalid_argument);
}

TEST(Answers, Semantics) {
    const Question q{set_of({1, 2}), set_of({3})};
    EXPECT_EQ(answer_question(1, q), Answer::Yes);
    EXPECT_EQ(answer_question(3, q), Answer::Explode);
    EXPECT_EQ(answer_question(7, q), Answer::No);
    EXPECT_EQ(parse_answer("explode"), Answer::Explode);
    EXPECT_EQ(to_string(Answer::No), "no");
    EXPECT_THROW(parse_answer("maybe"), std::invalid_argument);
}

TEST(ApplyAnswer, RestrictsTheAsker) {
    GameState s = new_game({Variant::Slider, Mode::Tripartite, 5, 0});
    const Question q{set_of({0, 1, 2}), set_of({3, 4})};
    const GameState yes = apply_answer(s, 0, q, Answer::Yes);
    EXPECT_EQ(yes.players[0].remaining, set_of({0, 1, 2}));
    EXPECT_EQ(yes.to_move, 1);
    EXPECT_EQ(yes.turn_number, s.turn_number + 1);
    EXPECT_EQ(apply_answer(s, 0, q, Answer::Explode).count(0), 2);
    EXPECT_EQ(apply_answer(s, 0, q, Answer::No).count(0), 19);
    // Opponent untouched.
    EXPECT_EQ(yes.players[1], s.players[1]);
}

TEST(ApplyAnswer, RejectsMalformedQuestions) {
    const GameState s = new_game({Variant::Slider, Mode::Bipartite, 5, 0});
    EXPECT_THROW(validate_question(s, 0, {SuspectSet{}, SuspectSet{}}), InvalidQuestion);
    EXPECT_THROW(validate_question(s, 0, {SuspectSet::all(), SuspectSet{}}), InvalidQuestion);
    EXPECT_THROW(validate_question(s, 0, {set_of({1}), set_of({2})}), InvalidQuestion);
    const GameState t = new_game({Variant::Slider, Mode::Tripartite, 5, 0});
    EXPECT_THROW(validate_question(t, 0, {set_of({1, 2}), set_of({2})}), InvalidQuestion);
    EXPECT_NO_THROW(validate_question(t, 0, {set_of({1}), set_of({2})}));
    EXPECT_THROW(apply_answer(s, 1, {set_of({1}), {}}, Answer::Yes), IllegalMove);
    EXPECT_THROW(apply_answer(s, 0, {set_of({1}), {}}, Answer::Explode), RefereeIntegrityError);
}

TEST(ApplyAnswer, QuestionsAboutEliminatedSuspectsAreRejected) {
    GameState s = new_game({Variant::Slider, Mode::Bipartite, 5, 0});
    s = apply_answer(s, 0, {set_of({0, 1}), {}}, Answer::Yes);
    s = apply_answer(s, 1, {set_of({0}), {}}, Answer::No);
    // Player 0 is down to {0, 1}; asking about a suspect already down is malformed.
    EXPECT_THROW(validate_question(s, 0, {set_of({5}), {}}), InvalidQuestion);
}

TEST(RealizeDecision, RosterOrder) {
    const GameState s = new_game({Variant::Slider, Mode::Tripartite, 3, 0});
    const Question q = realize_decision(s, Decision::split3(2, 3, 19));
    EXPECT_EQ(q.x, set_of({0, 1}));
    EXPECT_EQ(q.y, set_of({2, 3, 4}));
    const GameState b = new_game({Variant::Slider, Mode::Bipartite, 3, 0});
    const Question qb = realize_decision(b, Decision::split(12));
    EXPECT_EQ(qb.x.count(), 12);
    EXPECT_TRUE(qb.y.empty());
    EXPECT_THROW(realize_decision(b, Decision::guess()), std::invalid_argument);
}

TEST(Guess, EndsTheGame) {
    const GameState s = new_game({Variant::Slider, Mode::Bipartite, 8, 0});
    const int target = s.players[1].secret;
    const GameState won = guess(s, 0, target);
    ASSERT_TRUE(won.over());
    EXPECT_EQ(*won.winner, 0);
    const GameState lost = guess(s, 0, (target + 1) % 24);
    EXPECT_EQ(*lost.winner, 1);
    EXPECT_THROW(guess(won, 1, 0), IllegalMove);
}

TEST(Guess, FlagsIrrationalGuesses) {
    GameState s = new_game({Variant::Slider, Mode::Bipartite, 8, 0});
    s = apply_answer(s, 0, {set_of({0}), {}}, answer_question(s.players[1].secret, {set_of({0}), {}}));
    s = apply_answer(s, 1, {set_of({0}), {}}, Answer::No);
    const int outside = s.players[0].remaining.contains(0) ? 1 : 0;
    const GameState g = guess(s, 0, outside);
    EXPECT_EQ(g.irrational_guesses, std::vector<int>{s.turn_number + 1});
}

TEST(Referee, SecretNeverEliminatedProperty) {
    std::mt19937 gen(42);
    for (int game = 0; game < 300; ++game) {
        const Mode mode = game % 2 ? Mode::Tripartite : Mode::Bipartite;
        RecordedGame g({game % 3 ? Variant::Slider : Variant::Card, mode, static_cast<std::uint64_t>(game), 0});
        while (!g.state().over() && g.state().turn_number < 200) {
            const int p = g.state().to_move;
            const auto mine = g.state().players[static_cast<std::size_t>(p)].remaining.members();
            if (mine.size() == 1) {
                g.guess(mine.front());
                break;
            }
            // Random nonempty proper question.
            Question q;
            do {
                q = {};
                for (int i : mine) {
                    const int r = static_cast<int>(gen() % 3);
                    if (r == 0) {
                        q.x.insert(i);
                    } else if (r == 1 && mode == Mode::Tripartite) {
                        q.y.insert(i);
                    }
                }
            } while ((q.x | q.y).empty() || (q.x | q.y).count() == static_cast<int>(mine.size()));
            g.ask(q);
            for (int pl = 0; pl < 2; ++pl) {
                const auto& ps = g.state().players[static_cast<std::size_t>(pl)];
                // Secret of the opponent stays on each board.
                ASSERT_TRUE(ps.remaining.contains(g.state().players[static_cast<std::size_t>(1 - pl)].secret));
            }
        }
    }
}

TEST(Referee, RecordedWrongAnswerIsRejected) {
    RecordedGame g({Variant::Slider, Mode::Bipartite, 3, 0});
    const Question q{set_of({g.state().players[1].secret}), {}};
    EXPECT_THROW(g.record_answer(q, Answer::No), RefereeIntegrityError);
    EXPECT_NO_THROW(g.record_answer(q, Answer::Yes));
}

TEST(Referee, AnswerDistributionMatchesPartSizes) {
    // Over many seeds the answer frequencies follow |X|, |Y|, |rest| out of 24.
    std::map<Answer, int> tally;
    const int games = 24000;
    for (int seed = 0; seed < games; ++seed) {
        const GameState s = new_game({Variant::Slider, Mode::Tripartite, static_cast<std::uint64_t>(seed), 0});
        tally[answer_question(s.players[1].secret, realize_decision(s, Decision::split3(4, 8, 12)))]++;
    }
    EXPECT_NEAR(tally[Answer::Yes] / double(games), 4.0 / 24, 0.015);
    EXPECT_NEAR(tally[Answer::Explode] / double(games), 8.0 / 24, 0.015);
    EXPECT_NEAR(tally[Answer::No] / double(games), 12.0 / 24, 0.015);
}

TEST(TableGame, TerminatesAndEndsCleanly) {
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const Mode mode = seed % 2 ? Mode::Tripartite : Mode::Bipartite;
        const Variant v = seed % 3 ? Variant::Slider : Variant::Card;
        const RecordedGame g = play_table_game(mode == Mode::Bipartite ? bi24() : tri24(), {v, mode, seed, 0});
        ASSERT_TRUE(g.state().over());
        ASSERT_LE(g.state().turn_number, 2 * 24 + 1);
        ASSERT_TRUE(g.state().irrational_guesses.empty());
    }
}

TEST(Transcript, ReplayReproducesFinalState) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Mode mode = seed % 2 ? Mode::Tripartite : Mode::Bipartite;
        const RecordedGame g = play_table_game(mode == Mode::Bipartite ? bi24() : tri24(),
                                               {seed % 3 ? Variant::Slider : Variant::Card, mode, seed, int(seed % 2)});
        const Transcript parsed = Transcript::from_jsonl(g.transcript().to_jsonl());
        EXPECT_EQ(parsed.config, g.transcript().config);
        EXPECT_EQ(parsed.events, g.transcript().events);
        EXPECT_EQ(replay(parsed), g.state());
    }
}

TEST(Transcript, TamperingIsDetected) {
    const RecordedGame g = play_table_game(bi24(), {Variant::Slider, Mode::Bipartite, 17, 0});
    Transcript t = g.transcript();
    ASSERT_GE(t.events.size(), 3u);
    auto& ev = t.events[1];
    ASSERT_EQ(ev.action, "question");
    ev.answer = ev.answer == "yes" ? "no" : "yes";
    EXPECT_ANY_THROW(replay(t));

    Transcript counts = g.transcript();
    counts.events[1].counts_after[0] += 1;
    EXPECT_ANY_THROW(replay(counts));

    EXPECT_ANY_THROW(Transcript::from_jsonl("{\"action\":\"question\"}\n"));
}

TEST(StateJson, CarriesSetup) {
    const GameState s = new_game({Variant::Slider, Mode::Bipartite, 2, 0});
    const auto j = state_to_json(s);
    EXPECT_EQ(j["mode"], "bi");
    EXPECT_EQ(j["variant"], "slider");
}
