#include "guesswho/engine.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace guesswho {

Roster::Roster(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() != static_cast<std::size_t>(kRosterSize)) {
        throw std::invalid_argument("roster needs exactly 24 names");
    }
    if (std::set<std::string>(names_.begin(), names_.end()).size() != names_.size()) {
        throw std::invalid_argument("roster names must be distinct");
    }
}

const Roster& Roster::standard() {
    static const Roster roster({"Alex", "Bea",  "Cole", "Dana", "Eli",  "Faye", "Gus",  "Hana",
                                "Ivo",  "Jade", "Kit",  "Lena", "Milo", "Nia",  "Otto", "Pia",
                                "Quinn", "Rosa", "Sami", "Tess", "Ugo",  "Vera", "Wes",  "Xan"});
    return roster;
}

std::optional<int> Roster::index_of(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        return std::nullopt;
    }
    return static_cast<int>(it - names_.begin());
}

std::vector<int> SuspectSet::members() const {
    std::vector<int> out;
    for (int i = 0; i < kRosterSize; ++i) {
        if (contains(i)) {
            out.push_back(i);
        }
    }
    return out;
}

std::string_view to_string(Answer a) {
    switch (a) {
        case Answer::Yes:
            return "yes";
        case Answer::No:
            return "no";
        case Answer::Explode:
            return "explode";
    }
    return "";
}

Answer parse_answer(std::string_view text) {
    if (text == "yes") {
        return Answer::Yes;
    }
    if (text == "no") {
        return Answer::No;
    }
    if (text == "explode") {
        return Answer::Explode;
    }
    throw std::invalid_argument("unknown answer '" + std::string(text) + "'");
}

std::string_view to_string(Variant v) { return v == Variant::Slider ? "slider" : "card"; }

Variant parse_variant(std::string_view text) {
    if (text == "slider") {
        return Variant::Slider;
    }
    if (text == "card") {
        return Variant::Card;
    }
    throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
}

namespace {

std::vector<std::string> names_of(SuspectSet s, const Roster& roster) {
    std::vector<std::string> out;
    for (const int i : s.members()) {
        out.push_back(roster.name(i));
    }
    return out;
}

SuspectSet set_of(const std::vector<std::string>& names, const Roster& roster) {
    SuspectSet s;
    for (const auto& name : names) {
        const auto i = roster.index_of(name);
        if (!i) {
            throw InvalidQuestion("unknown character '" + name + "'");
        }
        if (s.contains(*i)) {
            throw InvalidQuestion("character '" + name + "' listed twice");
        }
        s.insert(*i);
    }
    return s;
}

void require_turn(const GameState& state, int player) {
    if (state.over()) {
        throw IllegalMove("game is over");
    }
    if (player != state.to_move) {
        throw IllegalMove("player " + std::to_string(player) + " moved out of turn");
    }
}

}  // namespace

nlohmann::json state_to_json(const GameState& s, const Roster& roster) {
    auto players = nlohmann::json::array();
    for (const auto& p : s.players) {
        players.push_back({{"secret", roster.name(p.secret)},
                           {"remaining", names_of(p.remaining, roster)},
                           {"count", p.remaining.count()}});
    }
    return {{"variant", std::string(to_string(s.variant))},
            {"mode", std::string(to_string(s.mode))},
            {"players", std::move(players)},
            {"to_move", s.to_move},
            {"turn", s.turn_number},
            {"winner", s.winner ? nlohmann::json(*s.winner) : nlohmann::json(nullptr)},
            {"irrational_guesses", s.irrational_guesses}};
}

GameState new_game(const NewGameConfig& config) {
    if (config.first_player != 0 && config.first_player != 1) {
        throw std::invalid_argument("first player must be 0 or 1");
    }
    Rng rng(substream_seed(config.seed, 0));
    GameState s;
    s.variant = config.variant;
    s.mode = config.mode;
    s.to_move = config.first_player;
    const int first = static_cast<int>(rng.below(kRosterSize));
    int second = 0;
    if (config.variant == Variant::Slider) {
        second = static_cast<int>(rng.below(kRosterSize));
    } else {
        second = static_cast<int>(rng.below(kRosterSize - 1));
        if (second >= first) {
            ++second;
        }
    }
    s.players[0].secret = first;
    s.players[1].secret = second;
    for (auto& p : s.players) {
        p.remaining = SuspectSet::all();
        if (config.variant == Variant::Card) {
            p.remaining.erase(p.secret);
        }
    }
    return s;
}

Answer answer_question(int secret, const Question& q) {
    if (!(q.x & q.y).empty()) {
        throw InvalidQuestion("X and Y overlap");
    }
    if (q.x.contains(secret)) {
        return Answer::Yes;
    }
    if (q.y.contains(secret)) {
        return Answer::Explode;
    }
    return Answer::No;
}

void validate_question(const GameState& state, int asker, const Question& q) {
    const SuspectSet mine = state.players[static_cast<std::size_t>(asker)].remaining;
    if (!(q.x & q.y).empty()) {
        throw InvalidQuestion("X and Y overlap");
    }
    if (!((q.x | q.y) - mine).empty()) {
        throw InvalidQuestion("question names characters already eliminated");
    }
    if (state.mode == Mode::Bipartite && !q.y.empty()) {
        throw InvalidQuestion("paradox set Y is not allowed in bipartite mode");
    }
    const int asked = q.x.count() + q.y.count();
    if (asked < 1 || asked >= mine.count()) {
        throw InvalidQuestion("degenerate question: it cannot eliminate anyone");
    }
}

GameState apply_answer(const GameState& state, int asker, const Question& q, Answer a) {
    require_turn(state, asker);
    validate_question(state, asker, q);
    const SuspectSet mine = state.players[static_cast<std::size_t>(asker)].remaining;
    SuspectSet part;
    switch (a) {
        case Answer::Yes:
            part = q.x;
            break;
        case Answer::Explode:
            part = q.y;
            break;
        case Answer::No:
            part = mine - q.x - q.y;
            break;
    }
    if (part.empty()) {
        throw RefereeIntegrityError("answer '" + std::string(to_string(a)) +
                                    "' is impossible for every remaining suspect");
    }
    GameState next = state;
    next.players[static_cast<std::size_t>(asker)].remaining = part;
    next.to_move = 1 - asker;
    ++next.turn_number;
    return next;
}

Question realize_decision(const GameState& state, const Decision& d) {
    const auto& mine = state.players[static_cast<std::size_t>(state.to_move)].remaining;
    const int n = mine.count();
    if (d.is_guess() || !is_legal(d, n, state.mode)) {
        throw InvalidQuestion("decision " + d.describe() + " cannot be asked with " +
                              std::to_string(n) + " suspects");
    }
    const int x_size = d.kind() == Decision::Kind::Split ? d.k() : d.first();
    const int y_size = d.kind() == Decision::Kind::Split ? 0 : d.second();
    const auto members = mine.members();
    Question q;
    for (int i = 0; i < x_size; ++i) {
        q.x.insert(members[static_cast<std::size_t>(i)]);
    }
    for (int i = x_size; i < x_size + y_size; ++i) {
        q.y.insert(members[static_cast<std::size_t>(i)]);
    }
    return q;
}

GameState guess(const GameState& state, int player, int character) {
    require_turn(state, player);
    if (character < 0 || character >= kRosterSize) {
        throw std::invalid_argument("no such character");
    }
    GameState next = state;
    ++next.turn_number;
    if (!state.players[static_cast<std::size_t>(player)].remaining.contains(character)) {
        next.irrational_guesses.push_back(next.turn_number);
    }
    const bool correct = state.players[static_cast<std::size_t>(1 - player)].secret == character;
    next.winner = correct ? player : 1 - player;
    return next;
}

std::string Transcript::to_jsonl() const {
    std::ostringstream out;
    for (const auto& e : events) {
        nlohmann::json line{{"turn", e.turn},
                            {"player", e.player},
                            {"action", e.action},
                            {"x", e.x},
                            {"y", e.y},
                            {"answer", e.answer},
                            {"counts_after", e.counts_after}};
        if (e.action == "start") {
            line["variant"] = std::string(to_string(config.variant));
            line["mode"] = std::string(to_string(config.mode));
            line["seed"] = config.seed;
        }
        out << line.dump() << '\n';
    }
    return out.str();
}

Transcript Transcript::from_jsonl(std::string_view text) {
    Transcript t;
    std::istringstream in{std::string(text)};
    std::string line;
    bool started = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto j = nlohmann::json::parse(line);
        TranscriptEvent e;
        e.turn = j.at("turn").get<int>();
        e.player = j.at("player").get<int>();
        e.action = j.at("action").get<std::string>();
        e.x = j.at("x").get<std::vector<std::string>>();
        e.y = j.at("y").get<std::vector<std::string>>();
        e.answer = j.at("answer").get<std::string>();
        e.counts_after = j.at("counts_after").get<std::array<int, 2>>();
        if (e.action == "start") {
            if (started) {
                throw std::invalid_argument("transcript has two start lines");
            }
            started = true;
            t.config.variant = parse_variant(j.at("variant").get<std::string>());
            t.config.mode = parse_mode(j.at("mode").get<std::string>());
            t.config.seed = j.at("seed").get<std::uint64_t>();
            t.config.first_player = e.player;
        } else if (!started) {
            throw std::invalid_argument("transcript must begin with a start line");
        }
        t.events.push_back(std::move(e));
    }
    if (!started) {
        throw std::invalid_argument("empty transcript");
    }
    return t;
}

RecordedGame::RecordedGame(const NewGameConfig& config) : state_(new_game(config)) {
    transcript_.config = config;
    push("start", {}, {}, "", config.first_player);
}

void RecordedGame::push(const std::string& action, std::vector<std::string> x,
                        std::vector<std::string> y, std::string answer, int player) {
    transcript_.events.push_back(TranscriptEvent{state_.turn_number, player, action, std::move(x),
                                                 std::move(y), std::move(answer),
                                                 {state_.count(0), state_.count(1)}});
}

Answer RecordedGame::ask(const Question& q) {
    const int asker = state_.to_move;
    require_turn(state_, asker);
    validate_question(state_, asker, q);
    const Answer a = answer_question(state_.players[static_cast<std::size_t>(1 - asker)].secret, q);
    record_answer(q, a);
    return a;
}

void RecordedGame::record_answer(const Question& q, Answer a) {
    const int asker = state_.to_move;
    require_turn(state_, asker);
    validate_question(state_, asker, q);
    const int secret = state_.players[static_cast<std::size_t>(1 - asker)].secret;
    if (answer_question(secret, q) != a) {
        throw RefereeIntegrityError("answer '" + std::string(to_string(a)) +
                                    "' contradicts the answering player's secret");
    }
    state_ = apply_answer(state_, asker, q, a);
    const auto& roster = Roster::standard();
    push("question", names_of(q.x, roster), names_of(q.y, roster), std::string(to_string(a)), asker);
}

void RecordedGame::guess(int character) {
    const int player = state_.to_move;
    state_ = guesswho::guess(state_, player, character);
    const bool correct = state_.winner == player;
    push("guess", {Roster::standard().name(character)}, {}, correct ? "correct" : "wrong", player);
}

GameState replay(const Transcript& t) {
    const auto& roster = Roster::standard();
    RecordedGame game(t.config);
    for (std::size_t i = 1; i < t.events.size(); ++i) {
        const auto& e = t.events[i];
        if (e.player != game.state().to_move) {
            throw std::invalid_argument("transcript line " + std::to_string(i) + " is out of turn");
        }
        if (e.action == "question") {
            game.record_answer(Question{set_of(e.x, roster), set_of(e.y, roster)}, parse_answer(e.answer));
        } else if (e.action == "guess") {
            if (e.x.size() != 1) {
                throw std::invalid_argument("guess line must name one character");
            }
            const auto c = roster.index_of(e.x.front());
            if (!c) {
                throw std::invalid_argument("unknown character in guess");
            }
            game.guess(*c);
        } else {
            throw std::invalid_argument("unknown transcript action '" + e.action + "'");
        }
        if (game.transcript().events.back() != e) {
            throw std::invalid_argument("transcript line " + std::to_string(i) +
                                        " disagrees with the replayed game");
        }
    }
    return game.state();
}

RecordedGame play_table_game(const SolveTable& table, const NewGameConfig& config) {
    if (table.mode() != config.mode) {
        throw std::invalid_argument("table mode does not match the game mode");
    }
    RecordedGame game(config);
    Rng rng(substream_seed(config.seed, 1));
    while (!game.state().over()) {
        const GameState& s = game.state();
        const int n = s.count(s.to_move);
        const int m = s.count(1 - s.to_move);
        const Decision d = table.optimal(n, m).front();
        if (d.is_guess()) {
            const auto members = s.players[static_cast<std::size_t>(s.to_move)].remaining.members();
            game.guess(members[rng.below(members.size())]);
        } else {
            game.ask(realize_decision(s, d));
        }
    }
    return game;
}

}  // namespace guesswho
