#include "guesswho/service.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "guesswho/table_io.hpp"

namespace guesswho {

namespace {

struct HttpError : std::runtime_error {
    HttpError(int status, const std::string& message) : std::runtime_error(message), status(status) {}
    int status;
};

std::string decimal(const Rational& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r.to_double());
    return buf;
}

nlohmann::json probability(const Rational& r) { return {{"p", r.str()}, {"decimal", decimal(r)}}; }

int parse_int(const std::string& text, const char* what) {
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception&) {
        throw HttpError(400, std::string("parameter '") + what + "' must be an integer");
    }
    if (used != text.size()) {
        throw HttpError(400, std::string("parameter '") + what + "' must be an integer");
    }
    return value;
}

Mode mode_field(const nlohmann::json& body) {
    if (!body.contains("mode") || !body["mode"].is_string()) {
        throw HttpError(422, "field 'mode' must be \"bi\" or \"tri\"");
    }
    try {
        return parse_mode(body["mode"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw HttpError(422, e.what());
    }
}

SuspectSet names_field(const nlohmann::json& body, const char* key) {
    SuspectSet s;
    if (!body.contains(key)) {
        return s;
    }
    if (!body[key].is_array()) {
        throw HttpError(422, std::string("field '") + key + "' must be a list of names");
    }
    for (const auto& item : body[key]) {
        if (!item.is_string()) {
            throw HttpError(422, std::string("field '") + key + "' must be a list of names");
        }
        const auto idx = Roster::standard().index_of(item.get<std::string>());
        if (!idx) {
            throw HttpError(422, "unknown character '" + item.get<std::string>() + "'");
        }
        if (s.contains(*idx)) {
            throw HttpError(422, "character '" + item.get<std::string>() + "' listed twice");
        }
        s.insert(*idx);
    }
    return s;
}

nlohmann::json names_json(SuspectSet s) {
    auto out = nlohmann::json::array();
    for (const int i : s.members()) {
        out.push_back(Roster::standard().name(i));
    }
    return out;
}

nlohmann::json question_json(const Question& q) { return {{"x", names_json(q.x)}, {"y", names_json(q.y)}}; }

Answer answer_field(const nlohmann::json& body) {
    if (!body.contains("answer") || !body["answer"].is_string()) {
        throw HttpError(422, "field 'answer' must be yes, no or explode");
    }
    try {
        return parse_answer(body["answer"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw HttpError(422, e.what());
    }
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(path);
    while (std::getline(in, part, '/')) {
        if (!part.empty()) {
            parts.push_back(part);
        }
    }
    return parts;
}

}  // namespace

struct Service::Session {
    enum class Kind { Game, Advisor };

    std::string id;
    Kind kind = Kind::Game;
    Variant variant = Variant::Slider;
    Mode mode = Mode::Bipartite;
    Clock::time_point created;
    Clock::time_point last_used;
    std::mutex mutex;

    // Engine game.
    std::optional<RecordedGame> game;
    int engine_seat = 0;
    std::optional<Rng> rng;
    std::optional<Question> pending;
    std::optional<Decision> pending_decision;

    // Advisor.
    SuspectSet faces;
    int mine = 0;
    int theirs = 0;

    int human_seat() const { return 1 - engine_seat; }
};

Service::Service(Options options)
    : options_(std::move(options)),
      bipartite_(cached_solve(Mode::Bipartite, options_.n_max, options_.table_cache)),
      tripartite_(cached_solve(Mode::Tripartite, options_.n_max, options_.table_cache)),
      id_salt_(std::random_device{}()) {
    if (options_.n_max < kRosterSize) {
        throw std::invalid_argument("service tables must cover the 24-face board");
    }
    id_salt_ = (id_salt_ << 32) ^ std::random_device{}();
}

Service::~Service() = default;

const SolveTable& Service::table(Mode mode) const {
    return mode == Mode::Bipartite ? bipartite_ : tripartite_;
}

std::size_t Service::session_count() const {
    std::lock_guard lock(sessions_mutex_);
    return sessions_.size();
}

std::string Service::fresh_id() {
    std::uint64_t a = splitmix64(id_salt_ ^ splitmix64(++id_counter_));
    std::uint64_t b = splitmix64(a ^ id_salt_);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(a),
                  static_cast<unsigned long long>(b));
    return buf;
}

void Service::purge_expired() {
    const auto now = options_.clock();
    std::lock_guard lock(sessions_mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        if (now - it->second->last_used > options_.session_ttl) {
            it = sessions_.erase(it);
        } else {
            ++it;
        }
    }
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw HttpError(404, "no such session");
    }
    return it->second;
}

HttpResponse Service::handle(const HttpRequest& request) {
    try {
        purge_expired();
        const auto parts = split_path(request.path);
        if (parts.size() < 2 || parts[0] != "v1") {
            throw HttpError(404, "no such endpoint");
        }
        const auto parse_body = [&]() {
            if (request.body.empty()) {
                return nlohmann::json::object();
            }
            auto body = nlohmann::json::parse(request.body, nullptr, false);
            if (body.is_discarded() || !body.is_object()) {
                throw HttpError(400, "request body must be a JSON object");
            }
            return body;
        };

        if (parts[1] == "value" && parts.size() == 2) {
            if (request.method != "GET") {
                throw HttpError(405, "use GET");
            }
            return get_value(request);
        }
        if (parts[1] != "session") {
            throw HttpError(404, "no such endpoint");
        }
        if (parts.size() == 2) {
            if (request.method != "POST") {
                throw HttpError(405, "use POST");
            }
            return create_session(parse_body());
        }
        const auto session = find(parts[2]);
        std::lock_guard lock(session->mutex);
        session->last_used = options_.clock();
        if (parts.size() == 3) {
            if (request.method == "GET") {
                return {200, describe(*session)};
            }
            if (request.method == "DELETE") {
                std::lock_guard map_lock(sessions_mutex_);
                sessions_.erase(session->id);
                return {200, {{"deleted", session->id}}};
            }
            throw HttpError(405, "use GET or DELETE");
        }
        if (parts.size() == 4 && parts[3] == "move") {
            if (request.method != "POST") {
                throw HttpError(405, "use POST");
            }
            return move(*session, parse_body());
        }
        throw HttpError(404, "no such endpoint");
    } catch (const HttpError& e) {
        return {e.status, {{"error", e.what()}}};
    } catch (const RefereeIntegrityError& e) {
        return {500, {{"error", "referee integrity violation"}, {"diagnostic", e.what()}}};
    } catch (const std::exception& e) {
        return {500, {{"error", e.what()}}};
    }
}

HttpResponse Service::get_value(const HttpRequest& request) const {
    const auto param = [&](const char* key) -> const std::string& {
        const auto it = request.query.find(key);
        if (it == request.query.end()) {
            throw HttpError(400, std::string("missing parameter '") + key + "'");
        }
        return it->second;
    };
    Mode mode{};
    try {
        mode = parse_mode(param("mode"));
    } catch (const std::invalid_argument& e) {
        throw HttpError(422, e.what());
    }
    const int n = parse_int(param("n"), "n");
    const int m = parse_int(param("m"), "m");
    const SolveTable& t = table(mode);
    if (!t.contains(n, m)) {
        throw HttpError(400, "n and m must lie in 1.." + std::to_string(t.n_max()));
    }
    auto body = probability(t.value(n, m));
    body["mode"] = std::string(to_string(mode));
    body["n"] = n;
    body["m"] = m;
    body["optimal"] = decisions_to_json(t.optimal(n, m));
    return {200, std::move(body)};
}

HttpResponse Service::create_session(const nlohmann::json& body) {
    auto session = std::make_shared<Session>();
    session->mode = mode_field(body);
    try {
        session->variant = parse_variant(body.value("variant", std::string("slider")));
    } catch (const std::exception& e) {
        throw HttpError(422, e.what());
    }
    session->created = session->last_used = options_.clock();
    const bool advisor = body.value("advisor", false);
    std::uint64_t seed = 0;
    if (body.contains("seed")) {
        if (!body["seed"].is_number_unsigned()) {
            throw HttpError(422, "field 'seed' must be a non-negative integer");
        }
        seed = body["seed"].get<std::uint64_t>();
    } else {
        seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    }

    if (advisor) {
        if (body.contains("engine_seat")) {
            throw HttpError(422, "advisor sessions have no engine seat");
        }
        session->kind = Session::Kind::Advisor;
        session->faces = SuspectSet::all();
        if (session->variant == Variant::Card) {
            if (!body.contains("own_card") || !body["own_card"].is_string()) {
                throw HttpError(422, "card variant advisor needs 'own_card'");
            }
            const auto own = Roster::standard().index_of(body["own_card"].get<std::string>());
            if (!own) {
                throw HttpError(422, "unknown character in 'own_card'");
            }
            session->faces.erase(*own);
        }
        session->mine = session->faces.count();
        session->theirs = session->variant == Variant::Card ? kRosterSize - 1 : kRosterSize;
    } else {
        if (!body.contains("engine_seat") || !body["engine_seat"].is_number_integer()) {
            throw HttpError(422, "game sessions need 'engine_seat' (0 or 1) or 'advisor': true");
        }
        session->engine_seat = body["engine_seat"].get<int>();
        const int first = body.value("first_player", 0);
        if ((session->engine_seat != 0 && session->engine_seat != 1) || (first != 0 && first != 1)) {
            throw HttpError(422, "seats are 0 or 1");
        }
        session->kind = Session::Kind::Game;
        session->game.emplace(NewGameConfig{session->variant, session->mode, seed, first});
        session->rng.emplace(substream_seed(seed, 2));
    }

    {
        std::lock_guard lock(sessions_mutex_);
        do {
            session->id = fresh_id();
        } while (sessions_.contains(session->id));
        sessions_.emplace(session->id, session);
    }
    std::lock_guard lock(session->mutex);
    nlohmann::json reply;
    if (session->kind == Session::Kind::Game && session->game->state().to_move == session->engine_seat) {
        engine_act(*session, reply);
    }
    snapshot(*session);
    auto out = describe(*session);
    if (!reply.is_null()) {
        out["engine_reply"] = std::move(reply);
    }
    return {201, std::move(out)};
}

HttpResponse Service::move(Session& session, const nlohmann::json& body) {
    if (!body.contains("type") || !body["type"].is_string()) {
        throw HttpError(422, "move needs a 'type'");
    }
    return session.kind == Session::Kind::Game ? game_move(session, body) : advisor_move(session, body);
}

HttpResponse Service::game_move(Session& session, const nlohmann::json& body) {
    RecordedGame& game = *session.game;
    const std::string type = body["type"].get<std::string>();
    if (game.state().over()) {
        throw HttpError(409, "game is over");
    }
    nlohmann::json out;
    if (type == "answer") {
        if (!session.pending) {
            throw HttpError(409, "no question is waiting for an answer");
        }
        const Answer a = answer_field(body);
        if (a == Answer::Explode && session.pending->y.empty()) {
            throw HttpError(422, "explode is impossible: the question has no paradox set");
        }
        const int secret = game.state().players[static_cast<std::size_t>(session.human_seat())].secret;
        if (answer_question(secret, *session.pending) != a) {
            throw HttpError(422, "that answer does not match your mystery person");
        }
        game.record_answer(*session.pending, a);
        session.pending.reset();
        session.pending_decision.reset();
    } else if (type == "question" || type == "guess") {
        if (session.pending) {
            throw HttpError(409, "answer the engine's question first");
        }
        if (game.state().to_move != session.human_seat()) {
            throw HttpError(409, "not your turn");
        }
        if (type == "question") {
            const Question q{names_field(body, "x"), names_field(body, "y")};
            try {
                validate_question(game.state(), session.human_seat(), q);
            } catch (const InvalidQuestion& e) {
                throw HttpError(422, e.what());
            }
            out["answer"] = std::string(to_string(game.ask(q)));
        } else {
            if (!body.contains("name") || !body["name"].is_string()) {
                throw HttpError(422, "guess needs a 'name'");
            }
            const auto c = Roster::standard().index_of(body["name"].get<std::string>());
            if (!c) {
                throw HttpError(422, "unknown character");
            }
            game.guess(*c);
        }
    } else {
        throw HttpError(422, "move type '" + type + "' is not allowed in a game session");
    }

    nlohmann::json reply;
    if (!game.state().over() && game.state().to_move == session.engine_seat) {
        engine_act(session, reply);
    }
    snapshot(session);
    auto described = describe(session);
    for (auto& [k, v] : out.items()) {
        described[k] = v;
    }
    if (!reply.is_null()) {
        described["engine_reply"] = std::move(reply);
    }
    return {200, std::move(described)};
}

void Service::engine_act(Session& session, nlohmann::json& reply) {
    RecordedGame& game = *session.game;
    const GameState& s = game.state();
    const int n = s.count(session.engine_seat);
    const int m = s.count(session.human_seat());
    const Decision d = table(session.mode).optimal(n, m).front();
    if (d.is_guess()) {
        const auto members = s.players[static_cast<std::size_t>(session.engine_seat)].remaining.members();
        const int pick = members[session.rng->below(members.size())];
        game.guess(pick);
        reply = {{"action", "guess"},
                 {"decision", decision_to_json(d)},
                 {"name", Roster::standard().name(pick)},
                 {"correct", game.state().winner == session.engine_seat}};
        return;
    }
    const Question q = realize_decision(s, d);
    session.pending = q;
    session.pending_decision = d;
    reply = {{"action", "question"}, {"decision", decision_to_json(d)}, {"question", question_json(q)}};
}

nlohmann::json Service::recommendation(const Session& session) const {
    const SolveTable& t = table(session.mode);
    if (!t.contains(session.mine, session.theirs)) {
        return nullptr;
    }
    auto rec = probability(t.value(session.mine, session.theirs));
    rec["optimal"] = decisions_to_json(t.optimal(session.mine, session.theirs));
    const Decision d = t.optimal(session.mine, session.theirs).front();
    const auto up = session.faces.members();
    if (session.mine == 1 && up.size() == 1) {
        rec["suggestion"] = {{"action", "name"}, {"name", Roster::standard().name(up.front())}};
    } else if (d.is_guess()) {
        rec["suggestion"] = {{"action", "guess"}};
    } else if (static_cast<int>(up.size()) == session.mine) {
        // Realize over the user's faces in board order.
        GameState view;
        view.mode = session.mode;
        view.to_move = 0;
        view.players[0].remaining = session.faces;
        rec["suggestion"] = {{"action", "question"}, {"decision", decision_to_json(d)},
                             {"question", question_json(realize_decision(view, d))}};
    } else {
        rec["suggestion"] = {{"action", "question"}, {"decision", decision_to_json(d)}};
    }
    return rec;
}

HttpResponse Service::advisor_move(Session& session, const nlohmann::json& body) {
    const std::string type = body["type"].get<std::string>();
    const int top = table(session.mode).n_max();
    if (type == "flip") {
        const SuspectSet names = names_field(body, "names");
        session.faces = session.faces - names;
        session.mine = session.faces.count();
        if (session.mine == 0) {
            throw HttpError(422, "cannot flip down every face");
        }
    } else if (type == "counts") {
        const auto count = [&](const char* key, int current) {
            if (!body.contains(key)) {
                return current;
            }
            if (!body[key].is_number_integer() || body[key].get<int>() < 1 || body[key].get<int>() > top) {
                throw HttpError(422, std::string("field '") + key + "' must be in 1.." + std::to_string(top));
            }
            return body[key].get<int>();
        };
        session.mine = count("mine", session.mine);
        session.theirs = count("theirs", session.theirs);
    } else if (type == "answer") {
        const Question q{names_field(body, "x"), names_field(body, "y")};
        const Answer a = answer_field(body);
        if (!(q.x & q.y).empty()) {
            throw HttpError(422, "X and Y overlap");
        }
        if (session.mode == Mode::Bipartite && !q.y.empty()) {
            throw HttpError(422, "paradox set Y is not allowed in bipartite mode");
        }
        if (a == Answer::Explode && q.y.empty()) {
            throw HttpError(422, "explode is impossible: the question has no paradox set");
        }
        const SuspectSet part = a == Answer::Yes ? (q.x & session.faces)
                              : a == Answer::Explode ? (q.y & session.faces)
                                                     : session.faces - q.x - q.y;
        if (part.empty()) {
            throw HttpError(422, "that answer leaves no face standing");
        }
        session.faces = part;
        session.mine = part.count();
    } else {
        throw HttpError(422, "move type '" + type + "' is not allowed in an advisor session");
    }
    return {200, describe(session)};
}

nlohmann::json Service::describe(const Session& session) const {
    nlohmann::json out{{"id", session.id},
                       {"variant", std::string(to_string(session.variant))},
                       {"mode", std::string(to_string(session.mode))}};
    if (session.kind == Session::Kind::Advisor) {
        out["kind"] = "advisor";
        auto faces = nlohmann::json::array();
        for (int i = 0; i < kRosterSize; ++i) {
            faces.push_back({{"name", Roster::standard().name(i)}, {"up", session.faces.contains(i)}});
        }
        out["faces"] = std::move(faces);
        out["counts"] = {{"mine", session.mine}, {"theirs", session.theirs}};
        out["recommendation"] = recommendation(session);
        return out;
    }

    const GameState& s = session.game->state();
    const int human = session.human_seat();
    out["kind"] = "game";
    out["engine_seat"] = session.engine_seat;
    out["human_seat"] = human;
    out["turn"] = s.turn_number;
    out["counts"] = {{"human", s.count(human)}, {"engine", s.count(session.engine_seat)}};
    out["your_secret"] = Roster::standard().name(s.players[static_cast<std::size_t>(human)].secret);
    out["your_remaining"] = names_json(s.players[static_cast<std::size_t>(human)].remaining);
    out["pending_question"] = session.pending ? question_json(*session.pending) : nlohmann::json(nullptr);
    if (s.over()) {
        out["status"] = "over";
        out["winner"] = *s.winner == human ? "human" : "engine";
        out["engine_secret"] =
            Roster::standard().name(s.players[static_cast<std::size_t>(session.engine_seat)].secret);
    } else {
        out["status"] = session.pending ? "awaiting_answer" : "your_turn";
        out["winner"] = nullptr;
        if (!session.pending) {
            out["win_probability"] = probability(table(session.mode).value(s.count(human), s.count(session.engine_seat)));
        }
    }
    return out;
}

void Service::snapshot(const Session& session) const {
    if (!options_.snapshot_dir || session.kind != Session::Kind::Game) {
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(*options_.snapshot_dir, ec);
    std::ofstream out(*options_.snapshot_dir / (session.id + ".jsonl"));
    out << session.game->transcript().to_jsonl();
}

void bind_routes(httplib::Server& server, Service& service, const std::string& cors_origin) {
    const auto forward = [&service, cors_origin](const httplib::Request& req, httplib::Response& res) {
        HttpRequest request{req.method, req.path, {}, req.body};
        for (const auto& [k, v] : req.params) {
            request.query.emplace(k, v);
        }
        const HttpResponse response = service.handle(request);
        res.status = response.status;
        res.set_header("Access-Control-Allow-Origin", cors_origin);
        res.set_content(response.body.dump(), "application/json");
    };
    server.Get(".*", forward);
    server.Post(".*", forward);
    server.Delete(".*", forward);
    server.Options(".*", [cors_origin](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        res.set_header("Access-Control-Allow-Origin", cors_origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
}

}  // namespace guesswho
