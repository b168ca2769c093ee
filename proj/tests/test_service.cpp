#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "guesswho/service.hpp"
#include "guesswho/table_io.hpp"

using namespace guesswho;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path cache_path() {
    static const fs::path p = [] {
        const fs::path dir = fs::temp_directory_path() / "gw-test-service-cache";
        fs::create_directories(dir);
        return dir;
    }();
    return p;
}

Service::Options base_options() {
    Service::Options o;
    o.table_cache = cache_path();
    return o;
}

Service& shared_service() {
    static Service s(base_options());
    return s;
}

HttpResponse get(Service& s, const std::string& path, std::map<std::string, std::string> query = {}) {
    return s.handle({"GET", path, std::move(query), ""});
}

HttpResponse post(Service& s, const std::string& path, const json& body) {
    return s.handle({"POST", path, {}, body.dump()});
}

std::string answer_for(const json& described) {
    const std::string secret = described["your_secret"];
    const auto& q = described["pending_question"];
    const auto has = [&](const json& list) { return std::find(list.begin(), list.end(), secret) != list.end(); };
    if (has(q["x"])) {
        return "yes";
    }
    if (has(q["y"])) {
        return "explode";
    }
    return "no";
}

// Human side of a game: answers honestly, asks random legal questions and
// names the last face standing. Returns the final description.
json play_out(Service& s, json state, std::mt19937& gen, const std::function<void(const json&)>& check) {
    const std::string path = "/v1/session/" + state["id"].get<std::string>() + "/move";
    const bool tri = state["mode"] == "tri";
    for (int step = 0; step < 200 && state["status"] != "over"; ++step) {
        json move;
        if (state["status"] == "awaiting_answer") {
            move = {{"type", "answer"}, {"answer", answer_for(state)}};
        } else {
            const auto remaining = state["your_remaining"].get<std::vector<std::string>>();
            if (remaining.size() == 1) {
                move = {{"type", "guess"}, {"name", remaining.front()}};
            } else {
                json x = json::array();
                json y = json::array();
                while (x.size() + y.size() == 0 || x.size() + y.size() == remaining.size()) {
                    x = json::array();
                    y = json::array();
                    for (const auto& name : remaining) {
                        const auto r = gen() % 3;
                        if (r == 0) {
                            x.push_back(name);
                        } else if (r == 1 && tri) {
                            y.push_back(name);
                        }
                    }
                }
                move = {{"type", "question"}, {"x", x}, {"y", y}};
            }
        }
        const auto r = post(s, path, move);
        EXPECT_EQ(r.status, 200) << move.dump() << " -> " << r.body.dump();
        if (r.status != 200) {
            return r.body;
        }
        check(r.body);
        state = r.body;
    }
    return state;
}

}  // namespace

TEST(ValueEndpoint, Examples) {
    auto& s = shared_service();
    const auto r = get(s, "/v1/value", {{"mode", "bi"}, {"n", "4"}, {"m", "4"}});
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body["p"], "9/16");
    EXPECT_EQ(r.body["decimal"], "0.562500");
    EXPECT_EQ(r.body["optimal"], json::parse("[1]"));
    const auto t = get(s, "/v1/value", {{"mode", "tri"}, {"n", "3"}, {"m", "5"}});
    EXPECT_EQ(t.body["p"], "4/5");
    EXPECT_EQ(get(s, "/v1/value", {{"mode", "bi"}, {"n", "6"}, {"m", "4"}}).body["optimal"], json::parse("[3]"));
}

TEST(ValueEndpoint, Errors) {
    auto& s = shared_service();
    EXPECT_EQ(get(s, "/v1/value", {{"mode", "bi"}, {"n", "4"}}).status, 400);
    EXPECT_EQ(get(s, "/v1/value", {{"mode", "bi"}, {"n", "four"}, {"m", "4"}}).status, 400);
    EXPECT_EQ(get(s, "/v1/value", {{"mode", "bi"}, {"n", "25"}, {"m", "4"}}).status, 400);
    EXPECT_EQ(get(s, "/v1/value", {{"mode", "bi"}, {"n", "0"}, {"m", "4"}}).status, 400);
    EXPECT_EQ(get(s, "/v1/value", {{"mode", "quad"}, {"n", "1"}, {"m", "4"}}).status, 422);
    EXPECT_EQ(get(s, "/v2/value").status, 404);
    EXPECT_EQ(get(s, "/v1/session/nope").status, 404);
    EXPECT_EQ(s.handle({"POST", "/v1/session", {}, "not json"}).status, 400);
}

TEST(GameSession, StartingCounts) {
    auto& s = shared_service();
    const auto card = post(s, "/v1/session", {{"variant", "card"}, {"mode", "bi"}, {"engine_seat", 1}, {"seed", 4}});
    ASSERT_EQ(card.status, 201) << card.body.dump();
    EXPECT_EQ(card.body["counts"]["human"], 23);
    EXPECT_EQ(card.body["counts"]["engine"], 23);
    EXPECT_EQ(card.body["status"], "your_turn");
    const auto slider = post(s, "/v1/session", {{"variant", "slider"}, {"mode", "tri"}, {"engine_seat", 1}, {"seed", 4}});
    EXPECT_EQ(slider.body["counts"]["human"], 24);
    EXPECT_EQ(slider.body["win_probability"]["p"], "61/96");
    EXPECT_EQ(post(s, "/v1/session", {{"mode", "hex"}, {"engine_seat", 0}}).status, 422);
    EXPECT_EQ(post(s, "/v1/session", {{"mode", "bi"}, {"engine_seat", 3}}).status, 422);
    EXPECT_EQ(post(s, "/v1/session", {{"mode", "bi"}}).status, 422);
}

TEST(GameSession, EngineSecretStaysHiddenUntilTheEnd) {
    auto& s = shared_service();
    const auto r = post(s, "/v1/session", {{"mode", "bi"}, {"engine_seat", 0}, {"seed", 1}});
    EXPECT_FALSE(r.body.contains("engine_secret"));
    EXPECT_EQ(r.body["status"], "awaiting_answer");
    EXPECT_EQ(r.body["engine_reply"]["action"], "question");
    EXPECT_FALSE(r.body.dump().find("\"secret\"") != std::string::npos);
}

TEST(GameSession, TurnAndAnswerErrors) {
    auto& s = shared_service();
    const auto r = post(s, "/v1/session", {{"mode", "bi"}, {"engine_seat", 0}, {"seed", 2}});
    const std::string path = "/v1/session/" + r.body["id"].get<std::string>() + "/move";
    // Engine is waiting for an answer, so a question is out of turn.
    EXPECT_EQ(post(s, path, {{"type", "question"}, {"x", {"Alex"}}}).status, 409);
    EXPECT_EQ(post(s, path, {{"type", "answer"}, {"answer", "explode"}}).status, 422);
    const std::string honest = answer_for(r.body);
    EXPECT_EQ(post(s, path, {{"type", "answer"}, {"answer", honest == "yes" ? "no" : "yes"}}).status, 422);
    EXPECT_EQ(post(s, path, {{"type", "flip"}}).status, 422);
    const auto ok = post(s, path, {{"type", "answer"}, {"answer", honest}});
    ASSERT_EQ(ok.status, 200);
    EXPECT_EQ(ok.body["status"], "your_turn");
    EXPECT_EQ(post(s, path, {{"type", "answer"}, {"answer", "yes"}}).status, 409);
    EXPECT_EQ(post(s, path, {{"type", "question"}, {"x", {"Nobody"}}}).status, 422);
    EXPECT_EQ(post(s, path, {{"type", "question"}, {"x", {"Alex"}}, {"y", {"Bea"}}}).status, 422);
}

TEST(GameSession, EngineFollowsTheTableAcrossSeeds) {
    auto& s = shared_service();
    std::mt19937 gen(2024);
    int guesses_seen = 0;
    for (int seed = 0; seed < 1000; ++seed) {
        const std::string mode = seed % 2 ? "tri" : "bi";
        const std::string variant = seed % 4 < 2 ? "slider" : "card";
        auto r = post(s, "/v1/session",
                      {{"mode", mode}, {"variant", variant}, {"engine_seat", seed % 3 == 0 ? 0 : 1}, {"seed", seed}});
        ASSERT_EQ(r.status, 201);
        const SolveTable& t = s.table(parse_mode(mode));
        // The engine acts on the counts it reports: its question is still
        // pending and a guess leaves both boards as they were.
        const auto check = [&](const json& body) {
            if (!body.contains("engine_reply")) {
                return;
            }
            const int engine_count = body["counts"]["engine"];
            const int human_count = body["counts"]["human"];
            const auto& reply = body["engine_reply"];
            const auto optimal = decisions_to_json(t.optimal(engine_count, human_count));
            EXPECT_NE(std::find(optimal.begin(), optimal.end(), reply["decision"]), optimal.end())
                << engine_count << "," << human_count << " " << reply.dump();
            if (human_count == 1 || engine_count == 1) {
                EXPECT_EQ(reply["action"], "guess");
            }
            guesses_seen += reply["action"] == "guess";
        };
        check(r.body);
        const json end = play_out(s, r.body, gen, check);
        ASSERT_EQ(end["status"], "over") << end.dump();
        EXPECT_TRUE(end.contains("engine_secret"));
        s.handle({"DELETE", "/v1/session/" + end["id"].get<std::string>(), {}, ""});
    }
    EXPECT_GT(guesses_seen, 0);
}

TEST(AdvisorSession, RecommendsFromCounts) {
    auto& s = shared_service();
    const auto r = post(s, "/v1/session", {{"mode", "bi"}, {"advisor", true}});
    ASSERT_EQ(r.status, 201);
    EXPECT_EQ(r.body["counts"]["mine"], 24);
    const std::string path = "/v1/session/" + r.body["id"].get<std::string>() + "/move";
    const auto m = post(s, path, {{"type", "counts"}, {"mine", 6}, {"theirs", 4}});
    ASSERT_EQ(m.status, 200);
    EXPECT_EQ(m.body["recommendation"]["p"], "1/2");
    EXPECT_EQ(m.body["recommendation"]["optimal"], json::parse("[3]"));
    EXPECT_EQ(post(s, path, {{"type", "counts"}, {"mine", 0}}).status, 422);
    EXPECT_EQ(post(s, path, {{"type", "guess"}}).status, 422);
}

TEST(AdvisorSession, FlipsAndAnswersNarrowTheBoard) {
    auto& s = shared_service();
    const auto r = post(s, "/v1/session", {{"mode", "tri"}, {"advisor", true}, {"variant", "card"}, {"own_card", "Alex"}});
    ASSERT_EQ(r.status, 201);
    EXPECT_EQ(r.body["counts"]["mine"], 23);
    EXPECT_EQ(r.body["counts"]["theirs"], 23);
    EXPECT_EQ(r.body["faces"][0]["up"], false);
    const std::string path = "/v1/session/" + r.body["id"].get<std::string>() + "/move";
    auto m = post(s, path, {{"type", "answer"}, {"x", {"Bea", "Cole"}}, {"y", {"Dana"}}, {"answer", "explode"}});
    ASSERT_EQ(m.status, 200);
    EXPECT_EQ(m.body["counts"]["mine"], 1);
    EXPECT_EQ(m.body["recommendation"]["suggestion"]["name"], "Dana");
    EXPECT_EQ(post(s, "/v1/session", {{"mode", "bi"}, {"advisor", true}, {"variant", "card"}}).status, 422);

    const auto b = post(s, "/v1/session", {{"mode", "bi"}, {"advisor", true}});
    const std::string bpath = "/v1/session/" + b.body["id"].get<std::string>() + "/move";
    m = post(s, bpath, {{"type", "flip"}, {"names", {"Alex", "Bea", "Cole", "Dana", "Eli", "Faye", "Gus", "Hana"}}});
    EXPECT_EQ(m.body["counts"]["mine"], 16);
    const auto& sug = m.body["recommendation"]["suggestion"];
    EXPECT_EQ(sug["action"], "question");
    EXPECT_EQ(sug["question"]["x"].size(), static_cast<std::size_t>(sug["decision"].get<int>()));
    EXPECT_EQ(sug["question"]["x"][0], "Ivo");
    EXPECT_EQ(post(s, bpath, {{"type", "answer"}, {"x", {"Ivo"}}, {"answer", "explode"}}).status, 422);
}

TEST(Sessions, ExpireAfterTheTtl) {
    auto now = Service::Clock::now();
    auto options = base_options();
    options.session_ttl = std::chrono::seconds(60);
    options.clock = [&now] { return now; };
    Service s(options);
    const auto r = post(s, "/v1/session", {{"mode", "bi"}, {"advisor", true}});
    const std::string path = "/v1/session/" + r.body["id"].get<std::string>();
    now += std::chrono::seconds(30);
    EXPECT_EQ(get(s, path).status, 200);
    now += std::chrono::seconds(59);
    EXPECT_EQ(get(s, path).status, 200);
    now += std::chrono::seconds(61);
    EXPECT_EQ(get(s, path).status, 404);
    EXPECT_EQ(s.session_count(), 0u);
}

TEST(Sessions, DeleteRemoves) {
    Service s(base_options());
    const auto r = post(s, "/v1/session", {{"mode", "tri"}, {"advisor", true}});
    const std::string path = "/v1/session/" + r.body["id"].get<std::string>();
    EXPECT_EQ(s.handle({"DELETE", path, {}, ""}).status, 200);
    EXPECT_EQ(get(s, path).status, 404);
}

TEST(Sessions, SnapshotsReplayToTheReportedOutcome) {
    const fs::path dir = fs::temp_directory_path() / "gw-test-snapshots";
    fs::remove_all(dir);
    auto options = base_options();
    options.snapshot_dir = dir;
    Service s(options);
    std::mt19937 gen(5);
    const auto r = post(s, "/v1/session", {{"mode", "tri"}, {"variant", "card"}, {"engine_seat", 0}, {"seed", 77}});
    const json end = play_out(s, r.body, gen, [](const json&) {});
    ASSERT_EQ(end["status"], "over");
    std::ifstream in(dir / (end["id"].get<std::string>() + ".jsonl"));
    std::stringstream text;
    text << in.rdbuf();
    const GameState final_state = replay(Transcript::from_jsonl(text.str()));
    ASSERT_TRUE(final_state.over());
    EXPECT_EQ(*final_state.winner == end["human_seat"].get<int>() ? "human" : "engine", end["winner"]);
    fs::remove_all(dir);
}

TEST(Http, RoundTripOverLoopback) {
    Service service(base_options());
    httplib::Server server;
    bind_routes(server, service);
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    const auto res = client.Get("/v1/value?mode=bi&n=10&m=4");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body)["p"], "2/5");
    EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
    const auto created = client.Post("/v1/session", R"({"mode":"bi","advisor":true})", "application/json");
    ASSERT_TRUE(created);
    EXPECT_EQ(created->status, 201);
    const auto pre = client.Options("/v1/session");
    ASSERT_TRUE(pre);
    EXPECT_EQ(pre->status, 204);

    server.stop();
    worker.join();
}
