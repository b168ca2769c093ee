#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "guesswho/engine.hpp"
#include "guesswho/solve_table.hpp"

namespace httplib {
class Server;
}

namespace guesswho {

struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    nlohmann::json body;
};

/// JSON service behind the browser companion: exact values, engine games and
/// advisor sessions. Routing lives here so it can be exercised without sockets.
///
///   GET    /v1/value?mode=bi|tri&n=&m=
///   POST   /v1/session                 {variant, mode, engine_seat | advisor, seed?, first_player?, own_card?}
///   GET    /v1/session/{id}
///   POST   /v1/session/{id}/move       {type: question|guess|answer|flip|counts, ...}
///   DELETE /v1/session/{id}
class Service {
public:
    using Clock = std::chrono::steady_clock;

    struct Options {
        int n_max = 24;
        std::chrono::seconds session_ttl{std::chrono::hours(2)};
        /// When set, each game session's transcript is written to <dir>/<id>.jsonl after every move.
        std::optional<std::filesystem::path> snapshot_dir;
        std::optional<std::filesystem::path> table_cache;
        std::function<Clock::time_point()> clock = [] { return Clock::now(); };
    };

    explicit Service(Options options);
    ~Service();

    HttpResponse handle(const HttpRequest& request);

    const SolveTable& table(Mode mode) const;
    std::size_t session_count() const;

private:
    struct Session;

    HttpResponse get_value(const HttpRequest& request) const;
    HttpResponse create_session(const nlohmann::json& body);
    HttpResponse move(Session& session, const nlohmann::json& body);
    HttpResponse game_move(Session& session, const nlohmann::json& body);
    HttpResponse advisor_move(Session& session, const nlohmann::json& body);

    void engine_act(Session& session, nlohmann::json& reply);
    nlohmann::json describe(const Session& session) const;
    nlohmann::json recommendation(const Session& session) const;
    void snapshot(const Session& session) const;

    std::shared_ptr<Session> find(const std::string& id);
    void purge_expired();
    std::string fresh_id();

    Options options_;
    SolveTable bipartite_;
    SolveTable tripartite_;

    mutable std::mutex sessions_mutex_;
    std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t id_counter_ = 0;
    std::uint64_t id_salt_;
};

/// Routes every method on `server` through `service`, adding CORS headers for
/// `cors_origin`.
void bind_routes(httplib::Server& server, Service& service, const std::string& cors_origin = "*");

}  // namespace guesswho
