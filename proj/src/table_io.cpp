#include "guesswho/table_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace guesswho {

nlohmann::json decision_to_json(const Decision& d) {
    switch (d.kind()) {
        case Decision::Kind::Guess:
            return 0;
        case Decision::Kind::Split:
            return d.k();
        case Decision::Kind::Split3:
            return nlohmann::json::array({d.first(), d.second(), d.third()});
    }
    return nullptr;
}

Decision decision_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) {
        const int k = j.get<int>();
        if (k < 0) {
            throw std::invalid_argument("negative decision");
        }
        return k == 0 ? Decision::guess() : Decision::split(k);
    }
    if (j.is_array() && j.size() == 3) {
        return Decision::split3(j[0].get<int>(), j[1].get<int>(), j[2].get<int>());
    }
    throw std::invalid_argument("malformed decision: " + j.dump());
}

nlohmann::json decisions_to_json(const std::vector<Decision>& ds) {
    auto out = nlohmann::json::array();
    for (const auto& d : ds) {
        out.push_back(decision_to_json(d));
    }
    return out;
}

nlohmann::json table_to_json(const SolveTable& table) {
    auto entries = nlohmann::json::array();
    for (int n = 1; n <= table.n_max(); ++n) {
        for (int m = 1; m <= table.n_max(); ++m) {
            const auto& e = table.entry(n, m);
            entries.push_back(
                {{"n", n}, {"m", m}, {"p", e.value.str()}, {"optimal", decisions_to_json(e.optimal)}});
        }
    }
    return {{"mode", std::string(to_string(table.mode()))},
            {"n_max", table.n_max()},
            {"entries", std::move(entries)}};
}

namespace {

SolveTable assemble(Mode mode, int n_max, std::vector<std::pair<BoardState, TableEntry>> cells) {
    if (n_max < 1) {
        throw std::invalid_argument("table n_max must be >= 1");
    }
    const auto size = static_cast<std::size_t>(n_max);
    std::vector<TableEntry> entries(size * size);
    std::vector<bool> seen(size * size, false);
    for (auto& [state, entry] : cells) {
        if (state.n < 1 || state.m < 1 || state.n > n_max || state.m > n_max) {
            throw std::invalid_argument("table cell outside n_max");
        }
        const auto idx = static_cast<std::size_t>(state.n - 1) * size + static_cast<std::size_t>(state.m - 1);
        if (seen[idx]) {
            throw std::invalid_argument("duplicate table cell");
        }
        seen[idx] = true;
        entries[idx] = std::move(entry);
    }
    for (const bool s : seen) {
        if (!s) {
            throw std::invalid_argument("table is missing cells");
        }
    }
    return SolveTable(mode, n_max, std::move(entries));
}

std::string decision_token(const Decision& d) {
    switch (d.kind()) {
        case Decision::Kind::Guess:
            return "0";
        case Decision::Kind::Split:
            return std::to_string(d.k());
        case Decision::Kind::Split3:
            return std::to_string(d.first()) + ":" + std::to_string(d.second()) + ":" +
                   std::to_string(d.third());
    }
    return {};
}

Decision decision_from_token(const std::string& token) {
    if (token.find(':') == std::string::npos) {
        return decision_from_json(std::stoi(token));
    }
    int i = 0;
    int j = 0;
    int k = 0;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(token);
    if (!(in >> i >> c1 >> j >> c2 >> k) || c1 != ':' || c2 != ':') {
        throw std::invalid_argument("malformed decision token '" + token + "'");
    }
    return Decision::split3(i, j, k);
}

}  // namespace

SolveTable table_from_json(const nlohmann::json& j) {
    const Mode mode = parse_mode(j.at("mode").get<std::string>());
    const int n_max = j.at("n_max").get<int>();
    std::vector<std::pair<BoardState, TableEntry>> cells;
    for (const auto& e : j.at("entries")) {
        TableEntry entry{Rational::from_string(e.at("p").get<std::string>()), {}};
        for (const auto& d : e.at("optimal")) {
            entry.optimal.push_back(decision_from_json(d));
        }
        cells.emplace_back(BoardState{e.at("n").get<int>(), e.at("m").get<int>()}, std::move(entry));
    }
    return assemble(mode, n_max, std::move(cells));
}

std::string table_to_csv(const SolveTable& table) {
    std::ostringstream out;
    out << "# mode=" << to_string(table.mode()) << " n_max=" << table.n_max() << "\n";
    out << "n,m,p,optimal\n";
    for (int n = 1; n <= table.n_max(); ++n) {
        for (int m = 1; m <= table.n_max(); ++m) {
            const auto& e = table.entry(n, m);
            out << n << ',' << m << ',' << e.value.str() << ',';
            for (std::size_t i = 0; i < e.optimal.size(); ++i) {
                out << (i ? " " : "") << decision_token(e.optimal[i]);
            }
            out << '\n';
        }
    }
    return out.str();
}

SolveTable table_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::optional<Mode> mode;
    int n_max = 0;
    std::vector<std::pair<BoardState, TableEntry>> cells;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            std::istringstream meta(line.substr(1));
            std::string kv;
            while (meta >> kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    continue;
                }
                if (kv.substr(0, eq) == "mode") {
                    mode = parse_mode(kv.substr(eq + 1));
                } else if (kv.substr(0, eq) == "n_max") {
                    n_max = std::stoi(kv.substr(eq + 1));
                }
            }
            continue;
        }
        if (line == "n,m,p,optimal") {
            continue;
        }
        std::istringstream row(line);
        std::string n_s;
        std::string m_s;
        std::string p_s;
        std::string opt_s;
        if (!std::getline(row, n_s, ',') || !std::getline(row, m_s, ',') || !std::getline(row, p_s, ',')) {
            throw std::invalid_argument("malformed CSV row: " + line);
        }
        std::getline(row, opt_s);
        TableEntry entry{Rational::from_string(p_s), {}};
        std::istringstream toks(opt_s);
        std::string tok;
        while (toks >> tok) {
            entry.optimal.push_back(decision_from_token(tok));
        }
        cells.emplace_back(BoardState{std::stoi(n_s), std::stoi(m_s)}, std::move(entry));
    }
    if (!mode) {
        throw std::invalid_argument("CSV table missing '# mode=... n_max=...' header");
    }
    return assemble(*mode, n_max, std::move(cells));
}

TableFormat parse_table_format(std::string_view text) {
    if (text == "json") {
        return TableFormat::Json;
    }
    if (text == "csv") {
        return TableFormat::Csv;
    }
    throw std::invalid_argument("unknown format '" + std::string(text) + "' (expected json or csv)");
}

std::string render_table(const SolveTable& table, TableFormat format) {
    if (format == TableFormat::Csv) {
        return table_to_csv(table);
    }
    return table_to_json(table).dump() + "\n";
}

SolveTable cached_solve(Mode mode, int n_max, const std::optional<std::filesystem::path>& dir) {
    if (!dir) {
        return solve(mode, n_max);
    }
    const auto path = *dir / ("table-" + std::string(to_string(mode)) + "-" + std::to_string(n_max) + ".json");
    if (std::ifstream in(path); in) {
        try {
            auto table = table_from_json(nlohmann::json::parse(in));
            if (table.mode() == mode && table.n_max() == n_max) {
                return table;
            }
        } catch (const std::exception&) {
            // fall through and rebuild
        }
    }
    auto table = solve(mode, n_max);
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    if (std::ofstream out(path); out) {
        out << table_to_json(table).dump() << "\n";
    }
    return table;
}

}  // namespace guesswho
