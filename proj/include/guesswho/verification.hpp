#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace guesswho {

/// Outcome of one verification sweep. A report never throws on findings;
/// `failures` carries them. `hard` marks checks whose failure makes a
/// verification run fail by default.
struct VerificationReport {
    std::string check;
    bool hard = true;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    nlohmann::json details = nlohmann::json::object();

    bool passed() const { return failures.empty(); }
    nlohmann::json to_json() const;
};

}  // namespace guesswho
