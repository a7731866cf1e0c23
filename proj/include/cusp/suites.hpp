#pragma once

#include "cusp/scene.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace cusp {

inline constexpr const char *kReportSchema = "cusp-report/1";

/// One checked property with its measured values; `anchor` names the property.
struct Assertion {
    std::string anchor;
    std::string instance;
    bool pass = false;
    std::string bound;
    nlohmann::json measured = nlohmann::json::object();
    nlohmann::json witness; ///< null when the assertion holds
};

struct SuiteReport {
    std::string suite;
    std::string scene;
    std::uint64_t seed = 0;
    std::vector<Assertion> assertions;
    nlohmann::json tables = nlohmann::json::object(); ///< named row sets such as a filling sweep

    bool pass() const;
    nlohmann::json to_json() const;
};

/// Runs a named suite; throws SpecError for an unknown suite or unmet scene requirements.
SuiteReport run_suite(const Scene &scene, const std::string &suite, unsigned jobs = 1);

} // namespace cusp
