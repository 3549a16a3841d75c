#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "opnmon/assembly/stitch.hpp"
#include "opnmon/core/model.hpp"

namespace opnmon::monitor {

struct PollOutcome {
    std::string domain;
    std::string url;
    bool ok = false;
    std::string error;
    std::size_t reportCount = 0;

    friend bool operator==(const PollOutcome&, const PollOutcome&) = default;
};

/// Everything one polling cycle produced.
struct CycleResult {
    core::PollingCycle cycle;
    std::map<core::E2ELinkId, assembly::E2ELinkView> views;
    std::vector<PollOutcome> polls;  // registry order
    std::chrono::microseconds wallTime{0};

    std::size_t respondingDomains() const noexcept;
    const assembly::E2ELinkView* find(const core::E2ELinkId& id) const noexcept;
};

nlohmann::json toJson(const assembly::E2ELinkView& view);
assembly::E2ELinkView viewFromJson(const nlohmann::json& j);

/// Wall time is left out so that the encoding is deterministic.
nlohmann::json toJson(const CycleResult& result);
CycleResult cycleFromJson(const nlohmann::json& j);

}  // namespace opnmon::monitor
