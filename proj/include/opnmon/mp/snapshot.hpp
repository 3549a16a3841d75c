#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "opnmon/core/model.hpp"

namespace opnmon::mp {

struct SnapshotEntry {
    std::string localLinkId;
    std::string e2eLinkId;
    core::MonitoredLinkType linkType = core::MonitoredLinkType::DomainLink;
    std::string dpA;
    std::string dpB;
    std::string vendorState;
    std::string adminStateRaw;

    friend bool operator==(const SnapshotEntry&, const SnapshotEntry&) = default;
};

/// What a domain's NMS adapter hands to its measurement point.
struct LocalSnapshot {
    std::string domain;
    std::int64_t snapshotTime = 0;
    std::vector<SnapshotEntry> entries;

    friend bool operator==(const LocalSnapshot&, const LocalSnapshot&) = default;
};

class SnapshotError : public Error {
public:
    using Error::Error;
};

nlohmann::json toJson(const LocalSnapshot& snapshot);
LocalSnapshot snapshotFromJson(const nlohmann::json& j);

/// Throws SnapshotError on syntax or schema problems.
LocalSnapshot parseSnapshot(std::string_view text);
std::string serializeSnapshot(const LocalSnapshot& snapshot);

nlohmann::json toJson(const core::StateMappingTable& table);
core::StateMappingTable mappingFromJson(const nlohmann::json& j);

}  // namespace opnmon::mp
