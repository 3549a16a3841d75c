#include "opnmon/mp/snapshot.hpp"

namespace opnmon::mp {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SnapshotError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string stringField(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) throw SnapshotError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

}  // namespace

json toJson(const LocalSnapshot& snapshot) {
    json entries = json::array();
    for (const auto& e : snapshot.entries) {
        entries.push_back({{"local_link_id", e.localLinkId},
                           {"e2e_link_id", e.e2eLinkId},
                           {"link_type", core::toString(e.linkType)},
                           {"dp_a", e.dpA},
                           {"dp_b", e.dpB},
                           {"vendor_state", e.vendorState},
                           {"admin_state_raw", e.adminStateRaw}});
    }
    return {{"domain", snapshot.domain}, {"snapshot_time", snapshot.snapshotTime}, {"entries", std::move(entries)}};
}

LocalSnapshot snapshotFromJson(const json& j) {
    LocalSnapshot s;
    s.domain = stringField(j, "domain");
    const json& t = field(j, "snapshot_time");
    if (!t.is_number_integer()) throw SnapshotError("field 'snapshot_time' must be an integer");
    s.snapshotTime = t.get<std::int64_t>();
    const json& entries = field(j, "entries");
    if (!entries.is_array()) throw SnapshotError("field 'entries' must be an array");
    for (const json& e : entries) {
        SnapshotEntry entry;
        entry.localLinkId = stringField(e, "local_link_id");
        entry.e2eLinkId = stringField(e, "e2e_link_id");
        const std::string type = stringField(e, "link_type");
        auto linkType = core::parseLinkType(type);
        if (!linkType) throw SnapshotError("unknown link_type '" + type + "'");
        entry.linkType = *linkType;
        entry.dpA = stringField(e, "dp_a");
        entry.dpB = stringField(e, "dp_b");
        entry.vendorState = stringField(e, "vendor_state");
        entry.adminStateRaw = e.contains("admin_state_raw") ? stringField(e, "admin_state_raw") : std::string();
        s.entries.push_back(std::move(entry));
    }
    return s;
}

LocalSnapshot parseSnapshot(std::string_view text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SnapshotError("snapshot is not valid JSON");
    try {
        return snapshotFromJson(j);
    } catch (const json::exception& e) {
        throw SnapshotError(std::string("snapshot schema error: ") + e.what());
    }
}

std::string serializeSnapshot(const LocalSnapshot& snapshot) { return toJson(snapshot).dump(2) + "\n"; }

json toJson(const core::StateMappingTable& table) {
    json op = json::object();
    for (const auto& [vendor, state] : table.operational) op[vendor] = core::toString(state);
    json admin = json::object();
    for (const auto& [raw, state] : table.administrative) admin[raw] = core::toString(state);
    return {{"operational", std::move(op)}, {"administrative", std::move(admin)}};
}

core::StateMappingTable mappingFromJson(const json& j) {
    core::StateMappingTable table;
    if (j.is_null()) return table;
    if (!j.is_object()) throw SnapshotError("mapping table must be an object");
    if (j.contains("operational")) {
        for (const auto& [vendor, state] : j.at("operational").items()) {
            if (!state.is_string()) throw SnapshotError("mapping values must be strings");
            auto s = core::parseOperationalState(state.get<std::string>());
            if (!s) throw SnapshotError("mapping targets unknown operational state '" + state.get<std::string>() + "'");
            table.operational.emplace(vendor, *s);
        }
    }
    if (j.contains("administrative")) {
        for (const auto& [raw, state] : j.at("administrative").items()) {
            if (!state.is_string()) throw SnapshotError("mapping values must be strings");
            auto s = core::parseAdministrativeState(state.get<std::string>());
            if (!s) {
                throw SnapshotError("mapping targets unknown administrative state '" + state.get<std::string>() + "'");
            }
            table.administrative.emplace(raw, *s);
        }
    }
    return table;
}

}  // namespace opnmon::mp
