#include "opnmon/weathermap/status.hpp"

#include <algorithm>

namespace opnmon::weathermap {

using core::OperationalState;

std::string_view toString(AbstractLinkStatus s) noexcept {
    switch (s) {
        case AbstractLinkStatus::Up: return "UP";
        case AbstractLinkStatus::Warning: return "WARNING";
        case AbstractLinkStatus::Down: return "DOWN";
        case AbstractLinkStatus::Unknown: return "UNKNOWN";
        case AbstractLinkStatus::TopologyUnknown: return "TOPOLOGY_UNKNOWN";
    }
    return "?";
}

std::string_view colorName(AbstractLinkStatus s) noexcept {
    switch (s) {
        case AbstractLinkStatus::Up: return "GREEN";
        case AbstractLinkStatus::Warning: return "YELLOW";
        case AbstractLinkStatus::Down: return "RED";
        case AbstractLinkStatus::Unknown: return "BLUE";
        case AbstractLinkStatus::TopologyUnknown: return "MAGENTA";
    }
    return "?";
}

std::string_view colorHex(AbstractLinkStatus s) noexcept {
    switch (s) {
        case AbstractLinkStatus::Up: return "#00c000";
        case AbstractLinkStatus::Warning: return "#ffd700";
        case AbstractLinkStatus::Down: return "#e00000";
        case AbstractLinkStatus::Unknown: return "#1e64ff";
        case AbstractLinkStatus::TopologyUnknown: return "#ff00ff";
    }
    return "#000000";
}

AbstractLinkStatus combineMemberStates(std::span<const std::optional<OperationalState>> members) {
    if (std::none_of(members.begin(), members.end(), [](const auto& m) { return m.has_value(); })) {
        return AbstractLinkStatus::TopologyUnknown;
    }
    bool anyUp = false, allUp = true, anyDegraded = false, allDown = true;
    for (const auto& m : members) {
        const OperationalState s = m.value_or(OperationalState::Unknown);
        anyUp |= s == OperationalState::Up;
        allUp &= s == OperationalState::Up;
        anyDegraded |= s == OperationalState::Degraded;
        allDown &= s == OperationalState::Down;
    }
    if (allUp) return AbstractLinkStatus::Up;
    if (anyUp || anyDegraded) return AbstractLinkStatus::Warning;
    if (allDown) return AbstractLinkStatus::Down;
    return AbstractLinkStatus::Unknown;
}

AbstractLinkStatus computeAbstractStatus(const AbstractLink& link,
                                         const std::map<core::E2ELinkId, assembly::E2ELinkView>& views) {
    std::vector<std::optional<OperationalState>> members;
    for (const auto& id : link.e2eLinkIds) {
        auto it = views.find(id);
        members.push_back(it == views.end() ? std::nullopt : std::optional(it->second.aggregatedOperational));
    }
    return combineMemberStates(members);
}

std::vector<AbstractLink> selectionScope(std::string_view selected, const AbstractTopology& topology) {
    if (const auto* link = topology.findLink(selected)) return {*link};
    const auto* node = topology.findNode(selected);
    if (!node) throw SelectionError("unknown selection '" + std::string(selected) + "'");
    const std::string& t0 = topology.tier0().id;
    std::vector<AbstractLink> out;
    for (const auto& l : topology.links) {
        if (node->tier == 0 ? l.touches(t0) : (l.touches(node->id) && l.touches(t0))) out.push_back(l);
    }
    return out;
}

}  // namespace opnmon::weathermap
