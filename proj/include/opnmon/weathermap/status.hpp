#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "opnmon/assembly/stitch.hpp"
#include "opnmon/weathermap/topology.hpp"

namespace opnmon::weathermap {

enum class AbstractLinkStatus : std::uint8_t { Up, Warning, Down, Unknown, TopologyUnknown };

inline constexpr std::array kAbstractStatuses{AbstractLinkStatus::Up, AbstractLinkStatus::Warning,
                                              AbstractLinkStatus::Down, AbstractLinkStatus::Unknown,
                                              AbstractLinkStatus::TopologyUnknown};

std::string_view toString(AbstractLinkStatus s) noexcept;
std::string_view colorName(AbstractLinkStatus s) noexcept;  // GREEN, YELLOW, RED, BLUE, MAGENTA
std::string_view colorHex(AbstractLinkStatus s) noexcept;

/// Combines the operational states of one abstract link's E2E links;
/// nullopt marks an id the E2E topology does not know.
///
///   all absent                  -> TOPOLOGY_UNKNOWN
///   (absent counts as UNKNOWN from here on)
///   all UP                      -> UP
///   some UP or DEGRADED         -> WARNING
///   all DOWN                    -> DOWN
///   otherwise (UNKNOWN + DOWN)  -> UNKNOWN
AbstractLinkStatus combineMemberStates(std::span<const std::optional<core::OperationalState>> members);

AbstractLinkStatus computeAbstractStatus(const AbstractLink& link,
                                         const std::map<core::E2ELinkId, assembly::E2ELinkView>& views);

class SelectionError : public Error {
public:
    using Error::Error;
};

/// Link id -> that link. Tier-1 node -> its link to the Tier-0 node.
/// Tier-0 node -> every link touching it. Throws SelectionError otherwise.
std::vector<AbstractLink> selectionScope(std::string_view selected, const AbstractTopology& topology);

}  // namespace opnmon::weathermap
