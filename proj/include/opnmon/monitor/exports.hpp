#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opnmon/monitor/cycle.hpp"
#include "opnmon/monitor/ledger.hpp"

namespace opnmon::monitor {

/// count/total as a percentage, rounded half-up to two decimals ("16.67").
std::string formatPercent(std::uint64_t count, std::uint64_t total);

inline constexpr std::string_view kStatsCsvHeader =
    "link_id,up_pct,down_pct,uncertain_pct,unknown_pct,total_periods";

/// One row per ledger, sorted by link id; "n/a" percentages before the
/// first period.
std::string exportStatsCsv(std::span<const AvailabilityLedger> ledgers);

struct ExportedLinkStatus {
    core::E2ELinkId id;
    core::OperationalState operational = core::OperationalState::Unknown;
    core::AdministrativeState administrative = core::AdministrativeState::Unknown;
    bool uncertain = false;
    bool hasUnknown = false;
    bool fullyReconstructed = false;

    friend bool operator==(const ExportedLinkStatus&, const ExportedLinkStatus&) = default;
};

struct StatusExport {
    std::int64_t cycleIndex = 0;
    std::int64_t timestamp = 0;
    std::vector<ExportedLinkStatus> links;

    friend bool operator==(const StatusExport&, const StatusExport&) = default;
};

/// Per-cycle status of the productive links only.
StatusExport makeStatusExport(const CycleResult& result, const std::set<core::E2ELinkId>& productive);

std::string exportStatusXml(const StatusExport& status);
std::string exportStatusXml(const CycleResult& result, const std::set<core::E2ELinkId>& productive);

/// Reads a document produced by exportStatusXml. Throws xml::XmlError or
/// core::ModelError on bad input.
StatusExport parseStatusXml(std::string_view bytes);

}  // namespace opnmon::monitor
