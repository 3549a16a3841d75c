#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opnmon/assembly/stitch.hpp"
#include "opnmon/monitor/cycle.hpp"

namespace opnmon::monitor {

enum class Window { Weekly, Monthly };

std::string_view toString(Window w) noexcept;

/// Start of the window holding `timestamp`: weeks begin Monday 00:00 UTC,
/// months on the 1st at 00:00 UTC.
std::int64_t windowStart(Window window, std::int64_t timestamp);

enum class PeriodClass { CertainUp, Down, Uncertain, Unknown };

/// Which counter a polling period of `view` credits.
///   aggregated UNKNOWN                          -> Unknown
///   not fully reconstructed or any UNKNOWN part -> Uncertain (whatever the computed state)
///   DOWN                                        -> Down
///   UP or DEGRADED                              -> CertainUp
PeriodClass classify(const assembly::E2ELinkView& view) noexcept;

struct AvailabilityLedger {
    core::E2ELinkId linkId;
    Window window = Window::Weekly;
    std::int64_t windowStart = 0;
    std::uint64_t certainUp = 0;
    std::uint64_t down = 0;
    std::uint64_t uncertain = 0;
    std::uint64_t unknown = 0;
    std::uint64_t total = 0;

    void record(PeriodClass c) noexcept;
    bool conserved() const noexcept { return certainUp + down + uncertain + unknown == total; }
    /// certain up-time over monitored time; empty before the first period.
    std::optional<double> availability() const noexcept;

    friend bool operator==(const AvailabilityLedger&, const AvailabilityLedger&) = default;
};

/// Current weekly and monthly ledgers of every productive link, plus the
/// ledgers of windows that have already closed.
class LedgerBook {
public:
    void track(const core::E2ELinkId& link, std::int64_t at);
    void record(const core::E2ELinkId& link, std::int64_t cycleStart, PeriodClass c);

    const AvailabilityLedger* current(const core::E2ELinkId& link, Window window) const noexcept;
    std::vector<AvailabilityLedger> currentLedgers(Window window) const;
    const std::vector<AvailabilityLedger>& closed() const noexcept { return closed_; }

private:
    AvailabilityLedger& slot(const core::E2ELinkId& link, Window window, std::int64_t at);

    std::map<std::pair<core::E2ELinkId, Window>, AvailabilityLedger> current_;
    std::vector<AvailabilityLedger> closed_;
};

/// Credits one period to each productive link for the cycle.
void updateLedgers(const CycleResult& result, LedgerBook& ledgers, const std::set<core::E2ELinkId>& productive);

}  // namespace opnmon::monitor
