#include "opnmon/monitor/ledger.hpp"

#include <chrono>

namespace opnmon::monitor {

namespace {

constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kWeek = 7 * kDay;
// 1970-01-05 was the first Monday after the epoch.
constexpr std::int64_t kFirstMonday = 4 * kDay;

std::int64_t floorDiv(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

std::string_view toString(Window w) noexcept { return w == Window::Weekly ? "weekly" : "monthly"; }

std::int64_t windowStart(Window window, std::int64_t timestamp) {
    if (window == Window::Weekly) {
        return floorDiv(timestamp - kFirstMonday, kWeek) * kWeek + kFirstMonday;
    }
    using namespace std::chrono;
    const sys_days day{days{floorDiv(timestamp, kDay)}};
    const year_month_day ymd{day};
    const sys_days first{ymd.year() / ymd.month() / 1};
    return static_cast<std::int64_t>(first.time_since_epoch().count()) * kDay;
}

PeriodClass classify(const assembly::E2ELinkView& view) noexcept {
    if (view.aggregatedOperational == core::OperationalState::Unknown) return PeriodClass::Unknown;
    if (!view.fullyReconstructed || view.hasUnknown) return PeriodClass::Uncertain;
    if (view.aggregatedOperational == core::OperationalState::Down) return PeriodClass::Down;
    return PeriodClass::CertainUp;
}

void AvailabilityLedger::record(PeriodClass c) noexcept {
    switch (c) {
        case PeriodClass::CertainUp: ++certainUp; break;
        case PeriodClass::Down: ++down; break;
        case PeriodClass::Uncertain: ++uncertain; break;
        case PeriodClass::Unknown: ++unknown; break;
    }
    ++total;
}

std::optional<double> AvailabilityLedger::availability() const noexcept {
    if (total == 0) return std::nullopt;
    return static_cast<double>(certainUp) / static_cast<double>(total);
}

AvailabilityLedger& LedgerBook::slot(const core::E2ELinkId& link, Window window, std::int64_t at) {
    const std::int64_t start = windowStart(window, at);
    auto [it, inserted] = current_.try_emplace({link, window});
    AvailabilityLedger& ledger = it->second;
    if (inserted) {
        ledger.linkId = link;
        ledger.window = window;
        ledger.windowStart = start;
    } else if (ledger.windowStart != start) {
        closed_.push_back(ledger);
        ledger = AvailabilityLedger{link, window, start};
    }
    return ledger;
}

void LedgerBook::track(const core::E2ELinkId& link, std::int64_t at) {
    slot(link, Window::Weekly, at);
    slot(link, Window::Monthly, at);
}

void LedgerBook::record(const core::E2ELinkId& link, std::int64_t cycleStart, PeriodClass c) {
    slot(link, Window::Weekly, cycleStart).record(c);
    slot(link, Window::Monthly, cycleStart).record(c);
}

const AvailabilityLedger* LedgerBook::current(const core::E2ELinkId& link, Window window) const noexcept {
    auto it = current_.find({link, window});
    return it == current_.end() ? nullptr : &it->second;
}

std::vector<AvailabilityLedger> LedgerBook::currentLedgers(Window window) const {
    std::vector<AvailabilityLedger> out;
    for (const auto& [key, ledger] : current_) {
        if (key.second == window) out.push_back(ledger);
    }
    return out;
}

void updateLedgers(const CycleResult& result, LedgerBook& ledgers, const std::set<core::E2ELinkId>& productive) {
    for (const auto& link : productive) {
        const assembly::E2ELinkView* view = result.find(link);
        ledgers.record(link, result.cycle.start, view == nullptr ? PeriodClass::Unknown : classify(*view));
    }
}

}  // namespace opnmon::monitor
