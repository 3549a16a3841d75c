#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opnmon/monitor/alarms.hpp"
#include "opnmon/monitor/config.hpp"
#include "opnmon/monitor/cycle.hpp"
#include "opnmon/monitor/ledger.hpp"
#include "opnmon/monitor/poller.hpp"

namespace opnmon::monitor {

/// Polls every MP concurrently, waits at most the largest endpoint timeout,
/// then stitches every E2E link seen in a response or listed in `links`.
/// Failed or late MPs only show up in CycleResult::polls. Throws
/// MonitorError(EmptyRegistry) if `registry` is empty.
CycleResult runCycle(const core::PollingCycle& cycle, std::span<const MpEndpoint> registry,
                     const std::shared_ptr<StatusPoller>& poller, std::span<const LinkConfig> links = {},
                     const core::WeightTable& weights = core::WeightTable::defaults());

/// What a completed cycle publishes to readers.
struct Publication {
    std::shared_ptr<const CycleResult> result;
    std::string statusXml;
    std::string weeklyCsv;
    std::string monthlyCsv;
    std::vector<AlarmEvent> alarms;  // raised in this cycle
};

class MonitorService {
public:
    MonitorService(MonitorConfig config, std::shared_ptr<StatusPoller> poller);

    void addSink(std::unique_ptr<NotificationSink> sink);
    void onPublish(std::function<void(const Publication&)> callback);

    /// Runs cycle `index`: poll, stitch, ledgers, alarms, exports, publish.
    std::shared_ptr<const Publication> step(std::int64_t index);

    std::shared_ptr<const Publication> latest() const;
    const LedgerBook& ledgers() const noexcept { return ledgers_; }
    const std::vector<AlarmEvent>& alarmLog() const noexcept { return alarmLog_; }
    const MonitorConfig& config() const noexcept { return config_; }
    std::int64_t origin() const noexcept { return origin_; }

private:
    void writeOutputs(const Publication& publication, const CycleResult& result);

    MonitorConfig config_;
    std::shared_ptr<StatusPoller> poller_;
    std::int64_t origin_;
    std::set<core::E2ELinkId> productive_;
    AlarmDispatcher dispatcher_;
    LedgerBook ledgers_;
    std::vector<AlarmEvent> alarmLog_;
    std::shared_ptr<const CycleResult> previous_;
    std::vector<std::function<void(const Publication&)>> callbacks_;

    mutable std::mutex publishMutex_;
    std::shared_ptr<const Publication> latest_;
};

/// Writes `content` to `path` through a temporary file and rename.
void writeFileAtomic(const std::filesystem::path& path, std::string_view content);

}  // namespace opnmon::monitor
