#include "opnmon/monitor/service.hpp"

#include <algorithm>
#include <condition_variable>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "opnmon/monitor/exports.hpp"

namespace opnmon::monitor {

namespace {

// Shared between the cycle and its poll threads; a thread that outlives
// the deadline writes into state nobody reads any more.
struct PollBoard {
    std::mutex mutex;
    std::condition_variable done;
    std::size_t remaining = 0;
    std::vector<std::optional<nmwg::StatusDocument>> documents;
    std::vector<std::string> errors;
    std::vector<bool> finished;
};

}  // namespace

CycleResult runCycle(const core::PollingCycle& cycle, std::span<const MpEndpoint> registry,
                     const std::shared_ptr<StatusPoller>& poller, std::span<const LinkConfig> links,
                     const core::WeightTable& weights) {
    if (registry.empty()) throw MonitorError(MonitorError::Kind::EmptyRegistry, "MP registry is empty");
    const auto started = std::chrono::steady_clock::now();

    auto board = std::make_shared<PollBoard>();
    board->remaining = registry.size();
    board->documents.resize(registry.size());
    board->errors.resize(registry.size());
    board->finished.assign(registry.size(), false);

    std::chrono::milliseconds budget{0};
    for (std::size_t i = 0; i < registry.size(); ++i) {
        budget = std::max(budget, registry[i].timeout);
        std::thread([board, poller, endpoint = registry[i], i] {
            std::optional<nmwg::StatusDocument> doc;
            std::string error;
            try {
                doc = poller->poll(endpoint);
            } catch (const std::exception& e) {
                error = e.what();
            }
            std::lock_guard lock(board->mutex);
            board->documents[i] = std::move(doc);
            board->errors[i] = std::move(error);
            board->finished[i] = true;
            if (--board->remaining == 0) board->done.notify_all();
        }).detach();
    }

    CycleResult result;
    result.cycle = cycle;
    std::map<core::E2ELinkId, std::vector<core::MonitoredLinkReport>> byLink;
    {
        std::unique_lock lock(board->mutex);
        board->done.wait_until(lock, started + budget + std::chrono::milliseconds(250),
                               [&] { return board->remaining == 0; });
        for (std::size_t i = 0; i < registry.size(); ++i) {
            PollOutcome outcome{registry[i].domain, registry[i].url, false, {}, 0};
            if (!board->finished[i]) {
                outcome.error = "no response before cycle deadline";
            } else if (!board->documents[i]) {
                outcome.error = board->errors[i];
            } else {
                outcome.ok = true;
                for (auto& r : board->documents[i]->reports()) {
                    ++outcome.reportCount;
                    byLink[r.e2eLinkId].push_back(std::move(r));
                }
            }
            result.polls.push_back(std::move(outcome));
        }
    }

    for (const auto& link : links) byLink.try_emplace(link.id);
    for (const auto& [id, reports] : byLink) {
        std::optional<assembly::Endpoints> endpoints;
        for (const auto& link : links) {
            if (link.id == id) endpoints = link.endpoints;
        }
        result.views.emplace(id, assembly::stitch(id, reports, endpoints, weights));
    }
    result.wallTime =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
    return result;
}

void writeFileAtomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw MonitorError(MonitorError::Kind::Config, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    std::filesystem::rename(tmp, path);
}

MonitorService::MonitorService(MonitorConfig config, std::shared_ptr<StatusPoller> poller)
    : config_(std::move(config)), poller_(std::move(poller)) {
    validate(config_);
    if (config_.origin) {
        origin_ = *config_.origin;
    } else {
        const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count();
        origin_ = now - now % config_.period;
    }
    productive_ = config_.productiveLinks();
    for (const auto& id : productive_) ledgers_.track(id, origin_);
    for (const auto& sink : config_.sinks) dispatcher_.addSink(makeSink(sink));
    if (!config_.outputDir.empty()) std::filesystem::create_directories(config_.outputDir);
}

void MonitorService::addSink(std::unique_ptr<NotificationSink> sink) { dispatcher_.addSink(std::move(sink)); }

void MonitorService::onPublish(std::function<void(const Publication&)> callback) {
    callbacks_.push_back(std::move(callback));
}

std::shared_ptr<const Publication> MonitorService::step(std::int64_t index) {
    const core::PollingCycle cycle = core::PollingCycle::at(origin_, index, config_.period);
    auto result = std::make_shared<const CycleResult>(
        runCycle(cycle, config_.mps, poller_, config_.links, config_.weights));

    updateLedgers(*result, ledgers_, productive_);
    std::vector<AlarmEvent> events;
    if (previous_) events = detectTransitions(*previous_, *result);
    dispatcher_.dispatch(events);
    alarmLog_.insert(alarmLog_.end(), events.begin(), events.end());

    for (const auto& poll : result->polls) {
        if (!poll.ok) spdlog::warn("cycle {}: MP {} ({}) failed: {}", index, poll.domain, poll.url, poll.error);
    }

    auto publication = std::make_shared<Publication>();
    publication->result = result;
    publication->statusXml = exportStatusXml(*result, productive_);
    const auto weekly = ledgers_.currentLedgers(Window::Weekly);
    const auto monthly = ledgers_.currentLedgers(Window::Monthly);
    publication->weeklyCsv = exportStatsCsv(weekly);
    publication->monthlyCsv = exportStatsCsv(monthly);
    publication->alarms = std::move(events);

    if (!config_.outputDir.empty()) writeOutputs(*publication, *result);

    previous_ = result;
    {
        std::lock_guard lock(publishMutex_);
        latest_ = publication;
    }
    for (const auto& cb : callbacks_) cb(*publication);
    return publication;
}

std::shared_ptr<const Publication> MonitorService::latest() const {
    std::lock_guard lock(publishMutex_);
    return latest_;
}

void MonitorService::writeOutputs(const Publication& publication, const CycleResult& result) {
    const auto& dir = config_.outputDir;
    writeFileAtomic(dir / "status.xml", publication.statusXml);
    writeFileAtomic(dir / "stats-weekly.csv", publication.weeklyCsv);
    writeFileAtomic(dir / "stats-monthly.csv", publication.monthlyCsv);
    writeFileAtomic(dir / "cycle.json", toJson(result).dump(1) + "\n");
    if (!publication.alarms.empty()) {
        std::ofstream log(dir / "alarms.jsonl", std::ios::app | std::ios::binary);
        for (const auto& e : publication.alarms) log << toJsonLine(e) << '\n';
    }
}

}  // namespace opnmon::monitor
