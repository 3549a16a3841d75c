#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opnmon/api/service.hpp"
#include "opnmon/archive/archive.hpp"
#include "opnmon/monitor/service.hpp"
#include "opnmon/mp/agent.hpp"
#include "opnmon/sim/scenario.hpp"

namespace opnmon::sim {

/// Metric samples for one cycle. Noise comes from a generator seeded by
/// (seed, cycle) alone, so cycle k looks the same in every run.
std::vector<archive::MetricSample> synthesizeMetrics(const Scenario& scenario, std::int64_t cycle);

struct SimulatorOptions {
    bool http = false;        // agents, archive ingestion and polling over loopback HTTP
    bool accelerate = true;   // back-to-back cycles; otherwise period / acceleration wall seconds apart
    std::optional<std::filesystem::path> outputDir;  // monitor outputs and alarm sink files
    std::optional<std::filesystem::path> archiveDir; // durable archive; in-memory if empty
    std::chrono::milliseconds pollTimeout{2000};
};

struct CycleTrace {
    std::int64_t index = 0;
    std::map<std::string, mp::LocalSnapshot> snapshots;  // reachable and unreachable domains alike
    std::set<std::string> unreachable;
    std::vector<archive::MetricSample> samples;
    std::map<core::E2ELinkId, core::OperationalState> observed;  // pipeline aggregated states
    std::vector<monitor::AlarmEvent> alarms;
    std::string statusXml;
};

struct ScenarioTrace {
    std::vector<CycleTrace> cycles;
};

/// Owns one complete deployment: an MP per domain, the monitor, the archive
/// and the API facade. The simulator is the clock: step() feeds cycle k's
/// snapshots and samples, then runs monitor cycle k.
class Simulator {
public:
    explicit Simulator(Scenario scenario, SimulatorOptions options = {});
    ~Simulator();

    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    CycleTrace step();
    ScenarioTrace run(std::int64_t cycles);

    std::int64_t nextCycle() const noexcept { return next_; }
    const Scenario& scenario() const noexcept { return scenario_; }
    monitor::MonitorService& monitor() noexcept { return *monitor_; }
    archive::MetricArchive& archive() noexcept { return *archive_; }
    /// Null when the scenario has no topology.
    api::ApiService* api() noexcept { return api_.get(); }
    const monitor::MemorySink& notifySink() const noexcept { return *notify_; }
    const monitor::MemorySink& trapSink() const noexcept { return *trap_; }

    /// Port of the API server (HTTP mode with a topology), else -1.
    int apiPort() const noexcept { return apiPort_; }
    /// Starts an API server on host:port if none is running yet.
    int serveApi(const std::string& host, int port);

private:
    struct Impl;

    Scenario scenario_;
    SimulatorOptions options_;
    std::int64_t next_ = 0;
    std::unique_ptr<Impl> impl_;
    std::shared_ptr<archive::MetricArchive> archive_;
    std::unique_ptr<api::ApiService> api_;
    std::unique_ptr<monitor::MonitorService> monitor_;
    monitor::MemorySink* notify_ = nullptr;
    monitor::MemorySink* trap_ = nullptr;
    int apiPort_ = -1;
};

/// Runs `cycles` cycles (> 0) of `scenario` on a fresh Simulator.
ScenarioTrace runScenario(const Scenario& scenario, std::int64_t cycles, const SimulatorOptions& options = {});

}  // namespace opnmon::sim
