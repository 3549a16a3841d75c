#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "opnmon/mp/agent.hpp"

namespace httplib {
class Server;
}

namespace opnmon::mp {

struct AgentConfig {
    std::string domain;
    core::StateMappingTable mapping;
    std::optional<std::filesystem::path> snapshotPath;
    std::chrono::milliseconds watchInterval{1000};
};

/// JSON: {"domain": ..., "mapping": {"operational": {...}, "administrative": {...}},
///        "snapshot_path": ..., "watch_interval_ms": ...}
AgentConfig loadAgentConfig(const std::filesystem::path& file);
AgentConfig agentConfigFromJson(const nlohmann::json& j, const std::filesystem::path& baseDir = {});

/// HTTP front end of a MeasurementPoint:
///   POST /mp        NMWG request -> NMWG response (bare or SOAP)
///   PUT  /snapshot  LocalSnapshot JSON
class AgentServer {
public:
    explicit AgentServer(MeasurementPoint& mp);
    ~AgentServer();

    AgentServer(const AgentServer&) = delete;
    AgentServer& operator=(const AgentServer&) = delete;

    /// Binds to an ephemeral port and serves on a background thread.
    int startOnAnyPort(const std::string& host = "127.0.0.1");
    bool start(const std::string& host, int port);
    /// Blocks until stop() is called from another thread.
    bool listen(const std::string& host, int port);
    void stop();

    /// Polls `path` and ingests the snapshot whenever its mtime changes.
    void watchSnapshotFile(std::filesystem::path path, std::chrono::milliseconds interval);

    /// Ingests the snapshot file once; false if missing or rejected.
    bool loadSnapshotFile(const std::filesystem::path& path);

private:
    MeasurementPoint& mp_;
    std::unique_ptr<httplib::Server> server_;
    std::thread serverThread_;
    std::thread watchThread_;
    std::atomic<bool> watching_{false};
};

}  // namespace opnmon::mp
