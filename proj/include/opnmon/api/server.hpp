#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <thread>

#include "opnmon/api/service.hpp"

namespace httplib {
class Server;
}

namespace opnmon::api {

/// JSON: {"topology": ..., "archive_dir": ..., "monitor_output_dir": ...,
///        "static_dir": ..., "watch_interval_ms": ...}. Paths are relative
/// to the config file.
struct ApiConfig {
    std::filesystem::path topology;
    std::optional<std::filesystem::path> archiveDir;
    std::optional<std::filesystem::path> monitorOutputDir;
    std::optional<std::filesystem::path> staticDir;
    std::chrono::milliseconds watchInterval{1000};
};

ApiConfig apiConfigFromJson(const nlohmann::json& j, const std::filesystem::path& baseDir = {});
ApiConfig loadApiConfig(const std::filesystem::path& file);

/// Reads the files a monitor writes into its output directory.
/// Throws ApiError(NotReady) while cycle.json does not exist yet.
CycleInput readMonitorOutput(const std::filesystem::path& dir);

/// HTTP front end:
///   GET /api/topology, /api/overview, /api/links/{id}/metrics,
///       /api/nodes/{id}/metrics, /api/links/{id}/e2e,
///       /api/export/status.xml, /api/export/stats-{weekly|monthly}.csv
///   PUT /archive/{series}   when a writable archive is attached
///   everything else from the static directory, if any
class ApiServer {
public:
    explicit ApiServer(ApiService& service, archive::MetricArchive* writableArchive = nullptr,
                       std::optional<std::filesystem::path> staticDir = std::nullopt);
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    int startOnAnyPort(const std::string& host = "127.0.0.1");
    bool start(const std::string& host, int port);
    bool listen(const std::string& host, int port);
    void stop();

    /// Republishes whenever cycle.json in `dir` changes.
    void watchMonitorOutput(std::filesystem::path dir, std::chrono::milliseconds interval);

private:
    ApiService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread serverThread_;
    std::thread watchThread_;
    std::atomic<bool> watching_{false};
};

}  // namespace opnmon::api
