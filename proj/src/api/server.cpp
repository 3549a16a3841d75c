#include "opnmon/api/server.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "opnmon/archive/archive_http.hpp"

namespace opnmon::api {

namespace {

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ApiError(ApiError::Kind::NotReady, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

void sendError(httplib::Response& res, const ApiError& e) {
    res.status = e.kind() == ApiError::Kind::NotReady ? 503 : 404;
    res.set_content(nlohmann::json{{"error", e.kind() == ApiError::Kind::NotReady ? "NotReady" : "UnknownElement"},
                                   {"message", e.what()}}
                        .dump(),
                    "application/json");
}

template <typename F>
httplib::Server::Handler guarded(F body, const char* contentType) {
    return [body, contentType](const httplib::Request& req, httplib::Response& res) {
        try {
            res.set_content(body(req), contentType);
            res.set_header("Cache-Control", "no-cache");
        } catch (const ApiError& e) {
            sendError(res, e);
        }
    };
}

}  // namespace

ApiConfig apiConfigFromJson(const nlohmann::json& j, const std::filesystem::path& baseDir) {
    if (!j.is_object() || !j.contains("topology") || !j["topology"].is_string()) {
        throw ApiError(ApiError::Kind::UnknownElement, "api config requires a string 'topology'");
    }
    ApiConfig cfg;
    cfg.topology = resolve(baseDir, j["topology"].get<std::string>());
    if (j.contains("archive_dir")) cfg.archiveDir = resolve(baseDir, j["archive_dir"].get<std::string>());
    if (j.contains("monitor_output_dir")) {
        cfg.monitorOutputDir = resolve(baseDir, j["monitor_output_dir"].get<std::string>());
    }
    if (j.contains("static_dir")) cfg.staticDir = resolve(baseDir, j["static_dir"].get<std::string>());
    cfg.watchInterval = std::chrono::milliseconds(j.value("watch_interval_ms", 1000));
    return cfg;
}

ApiConfig loadApiConfig(const std::filesystem::path& file) {
    auto j = nlohmann::json::parse(readFile(file), nullptr, false);
    if (j.is_discarded()) throw ApiError(ApiError::Kind::UnknownElement, file.string() + " is not valid JSON");
    return apiConfigFromJson(j, file.parent_path());
}

CycleInput readMonitorOutput(const std::filesystem::path& dir) {
    const auto cycleFile = dir / "cycle.json";
    if (!std::filesystem::exists(cycleFile)) throw ApiError(ApiError::Kind::NotReady, "no cycle.json in " + dir.string());
    CycleInput input;
    auto j = nlohmann::json::parse(readFile(cycleFile), nullptr, false);
    if (j.is_discarded()) throw ApiError(ApiError::Kind::NotReady, cycleFile.string() + " is not valid JSON");
    input.result = std::make_shared<const monitor::CycleResult>(monitor::cycleFromJson(j));
    input.statusXml = readFile(dir / "status.xml");
    input.weeklyCsv = readFile(dir / "stats-weekly.csv");
    input.monthlyCsv = readFile(dir / "stats-monthly.csv");
    return input;
}

ApiServer::ApiServer(ApiService& service, archive::MetricArchive* writableArchive,
                     std::optional<std::filesystem::path> staticDir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
    constexpr const char* kJson = "application/json";
    auto& s = *server_;
    s.Get("/api/topology", guarded([this](const httplib::Request&) { return service_.topologyJson(); }, kJson));
    s.Get("/api/overview", guarded([this](const httplib::Request&) { return service_.overview(); }, kJson));
    s.Get(R"(/api/links/([^/]+)/metrics)",
          guarded([this](const httplib::Request& r) { return service_.linkMetrics(r.matches[1].str()); }, kJson));
    s.Get(R"(/api/nodes/([^/]+)/metrics)",
          guarded([this](const httplib::Request& r) { return service_.nodeMetrics(r.matches[1].str()); }, kJson));
    s.Get(R"(/api/links/([^/]+)/e2e)",
          guarded([this](const httplib::Request& r) { return service_.e2eSegments(r.matches[1].str()); }, kJson));
    s.Get("/api/export/status.xml",
          guarded([this](const httplib::Request&) { return service_.statusXml(); }, "application/xml"));
    s.Get(R"(/api/export/stats-(weekly|monthly)\.csv)",
          guarded([this](const httplib::Request& r) { return service_.statsCsv(r.matches[1].str()); }, "text/csv"));

    if (writableArchive) archive::mountArchiveRoutes(s, *writableArchive);
    if (staticDir && !s.set_mount_point("/", staticDir->string())) {
        spdlog::warn("static directory {} not found; serving API only", staticDir->string());
    }
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::startOnAnyPort(const std::string& host) {
    const int port = server_->bind_to_any_port(host);
    if (port <= 0) return -1;
    serverThread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port;
}

bool ApiServer::start(const std::string& host, int port) {
    if (!server_->bind_to_port(host, port)) return false;
    serverThread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return true;
}

bool ApiServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

void ApiServer::stop() {
    watching_ = false;
    if (watchThread_.joinable()) watchThread_.join();
    server_->stop();
    if (serverThread_.joinable()) serverThread_.join();
}

void ApiServer::watchMonitorOutput(std::filesystem::path dir, std::chrono::milliseconds interval) {
    watching_ = true;
    watchThread_ = std::thread([this, dir = std::move(dir), interval] {
        std::optional<std::filesystem::file_time_type> seen;
        while (watching_) {
            std::error_code ec;
            const auto mtime = std::filesystem::last_write_time(dir / "cycle.json", ec);
            if (!ec && (!seen || mtime != *seen)) {
                try {
                    service_.publish(readMonitorOutput(dir));
                    seen = mtime;
                } catch (const Error& e) {
                    spdlog::warn("monitor output in {} not usable yet: {}", dir.string(), e.what());
                } catch (const std::exception& e) {
                    spdlog::warn("monitor output in {} rejected: {}", dir.string(), e.what());
                }
            }
            for (auto slept = std::chrono::milliseconds(0); watching_ && slept < interval;
                 slept += std::chrono::milliseconds(20)) {
                std::this_thread::sleep_for(std::chrono::milliseconds(20));
            }
        }
    });
}

}  // namespace opnmon::api
