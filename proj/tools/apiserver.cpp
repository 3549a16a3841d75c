#include <csignal>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "listen_address.hpp"
#include "opnmon/api/server.hpp"

namespace {
opnmon::api::ApiServer* g_server = nullptr;
void onSignal(int) {
    if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weathermap HTTP/JSON API and archive ingestion endpoint"};
    std::string configPath;
    std::string listen = "127.0.0.1:8080";
    app.add_option("--config", configPath, "API configuration (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--listen", listen, "host:port to serve on");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = opnmon::api::loadApiConfig(configPath);
        const auto [host, port] = opnmon::tools::parseListen(listen);
        auto archive = cfg.archiveDir ? std::make_shared<opnmon::archive::MetricArchive>(*cfg.archiveDir)
                                      : std::make_shared<opnmon::archive::MetricArchive>();
        opnmon::api::ApiService service(opnmon::weathermap::loadTopologyFile(cfg.topology), archive);
        opnmon::api::ApiServer server(service, archive.get(), cfg.staticDir);
        if (cfg.monitorOutputDir) server.watchMonitorOutput(*cfg.monitorOutputDir, cfg.watchInterval);
        g_server = &server;
        std::signal(SIGINT, onSignal);
        std::signal(SIGTERM, onSignal);
        spdlog::info("apiserver listening on {}:{}", host, port);
        if (!server.listen(host, port)) {
            spdlog::error("cannot listen on {}:{}", host, port);
            return 1;
        }
        g_server = nullptr;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
