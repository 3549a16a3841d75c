#include <atomic>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "listen_address.hpp"
#include "opnmon/sim/simulator.hpp"

namespace {
std::atomic<bool> g_stop{false};
void onSignal(int) { g_stop = true; }
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic multi-domain scenario driver for the whole monitoring stack"};
    std::string scenarioPath;
    std::int64_t cycles = 12;
    bool accelerate = false;
    bool http = false;
    bool check = false;
    std::string out;
    std::string archiveDir;
    std::string serve;
    app.add_option("--scenario", scenarioPath, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--cycles", cycles, "number of polling cycles")->check(CLI::PositiveNumber);
    app.add_flag("--accelerate", accelerate, "run cycles back-to-back");
    app.add_flag("--http", http, "connect agents, archive and monitor over loopback HTTP");
    app.add_flag("--check", check, "compare every cycle against the script oracle; exit 2 on mismatch");
    app.add_option("--out", out, "directory for status.xml, CSVs and alarm logs");
    app.add_option("--archive-dir", archiveDir, "durable metric archive directory");
    app.add_option("--serve", serve, "keep serving the API on host:port after the run");
    CLI11_PARSE(app, argc, argv);

    try {
        auto scenario = opnmon::sim::loadScenario(scenarioPath);
        opnmon::sim::SimulatorOptions options;
        options.http = http;
        options.accelerate = accelerate;
        if (!out.empty()) options.outputDir = out;
        if (!archiveDir.empty()) options.archiveDir = archiveDir;
        opnmon::sim::Simulator sim(scenario, options);
        if (!serve.empty()) {
            const auto [host, port] = opnmon::tools::parseListen(serve);
            if (sim.apiPort() > 0) {
                spdlog::warn("API already served on port {}; --serve ignored", sim.apiPort());
            } else {
                sim.serveApi(host, port);
                spdlog::info("API on http://{}:{}/api/overview", host, port);
            }
        }

        std::signal(SIGINT, onSignal);
        std::signal(SIGTERM, onSignal);
        int mismatches = 0;
        for (std::int64_t i = 0; i < cycles && !g_stop; ++i) {
            const auto trace = sim.step();
            std::map<std::string, int> counts;
            for (const auto& [id, state] : trace.observed) ++counts[std::string(opnmon::core::toString(state))];
            std::cout << "cycle " << trace.index;
            for (const auto& [state, n] : counts) std::cout << ' ' << state << '=' << n;
            std::cout << " unreachable=" << trace.unreachable.size() << " samples=" << trace.samples.size()
                      << " alarms=" << trace.alarms.size() << '\n';
            for (const auto& e : trace.alarms) {
                std::cout << "  alarm " << e.linkId.str() << ' ' << opnmon::core::toString(e.oldState) << " -> "
                          << opnmon::core::toString(e.newState) << (e.suppressed ? " (suppressed)" : "") << '\n';
            }
            if (check && opnmon::sim::expectedStates(scenario, trace.index) != trace.observed) {
                ++mismatches;
                std::cout << "  MISMATCH against script oracle\n";
            }
        }
        if (!serve.empty()) {
            while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
        }
        if (mismatches > 0) return 2;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
