#include "opnmon/sim/simulator.hpp"

#include <random>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "opnmon/api/server.hpp"
#include "opnmon/archive/archive_http.hpp"
#include "opnmon/monitor/poller.hpp"
#include "opnmon/mp/agent_server.hpp"

namespace opnmon::sim {

using archive::MetricKind;
using archive::MetricSample;
using archive::SeriesKey;

namespace {

class Noise {
public:
    Noise(std::uint64_t seed, std::int64_t cycle) {
        const auto c = static_cast<std::uint64_t>(cycle);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        gen_.seed(seq);
    }

    /// Uniform on [0, 1) from the top 53 bits; independent of the
    /// standard library's distribution implementations.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    /// Uniform on [-amplitude, amplitude).
    double symmetric(double amplitude) { return amplitude * (2.0 * unit() - 1.0); }

private:
    std::mt19937_64 gen_;
};

archive::Triplet triplet(Noise& noise, double base, double amplitude) {
    const double med = std::max(0.0, base + noise.symmetric(amplitude));
    const double min = std::max(0.0, med - amplitude * noise.unit());
    const double max = med + amplitude * noise.unit();
    return {min, med, max};
}

std::vector<std::string> defaultRoute(const weathermap::AbstractNode& src, const weathermap::AbstractNode& dst) {
    return {src.hadesNode + ".gw", "backbone", dst.hadesNode + ".gw"};
}

/// Lets the simulator take individual MPs off the network.
class GatedPoller final : public monitor::StatusPoller {
public:
    explicit GatedPoller(std::shared_ptr<monitor::StatusPoller> inner) : inner_(std::move(inner)) {}

    void setReachable(const std::string& domain, bool reachable) {
        std::lock_guard lock(mutex_);
        if (reachable) {
            down_.erase(domain);
        } else {
            down_.insert(domain);
        }
    }

    nmwg::StatusDocument poll(const monitor::MpEndpoint& endpoint) override {
        {
            std::lock_guard lock(mutex_);
            if (down_.contains(endpoint.domain)) throw monitor::PollError(endpoint.domain + ": unreachable");
        }
        return inner_->poll(endpoint);
    }

private:
    std::shared_ptr<monitor::StatusPoller> inner_;
    std::mutex mutex_;
    std::set<std::string> down_;
};

}  // namespace

std::vector<MetricSample> synthesizeMetrics(const Scenario& s, std::int64_t cycle) {
    std::vector<MetricSample> out;
    if (!s.metrics.enabled || !s.topology) return out;
    const auto& m = s.metrics;
    const auto& topo = *s.topology;
    const std::int64_t t = s.startTime + cycle * s.period;
    Noise noise(s.seed, cycle);

    auto nodeDelay = [&](const std::string& id) {
        auto it = m.nodeOwdMs.find(id);
        return it == m.nodeOwdMs.end() ? m.defaultNodeOwdMs : it->second;
    };

    for (const auto& src : topo.nodes) {
        for (const auto& dst : topo.nodes) {
            if (src.id == dst.id) continue;
            const std::string& a = src.hadesNode;
            const std::string& b = dst.hadesNode;
            const double base = nodeDelay(src.id) + nodeDelay(dst.id);
            out.push_back({SeriesKey::hades(a, b, MetricKind::OneWayDelay), t, triplet(noise, base, m.owdNoiseMs)});
            out.push_back({SeriesKey::hades(a, b, MetricKind::Jitter), t, triplet(noise, m.jitterMs, m.jitterNoiseMs)});

            double loss = 0.0;
            for (const auto& w : m.lossWindows) {
                if (w.src == src.id && w.dst == dst.id && cycle >= w.fromCycle && cycle < w.toCycle) loss = w.loss;
            }
            out.push_back({SeriesKey::hades(a, b, MetricKind::Loss), t, archive::Scalar{loss}});

            std::vector<std::string> hops = defaultRoute(src, dst);
            for (const auto& r : m.reroutes) {
                if (r.src == src.id && r.dst == dst.id && cycle >= r.fromCycle && cycle < r.toCycle) hops = r.hops;
            }
            out.push_back({SeriesKey::hades(a, b, MetricKind::HopList), t, archive::HopList{std::move(hops)}});
        }
    }

    const bool bwctlSlot = archive::alignToGrid(archive::SeriesFamily::Bwctl, t) == t;
    for (const auto& link : topo.links) {
        const auto* na = topo.findNode(link.a);
        const auto* nb = topo.findNode(link.b);
        if (bwctlSlot && (na->tier == 0 || nb->tier == 0)) {
            out.push_back({SeriesKey::bwctl(na->bwctlAddress, nb->bwctlAddress), t,
                           triplet(noise, m.throughputBps, m.throughputNoiseBps)});
            out.push_back({SeriesKey::bwctl(nb->bwctlAddress, na->bwctlAddress), t,
                           triplet(noise, m.throughputBps, m.throughputNoiseBps)});
        }
        for (const auto& ifId : {link.interfaceA, link.interfaceB}) {
            const double util = std::max(0.0, m.utilizationBps + noise.symmetric(m.utilizationNoiseBps));
            out.push_back({SeriesKey::interface(ifId, MetricKind::Utilization), t, archive::Scalar{util}});
            out.push_back({SeriesKey::interface(ifId, MetricKind::InputErrors), t, archive::Counter{0}});
            const std::uint64_t drops = noise.unit() < 0.05 ? 1 : 0;
            out.push_back({SeriesKey::interface(ifId, MetricKind::OutputDrops), t, archive::Counter{drops}});
        }
    }
    return out;
}

struct Simulator::Impl {
    std::map<std::string, std::shared_ptr<mp::MeasurementPoint>> agents;
    std::map<std::string, std::unique_ptr<mp::AgentServer>> agentServers;
    std::map<std::string, std::string> agentBase;  // domain -> http://host:port
    std::shared_ptr<GatedPoller> poller;
    std::unique_ptr<api::ApiServer> apiServer;
};

Simulator::Simulator(Scenario scenario, SimulatorOptions options)
    : scenario_(std::move(scenario)), options_(std::move(options)), impl_(std::make_unique<Impl>()) {
    validate(scenario_);

    archive_ = options_.archiveDir ? std::make_shared<archive::MetricArchive>(*options_.archiveDir)
                                   : std::make_shared<archive::MetricArchive>();
    if (scenario_.topology) api_ = std::make_unique<api::ApiService>(*scenario_.topology, archive_);

    std::shared_ptr<monitor::StatusPoller> inner;
    std::shared_ptr<monitor::InProcessPoller> inProcess;
    if (options_.http) {
        inner = std::make_shared<monitor::HttpStatusPoller>();
    } else {
        inProcess = std::make_shared<monitor::InProcessPoller>();
        inner = inProcess;
    }
    impl_->poller = std::make_shared<GatedPoller>(inner);

    monitor::MonitorConfig config;
    config.period = scenario_.period;
    config.origin = scenario_.startTime;
    for (std::size_t i = 0; i < scenario_.domains.size(); ++i) {
        const auto& d = scenario_.domains[i];
        auto agent = std::make_shared<mp::MeasurementPoint>(d.name, d.mapping);
        std::string url = "inproc://" + d.name;
        if (options_.http) {
            auto server = std::make_unique<mp::AgentServer>(*agent);
            const int port = server->startOnAnyPort();
            if (port <= 0) throw ScenarioError("cannot bind an agent port for " + d.name);
            impl_->agentBase[d.name] = "http://127.0.0.1:" + std::to_string(port);
            url = impl_->agentBase[d.name] + "/mp";
            impl_->agentServers[d.name] = std::move(server);
        } else {
            inProcess->attach(url, agent);
        }
        impl_->agents[d.name] = agent;
        // Every other MP is spoken to in SOAP so both encodings stay exercised.
        config.mps.push_back(monitor::MpEndpoint{d.name, url, options_.pollTimeout, i % 2 == 1});
    }
    for (const auto& e : scenario_.e2eLinks) config.links.push_back(monitor::LinkConfig{e.id, e.productive, e.endpoints});
    if (options_.outputDir) {
        config.outputDir = *options_.outputDir;
        std::filesystem::create_directories(config.outputDir);
        for (const char* f : {"alarms.jsonl", "notify.jsonl", "trap.jsonl"}) std::filesystem::remove(config.outputDir / f);
        config.sinks.push_back({"notify-log", monitor::SinkRole::Notify, "file", config.outputDir / "notify.jsonl", {}, 0});
        config.sinks.push_back({"trap-log", monitor::SinkRole::Trap, "file", config.outputDir / "trap.jsonl", {}, 0});
    }

    monitor_ = std::make_unique<monitor::MonitorService>(std::move(config), impl_->poller);
    auto notify = std::make_unique<monitor::MemorySink>("notify", monitor::SinkRole::Notify);
    auto trap = std::make_unique<monitor::MemorySink>("trap", monitor::SinkRole::Trap);
    notify_ = notify.get();
    trap_ = trap.get();
    monitor_->addSink(std::move(notify));
    monitor_->addSink(std::move(trap));
    if (api_) {
        monitor_->onPublish([this](const monitor::Publication& p) {
            api_->publish(api::CycleInput{p.result, p.statusXml, p.weeklyCsv, p.monthlyCsv});
        });
    }
    if (options_.http && api_) serveApi("127.0.0.1", 0);
}

Simulator::~Simulator() {
    if (impl_->apiServer) impl_->apiServer->stop();
    for (auto& [name, server] : impl_->agentServers) server->stop();
}

int Simulator::serveApi(const std::string& host, int port) {
    if (impl_->apiServer) return apiPort_;
    if (!api_) throw ScenarioError("the API needs a scenario topology");
    impl_->apiServer = std::make_unique<api::ApiServer>(*api_, archive_.get());
    if (port == 0) {
        apiPort_ = impl_->apiServer->startOnAnyPort(host);
    } else {
        apiPort_ = impl_->apiServer->start(host, port) ? port : -1;
    }
    if (apiPort_ <= 0) throw ScenarioError("cannot bind the API server on " + host + ":" + std::to_string(port));
    return apiPort_;
}

CycleTrace Simulator::step() {
    const std::int64_t c = next_++;
    CycleTrace trace;
    trace.index = c;

    for (const auto& d : scenario_.domains) {
        mp::LocalSnapshot snap = snapshotAt(scenario_, d, c);
        const bool reachable = reachableAt(scenario_, d.name, c);
        impl_->poller->setReachable(d.name, reachable);
        if (!reachable) trace.unreachable.insert(d.name);
        if (options_.http) {
            httplib::Client client(impl_->agentBase.at(d.name));
            auto res = client.Put("/snapshot", mp::serializeSnapshot(snap), "application/json");
            if (!res || res->status != 204) {
                throw ScenarioError("snapshot upload to " + d.name + " failed" +
                                    (res ? ": HTTP " + std::to_string(res->status) : std::string()));
            }
        } else {
            impl_->agents.at(d.name)->ingestSnapshot(snap);
        }
        trace.snapshots.emplace(d.name, std::move(snap));
    }

    trace.samples = synthesizeMetrics(scenario_, c);
    if (!trace.samples.empty()) {
        if (options_.http && apiPort_ > 0) {
            std::map<SeriesKey, std::vector<MetricSample>> bySeries;
            for (const auto& s : trace.samples) bySeries[s.key].push_back(s);
            const std::string base = "http://127.0.0.1:" + std::to_string(apiPort_);
            for (const auto& [key, samples] : bySeries) archive::putSamples(base, key, samples);
        } else {
            archive_->ingestBatch(trace.samples);
        }
    }

    const auto publication = monitor_->step(c);
    for (const auto& [id, view] : publication->result->views) trace.observed.emplace(id, view.aggregatedOperational);
    trace.alarms = publication->alarms;
    trace.statusXml = publication->statusXml;

    if (!options_.accelerate) {
        std::this_thread::sleep_for(std::chrono::duration<double>(static_cast<double>(scenario_.period) /
                                                                  scenario_.acceleration));
    }
    return trace;
}

ScenarioTrace Simulator::run(std::int64_t cycles) {
    if (cycles <= 0) throw ScenarioError("cycle count must be positive");
    ScenarioTrace trace;
    for (std::int64_t i = 0; i < cycles; ++i) trace.cycles.push_back(step());
    return trace;
}

ScenarioTrace runScenario(const Scenario& scenario, std::int64_t cycles, const SimulatorOptions& options) {
    Simulator sim(scenario, options);
    return sim.run(cycles);
}

}  // namespace opnmon::sim
