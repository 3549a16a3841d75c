#include "opnmon/sim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace opnmon::sim {

using nlohmann::json;
using core::AdministrativeState;
using core::OperationalState;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ScenarioError("scenario: " + what); }

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) invalid(where + " lacks '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        invalid(where + "." + key + " has the wrong type");
    }
}

std::int64_t cycleField(const json& j, const char* key, const std::string& where) {
    return field<std::int64_t>(j, key, where);
}

// Ground-truth severity, kept separate from the library weight table.
int opRank(OperationalState s) {
    switch (s) {
        case OperationalState::Up: return 0;
        case OperationalState::Unknown: return 1;
        case OperationalState::Degraded: return 2;
        case OperationalState::Down: return 3;
    }
    return 1;
}

int adminRank(AdministrativeState s) {
    switch (s) {
        case AdministrativeState::NormalOperation: return 0;
        case AdministrativeState::Unknown: return 1;
        case AdministrativeState::PlannedMaintenance: return 2;
        case AdministrativeState::Troubleshooting: return 3;
    }
    return 1;
}

}  // namespace

const DomainSpec* Scenario::findDomain(std::string_view name) const noexcept {
    for (const auto& d : domains) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

std::optional<std::string> vendorStringFor(const core::StateMappingTable& mapping, OperationalState state) {
    for (const auto& [vendor, s] : mapping.operational) {
        if (s == state) return vendor;
    }
    return std::nullopt;
}

std::optional<std::string> adminStringFor(const core::StateMappingTable& mapping, AdministrativeState state) {
    for (const auto& [raw, s] : mapping.administrative) {
        if (s == state) return raw;
    }
    return std::nullopt;
}

void validate(const Scenario& s) {
    if (s.period <= 0) invalid("period must be positive");
    if (!(s.acceleration > 0)) invalid("acceleration must be positive");
    if (s.domains.empty()) invalid("no domains");
    std::set<std::string> names;
    std::set<core::E2ELinkId> reported;
    for (const auto& d : s.domains) {
        if (d.name.empty()) invalid("domain with empty name");
        if (!names.insert(d.name).second) invalid("duplicate domain " + d.name);
        if (!vendorStringFor(d.mapping, OperationalState::Up)) invalid("domain " + d.name + " has no vendor string for UP");
        if (!adminStringFor(d.mapping, AdministrativeState::NormalOperation)) {
            invalid("domain " + d.name + " has no raw string for NORMAL_OPERATION");
        }
        std::set<std::string> locals;
        for (const auto& l : d.links) {
            if (!locals.insert(l.localId).second) invalid("duplicate local id " + l.localId + " in " + d.name);
            if (l.dpA.empty() || l.dpB.empty() || l.dpA == l.dpB) invalid("bad demarcation points on " + l.localId);
            reported.insert(l.e2eLinkId);
        }
    }
    std::set<core::E2ELinkId> declared;
    for (const auto& e : s.e2eLinks) {
        if (!declared.insert(e.id).second) invalid("duplicate E2E link " + e.id.str());
    }
    for (const auto& id : reported) {
        if (!declared.count(id)) invalid("E2E link " + id.str() + " is reported but not declared");
    }
    for (const auto& ev : s.events) {
        if (ev.cycle < 0) invalid("event at negative cycle");
        const DomainSpec* d = s.findDomain(ev.domain);
        if (!d) invalid("event names unknown domain " + ev.domain);
        if (ev.localId) {
            const bool known = std::any_of(d->links.begin(), d->links.end(),
                                           [&](const DomainLinkSpec& l) { return l.localId == *ev.localId; });
            if (!known) invalid("event names unknown link " + *ev.localId + " in " + ev.domain);
            if (ev.reachable) invalid("reachability is a domain-level event");
        } else if (ev.operational || ev.administrative || ev.vendorState || ev.present) {
            invalid("link-level event without local_id in " + ev.domain);
        }
        if (ev.operational && ev.vendorState) invalid("event sets both operational and vendor_state");
        if (ev.operational && !vendorStringFor(d->mapping, *ev.operational)) {
            invalid("domain " + d->name + " has no vendor string for " + std::string(core::toString(*ev.operational)));
        }
        if (ev.administrative && !adminStringFor(d->mapping, *ev.administrative)) {
            invalid("domain " + d->name + " has no raw string for " + std::string(core::toString(*ev.administrative)));
        }
    }
    if (s.metrics.enabled) {
        if (!s.topology) invalid("metrics need a topology");
        auto checkNode = [&](const std::string& n) {
            if (!s.topology->findNode(n)) invalid("metric script names unknown node " + n);
        };
        for (const auto& r : s.metrics.reroutes) {
            checkNode(r.src);
            checkNode(r.dst);
            if (r.fromCycle >= r.toCycle) invalid("empty reroute window");
            if (r.hops.empty()) invalid("reroute without hops");
        }
        for (const auto& w : s.metrics.lossWindows) {
            checkNode(w.src);
            checkNode(w.dst);
            if (w.fromCycle >= w.toCycle) invalid("empty loss window");
            if (!(w.loss >= 0.0 && w.loss <= 1.0)) invalid("loss outside [0,1]");
        }
        for (const auto& [n, v] : s.metrics.nodeOwdMs) {
            checkNode(n);
            if (!(v >= 0)) invalid("negative node delay for " + n);
        }
    }
}

Scenario scenarioFromJson(const json& j, const std::filesystem::path& baseDir) {
    if (!j.is_object()) invalid("top level must be an object");
    Scenario s;
    try {
        s.seed = j.value("seed", std::uint64_t{0});
        s.startTime = field<std::int64_t>(j, "start_time", "scenario");
        s.period = j.value("period", core::kDefaultPollingPeriod);
        s.acceleration = j.value("acceleration", 1.0);

        for (const auto& dj : field<json>(j, "domains", "scenario")) {
            DomainSpec d;
            d.name = field<std::string>(dj, "name", "domain");
            d.mapping = mp::mappingFromJson(dj.value("mapping", json()));
            for (const auto& lj : field<json>(dj, "links", "domain " + d.name)) {
                const std::string where = "link in " + d.name;
                DomainLinkSpec l;
                l.localId = field<std::string>(lj, "local_id", where);
                l.e2eLinkId = core::E2ELinkId(field<std::string>(lj, "e2e_link_id", where));
                l.linkType = core::linkTypeFromString(field<std::string>(lj, "link_type", where));
                l.dpA = field<std::string>(lj, "dp_a", where);
                l.dpB = field<std::string>(lj, "dp_b", where);
                d.links.push_back(std::move(l));
            }
            s.domains.push_back(std::move(d));
        }

        for (const auto& ej : field<json>(j, "e2e_links", "scenario")) {
            E2ELinkSpec e;
            e.id = core::E2ELinkId(field<std::string>(ej, "id", "e2e link"));
            e.productive = ej.value("productive", true);
            if (ej.contains("endpoints")) {
                const auto ends = ej["endpoints"].get<std::vector<std::string>>();
                if (ends.size() != 2) invalid("endpoints of " + e.id.str() + " must name two DPs");
                e.endpoints = assembly::Endpoints{core::DemarcationPointId(ends[0]), core::DemarcationPointId(ends[1])};
            }
            s.e2eLinks.push_back(std::move(e));
        }

        for (const auto& ej : j.value("events", json::array())) {
            ScenarioEvent ev;
            ev.cycle = cycleField(ej, "cycle", "event");
            ev.domain = field<std::string>(ej, "domain", "event");
            if (ej.contains("local_id")) ev.localId = ej["local_id"].get<std::string>();
            if (ej.contains("operational")) ev.operational = core::operationalStateFromString(ej["operational"].get<std::string>());
            if (ej.contains("administrative")) {
                ev.administrative = core::administrativeStateFromString(ej["administrative"].get<std::string>());
            }
            if (ej.contains("vendor_state")) ev.vendorState = ej["vendor_state"].get<std::string>();
            if (ej.contains("present")) ev.present = ej["present"].get<bool>();
            if (ej.contains("reachable")) ev.reachable = ej["reachable"].get<bool>();
            s.events.push_back(std::move(ev));
        }

        if (j.contains("topology")) {
            const std::filesystem::path p = j["topology"].get<std::string>();
            s.topology = weathermap::loadTopologyFile(p.is_absolute() ? p : baseDir / p);
        }

        if (j.contains("metrics")) {
            const json& mj = j["metrics"];
            MetricSpec& m = s.metrics;
            m.enabled = mj.value("enabled", true);
            m.defaultNodeOwdMs = mj.value("default_node_owd_ms", m.defaultNodeOwdMs);
            m.owdNoiseMs = mj.value("owd_noise_ms", m.owdNoiseMs);
            m.jitterMs = mj.value("jitter_ms", m.jitterMs);
            m.jitterNoiseMs = mj.value("jitter_noise_ms", m.jitterNoiseMs);
            m.throughputBps = mj.value("throughput_bps", m.throughputBps);
            m.throughputNoiseBps = mj.value("throughput_noise_bps", m.throughputNoiseBps);
            m.utilizationBps = mj.value("utilization_bps", m.utilizationBps);
            m.utilizationNoiseBps = mj.value("utilization_noise_bps", m.utilizationNoiseBps);
            m.nodeOwdMs = mj.value("node_owd_ms", std::map<std::string, double>{});
            for (const auto& rj : mj.value("reroutes", json::array())) {
                m.reroutes.push_back(Reroute{field<std::string>(rj, "src", "reroute"), field<std::string>(rj, "dst", "reroute"),
                                             cycleField(rj, "from_cycle", "reroute"), cycleField(rj, "to_cycle", "reroute"),
                                             field<std::vector<std::string>>(rj, "hops", "reroute")});
            }
            for (const auto& wj : mj.value("loss_windows", json::array())) {
                m.lossWindows.push_back(LossWindow{field<std::string>(wj, "src", "loss window"),
                                                   field<std::string>(wj, "dst", "loss window"),
                                                   cycleField(wj, "from_cycle", "loss window"),
                                                   cycleField(wj, "to_cycle", "loss window"),
                                                   field<double>(wj, "loss", "loss window")});
            }
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& e) {
        invalid(e.what());
    } catch (const json::exception& e) {
        invalid(e.what());
    }
    validate(s);
    return s;
}

Scenario loadScenario(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) invalid("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    auto j = json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) invalid(file.string() + " is not valid JSON");
    return scenarioFromJson(j, file.parent_path());
}

EntryCondition conditionAt(const Scenario& scenario, const DomainSpec& domain, const DomainLinkSpec& link,
                           std::int64_t cycle) {
    EntryCondition c{*vendorStringFor(domain.mapping, OperationalState::Up),
                     *adminStringFor(domain.mapping, AdministrativeState::NormalOperation), true};
    // Events apply in (cycle, file order); later ones win.
    std::vector<const ScenarioEvent*> applicable;
    for (const auto& ev : scenario.events) {
        if (ev.cycle <= cycle && ev.domain == domain.name && ev.localId == link.localId) applicable.push_back(&ev);
    }
    std::stable_sort(applicable.begin(), applicable.end(),
                     [](const ScenarioEvent* a, const ScenarioEvent* b) { return a->cycle < b->cycle; });
    for (const ScenarioEvent* ev : applicable) {
        if (ev->operational) c.vendorState = *vendorStringFor(domain.mapping, *ev->operational);
        if (ev->vendorState) c.vendorState = *ev->vendorState;
        if (ev->administrative) c.adminRaw = *adminStringFor(domain.mapping, *ev->administrative);
        if (ev->present) c.present = *ev->present;
    }
    return c;
}

bool reachableAt(const Scenario& scenario, std::string_view domain, std::int64_t cycle) {
    bool reachable = true;
    std::int64_t at = -1;
    for (const auto& ev : scenario.events) {
        if (ev.domain == domain && !ev.localId && ev.reachable && ev.cycle <= cycle && ev.cycle >= at) {
            reachable = *ev.reachable;
            at = ev.cycle;
        }
    }
    return reachable;
}

mp::LocalSnapshot snapshotAt(const Scenario& scenario, const DomainSpec& domain, std::int64_t cycle) {
    mp::LocalSnapshot snap;
    snap.domain = domain.name;
    snap.snapshotTime = scenario.startTime + cycle * scenario.period;
    for (const auto& l : domain.links) {
        const EntryCondition c = conditionAt(scenario, domain, l, cycle);
        if (!c.present) continue;
        snap.entries.push_back(
            mp::SnapshotEntry{l.localId, l.e2eLinkId.str(), l.linkType, l.dpA, l.dpB, c.vendorState, c.adminRaw});
    }
    return snap;
}

std::map<core::E2ELinkId, ExpectedLink> expectedLinks(const Scenario& scenario, std::int64_t cycle) {
    struct SectionTruth {
        bool reported = false;
        OperationalState op = OperationalState::Up;
        AdministrativeState admin = AdministrativeState::NormalOperation;
    };
    // (link, unordered DP pair) -> section
    std::map<core::E2ELinkId, std::map<std::pair<std::string, std::string>, SectionTruth>> sections;
    for (const auto& e : scenario.e2eLinks) sections[e.id];

    for (const auto& d : scenario.domains) {
        const bool reachable = reachableAt(scenario, d.name, cycle);
        for (const auto& l : d.links) {
            auto& truth = sections[l.e2eLinkId][std::minmax(l.dpA, l.dpB)];
            const EntryCondition c = conditionAt(scenario, d, l, cycle);
            if (!reachable || !c.present) continue;
            const OperationalState op = d.mapping.mapOperational(c.vendorState);
            const AdministrativeState admin = d.mapping.mapAdministrative(c.adminRaw);
            if (!truth.reported) {
                truth = SectionTruth{true, op, admin};
            } else {
                if (opRank(op) > opRank(truth.op)) truth.op = op;
                if (adminRank(admin) > adminRank(truth.admin)) truth.admin = admin;
            }
        }
    }

    std::map<core::E2ELinkId, ExpectedLink> out;
    for (const auto& [id, secs] : sections) {
        ExpectedLink x;
        bool any = false;
        bool missing = secs.empty();
        bool unknown = false;
        for (const auto& [pair, t] : secs) {
            if (!t.reported) {
                missing = true;
                continue;
            }
            unknown |= t.op == OperationalState::Unknown;
            if (!any || opRank(t.op) > opRank(x.operational)) x.operational = t.op;
            if (!any || adminRank(t.admin) > adminRank(x.administrative)) x.administrative = t.admin;
            any = true;
        }
        if (!any) {
            x = ExpectedLink{};
        } else {
            x.uncertain = missing || unknown;
        }
        out.emplace(id, x);
    }
    return out;
}

std::map<core::E2ELinkId, OperationalState> expectedStates(const Scenario& scenario, std::int64_t cycle) {
    std::map<core::E2ELinkId, OperationalState> out;
    for (const auto& [id, x] : expectedLinks(scenario, cycle)) out.emplace(id, x.operational);
    return out;
}

}  // namespace opnmon::sim
