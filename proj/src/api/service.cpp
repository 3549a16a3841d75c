#include "opnmon/api/service.hpp"

namespace opnmon::api {

using nlohmann::json;
using weathermap::AbstractLinkStatus;

namespace {

json statusJson(AbstractLinkStatus s) {
    return {{"status", weathermap::toString(s)},
            {"color", weathermap::colorName(s)},
            {"hex", weathermap::colorHex(s)}};
}

json windowJson(const Snapshot& snap) {
    return {{"from", snap.windowFrom}, {"to", snap.windowTo}, {"step", kMetricStep}};
}

std::size_t slotCount(const Snapshot& snap) {
    return static_cast<std::size_t>((snap.windowTo - snap.windowFrom) / kMetricStep);
}

json timestamps(const Snapshot& snap) {
    json out = json::array();
    for (std::int64_t t = snap.windowFrom; t < snap.windowTo; t += kMetricStep) out.push_back(t);
    return out;
}

/// Slot array over the window; empty bins become null.
json gridSeries(const archive::MetricArchive& store, const archive::SeriesKey& key, const Snapshot& snap) {
    json out(json::value_t::array);
    for (std::size_t i = 0; i < slotCount(snap); ++i) out.push_back(nullptr);
    if (!store.hasSeries(key)) return out;
    for (const auto& s : store.queryWindow(key, snap.windowFrom, snap.windowTo)) {
        const auto slot = static_cast<std::size_t>((s.timestamp - snap.windowFrom) / kMetricStep);
        if (const auto* v = std::get_if<archive::Scalar>(&s.value)) {
            out[slot] = v->value;
        } else if (const auto* c = std::get_if<archive::Counter>(&s.value)) {
            out[slot] = c->value;
        }
    }
    return out;
}

/// Present samples only, as scatter points.
json points(const archive::MetricArchive& store, const archive::SeriesKey& key, const Snapshot& snap) {
    json out = json::array();
    if (!store.hasSeries(key)) return out;
    for (const auto& s : store.queryWindow(key, snap.windowFrom, snap.windowTo)) {
        if (const auto* t = std::get_if<archive::Triplet>(&s.value)) {
            out.push_back({{"t", s.timestamp}, {"min", t->min}, {"med", t->med}, {"max", t->max}});
        } else if (const auto* v = std::get_if<archive::Scalar>(&s.value)) {
            out.push_back({{"t", s.timestamp}, {"value", v->value}});
        }
    }
    return out;
}

json hopSegments(const archive::MetricArchive& store, const archive::SeriesKey& key, const Snapshot& snap) {
    json out = json::array();
    if (!store.hasSeries(key)) return out;
    for (const auto& seg : store.hopCountSegments(key, snap.windowFrom, snap.windowTo)) {
        out.push_back({{"route", seg.signature}, {"start", seg.start}, {"end", seg.end}, {"hop_count", seg.hopCount}});
    }
    return out;
}

json sectionJson(const assembly::Section& s) {
    return {{"kind", "section"},
            {"dp_a", s.dpA.str()},
            {"dp_b", s.dpB.str()},
            {"link_type", core::toString(s.linkType)},
            {"operational", core::toString(s.operational)},
            {"administrative", core::toString(s.administrative)},
            {"half_reported", s.halfReported},
            {"domains", s.domains}};
}

}  // namespace

ApiService::ApiService(weathermap::AbstractTopology topology, std::shared_ptr<const archive::MetricArchive> archive)
    : topology_(std::move(topology)), archive_(std::move(archive)), topologyJson_(weathermap::toJson(topology_).dump()) {
    if (!archive_) archive_ = std::make_shared<archive::MetricArchive>();
}

void ApiService::publish(const CycleInput& input) {
    const auto& result = *input.result;
    std::lock_guard lock(publishMutex_);

    auto snap = std::make_shared<Snapshot>();
    snap->cycleIndex = result.cycle.index;
    snap->windowTo = archive::alignToGrid(archive::SeriesFamily::Hades, result.cycle.end() - 1) + kMetricStep;
    snap->windowFrom = snap->windowTo - kMetricWindow;

    StateMap states;
    for (const auto& [id, view] : result.views) states.emplace(id, view.aggregatedOperational);
    history_[archive::alignToGrid(archive::SeriesFamily::Hades, result.cycle.start)] = std::move(states);
    history_.erase(history_.begin(), history_.lower_bound(snap->windowFrom));

    for (const auto& link : topology_.links) {
        snap->statuses.emplace(link.id, weathermap::computeAbstractStatus(link, result.views));
    }
    snap->overview = renderOverview(result, *snap);
    for (const auto& link : topology_.links) {
        snap->linkMetrics.emplace(link.id, renderLinkMetrics(link, *snap));
        snap->e2eSegments.emplace(link.id, renderE2ESegments(link, result));
    }
    for (const auto& node : topology_.nodes) snap->nodeMetrics.emplace(node.id, renderNodeMetrics(node, *snap));
    snap->statusXml = input.statusXml;
    snap->weeklyCsv = input.weeklyCsv;
    snap->monthlyCsv = input.monthlyCsv;

    std::lock_guard swap(snapshotMutex_);
    snapshot_ = std::move(snap);
}

std::shared_ptr<const Snapshot> ApiService::snapshot() const {
    std::lock_guard lock(snapshotMutex_);
    return snapshot_;
}

std::shared_ptr<const Snapshot> ApiService::require() const {
    auto snap = snapshot();
    if (!snap) throw ApiError(ApiError::Kind::NotReady, "no monitoring cycle has been published yet");
    return snap;
}

namespace {

const std::string& lookup(const std::map<std::string, std::string>& payloads, const std::string& id,
                          const char* what) {
    auto it = payloads.find(id);
    if (it == payloads.end()) throw ApiError(ApiError::Kind::UnknownElement, std::string("unknown ") + what + " '" + id + "'");
    return it->second;
}

}  // namespace

std::string ApiService::overview() const { return require()->overview; }
std::string ApiService::linkMetrics(const std::string& id) const { return lookup(require()->linkMetrics, id, "link"); }
std::string ApiService::nodeMetrics(const std::string& id) const { return lookup(require()->nodeMetrics, id, "node"); }
std::string ApiService::e2eSegments(const std::string& id) const { return lookup(require()->e2eSegments, id, "link"); }
std::string ApiService::statusXml() const { return require()->statusXml; }

std::string ApiService::statsCsv(std::string_view window) const {
    auto snap = require();
    if (window == "weekly") return snap->weeklyCsv;
    if (window == "monthly") return snap->monthlyCsv;
    throw ApiError(ApiError::Kind::UnknownElement, "unknown statistics window '" + std::string(window) + "'");
}

std::string ApiService::renderOverview(const monitor::CycleResult& result, const Snapshot& snap) const {
    json topo = json::parse(topologyJson_);
    json links = json::array();
    for (const auto& link : topology_.links) {
        json e2e = json::array();
        for (const auto& id : link.e2eLinkIds) {
            const auto* view = result.find(id);
            e2e.push_back({{"id", id.str()},
                           {"operational", view ? json(core::toString(view->aggregatedOperational)) : json(nullptr)}});
        }
        json entry = statusJson(snap.statuses.at(link.id));
        entry["id"] = link.id;
        entry["endpoints"] = {link.a, link.b};
        entry["e2e"] = std::move(e2e);
        links.push_back(std::move(entry));
    }
    return json{{"cycle", result.cycle.index},
                {"timestamp", result.cycle.start},
                {"nodes", std::move(topo["nodes"])},
                {"links", std::move(links)}}
        .dump();
}

std::string ApiService::renderLinkMetrics(const weathermap::AbstractLink& link, const Snapshot& snap) const {
    const std::size_t n = slotCount(snap);
    json abstractTimeline(json::value_t::array);
    json e2eTimelines = json::object();
    for (const auto& id : link.e2eLinkIds) {
        e2eTimelines[id.str()] = json(json::value_t::array);
        for (std::size_t i = 0; i < n; ++i) e2eTimelines[id.str()].push_back(nullptr);
    }
    for (std::size_t i = 0; i < n; ++i) abstractTimeline.push_back(nullptr);

    for (auto it = history_.lower_bound(snap.windowFrom); it != history_.end() && it->first < snap.windowTo; ++it) {
        const auto slot = static_cast<std::size_t>((it->first - snap.windowFrom) / kMetricStep);
        std::vector<std::optional<core::OperationalState>> members;
        for (const auto& id : link.e2eLinkIds) {
            auto s = it->second.find(id);
            if (s == it->second.end()) {
                members.emplace_back();
            } else {
                members.emplace_back(s->second);
                e2eTimelines[id.str()][slot] = core::toString(s->second);
            }
        }
        abstractTimeline[slot] = weathermap::toString(weathermap::combineMemberStates(members));
    }

    auto interfaceJson = [&](const std::string& node, const std::string& ifId) {
        using archive::MetricKind;
        using archive::SeriesKey;
        return json{{"node", node},
                    {"interface", ifId},
                    {"utilization", gridSeries(*archive_, SeriesKey::interface(ifId, MetricKind::Utilization), snap)},
                    {"input_errors", gridSeries(*archive_, SeriesKey::interface(ifId, MetricKind::InputErrors), snap)},
                    {"output_drops", gridSeries(*archive_, SeriesKey::interface(ifId, MetricKind::OutputDrops), snap)}};
    };

    return json{{"link", link.id},
                {"cycle", snap.cycleIndex},
                {"window", windowJson(snap)},
                {"timestamps", timestamps(snap)},
                {"status", {{"abstract", std::move(abstractTimeline)}, {"e2e", std::move(e2eTimelines)}}},
                {"interfaces", {interfaceJson(link.a, link.interfaceA), interfaceJson(link.b, link.interfaceB)}}}
        .dump();
}

std::string ApiService::renderNodeMetrics(const weathermap::AbstractNode& node, const Snapshot& snap) const {
    using archive::MetricKind;
    using archive::SeriesKey;
    json bundles = json::array();
    for (const auto& link : weathermap::selectionScope(node.id, topology_)) {
        const auto* a = topology_.findNode(link.a);
        const auto* b = topology_.findNode(link.b);
        json directions = json::array();
        for (const auto& [src, dst] : {std::pair{a, b}, std::pair{b, a}}) {
            const auto& s = src->hadesNode;
            const auto& d = dst->hadesNode;
            directions.push_back(
                {{"src", src->id},
                 {"dst", dst->id},
                 {"hops", hopSegments(*archive_, SeriesKey::hades(s, d, MetricKind::HopList), snap)},
                 {"owd", points(*archive_, SeriesKey::hades(s, d, MetricKind::OneWayDelay), snap)},
                 {"jitter", points(*archive_, SeriesKey::hades(s, d, MetricKind::Jitter), snap)},
                 {"loss", points(*archive_, SeriesKey::hades(s, d, MetricKind::Loss), snap)},
                 {"throughput", points(*archive_, SeriesKey::bwctl(src->bwctlAddress, dst->bwctlAddress), snap)}});
        }
        bundles.push_back({{"link", link.id}, {"endpoints", {link.a, link.b}}, {"directions", std::move(directions)}});
    }
    return json{{"node", node.id}, {"cycle", snap.cycleIndex}, {"window", windowJson(snap)}, {"bundles", std::move(bundles)}}
        .dump();
}

std::string ApiService::renderE2ESegments(const weathermap::AbstractLink& link,
                                          const monitor::CycleResult& result) const {
    json entries = json::array();
    for (const auto& id : link.e2eLinkIds) {
        const auto* view = result.find(id);
        if (!view) {
            entries.push_back({{"id", id.str()}, {"present", false}, {"elements", json::array()}});
            continue;
        }
        json elements = json::array();
        for (std::size_t f = 0; f < view->fragments.size(); ++f) {
            if (f > 0 && f - 1 < view->gaps.size()) {
                const auto& g = view->gaps[f - 1];
                elements.push_back({{"kind", "gap"}, {"after", g.after.str()}, {"before", g.before.str()}});
            }
            for (const auto& s : view->fragments[f]) elements.push_back(sectionJson(s));
        }
        json diagnostics = json::array();
        for (const auto& d : view->diagnostics) {
            diagnostics.push_back({{"kind", assembly::toString(d.kind)}, {"message", d.message}});
        }
        entries.push_back({{"id", id.str()},
                           {"present", true},
                           {"operational", core::toString(view->aggregatedOperational)},
                           {"administrative", core::toString(view->aggregatedAdministrative)},
                           {"has_unknown", view->hasUnknown},
                           {"fully_reconstructed", view->fullyReconstructed},
                           {"topology_conflict", view->topologyConflict},
                           {"fragments", view->fragments.size()},
                           {"gaps", view->gaps.size()},
                           {"elements", std::move(elements)},
                           {"diagnostics", std::move(diagnostics)}});
    }
    return json{{"link", link.id}, {"cycle", result.cycle.index}, {"e2e_links", std::move(entries)}}.dump();
}

}  // namespace opnmon::api
