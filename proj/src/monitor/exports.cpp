#include "opnmon/monitor/exports.hpp"

#include <algorithm>

#include "opnmon/core/xml.hpp"

namespace opnmon::monitor {

namespace {

std::string csvField(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

const char* boolText(bool b) { return b ? "true" : "false"; }

bool parseBool(const xml::Element& e, std::string_view name) {
    const xml::Attribute* a = e.attribute(name);
    if (a == nullptr) throw xml::XmlError(0, "missing attribute " + std::string(name));
    if (a->value == "true") return true;
    if (a->value == "false") return false;
    throw xml::XmlError(0, "bad boolean '" + a->value + "'");
}

const std::string& requireAttr(const xml::Element& e, std::string_view name) {
    const xml::Attribute* a = e.attribute(name);
    if (a == nullptr) throw xml::XmlError(0, "missing attribute " + std::string(name));
    return a->value;
}

}  // namespace

std::string formatPercent(std::uint64_t count, std::uint64_t total) {
    if (total == 0) return "n/a";
    // hundredths of a percent, rounded half-up: floor((2 * count * 10000 + total) / (2 * total))
    const std::uint64_t hundredths = (2 * count * 10000 + total) / (2 * total);
    std::string frac = std::to_string(hundredths % 100);
    if (frac.size() < 2) frac.insert(0, "0");
    return std::to_string(hundredths / 100) + "." + frac;
}

std::string exportStatsCsv(std::span<const AvailabilityLedger> ledgers) {
    std::vector<const AvailabilityLedger*> rows;
    for (const auto& l : ledgers) rows.push_back(&l);
    std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) { return a->linkId < b->linkId; });

    std::string out(kStatsCsvHeader);
    out += '\n';
    for (const auto* l : rows) {
        out += csvField(l->linkId.str());
        for (std::uint64_t count : {l->certainUp, l->down, l->uncertain, l->unknown}) {
            out += ',';
            out += formatPercent(count, l->total);
        }
        out += ',';
        out += std::to_string(l->total);
        out += '\n';
    }
    return out;
}

StatusExport makeStatusExport(const CycleResult& result, const std::set<core::E2ELinkId>& productive) {
    StatusExport status;
    status.cycleIndex = result.cycle.index;
    status.timestamp = result.cycle.start;
    for (const auto& id : productive) {
        ExportedLinkStatus s;
        s.id = id;
        if (const auto* view = result.find(id)) {
            s.operational = view->aggregatedOperational;
            s.administrative = view->aggregatedAdministrative;
            s.hasUnknown = view->hasUnknown;
            s.fullyReconstructed = view->fullyReconstructed;
        } else {
            s.hasUnknown = true;
        }
        s.uncertain = s.hasUnknown || !s.fullyReconstructed;
        status.links.push_back(std::move(s));
    }
    return status;
}

std::string exportStatusXml(const StatusExport& status) {
    xml::Writer w;
    w.open("e2eLinkStatus",
           {{"cycle", std::to_string(status.cycleIndex)}, {"timestamp", std::to_string(status.timestamp)}});
    for (const auto& s : status.links) {
        w.empty("link", {{"id", s.id.str()},
                         {"operational", std::string(core::toString(s.operational))},
                         {"administrative", std::string(core::toString(s.administrative))},
                         {"uncertain", boolText(s.uncertain)},
                         {"hasUnknown", boolText(s.hasUnknown)},
                         {"fullyReconstructed", boolText(s.fullyReconstructed)}});
    }
    return w.finish();
}

std::string exportStatusXml(const CycleResult& result, const std::set<core::E2ELinkId>& productive) {
    return exportStatusXml(makeStatusExport(result, productive));
}

StatusExport parseStatusXml(std::string_view bytes) {
    const xml::Element root = xml::parse(bytes);
    if (!root.is("", "e2eLinkStatus")) throw xml::XmlError(0, "root must be e2eLinkStatus");
    StatusExport status;
    status.cycleIndex = std::stoll(requireAttr(root, "cycle"));
    status.timestamp = std::stoll(requireAttr(root, "timestamp"));
    for (const xml::Element* link : root.childrenNamed("", "link")) {
        ExportedLinkStatus s;
        s.id = core::E2ELinkId(requireAttr(*link, "id"));
        s.operational = core::operationalStateFromString(requireAttr(*link, "operational"));
        s.administrative = core::administrativeStateFromString(requireAttr(*link, "administrative"));
        s.uncertain = parseBool(*link, "uncertain");
        s.hasUnknown = parseBool(*link, "hasUnknown");
        s.fullyReconstructed = parseBool(*link, "fullyReconstructed");
        status.links.push_back(std::move(s));
    }
    return status;
}

}  // namespace opnmon::monitor
