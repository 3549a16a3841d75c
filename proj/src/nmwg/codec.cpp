#include "opnmon/nmwg/codec.hpp"

#include <charconv>
#include <set>

#include "opnmon/core/xml.hpp"

namespace opnmon::nmwg {

using core::MonitoredLinkReport;

namespace {

[[noreturn]] void schema(const std::string& what) { throw CodecError(CodecError::Kind::SchemaViolation, what); }

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

const xml::Element& requireChild(const xml::Element& parent, std::string_view local) {
    const xml::Element* c = parent.child(kNamespace, local);
    if (c == nullptr) schema("<" + parent.qualifiedName + "> is missing required <nmwg:" + std::string(local) + ">");
    if (!c->children.empty()) schema("<nmwg:" + std::string(local) + "> must contain text only");
    return *c;
}

std::string requireAttribute(const xml::Element& element, std::string_view name) {
    const xml::Attribute* a = element.attribute(name);
    if (a == nullptr || a->value.empty()) {
        schema("<" + element.qualifiedName + "> is missing required attribute '" + std::string(name) + "'");
    }
    return a->value;
}

core::OperationalState mapOperational(std::string_view text, const core::StateMappingTable* mapping) {
    if (auto s = core::parseOperationalState(text)) return *s;
    if (mapping != nullptr) {
        if (auto it = mapping->operational.find(text); it != mapping->operational.end()) return it->second;
    }
    throw CodecError(CodecError::Kind::UnknownState, "unknown operational state '" + std::string(text) + "'");
}

core::AdministrativeState mapAdministrative(std::string_view text, const core::StateMappingTable* mapping) {
    if (auto s = core::parseAdministrativeState(text)) return *s;
    if (mapping != nullptr) {
        if (auto it = mapping->administrative.find(text); it != mapping->administrative.end()) return it->second;
    }
    throw CodecError(CodecError::Kind::UnknownState, "unknown administrative state '" + std::string(text) + "'");
}

MonitoredLinkReport parseReport(const xml::Element& link, const core::StateMappingTable* mapping) {
    MonitoredLinkReport r;
    const std::string& e2eId = requireChild(link, "e2eLinkId").text;
    const std::string& dpA = requireChild(link, "demarcationPointA").text;
    const std::string& dpB = requireChild(link, "demarcationPointB").text;
    if (e2eId.empty() || dpA.empty() || dpB.empty()) schema("monitoredLink has an empty identifier");
    if (dpA == dpB) schema("monitoredLink " + e2eId + " has identical demarcation points");
    r.e2eLinkId = core::E2ELinkId(e2eId);
    r.dpA = core::DemarcationPointId(dpA);
    r.dpB = core::DemarcationPointId(dpB);

    const std::string_view type = trim(requireChild(link, "linkType").text);
    auto linkType = core::parseLinkType(type);
    if (!linkType) schema("unknown linkType '" + std::string(type) + "'");
    r.linkType = *linkType;

    r.reportingDomain = requireChild(link, "domain").text;
    r.operational = mapOperational(trim(requireChild(link, "operationalState").text), mapping);
    r.administrative = mapAdministrative(trim(requireChild(link, "administrativeState").text), mapping);

    const std::string_view ts = trim(requireChild(link, "timestamp").text);
    const auto res = std::from_chars(ts.data(), ts.data() + ts.size(), r.cycleTimestamp);
    if (ts.empty() || res.ec != std::errc{} || res.ptr != ts.data() + ts.size()) {
        schema("bad timestamp '" + std::string(ts) + "'");
    }
    return r;
}

StatusDocument parseNmwgMessage(const xml::Element& message, const core::StateMappingTable* mapping) {
    StatusDocument doc;
    doc.messageType = requireAttribute(message, "type");
    if (doc.messageType != kRequestType && doc.messageType != kResponseType) {
        schema("unsupported message type '" + doc.messageType + "'");
    }

    std::set<std::string> metadataIds;
    for (const xml::Element* m : message.childrenNamed(kNamespace, "metadata")) {
        MetadataBlock block;
        block.id = requireAttribute(*m, "id");
        if (!metadataIds.insert(block.id).second) schema("duplicate metadata id '" + block.id + "'");
        block.eventType = std::string(trim(requireChild(*m, "eventType").text));
        doc.metadata.push_back(std::move(block));
    }

    std::set<std::string> dataIds;
    for (const xml::Element* d : message.childrenNamed(kNamespace, "data")) {
        DataBlock block;
        block.id = requireAttribute(*d, "id");
        if (!dataIds.insert(block.id).second) schema("duplicate data id '" + block.id + "'");
        block.metadataRef = requireAttribute(*d, "metadataIdRef");
        const MetadataBlock* meta = doc.findMetadata(block.metadataRef);
        if (meta == nullptr) {
            schema("data block '" + block.id + "' references missing metadata '" + block.metadataRef + "'");
        }
        for (const xml::Element* link : d->childrenNamed(kNamespace, "monitoredLink")) {
            block.reports.push_back(parseReport(*link, mapping));
        }
        if (!block.reports.empty() && meta->eventType != kPathStatus) {
            schema("link status payload under eventType '" + meta->eventType + "'");
        }
        doc.data.push_back(std::move(block));
    }
    return doc;
}

void requireRepresentable(std::string_view text, const char* what) {
    if (!xml::isRepresentable(text)) {
        throw CodecError(CodecError::Kind::InvariantViolation, std::string(what) + " is not representable in XML");
    }
}

}  // namespace

const MetadataBlock* StatusDocument::findMetadata(std::string_view id) const noexcept {
    for (const auto& m : metadata) {
        if (m.id == id) return &m;
    }
    return nullptr;
}

std::vector<MonitoredLinkReport> StatusDocument::reports() const {
    std::vector<MonitoredLinkReport> out;
    for (const auto& block : data) out.insert(out.end(), block.reports.begin(), block.reports.end());
    return out;
}

StatusDocument makeStatusDocument(std::string_view messageType, std::vector<MonitoredLinkReport> reports) {
    StatusDocument doc;
    doc.messageType = std::string(messageType);
    doc.metadata.push_back({"meta1", std::string(kPathStatus)});
    doc.data.push_back({"data1", "meta1", std::move(reports)});
    return doc;
}

void validate(const StatusDocument& doc) {
    auto violation = [](const std::string& what) {
        throw CodecError(CodecError::Kind::InvariantViolation, what);
    };
    if (doc.messageType != kRequestType && doc.messageType != kResponseType) {
        violation("unsupported message type '" + doc.messageType + "'");
    }
    std::set<std::string> ids;
    for (const auto& m : doc.metadata) {
        if (m.id.empty()) violation("empty metadata id");
        if (!ids.insert(m.id).second) violation("duplicate metadata id '" + m.id + "'");
        requireRepresentable(m.id, "metadata id");
        requireRepresentable(m.eventType, "event type");
        if (trim(m.eventType) != m.eventType) violation("event type has surrounding whitespace");
    }
    std::set<std::string> dataIds;
    for (const auto& d : doc.data) {
        if (d.id.empty()) violation("empty data id");
        if (!dataIds.insert(d.id).second) violation("duplicate data id '" + d.id + "'");
        requireRepresentable(d.id, "data id");
        const MetadataBlock* meta = doc.findMetadata(d.metadataRef);
        if (meta == nullptr) violation("data block '" + d.id + "' has dangling metadata reference");
        if (!d.reports.empty() && meta->eventType != kPathStatus) {
            violation("link status payload under eventType '" + meta->eventType + "'");
        }
        for (const auto& r : d.reports) {
            try {
                core::validate(r);
            } catch (const core::ModelError& e) {
                violation(e.what());
            }
            requireRepresentable(r.e2eLinkId.str(), "E2E link id");
            requireRepresentable(r.dpA.str(), "demarcation point id");
            requireRepresentable(r.dpB.str(), "demarcation point id");
            requireRepresentable(r.reportingDomain, "domain");
        }
    }
}

ParsedMessage parseMessage(std::string_view bytes, const core::StateMappingTable* mapping) {
    xml::Element root;
    try {
        root = xml::parse(bytes);
    } catch (const xml::XmlError& e) {
        throw CodecError(CodecError::Kind::MalformedXml, e.what());
    }

    ParsedMessage parsed;
    const xml::Element* message = &root;
    if (root.is(kSoapNamespace, "Envelope")) {
        parsed.soapEnvelope = true;
        const xml::Element* body = root.child(kSoapNamespace, "Body");
        if (body == nullptr) schema("SOAP envelope without Body");
        message = body->child(kNamespace, "message");
        if (message == nullptr) schema("SOAP Body does not contain an nmwg:message");
    } else if (!root.is(kNamespace, "message")) {
        schema("root element must be nmwg:message, found <" + root.qualifiedName + ">");
    }
    parsed.document = parseNmwgMessage(*message, mapping);
    return parsed;
}

StatusDocument parseStatusDocument(std::string_view bytes, const core::StateMappingTable* mapping) {
    return parseMessage(bytes, mapping).document;
}

std::string emitStatusDocument(const StatusDocument& doc, bool soapEnvelope) {
    validate(doc);
    xml::Writer w;
    if (soapEnvelope) {
        w.open("SOAP-ENV:Envelope", {{"xmlns:SOAP-ENV", std::string(kSoapNamespace)}});
        w.open("SOAP-ENV:Body");
    }
    w.open("nmwg:message", {{"type", doc.messageType}, {"xmlns:nmwg", std::string(kNamespace)}});
    for (const auto& m : doc.metadata) {
        w.open("nmwg:metadata", {{"id", m.id}});
        w.leaf("nmwg:eventType", m.eventType);
        w.close();
    }
    for (const auto& d : doc.data) {
        std::vector<std::pair<std::string, std::string>> attrs{{"id", d.id}, {"metadataIdRef", d.metadataRef}};
        if (d.reports.empty()) {
            w.empty("nmwg:data", std::move(attrs));
            continue;
        }
        w.open("nmwg:data", std::move(attrs));
        for (const auto& r : d.reports) {
            w.open("nmwg:monitoredLink");
            w.leaf("nmwg:e2eLinkId", r.e2eLinkId.str());
            w.leaf("nmwg:linkType", core::toString(r.linkType));
            w.leaf("nmwg:demarcationPointA", r.dpA.str());
            w.leaf("nmwg:demarcationPointB", r.dpB.str());
            w.leaf("nmwg:domain", r.reportingDomain);
            w.leaf("nmwg:operationalState", core::toString(r.operational));
            w.leaf("nmwg:administrativeState", core::toString(r.administrative));
            w.leaf("nmwg:timestamp", std::to_string(r.cycleTimestamp));
            w.close();
        }
        w.close();
    }
    return w.finish();
}

}  // namespace opnmon::nmwg
