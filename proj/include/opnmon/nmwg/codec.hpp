#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "opnmon/core/model.hpp"

namespace opnmon::nmwg {

inline constexpr std::string_view kNamespace = "http://ggf.org/ns/nmwg/base/2.0/";
inline constexpr std::string_view kSoapNamespace = "http://schemas.xmlsoap.org/soap/envelope/";
inline constexpr std::string_view kRequestType = "SetupDataRequest";
inline constexpr std::string_view kResponseType = "SetupDataResponse";
inline constexpr std::string_view kPathStatus = "Path.Status";

class CodecError : public Error {
public:
    enum class Kind { MalformedXml, SchemaViolation, UnknownState, InvariantViolation };

    CodecError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct MetadataBlock {
    std::string id;
    std::string eventType;

    friend bool operator==(const MetadataBlock&, const MetadataBlock&) = default;
};

struct DataBlock {
    std::string id;
    std::string metadataRef;
    std::vector<core::MonitoredLinkReport> reports;

    friend bool operator==(const DataBlock&, const DataBlock&) = default;
};

struct StatusDocument {
    std::string messageType{kRequestType};
    std::vector<MetadataBlock> metadata;
    std::vector<DataBlock> data;

    const MetadataBlock* findMetadata(std::string_view id) const noexcept;

    /// All reports of all data blocks, in document order.
    std::vector<core::MonitoredLinkReport> reports() const;

    friend bool operator==(const StatusDocument&, const StatusDocument&) = default;
};

/// Single Path.Status metadata block plus one data block holding `reports`.
StatusDocument makeStatusDocument(std::string_view messageType, std::vector<core::MonitoredLinkReport> reports);

/// Throws CodecError(InvariantViolation) if message type, ids or references
/// are inconsistent.
void validate(const StatusDocument& doc);

struct ParsedMessage {
    StatusDocument document;
    bool soapEnvelope = false;
};

/// Parses a bare or SOAP 1.1 wrapped nmwg:message. State texts are taken
/// from the canonical vocabulary first, then from `mapping` if given.
ParsedMessage parseMessage(std::string_view bytes, const core::StateMappingTable* mapping = nullptr);

StatusDocument parseStatusDocument(std::string_view bytes, const core::StateMappingTable* mapping = nullptr);

/// Deterministic UTF-8 output with fixed element and attribute order.
std::string emitStatusDocument(const StatusDocument& doc, bool soapEnvelope = false);

}  // namespace opnmon::nmwg
