#pragma once

// Minimal namespace-aware XML reader and a canonical writer. Covers what the
// status documents need: elements, attributes, character data, CDATA,
// comments, processing instructions and the predefined/numeric entities.
// DOCTYPE declarations are rejected.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opnmon/core/model.hpp"

namespace opnmon::xml {

class XmlError : public Error {
public:
    XmlError(std::size_t offset, const std::string& what)
        : Error("malformed XML at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

struct Attribute {
    std::string namespaceUri;  // empty for unprefixed attributes
    std::string localName;
    std::string qualifiedName;
    std::string value;
};

struct Element {
    std::string namespaceUri;
    std::string localName;
    std::string qualifiedName;
    std::vector<Attribute> attributes;  // namespace declarations excluded
    std::vector<Element> children;
    std::string text;  // concatenated character data directly inside this element

    const Attribute* attribute(std::string_view localName) const noexcept;
    const Element* child(std::string_view namespaceUri, std::string_view localName) const noexcept;
    std::vector<const Element*> childrenNamed(std::string_view namespaceUri, std::string_view localName) const;
    bool is(std::string_view ns, std::string_view local) const noexcept {
        return namespaceUri == ns && localName == local;
    }
};

inline constexpr std::size_t kMaxDepth = 128;

/// Parses a complete UTF-8 document. Never crashes on arbitrary input; every
/// failure is reported as XmlError.
Element parse(std::string_view document);

std::string escapeText(std::string_view text);
std::string escapeAttribute(std::string_view value);

/// True when `text` can be carried in XML 1.0 character data.
bool isRepresentable(std::string_view text) noexcept;

/// Canonical pretty-printer: two-space indent, attributes in the order given,
/// leaf elements with text kept on one line, LF line endings.
class Writer {
public:
    explicit Writer(bool declaration = true);

    Writer& open(std::string_view name, std::vector<std::pair<std::string, std::string>> attributes = {});
    Writer& leaf(std::string_view name, std::string_view text,
                 std::vector<std::pair<std::string, std::string>> attributes = {});
    Writer& empty(std::string_view name, std::vector<std::pair<std::string, std::string>> attributes = {});
    Writer& close();

    std::string finish();

private:
    void indent();
    void writeStart(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attributes);

    std::string out_;
    std::vector<std::string> stack_;
};

}  // namespace opnmon::xml
