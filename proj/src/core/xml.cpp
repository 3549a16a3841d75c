#include "opnmon/core/xml.hpp"

#include <cstdint>

namespace opnmon::xml {

namespace {

constexpr std::string_view kXmlNamespace = "http://www.w3.org/XML/1998/namespace";

bool isXmlChar(std::uint32_t cp) noexcept {
    if (cp == 0x9 || cp == 0xA || cp == 0xD) return true;
    if (cp >= 0x20 && cp <= 0xD7FF) return true;
    if (cp >= 0xE000 && cp <= 0xFFFD) return true;
    return cp >= 0x10000 && cp <= 0x10FFFF;
}

// Decodes one UTF-8 sequence starting at `i`; returns its length or 0 if invalid.
std::size_t decodeUtf8(std::string_view s, std::size_t i, std::uint32_t& cp) noexcept {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    if (b0 < 0x80) {
        cp = b0;
        return 1;
    }
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return 0;
    }
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong encodings and surrogates.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return 0;
    if (cp >= 0xD800 && cp <= 0xDFFF) return 0;
    if (cp > 0x10FFFF) return 0;
    return len;
}

void appendUtf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool isSpace(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool isNameStart(char c) noexcept {
    const auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' || u >= 0x80;
}

bool isNameChar(char c) noexcept {
    return isNameStart(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

struct RawAttribute {
    std::string name;
    std::string value;
};

class Parser {
public:
    explicit Parser(std::string_view input) : in_(input) {}

    Element run() {
        validateEncoding();
        if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
        skipMisc(true);
        if (atEnd() || peek() != '<') fail("expected root element");
        Element root = parseElement(0);
        skipMisc(false);
        if (!atEnd()) fail("content after root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw XmlError(pos_, what); }

    bool atEnd() const noexcept { return pos_ >= in_.size(); }
    char peek() const noexcept { return in_[pos_]; }
    bool startsWith(std::string_view s) const noexcept { return in_.substr(pos_, s.size()) == s; }

    void expect(char c) {
        if (atEnd() || peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skipSpace() {
        while (!atEnd() && isSpace(peek())) ++pos_;
    }

    void validateEncoding() {
        std::size_t i = 0;
        while (i < in_.size()) {
            std::uint32_t cp = 0;
            const std::size_t len = decodeUtf8(in_, i, cp);
            if (len == 0) throw XmlError(i, "invalid UTF-8");
            if (!isXmlChar(cp) && !(i == 0 && cp == 0xFEFF)) throw XmlError(i, "character not allowed in XML");
            i += len;
        }
    }

    void skipUntil(std::string_view terminator, const char* what) {
        const auto end = in_.find(terminator, pos_);
        if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
        pos_ = end + terminator.size();
    }

    void skipMisc(bool prolog) {
        for (;;) {
            skipSpace();
            if (startsWith("<?")) {
                skipUntil("?>", "processing instruction");
            } else if (startsWith("<!--")) {
                pos_ += 4;
                skipUntil("-->", "comment");
            } else if (startsWith("<!DOCTYPE")) {
                fail(prolog ? "DOCTYPE declarations are not supported" : "misplaced DOCTYPE");
            } else {
                return;
            }
        }
    }

    std::string parseName() {
        if (atEnd() || !isNameStart(peek())) fail("expected name");
        const std::size_t start = pos_;
        while (!atEnd() && isNameChar(peek())) ++pos_;
        return std::string(in_.substr(start, pos_ - start));
    }

    void parseReference(std::string& out) {
        expect('&');
        const auto semi = in_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 12) fail("unterminated entity reference");
        const std::string_view ref = in_.substr(pos_, semi - pos_);
        pos_ = semi + 1;
        if (ref == "lt") {
            out.push_back('<');
        } else if (ref == "gt") {
            out.push_back('>');
        } else if (ref == "amp") {
            out.push_back('&');
        } else if (ref == "quot") {
            out.push_back('"');
        } else if (ref == "apos") {
            out.push_back('\'');
        } else if (ref.size() >= 2 && ref[0] == '#') {
            std::uint32_t cp = 0;
            const bool hex = ref[1] == 'x';
            const std::string_view digits = ref.substr(hex ? 2 : 1);
            if (digits.empty()) fail("empty character reference");
            for (char c : digits) {
                std::uint32_t d = 0;
                if (c >= '0' && c <= '9') {
                    d = static_cast<std::uint32_t>(c - '0');
                } else if (hex && c >= 'a' && c <= 'f') {
                    d = static_cast<std::uint32_t>(c - 'a' + 10);
                } else if (hex && c >= 'A' && c <= 'F') {
                    d = static_cast<std::uint32_t>(c - 'A' + 10);
                } else {
                    fail("bad character reference");
                }
                cp = cp * (hex ? 16 : 10) + d;
                if (cp > 0x10FFFF) fail("character reference out of range");
            }
            if (!isXmlChar(cp)) fail("character reference to a disallowed character");
            appendUtf8(out, cp);
        } else {
            fail("unknown entity '" + std::string(ref) + "'");
        }
    }

    std::string parseAttributeValue() {
        if (atEnd() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
        const char quote = peek();
        ++pos_;
        std::string value;
        for (;;) {
            if (atEnd()) fail("unterminated attribute value");
            const char c = peek();
            if (c == quote) {
                ++pos_;
                return value;
            }
            if (c == '<') fail("'<' in attribute value");
            if (c == '&') {
                parseReference(value);
            } else {
                value.push_back(c == '\t' || c == '\n' || c == '\r' ? ' ' : c);
                ++pos_;
            }
        }
    }

    std::string resolve(std::string_view prefix, bool isAttribute) const {
        if (prefix == "xml") return std::string(kXmlNamespace);
        if (prefix.empty() && isAttribute) return {};
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (it->first == prefix) return it->second;
        }
        if (prefix.empty()) return {};
        throw XmlError(pos_, "unbound namespace prefix '" + std::string(prefix) + "'");
    }

    static std::pair<std::string_view, std::string_view> split(std::string_view qname) {
        const auto colon = qname.find(':');
        if (colon == std::string_view::npos) return {{}, qname};
        return {qname.substr(0, colon), qname.substr(colon + 1)};
    }

    Element parseElement(std::size_t depth) {
        if (depth >= kMaxDepth) fail("element nesting too deep");
        expect('<');
        Element element;
        element.qualifiedName = parseName();

        std::vector<RawAttribute> raw;
        bool selfClosing = false;
        for (;;) {
            const std::size_t before = pos_;
            skipSpace();
            if (atEnd()) fail("unterminated start tag");
            if (startsWith("/>")) {
                pos_ += 2;
                selfClosing = true;
                break;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            if (pos_ == before) fail("expected whitespace before attribute");
            RawAttribute attr;
            attr.name = parseName();
            skipSpace();
            expect('=');
            skipSpace();
            attr.value = parseAttributeValue();
            for (const auto& other : raw) {
                if (other.name == attr.name) fail("duplicate attribute '" + attr.name + "'");
            }
            raw.push_back(std::move(attr));
        }

        const std::size_t scopeMark = scope_.size();
        for (const auto& attr : raw) {
            if (attr.name == "xmlns") {
                scope_.emplace_back("", attr.value);
            } else if (attr.name.rfind("xmlns:", 0) == 0) {
                if (attr.value.empty()) fail("empty namespace for prefix");
                scope_.emplace_back(attr.name.substr(6), attr.value);
            }
        }

        auto [prefix, local] = split(element.qualifiedName);
        if (local.empty() || local.find(':') != std::string_view::npos) fail("bad qualified name");
        element.namespaceUri = resolve(prefix, false);
        element.localName = std::string(local);

        for (auto& attr : raw) {
            if (attr.name == "xmlns" || attr.name.rfind("xmlns:", 0) == 0) continue;
            auto [aprefix, alocal] = split(attr.name);
            if (alocal.empty() || alocal.find(':') != std::string_view::npos) fail("bad attribute name");
            Attribute a;
            a.namespaceUri = resolve(aprefix, true);
            a.localName = std::string(alocal);
            a.qualifiedName = attr.name;
            a.value = std::move(attr.value);
            element.attributes.push_back(std::move(a));
        }

        if (!selfClosing) parseContent(element, depth);
        scope_.resize(scopeMark);
        return element;
    }

    void parseContent(Element& element, std::size_t depth) {
        for (;;) {
            if (atEnd()) fail("unterminated element <" + element.qualifiedName + ">");
            const char c = peek();
            if (c == '<') {
                if (startsWith("</")) {
                    pos_ += 2;
                    const std::string name = parseName();
                    if (name != element.qualifiedName) {
                        fail("mismatched end tag </" + name + "> for <" + element.qualifiedName + ">");
                    }
                    skipSpace();
                    expect('>');
                    return;
                }
                if (startsWith("<!--")) {
                    pos_ += 4;
                    skipUntil("-->", "comment");
                } else if (startsWith("<![CDATA[")) {
                    pos_ += 9;
                    const auto end = in_.find("]]>", pos_);
                    if (end == std::string_view::npos) fail("unterminated CDATA section");
                    element.text.append(in_.substr(pos_, end - pos_));
                    pos_ = end + 3;
                } else if (startsWith("<?")) {
                    skipUntil("?>", "processing instruction");
                } else if (startsWith("<!")) {
                    fail("unsupported markup declaration");
                } else {
                    element.children.push_back(parseElement(depth + 1));
                }
            } else if (c == '&') {
                parseReference(element.text);
            } else {
                // Line-end normalisation: CRLF and lone CR become LF.
                if (c == '\r') {
                    element.text.push_back('\n');
                    ++pos_;
                    if (!atEnd() && peek() == '\n') ++pos_;
                } else {
                    element.text.push_back(c);
                    ++pos_;
                }
            }
        }
    }

    std::string_view in_;
    std::size_t pos_ = 0;
    std::vector<std::pair<std::string, std::string>> scope_;
};

std::string escape(std::string_view text, bool attribute) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"':
                if (attribute) {
                    out += "&quot;";
                } else {
                    out.push_back(c);
                }
                break;
            case '\t': out += "&#9;"; break;
            case '\n': out += attribute ? "&#10;" : "\n"; break;
            case '\r': out += "&#13;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

const Attribute* Element::attribute(std::string_view name) const noexcept {
    for (const auto& a : attributes) {
        if (a.namespaceUri.empty() && a.localName == name) return &a;
    }
    return nullptr;
}

const Element* Element::child(std::string_view ns, std::string_view local) const noexcept {
    for (const auto& c : children) {
        if (c.is(ns, local)) return &c;
    }
    return nullptr;
}

std::vector<const Element*> Element::childrenNamed(std::string_view ns, std::string_view local) const {
    std::vector<const Element*> out;
    for (const auto& c : children) {
        if (c.is(ns, local)) out.push_back(&c);
    }
    return out;
}

Element parse(std::string_view document) { return Parser(document).run(); }

std::string escapeText(std::string_view text) { return escape(text, false); }
std::string escapeAttribute(std::string_view value) { return escape(value, true); }

bool isRepresentable(std::string_view text) noexcept {
    std::size_t i = 0;
    while (i < text.size()) {
        std::uint32_t cp = 0;
        const std::size_t len = decodeUtf8(text, i, cp);
        if (len == 0 || !isXmlChar(cp)) return false;
        i += len;
    }
    return true;
}

Writer::Writer(bool declaration) {
    if (declaration) out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
}

void Writer::indent() { out_.append(stack_.size() * 2, ' '); }

void Writer::writeStart(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attributes) {
    indent();
    out_ += '<';
    out_ += name;
    for (const auto& [key, value] : attributes) {
        out_ += ' ';
        out_ += key;
        out_ += "=\"";
        out_ += escapeAttribute(value);
        out_ += '"';
    }
}

Writer& Writer::open(std::string_view name, std::vector<std::pair<std::string, std::string>> attributes) {
    writeStart(name, attributes);
    out_ += ">\n";
    stack_.emplace_back(name);
    return *this;
}

Writer& Writer::leaf(std::string_view name, std::string_view text,
                     std::vector<std::pair<std::string, std::string>> attributes) {
    writeStart(name, attributes);
    out_ += '>';
    out_ += escapeText(text);
    out_ += "</";
    out_ += name;
    out_ += ">\n";
    return *this;
}

Writer& Writer::empty(std::string_view name, std::vector<std::pair<std::string, std::string>> attributes) {
    writeStart(name, attributes);
    out_ += "/>\n";
    return *this;
}

Writer& Writer::close() {
    const std::string name = std::move(stack_.back());
    stack_.pop_back();
    indent();
    out_ += "</";
    out_ += name;
    out_ += ">\n";
    return *this;
}

std::string Writer::finish() {
    while (!stack_.empty()) close();
    return std::move(out_);
}

}  // namespace opnmon::xml
