#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xcore {

// Minimal XML document model: elements, attributes, text. Comments, the
// XML declaration, and DOCTYPE are skipped at parse time. This covers the
// instance format in docs/format.md; it is not a general XML library.
struct XmlNode {
    std::string name;  // empty for text nodes
    std::string text;  // payload of text nodes
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlNode> children;
    std::size_t offset = 0;  // byte offset of the node start in the source

    bool is_text() const { return name.empty(); }

    // nullptr when the attribute is absent.
    const std::string* attr(const std::string& key) const;

    // Concatenated text of direct text children, outer whitespace trimmed.
    std::string inner_text() const;

    // Direct element children with the given name.
    std::vector<const XmlNode*> elems(const std::string& name) const;

    // First direct element child with the given name, nullptr when absent.
    const XmlNode* child(const std::string& name) const;
};

class XmlError : public std::runtime_error {
public:
    XmlError(std::size_t offset, const std::string& message)
        : std::runtime_error(message), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Parses one document and returns its root element. Throws XmlError.
XmlNode xml_parse(const std::string& bytes);

// Serializes with 2-space indentation; pure-text elements stay on one line.
// Escapes &, <, >, and quotes inside attribute values.
std::string xml_write(const XmlNode& root);

}  // namespace xcore
