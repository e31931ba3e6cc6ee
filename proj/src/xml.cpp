#include "xcore/xml.hpp"

#include <cctype>
#include <cstdlib>
#include <cstring>

namespace xcore {

const std::string* XmlNode::attr(const std::string& key) const {
    for (const auto& [k, v] : attrs)
        if (k == key) return &v;
    return nullptr;
}

std::string XmlNode::inner_text() const {
    std::string out;
    for (const auto& c : children)
        if (c.is_text()) out += c.text;
    size_t b = out.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = out.find_last_not_of(" \t\r\n");
    return out.substr(b, e - b + 1);
}

std::vector<const XmlNode*> XmlNode::elems(const std::string& name) const {
    std::vector<const XmlNode*> out;
    for (const auto& c : children)
        if (c.name == name) out.push_back(&c);
    return out;
}

const XmlNode* XmlNode::child(const std::string& name) const {
    for (const auto& c : children)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

class Reader {
public:
    explicit Reader(const std::string& s) : s_(s) {}

    XmlNode parse_document() {
        skip_misc();
        if (eof()) fail("document has no root element");
        XmlNode root = parse_element();
        skip_misc();
        if (!eof()) fail("trailing content after the root element");
        return root;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    bool eof() const { return pos_ >= s_.size(); }
    char cur() const { return s_[pos_]; }
    bool starts_with(const char* lit) const { return s_.compare(pos_, strlen(lit), lit) == 0; }

    [[noreturn]] void fail(const std::string& msg) const { throw XmlError(pos_, msg); }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(cur()))) ++pos_;
    }

    // Whitespace, comments, the XML declaration, DOCTYPE.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<!--")) {
                size_t end = s_.find("-->", pos_ + 4);
                if (end == std::string::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else if (starts_with("<?")) {
                size_t end = s_.find("?>", pos_ + 2);
                if (end == std::string::npos) fail("unterminated processing instruction");
                pos_ = end + 2;
            } else if (starts_with("<!DOCTYPE")) {
                size_t end = s_.find('>', pos_);
                if (end == std::string::npos) fail("unterminated DOCTYPE");
                pos_ = end + 1;
            } else {
                return;
            }
        }
    }

    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
               c == ':' || c == '.';
    }

    std::string read_name() {
        size_t b = pos_;
        while (!eof() && name_char(cur())) ++pos_;
        if (pos_ == b) fail("expected a name");
        return s_.substr(b, pos_ - b);
    }

    std::string decode_entities(const std::string& raw, size_t at) {
        std::string out;
        for (size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out += raw[i];
                continue;
            }
            size_t semi = raw.find(';', i);
            if (semi == std::string::npos) throw XmlError(at + i, "unterminated entity");
            std::string ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "lt") out += '<';
            else if (ent == "gt") out += '>';
            else if (ent == "amp") out += '&';
            else if (ent == "quot") out += '"';
            else if (ent == "apos") out += '\'';
            else if (!ent.empty() && ent[0] == '#') {
                long code = std::strtol(ent.c_str() + (ent[1] == 'x' ? 2 : 1), nullptr,
                                        ent[1] == 'x' ? 16 : 10);
                if (code <= 0 || code > 127) throw XmlError(at + i, "unsupported char reference");
                out += static_cast<char>(code);
            } else {
                throw XmlError(at + i, "unknown entity &" + ent + ";");
            }
            i = semi;
        }
        return out;
    }

    XmlNode parse_element() {
        XmlNode node;
        node.offset = pos_;
        if (eof() || cur() != '<') fail("expected '<'");
        ++pos_;
        node.name = read_name();
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated start tag");
            if (cur() == '>') {
                ++pos_;
                break;
            }
            if (starts_with("/>")) {
                pos_ += 2;
                return node;
            }
            std::string key = read_name();
            skip_ws();
            if (eof() || cur() != '=') fail("expected '=' in attribute");
            ++pos_;
            skip_ws();
            if (eof() || (cur() != '"' && cur() != '\'')) fail("expected quoted attribute value");
            char quote = cur();
            size_t b = ++pos_;
            size_t end = s_.find(quote, b);
            if (end == std::string::npos) fail("unterminated attribute value");
            node.attrs.emplace_back(key, decode_entities(s_.substr(b, end - b), b));
            pos_ = end + 1;
        }
        // Content until the matching end tag.
        for (;;) {
            size_t text_begin = pos_;
            size_t lt = s_.find('<', pos_);
            if (lt == std::string::npos) fail("missing </" + node.name + ">");
            if (lt > text_begin) {
                XmlNode text;
                text.offset = text_begin;
                text.text = decode_entities(s_.substr(text_begin, lt - text_begin), text_begin);
                // Keep only non-blank text nodes.
                if (text.text.find_first_not_of(" \t\r\n") != std::string::npos)
                    node.children.push_back(std::move(text));
            }
            pos_ = lt;
            if (starts_with("<!--")) {
                size_t end = s_.find("-->", pos_ + 4);
                if (end == std::string::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else if (starts_with("</")) {
                pos_ += 2;
                std::string closing = read_name();
                if (closing != node.name)
                    fail("mismatched end tag </" + closing + "> for <" + node.name + ">");
                skip_ws();
                if (eof() || cur() != '>') fail("malformed end tag");
                ++pos_;
                return node;
            } else {
                node.children.push_back(parse_element());
            }
        }
    }
};

void escape_text(const std::string& in, std::string& out, bool attribute) {
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': attribute ? (void)(out += "&quot;") : (void)(out += c); break;
            default: out += c;
        }
    }
}

void write_node(const XmlNode& node, std::string& out, int depth) {
    out.append(static_cast<size_t>(depth) * 2, ' ');
    out += '<';
    out += node.name;
    for (const auto& [k, v] : node.attrs) {
        out += ' ';
        out += k;
        out += "=\"";
        escape_text(v, out, true);
        out += '"';
    }
    if (node.children.empty()) {
        out += "/>\n";
        return;
    }
    bool text_only = true;
    for (const auto& c : node.children) text_only &= c.is_text();
    out += '>';
    if (text_only) {
        for (const auto& c : node.children) escape_text(c.text, out, false);
    } else {
        out += '\n';
        for (const auto& c : node.children) {
            if (c.is_text()) {
                out.append(static_cast<size_t>(depth + 1) * 2, ' ');
                escape_text(c.text, out, false);
                out += '\n';
            } else {
                write_node(c, out, depth + 1);
            }
        }
        out.append(static_cast<size_t>(depth) * 2, ' ');
    }
    out += "</";
    out += node.name;
    out += ">\n";
}

}  // namespace

XmlNode xml_parse(const std::string& bytes) { return Reader(bytes).parse_document(); }

std::string xml_write(const XmlNode& root) {
    std::string out;
    write_node(root, out, 0);
    return out;
}

}  // namespace xcore
