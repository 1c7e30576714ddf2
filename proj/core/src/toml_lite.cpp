// SPDX-License-Identifier: Apache-2.0
#include "harness/toml_lite.hpp"

#include <cctype>
#include <sstream>

namespace harness::toml {

ParseError::ParseError(int line_, int col_, const std::string& message)
    : std::runtime_error("toml parse error at line " + std::to_string(line_) +
                         ", column " + std::to_string(col_) + ": " + message),
      line(line_),
      col(col_) {}

namespace {

struct Cursor {
    const std::string& text;
    size_t pos = 0;
    int line = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    int col_of(size_t p) const {
        // column within the current line, 1-based
        size_t start = text.rfind('\n', p == 0 ? 0 : p - 1);
        if (p == 0) return 1;
        if (start == std::string::npos) return static_cast<int>(p) + 1;
        return static_cast<int>(p - start);
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line, col_of(pos), msg);
    }
};

void skip_spaces(Cursor& c) {
    while (!c.eof() && (c.peek() == ' ' || c.peek() == '\t')) c.pos++;
}

bool at_line_end(Cursor& c) {
    skip_spaces(c);
    if (c.eof()) return true;
    if (c.peek() == '#') {
        while (!c.eof() && c.peek() != '\n') c.pos++;
        return true;
    }
    return c.peek() == '\n' || c.peek() == '\r';
}

void consume_newline(Cursor& c) {
    if (!c.eof() && c.peek() == '\r') c.pos++;
    if (!c.eof() && c.peek() == '\n') {
        c.pos++;
        c.line++;
    }
}

bool is_bare_key_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
}

std::string parse_basic_string(Cursor& c) {
    c.pos++;  // opening quote
    std::string out;
    while (true) {
        if (c.eof() || c.peek() == '\n') c.fail("unterminated string");
        char ch = c.peek();
        if (ch == '"') {
            c.pos++;
            return out;
        }
        if (ch == '\\') {
            c.pos++;
            if (c.eof()) c.fail("unterminated escape");
            char esc = c.peek();
            c.pos++;
            switch (esc) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case '/': out += '/'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 't': out += '\t'; break;
                case 'u': {
                    if (c.pos + 4 > c.text.size()) c.fail("bad unicode escape");
                    unsigned cp = 0;
                    for (int i = 0; i < 4; ++i) {
                        char h = c.text[c.pos + i];
                        cp <<= 4;
                        if (h >= '0' && h <= '9') cp |= h - '0';
                        else if (h >= 'a' && h <= 'f') cp |= h - 'a' + 10;
                        else if (h >= 'A' && h <= 'F') cp |= h - 'A' + 10;
                        else c.fail("bad unicode escape");
                    }
                    c.pos += 4;
                    // encode as UTF-8
                    if (cp < 0x80) {
                        out += static_cast<char>(cp);
                    } else if (cp < 0x800) {
                        out += static_cast<char>(0xC0 | (cp >> 6));
                        out += static_cast<char>(0x80 | (cp & 0x3F));
                    } else {
                        out += static_cast<char>(0xE0 | (cp >> 12));
                        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                        out += static_cast<char>(0x80 | (cp & 0x3F));
                    }
                    break;
                }
                default: c.fail("unsupported escape sequence");
            }
            continue;
        }
        out += ch;
        c.pos++;
    }
}

std::string parse_literal_string(Cursor& c) {
    c.pos++;  // opening quote
    std::string out;
    while (true) {
        if (c.eof() || c.peek() == '\n') c.fail("unterminated string");
        char ch = c.peek();
        if (ch == '\'') {
            c.pos++;
            return out;
        }
        out += ch;
        c.pos++;
    }
}

Value parse_scalar(Cursor& c);

Value parse_array(Cursor& c) {
    c.pos++;  // '['
    std::vector<std::string> items;
    while (true) {
        skip_spaces(c);
        if (c.eof() || c.peek() == '\n') c.fail("unterminated array");
        if (c.peek() == ']') {
            c.pos++;
            return items;
        }
        Value v = parse_scalar(c);
        if (auto* s = std::get_if<std::string>(&v)) {
            items.push_back(*s);
        } else {
            c.fail("only string arrays are supported");
        }
        skip_spaces(c);
        if (!c.eof() && c.peek() == ',') {
            c.pos++;
            continue;
        }
        skip_spaces(c);
        if (c.eof() || c.peek() != ']') c.fail("expected ',' or ']' in array");
    }
}

Value parse_scalar(Cursor& c) {
    skip_spaces(c);
    if (c.eof()) c.fail("expected a value");
    char ch = c.peek();
    if (ch == '"') return parse_basic_string(c);
    if (ch == '\'') return parse_literal_string(c);
    if (ch == '[') return parse_array(c);
    if (c.text.compare(c.pos, 4, "true") == 0 &&
        (c.pos + 4 == c.text.size() || !is_bare_key_char(c.text[c.pos + 4]))) {
        c.pos += 4;
        return true;
    }
    if (c.text.compare(c.pos, 5, "false") == 0 &&
        (c.pos + 5 == c.text.size() || !is_bare_key_char(c.text[c.pos + 5]))) {
        c.pos += 5;
        return false;
    }
    if (ch == '+' || ch == '-' || std::isdigit(static_cast<unsigned char>(ch))) {
        size_t start = c.pos;
        if (ch == '+' || ch == '-') c.pos++;
        bool any = false;
        while (!c.eof() && (std::isdigit(static_cast<unsigned char>(c.peek())) ||
                            c.peek() == '.' || c.peek() == 'e' || c.peek() == 'E' ||
                            c.peek() == '+' || c.peek() == '-')) {
            if (std::isdigit(static_cast<unsigned char>(c.peek()))) any = true;
            c.pos++;
        }
        if (!any) c.fail("malformed number");
        try {
            return std::stod(c.text.substr(start, c.pos - start));
        } catch (const std::exception&) {
            c.pos = start;
            c.fail("malformed number");
        }
    }
    c.fail("unrecognized value");
}

std::string parse_key(Cursor& c) {
    skip_spaces(c);
    if (c.eof()) c.fail("expected a key");
    if (c.peek() == '"') return parse_basic_string(c);
    if (c.peek() == '\'') return parse_literal_string(c);
    std::string key;
    while (!c.eof() && is_bare_key_char(c.peek())) {
        key += c.peek();
        c.pos++;
    }
    if (key.empty()) c.fail("expected a key");
    return key;
}

}  // namespace

Document parse(const std::string& text) {
    Document doc;
    Cursor c{text};
    std::string current;  // "" = root table
    while (!c.eof()) {
        skip_spaces(c);
        if (at_line_end(c)) {
            consume_newline(c);
            continue;
        }
        if (c.peek() == '[') {
            c.pos++;
            std::string name = parse_key(c);
            while (!c.eof() && c.peek() == '.') {
                c.pos++;
                name += "." + parse_key(c);
            }
            skip_spaces(c);
            if (c.eof() || c.peek() != ']') c.fail("expected ']'");
            c.pos++;
            if (!at_line_end(c)) c.fail("unexpected text after table header");
            consume_newline(c);
            current = name;
            doc.tables[current];  // ensure table exists even when empty
            continue;
        }
        std::string key = parse_key(c);
        skip_spaces(c);
        if (c.eof() || c.peek() != '=') c.fail("expected '=' after key");
        c.pos++;
        Value value = parse_scalar(c);
        if (!at_line_end(c)) c.fail("unexpected text after value");
        consume_newline(c);
        auto& table = doc.tables[current];
        if (table.count(key)) c.fail("duplicate key '" + key + "'");
        table.emplace(std::move(key), std::move(value));
    }
    return doc;
}

}  // namespace harness::toml
