// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace harness::toml {

// Minimal TOML reader covering what skill manifests use: [tables],
// bare/quoted keys, basic and literal strings, booleans, numbers, and
// single-line arrays of strings. Errors carry line and column.

using Value = std::variant<std::string, bool, double, std::vector<std::string>>;
using Table = std::map<std::string, Value>;

struct Document {
    // Root-level keys live under the "" table.
    std::map<std::string, Table> tables;

    const Table* find(const std::string& name) const {
        auto it = tables.find(name);
        return it == tables.end() ? nullptr : &it->second;
    }
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& message);
    int line;
    int col;
};

Document parse(const std::string& text);

}  // namespace harness::toml
