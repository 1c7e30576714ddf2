// SPDX-License-Identifier: Apache-2.0
#include "harness/schema.hpp"

namespace harness {

using nlohmann::json;

std::string SchemaDoc::key() const {
    return skill_name + "/" + (role == SchemaRole::input ? "input" : "output");
}

json ValidationErrors::to_json() const {
    json items = json::array();
    for (const auto& item : detail) {
        items.push_back({{"loc", item.loc}, {"msg", item.msg}, {"type", item.type}});
    }
    return json{{"detail", items}};
}

// nlohmann::json keeps object keys in a sorted std::map and emits shortest
// round-trip numbers, so dump() is already the canonical form.
std::string canonicalize(const json& value) { return value.dump(); }

std::string chunk_to_string(const json& chunk) {
    if (chunk.is_string()) return chunk.get<std::string>();
    return canonicalize(chunk);
}

namespace {

const json* resolve_ref(const json& root, const std::string& ref) {
    if (ref.rfind("#/", 0) != 0) return nullptr;
    const json* node = &root;
    std::string path = ref.substr(2);
    size_t pos = 0;
    while (pos <= path.size()) {
        size_t next = path.find('/', pos);
        std::string seg = path.substr(pos, next == std::string::npos ? std::string::npos
                                                                     : next - pos);
        // unescape JSON Pointer tokens
        std::string key;
        for (size_t i = 0; i < seg.size(); ++i) {
            if (seg[i] == '~' && i + 1 < seg.size()) {
                key += seg[i + 1] == '0' ? '~' : '/';
                ++i;
            } else {
                key += seg[i];
            }
        }
        if (!node->is_object() || !node->contains(key)) return nullptr;
        node = &(*node)[key];
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return node;
}

std::string json_type_name(const json& v) {
    switch (v.type()) {
        case json::value_t::null: return "null";
        case json::value_t::boolean: return "boolean";
        case json::value_t::string: return "string";
        case json::value_t::array: return "array";
        case json::value_t::object: return "object";
        case json::value_t::number_integer:
        case json::value_t::number_unsigned: return "integer";
        case json::value_t::number_float: return "number";
        default: return "unknown";
    }
}

bool matches_type(const json& v, const std::string& type) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    if (type == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (type == "number") return v.is_number();
    return true;  // unknown type names are not enforced
}

struct Validator {
    const json& root;
    std::vector<ValidationErrors::Item>* errors;
    int depth = 0;

    void fail(const json& loc, std::string msg, std::string type) {
        errors->push_back({loc, std::move(msg), std::move(type)});
    }

    void validate(const json& schema, json& value, json loc) {
        if (depth > 64) return;  // cycle guard for $ref
        ++depth;
        const json* node = &schema;
        if (node->is_object() && node->contains("$ref") && (*node)["$ref"].is_string()) {
            const json* target = resolve_ref(root, (*node)["$ref"].get<std::string>());
            if (target) node = target;
        }
        const json& s = *node;
        if (!s.is_object()) {
            --depth;
            return;
        }

        if (s.contains("const")) {
            if (value != s["const"]) {
                fail(loc, "value must equal the declared constant", "const");
            }
        }
        if (s.contains("enum") && s["enum"].is_array()) {
            bool found = false;
            for (const auto& option : s["enum"]) {
                if (value == option) {
                    found = true;
                    break;
                }
            }
            if (!found) fail(loc, "value is not one of the allowed options", "enum");
        }
        if (s.contains("type") && s["type"].is_string()) {
            const std::string want = s["type"].get<std::string>();
            if (!matches_type(value, want)) {
                fail(loc, "expected " + want + ", got " + json_type_name(value), "type");
                --depth;
                return;  // deeper checks are meaningless on the wrong type
            }
        }

        if (value.is_object()) {
            const json* props =
                s.contains("properties") && s["properties"].is_object() ? &s["properties"]
                                                                        : nullptr;
            if (props) {
                // apply declared defaults for absent properties first
                for (auto it = props->begin(); it != props->end(); ++it) {
                    if (!value.contains(it.key()) && it.value().is_object() &&
                        it.value().contains("default")) {
                        value[it.key()] = it.value()["default"];
                    }
                }
            }
            if (s.contains("required") && s["required"].is_array()) {
                for (const auto& req : s["required"]) {
                    if (req.is_string() && !value.contains(req.get<std::string>())) {
                        json l = loc;
                        l.push_back(req.get<std::string>());
                        fail(l, "field required", "missing");
                    }
                }
            }
            for (auto it = value.begin(); it != value.end(); ++it) {
                json l = loc;
                l.push_back(it.key());
                if (props && props->contains(it.key())) {
                    validate((*props)[it.key()], it.value(), l);
                } else if (s.contains("additionalProperties")) {
                    const json& ap = s["additionalProperties"];
                    if (ap.is_boolean() && !ap.get<bool>()) {
                        fail(l, "additional property not allowed", "additional_properties");
                    } else if (ap.is_object()) {
                        validate(ap, it.value(), l);
                    }
                }
            }
        } else if (value.is_array()) {
            if (s.contains("items") && s["items"].is_object()) {
                for (size_t i = 0; i < value.size(); ++i) {
                    json l = loc;
                    l.push_back(i);
                    validate(s["items"], value[i], l);
                }
            }
        } else if (value.is_string()) {
            const auto len = value.get<std::string>().size();
            if (s.contains("minLength") && s["minLength"].is_number() &&
                len < s["minLength"].get<size_t>()) {
                fail(loc, "string is too short", "min_length");
            }
            if (s.contains("maxLength") && s["maxLength"].is_number() &&
                len > s["maxLength"].get<size_t>()) {
                fail(loc, "string is too long", "max_length");
            }
        } else if (value.is_number()) {
            const double v = value.get<double>();
            if (s.contains("minimum") && s["minimum"].is_number() &&
                v < s["minimum"].get<double>()) {
                fail(loc, "value is below the minimum", "minimum");
            }
            if (s.contains("maximum") && s["maximum"].is_number() &&
                v > s["maximum"].get<double>()) {
                fail(loc, "value is above the maximum", "maximum");
            }
        }
        --depth;
    }
};

}  // namespace

ValidationOutcome validate_against(const json& schema, const json& body) {
    ValidationOutcome out;
    out.value = body;
    Validator v{schema, &out.errors.detail};
    if (schema.is_object() && schema.value("type", "") == "object" && !body.is_object()) {
        out.errors.detail.push_back({json::array(),
                                     "expected object, got " + json_type_name(body),
                                     "type"});
        return out;
    }
    v.validate(schema, out.value, json::array());
    return out;
}

ValidationOutcome validate_input(const SchemaDoc& schema, const json& body) {
    return validate_against(schema.raw, body);
}

std::optional<std::string> schema_subset_error(const json& schema) {
    if (!schema.is_object()) {
        if (schema.is_array()) {
            for (const auto& item : schema) {
                if (auto err = schema_subset_error(item)) return err;
            }
        }
        return std::nullopt;
    }
    for (const char* keyword : {"anyOf", "oneOf", "allOf", "not"}) {
        if (schema.contains(keyword)) {
            return std::string("unsupported schema keyword '") + keyword + "'";
        }
    }
    if (schema.contains("type") && schema["type"].is_array()) {
        return std::string("unsupported schema construct: type arrays");
    }
    for (auto it = schema.begin(); it != schema.end(); ++it) {
        if (auto err = schema_subset_error(it.value())) return err;
    }
    return std::nullopt;
}

}  // namespace harness
