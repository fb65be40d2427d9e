#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "cardest/value.hpp"

namespace cardest {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Attribute {
    std::string name;
    ValueType type;
};

// Ordered attribute list of one relation; order defines the attribute index.
struct Schema {
    std::string relation;
    std::vector<Attribute> attributes;

    std::size_t size() const { return attributes.size(); }

    // -1 if absent
    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < attributes.size(); ++i)
            if (attributes[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

inline ValueType parse_type_token(const std::string& tok) {
    if (tok == "int") return ValueType::Int;
    if (tok == "float") return ValueType::Float;
    if (tok == "text") return ValueType::Text;
    throw SchemaError("unknown type token: " + tok);
}

inline Schema schema_from_json(const nlohmann::json& doc) {
    Schema s;
    s.relation = doc.at("relation").get<std::string>();
    std::unordered_map<std::string, int> seen;
    for (const auto& a : doc.at("attributes")) {
        Attribute attr;
        attr.name = a.at("name").get<std::string>();
        attr.type = parse_type_token(a.at("type").get<std::string>());
        if (seen.count(attr.name))
            throw SchemaError("duplicate attribute name: " + attr.name);
        seen[attr.name] = 1;
        s.attributes.push_back(std::move(attr));
    }
    return s;
}

inline Schema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open schema file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("invalid schema JSON in " + path + ": " + e.what());
    }
    try {
        return schema_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("malformed schema in " + path + ": " + e.what());
    }
}

}  // namespace cardest
