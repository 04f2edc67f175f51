#include "doctest.h"

#include <fstream>

#include "flanders/catalog.hpp"
#include "flanders/decomp.hpp"
#include "flanders/verify.hpp"

#include "json.hpp"

using namespace flanders;
using nlohmann::json;

namespace {

// minimal JSON-Schema subset: type, const, enum, required, properties,
// items, additionalProperties, minimum, maximum
bool validate(const json& schema, const json& doc, std::string& why) {
    if (schema.contains("const")) {
        if (doc != schema["const"]) {
            why = "const mismatch at " + doc.dump();
            return false;
        }
        return true;
    }
    if (schema.contains("enum")) {
        bool any = false;
        for (const auto& v : schema["enum"]) any = any || doc == v;
        if (!any) {
            why = "enum mismatch at " + doc.dump();
            return false;
        }
    }
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        bool ok = (t == "object" && doc.is_object()) || (t == "array" && doc.is_array()) ||
                  (t == "string" && doc.is_string()) || (t == "boolean" && doc.is_boolean()) ||
                  (t == "integer" && doc.is_number_integer()) ||
                  (t == "number" && doc.is_number());
        if (!ok) {
            why = "type " + t + " mismatch at " + doc.dump().substr(0, 60);
            return false;
        }
    }
    if (schema.contains("minimum") && doc.is_number() &&
        doc.get<double>() < schema["minimum"].get<double>()) {
        why = "below minimum: " + doc.dump();
        return false;
    }
    if (schema.contains("maximum") && doc.is_number() &&
        doc.get<double>() > schema["maximum"].get<double>()) {
        why = "above maximum: " + doc.dump();
        return false;
    }
    if (schema.contains("required"))
        for (const auto& k : schema["required"])
            if (!doc.contains(k.get<std::string>())) {
                why = "missing required field " + k.get<std::string>();
                return false;
            }
    if (schema.contains("properties") && doc.is_object())
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (schema["properties"].contains(it.key())) {
                if (!validate(schema["properties"][it.key()], it.value(), why)) return false;
            } else if (schema.contains("additionalProperties") &&
                       schema["additionalProperties"].is_object()) {
                if (!validate(schema["additionalProperties"], it.value(), why)) return false;
            }
        }
    if (schema.contains("items") && doc.is_array())
        for (const auto& el : doc)
            if (!validate(schema["items"], el, why)) return false;
    return true;
}

json load_schema(const std::string& name) {
    for (const char* prefix : {"../schemas/", "schemas/", "../../schemas/"}) {
        std::ifstream in(prefix + name);
        if (in) {
            json j;
            in >> j;
            return j;
        }
    }
    FAIL("schema file not found: ", name);
    return {};
}

} // namespace

TEST_CASE("emitted matspace JSON validates against the shipped schema") {
    json schema = load_schema("matspace.schema.json");
    std::string why;
    for (const auto& e : desk_catalog(3, 3, 3)) {
        bool ok = validate(schema, e.space.to_json(), why);
        INFO(why);
        CHECK(ok);
    }
}

TEST_CASE("census report JSON validates against the shipped schema") {
    json schema = load_schema("census-report.schema.json");
    census_spec cs;
    cs.q = 2;
    cs.n = cs.p = 2;
    cs.r = 1;
    cs.dim = 2;
    cs.kind = census_spec::kind_t::affine;
    cs.workers = 1;
    census_report rep = run_census(cs);
    std::string why;
    bool ok = validate(schema, rep.to_json(), why);
    INFO(why);
    CHECK(ok);
}

TEST_CASE("check report JSON validates against the shipped schema") {
    json schema = load_schema("check-report.schema.json");
    check_report rep = run_check("convexity");
    std::string why;
    bool ok = validate(schema, rep.to_json(), why);
    INFO(why);
    CHECK(ok);
}
