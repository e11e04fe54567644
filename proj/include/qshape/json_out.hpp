#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qshape {

// Builder for result documents. Object members keep insertion order and
// every double is printed with 17 significant digits, so serialized
// output is byte-stable and numerics round-trip losslessly.
class JsonValue {
public:
    using array_t = std::vector<JsonValue>;
    using member_t = std::pair<std::string, JsonValue>;
    using object_t = std::vector<member_t>;

    JsonValue() : v_(nullptr) {}
    JsonValue(std::nullptr_t) : v_(nullptr) {}
    JsonValue(bool b) : v_(b) {}
    JsonValue(int i) : v_(static_cast<std::int64_t>(i)) {}
    JsonValue(long i) : v_(static_cast<std::int64_t>(i)) {}
    JsonValue(long long i) : v_(static_cast<std::int64_t>(i)) {}
    JsonValue(unsigned long long u) : v_(static_cast<std::uint64_t>(u)) {}
    JsonValue(std::uint64_t u) : v_(u) {}
    JsonValue(double d) : v_(d) {}
    JsonValue(const char* s) : v_(std::string(s)) {}
    JsonValue(std::string s) : v_(std::move(s)) {}

    static JsonValue array() {
        JsonValue v;
        v.v_ = array_t{};
        return v;
    }
    static JsonValue object() {
        JsonValue v;
        v.v_ = object_t{};
        return v;
    }

    JsonValue& push_back(JsonValue item);            // array only
    JsonValue& set(std::string key, JsonValue item); // object only

    // Serialized form with a trailing newline; indent 0 is compact.
    std::string dump(int indent = 2) const;

private:
    std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double,
                 std::string, array_t, object_t>
        v_;

    void write(std::string& out, int indent, int depth) const;
};

} // namespace qshape
