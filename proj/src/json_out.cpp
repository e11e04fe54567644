#include "qshape/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qshape {

namespace {

void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

void write_double(std::string& out, double d) {
    if (!std::isfinite(d)) {
        // JSON has no non-finite literals; results never contain them.
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    out += buf;
}

void write_newline_indent(std::string& out, int indent, int depth) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * depth), ' ');
}

} // namespace

JsonValue& JsonValue::push_back(JsonValue item) {
    auto* arr = std::get_if<array_t>(&v_);
    if (arr == nullptr) {
        throw std::logic_error("push_back on a non-array JsonValue");
    }
    arr->push_back(std::move(item));
    return *this;
}

JsonValue& JsonValue::set(std::string key, JsonValue item) {
    auto* obj = std::get_if<object_t>(&v_);
    if (obj == nullptr) {
        throw std::logic_error("set on a non-object JsonValue");
    }
    for (auto& member : *obj) {
        if (member.first == key) {
            member.second = std::move(item);
            return *this;
        }
    }
    obj->emplace_back(std::move(key), std::move(item));
    return *this;
}

void JsonValue::write(std::string& out, int indent, int depth) const {
    switch (v_.index()) {
        case 0: out += "null"; break;
        case 1: out += std::get<bool>(v_) ? "true" : "false"; break;
        case 2: out += std::to_string(std::get<std::int64_t>(v_)); break;
        case 3: out += std::to_string(std::get<std::uint64_t>(v_)); break;
        case 4: write_double(out, std::get<double>(v_)); break;
        case 5: write_escaped(out, std::get<std::string>(v_)); break;
        case 6: {
            const auto& arr = std::get<array_t>(v_);
            if (arr.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            for (std::size_t i = 0; i < arr.size(); ++i) {
                if (i > 0) out += ',';
                write_newline_indent(out, indent, depth + 1);
                arr[i].write(out, indent, depth + 1);
            }
            write_newline_indent(out, indent, depth);
            out += ']';
            break;
        }
        case 7: {
            const auto& obj = std::get<object_t>(v_);
            if (obj.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            for (std::size_t i = 0; i < obj.size(); ++i) {
                if (i > 0) out += ',';
                write_newline_indent(out, indent, depth + 1);
                write_escaped(out, obj[i].first);
                out += indent > 0 ? ": " : ":";
                obj[i].second.write(out, indent, depth + 1);
            }
            write_newline_indent(out, indent, depth);
            out += '}';
            break;
        }
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

} // namespace qshape
