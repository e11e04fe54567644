#include "qshape/point_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qshape/errors.hpp"

namespace qshape {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_double(std::string_view token, double& out) {
    token = trim(token);
    if (token.empty()) return false;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end && std::isfinite(out);
}

bool parse_xy_line(std::string_view line, double& x, double& y) {
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) return false;
    const std::string_view rest = line.substr(comma + 1);
    if (rest.find(',') != std::string_view::npos) return false;
    return parse_double(line.substr(0, comma), x) && parse_double(rest, y);
}

cvector_t parse_csv(std::string_view text) {
    cvector_t points;
    long line_no = 0;
    bool seen_data = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        double x = 0.0, y = 0.0;
        if (parse_xy_line(line, x, y)) {
            points.emplace_back(x, y);
            seen_data = true;
        } else if (!seen_data && points.empty()) {
            // One leading non-numeric row is tolerated as a header.
            seen_data = true;
        } else {
            throw ParseError("expected a numeric \"x,y\" row", line_no);
        }
    }
    return points;
}

long line_of_byte(std::string_view text, std::size_t byte) {
    long line = 1;
    const std::size_t end = std::min(byte, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

cvector_t parse_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(),
                         line_of_byte(text, e.byte));
    }
    if (!doc.is_array()) {
        throw ParseError("expected a JSON array of [x, y] pairs", 1);
    }
    cvector_t points;
    points.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& row = doc[i];
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() ||
            !row[1].is_number()) {
            throw ParseError("element " + std::to_string(i + 1) +
                                 " is not a numeric [x, y] pair",
                             1);
        }
        const double x = row[0].get<double>();
        const double y = row[1].get<double>();
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw ParseError("element " + std::to_string(i + 1) +
                                 " has a non-finite coordinate",
                             1);
        }
        points.emplace_back(x, y);
    }
    return points;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

cvector_t parse_pairs(std::string_view text, PointFormat format,
                      std::size_t min_pairs) {
    if (format == PointFormat::autodetect) {
        const std::string_view lead = trim(text);
        format = (!lead.empty() && lead.front() == '[') ? PointFormat::json
                                                        : PointFormat::csv;
    }
    cvector_t pairs =
        format == PointFormat::json ? parse_json(text) : parse_csv(text);
    if (pairs.size() < min_pairs) {
        throw TooFewPoints("input needs at least " + std::to_string(min_pairs) +
                           " pairs, got " + std::to_string(pairs.size()));
    }
    return pairs;
}

PointConfig parse_points(std::string_view text, PointFormat format) {
    return PointConfig(parse_pairs(text, format, 3));
}

std::string serialize_points_csv(const PointConfig& config) {
    std::string out;
    for (const auto& p : config.points) {
        out += format_double(p.real());
        out += ',';
        out += format_double(p.imag());
        out += '\n';
    }
    return out;
}

std::string serialize_points_json(const PointConfig& config) {
    std::string out = "[";
    for (std::size_t i = 0; i < config.points.size(); ++i) {
        if (i > 0) out += ',';
        out += '[';
        out += format_double(config.points[i].real());
        out += ',';
        out += format_double(config.points[i].imag());
        out += ']';
    }
    out += "]\n";
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path + " for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) {
        throw IoError("failed while reading " + path);
    }
    return std::move(buf).str();
}

void write_file(const std::string& path, std::string_view bytes) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + p.parent_path().string() +
                          ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) {
        throw IoError("failed while writing " + path);
    }
}

} // namespace qshape
