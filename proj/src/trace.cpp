#include "chirono/trace.hpp"
#include "chirono/error.hpp"

#include <fstream>
#include <sstream>

namespace chirono {

using nlohmann::json;

std::int64_t record_time(const TraceRecord& r) {
    return std::visit([](const auto& v) { return v.t_ms; }, r);
}

namespace {

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
    throw Error(Errc::MalformedTrace, "trace line " + std::to_string(line) + ": " + what);
}

TraceHeader parse_header(const json& j, std::size_t line) {
    TraceHeader h;
    if (!j.contains("version") || !j["version"].is_number_integer()) bad_line(line, "header needs integer version");
    h.version = j["version"].get<int>();
    if (h.version != kTraceVersion) bad_line(line, "unsupported trace version " + std::to_string(h.version));
    if (j.contains("config")) {
        try {
            h.config = apply_config_patch({}, j["config"]);
        } catch (const Error& e) {
            bad_line(line, e.what());
        }
    }
    if (j.contains("scene_hash")) {
        if (!j["scene_hash"].is_string()) bad_line(line, "scene_hash must be a string");
        h.scene_hash = j["scene_hash"].get<std::string>();
    }
    return h;
}

} // namespace

Trace parse_trace(std::string_view text) {
    Trace trace;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    std::optional<std::int64_t> last_t;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) bad_line(line_no, "not a JSON object");
        if (j.contains("format")) {
            if (j["format"] != "chirono-trace") bad_line(line_no, "unknown format");
            if (trace.header || !trace.records.empty()) bad_line(line_no, "header must be the first record");
            trace.header = parse_header(j, line_no);
            continue;
        }
        if (!j.contains("t_ms") || !j["t_ms"].is_number_integer()) bad_line(line_no, "missing integer t_ms");
        const auto t = j["t_ms"].get<std::int64_t>();
        if (last_t && t < *last_t) bad_line(line_no, "records not sorted by t_ms");
        last_t = t;

        if (j.contains("key")) {
            auto cmd = j["key"].is_string() ? parse_nav_command(j["key"].get<std::string>()) : std::nullopt;
            if (!cmd) bad_line(line_no, "key must be next, prev or goto:<n>");
            trace.records.emplace_back(KeyCommand{t, *cmd});
        } else if (j.contains("hands")) {
            try {
                trace.records.emplace_back(frame_from_json(j, t));
            } catch (const Error& e) {
                bad_line(line_no, e.what());
            }
        } else {
            bad_line(line_no, "record is neither a frame nor a key");
        }
    }
    return trace;
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open trace " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_trace(ss.str());
}

std::string serialize(const Trace& trace) {
    std::string out;
    if (trace.header) {
        nlohmann::ordered_json h;
        h["format"] = "chirono-trace";
        h["version"] = trace.header->version;
        h["config"] = config_to_json(trace.header->config);
        h["scene_hash"] = trace.header->scene_hash;
        out += h.dump() + "\n";
    }
    for (const auto& r : trace.records) {
        if (const auto* f = std::get_if<RawFrame>(&r)) {
            out += frame_to_json(*f).dump() + "\n";
        } else {
            const auto& k = std::get<KeyCommand>(r);
            nlohmann::ordered_json j;
            j["t_ms"] = k.t_ms;
            j["key"] = to_string(k.command);
            out += j.dump() + "\n";
        }
    }
    return out;
}

void save_trace(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write trace " + path);
    out << serialize(trace);
}

} // namespace chirono
