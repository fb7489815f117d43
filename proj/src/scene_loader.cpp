#include "chirono/chart_model.hpp"
#include "chirono/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace chirono {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(Errc::InvalidScene, msg); }

ColumnType parse_column_type(const std::string& s) {
    if (s == "temporal") return ColumnType::Temporal;
    if (s == "number") return ColumnType::Number;
    if (s == "category") return ColumnType::Category;
    invalid("unknown column type '" + s + "'");
}

Cell to_cell(const json& v, ColumnType type, const std::string& where) {
    if (v.is_null()) return std::monostate{};
    if (type == ColumnType::Category) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number()) return v.dump();
        invalid(where + ": category cell must be a string");
    }
    if (!v.is_number()) invalid(where + ": numeric cell expected");
    return v.get<double>();
}

Cell csv_cell(const std::string& text, ColumnType type, const std::string& where) {
    if (text.empty()) return std::monostate{};
    if (type == ColumnType::Category) return text;
    try {
        std::size_t used = 0;
        double d = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return d;
    } catch (const std::exception&) {
        invalid(where + ": '" + text + "' is not a number");
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

DataTable parse_table(const std::string& name, const json& j, const std::string& base_dir) {
    DataTable t;
    if (!j.contains("columns") || !j["columns"].is_array()) invalid("table '" + name + "' needs a columns array");
    std::map<std::string, ColumnType> declared;
    for (const auto& col : j["columns"]) {
        const auto cname = col.at("name").get<std::string>();
        const auto ctype = parse_column_type(col.at("type").get<std::string>());
        declared[cname] = ctype;
        t.columns.push_back(cname);
        t.types.push_back(ctype);
    }

    if (j.contains("csv")) {
        const auto path = (std::filesystem::path(base_dir) / j["csv"].get<std::string>()).string();
        std::istringstream in(read_file(path));
        std::string line;
        if (!std::getline(in, line)) invalid("table '" + name + "': empty CSV " + path);
        const auto header = split_csv_line(line);
        std::vector<int> map_to(header.size(), -1);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (auto c = t.column(header[i])) map_to[i] = static_cast<int>(*c);
        }
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            if (std::find(header.begin(), header.end(), t.columns[c]) == header.end()) {
                invalid("table '" + name + "': CSV lacks declared column '" + t.columns[c] + "'");
            }
        }
        while (std::getline(in, line)) {
            if (line.empty() || line == "\r") continue;
            const auto fields = split_csv_line(line);
            if (fields.size() != header.size()) invalid("table '" + name + "': ragged CSV row");
            std::vector<Cell> row(t.columns.size());
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (map_to[i] < 0) continue;
                const auto c = static_cast<std::size_t>(map_to[i]);
                row[c] = csv_cell(fields[i], t.types[c], "table '" + name + "'");
            }
            t.rows.push_back(std::move(row));
        }
        return t;
    }

    if (!j.contains("rows") || !j["rows"].is_array()) invalid("table '" + name + "' needs rows or csv");
    for (const auto& r : j["rows"]) {
        std::vector<Cell> row(t.columns.size());
        if (r.is_array()) {
            if (r.size() != t.columns.size()) invalid("table '" + name + "': row width mismatch");
            for (std::size_t c = 0; c < t.columns.size(); ++c) row[c] = to_cell(r[c], t.types[c], "table '" + name + "'");
        } else if (r.is_object()) {
            for (std::size_t c = 0; c < t.columns.size(); ++c) {
                if (r.contains(t.columns[c])) row[c] = to_cell(r[t.columns[c]], t.types[c], "table '" + name + "'");
            }
        } else {
            invalid("table '" + name + "': rows must be arrays or objects");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::optional<Domain> parse_domain(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    const auto& d = j[key];
    if (!d.is_array() || d.size() != 2) invalid(std::string(key) + " must be [lo, hi]");
    return Domain{d[0].get<double>(), d[1].get<double>()};
}

ScaleKind parse_scale(const std::string& s) {
    if (s == "linear") return ScaleKind::Linear;
    if (s == "temporal") return ScaleKind::Temporal;
    if (s == "band") return ScaleKind::Band;
    invalid("unknown x_scale '" + s + "'");
}

TransitionStyle parse_style(const std::string& s) {
    if (s == "fade") return TransitionStyle::Fade;
    if (s == "translate") return TransitionStyle::Translate;
    invalid("unknown transition style '" + s + "'");
}

Direction parse_direction(const std::string& s) {
    if (s == "left") return Direction::Left;
    if (s == "right") return Direction::Right;
    if (s == "up") return Direction::Up;
    if (s == "down") return Direction::Down;
    invalid("unknown direction '" + s + "'");
}

ChartSpec parse_chart(const json& j, const std::string& overlay) {
    ChartSpec c;
    auto kind = parse_chart_kind(j.value("kind", ""));
    if (!kind) invalid("overlay '" + overlay + "': unknown chart kind '" + j.value("kind", "") + "'");
    c.kind = *kind;
    c.table = j.value("table", "");
    c.x_field = j.value("x_field", "");
    c.x_scale = parse_scale(j.value("x_scale", "linear"));
    if (j.contains("y_fields")) c.y_fields = j["y_fields"].get<std::vector<std::string>>();
    c.category_field = j.value("category_field", "");
    if (j.contains("colors")) {
        const auto& colors = j["colors"];
        if (!colors.is_array()) invalid("overlay '" + overlay + "': colors must be [[category, color], ...]");
        for (const auto& pair : colors) c.colors.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    }
    if (j.contains("categories")) c.categories = j["categories"].get<std::vector<std::string>>();
    if (j.contains("margins")) {
        const auto& m = j["margins"];
        c.margins = {m.value("left", 0.1), m.value("right", 0.1), m.value("top", 0.1), m.value("bottom", 0.1)};
    }
    for (double m : {c.margins.left, c.margins.right, c.margins.top, c.margins.bottom}) {
        if (m < 0.0 || m >= 1.0) invalid("overlay '" + overlay + "': margins must lie in [0, 1)");
    }
    if (j.contains("shared_domain_id")) c.shared_domain_id = j["shared_domain_id"].get<std::string>();
    if (j.contains("category_domain_id")) c.category_domain_id = j["category_domain_id"].get<std::string>();
    if (j.contains("interval_regions")) {
        for (const auto& r : j["interval_regions"]) {
            IntervalRegion ir{r.at("label").get<std::string>(), r.at("lo").get<double>(), r.at("hi").get<double>()};
            if (!(ir.hi > ir.lo)) invalid("overlay '" + overlay + "': interval region '" + ir.label + "' is empty");
            c.interval_regions.push_back(ir);
        }
    }
    if (j.contains("hidden_series")) {
        for (const auto& h : j["hidden_series"]) c.hidden_series.insert(h.get<std::string>());
    }
    c.x_domain = parse_domain(j, "x_domain");
    c.y_domain = parse_domain(j, "y_domain");
    return c;
}

OverlaySpec parse_overlay(const json& j) {
    OverlaySpec o;
    o.id = j.at("id").get<std::string>();
    const auto& f = j.at("frame");
    if (!f.is_array() || f.size() != 4) invalid("overlay '" + o.id + "': frame must be [x, y, width, height]");
    o.frame = {f[0].get<double>(), f[1].get<double>(), f[2].get<double>(), f[3].get<double>()};
    const double eps = 1e-12;
    if (!(o.frame.width > 0.0) || !(o.frame.height > 0.0) || o.frame.x < -eps || o.frame.y < -eps ||
        o.frame.right() > 1.0 + eps || o.frame.bottom() > 1.0 + eps) {
        invalid("overlay '" + o.id + "': frame must lie inside the unit square");
    }
    o.visible = j.value("visible", true);
    o.interactive = j.value("interactive", true);
    o.z_order = j.value("z_order", 0);
    if (j.contains("enter")) {
        o.enter_style = parse_style(j["enter"].value("style", "fade"));
        o.enter_from = parse_direction(j["enter"].value("from", "right"));
    }
    if (j.contains("exit")) {
        o.exit_style = parse_style(j["exit"].value("style", "fade"));
        o.exit_to = parse_direction(j["exit"].value("to", "left"));
    }
    o.chart = parse_chart(j.at("chart"), o.id);
    return o;
}

SceneSpec parse_scene(const json& j) {
    SceneSpec s;
    s.id = j.at("id").get<std::string>();
    if (j.contains("background")) {
        s.background.darken = j["background"].value("darken", false);
        s.background.grayscale = j["background"].value("grayscale", false);
    }
    s.transition_ms = j.value("transition_ms", std::int64_t{500});
    if (s.transition_ms < 0) invalid("scene '" + s.id + "': negative transition_ms");
    std::set<std::string> ids;
    for (const auto& oj : j.at("overlays")) {
        auto o = parse_overlay(oj);
        if (!ids.insert(o.id).second) invalid("scene '" + s.id + "': duplicate overlay id '" + o.id + "'");
        s.overlays.push_back(std::move(o));
    }
    if (j.contains("bindings")) {
        for (const auto& b : j["bindings"]) {
            if (b.value("op", "multiply") != "multiply") invalid("scene '" + s.id + "': only multiply bindings exist");
            MultiplyBinding mb{b.at("source").get<std::string>(), b.at("target").get<std::string>()};
            if (!ids.contains(mb.source) || !ids.contains(mb.target)) {
                invalid("scene '" + s.id + "': binding references an unknown overlay");
            }
            s.bindings.push_back(mb);
        }
    }
    return s;
}

} // namespace

Deck parse_deck(std::string_view text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        invalid(std::string("scene file is not valid JSON: ") + e.what());
    }
    Deck deck;
    try {
        deck.aspect = doc.value("aspect", 16.0 / 9.0);
        if (!(deck.aspect > 0.0)) invalid("aspect must be positive");
        if (doc.contains("tables")) {
            for (const auto& [name, tj] : doc["tables"].items()) deck.tables[name] = parse_table(name, tj, base_dir);
        }
        if (!doc.contains("scenes") || !doc["scenes"].is_array() || doc["scenes"].empty()) {
            invalid("scene file needs a non-empty scenes array");
        }
        std::set<std::string> scene_ids;
        for (const auto& sj : doc["scenes"]) {
            deck.scenes.push_back(parse_scene(sj));
            if (!scene_ids.insert(deck.scenes.back().id).second) invalid("duplicate scene id '" + deck.scenes.back().id + "'");
        }
    } catch (const json::exception& e) {
        invalid(std::string("scene file schema error: ") + e.what());
    }
    // Resolve once so geometry errors surface at load.
    for (const auto& scene : deck.scenes) resolve_scene(scene, deck);
    deck.source_hash = sha256_hex(text);
    return deck;
}

Deck load_deck(const std::string& path) {
    const std::string text = read_file(path);
    const auto base = std::filesystem::path(path).parent_path().string();
    return parse_deck(text, base.empty() ? "." : base);
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

} // namespace chirono
