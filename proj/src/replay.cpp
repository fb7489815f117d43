#include "chirono/error.hpp"
#include "chirono/trace.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace chirono {

using nlohmann::json;

namespace {

SessionConfig effective_config(const Trace& trace, const ReplayOptions& opts) {
    if (opts.config) return *opts.config;
    return trace.header ? trace.header->config : SessionConfig{};
}

void check_hash(const Trace& trace, const Deck& deck) {
    if (!trace.header || trace.header->scene_hash.empty() || deck.source_hash.empty()) return;
    if (trace.header->scene_hash != deck.source_hash) {
        throw Error(Errc::SceneHashMismatch, "trace was recorded against scene hash " + trace.header->scene_hash +
                                                 ", scene file hashes to " + deck.source_hash);
    }
}

struct Runner {
    Pipeline pipeline;
    const ReplayOptions& opts;
    std::optional<std::int64_t> prev_t;

    void step(const TraceRecord& r, std::vector<GestureEvent>* events) {
        const std::int64_t t = record_time(r);
        if (opts.mode == ReplayMode::Realtime && prev_t && t > *prev_t) {
            const auto delay = std::chrono::milliseconds(t - *prev_t);
            if (opts.sleep) opts.sleep(delay);
            else std::this_thread::sleep_for(delay);
        }
        prev_t = t;
        if (const auto* f = std::get_if<RawFrame>(&r)) {
            auto out = pipeline.on_frame(*f);
            if (events) *events = std::move(out.events);
        } else {
            pipeline.on_key(std::get<KeyCommand>(r));
            if (events) events->clear();
        }
    }
};

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::MissingGolden, "missing golden " + p.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::optional<std::int64_t> t_of(const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_object() && j.contains("t_ms") && j["t_ms"].is_number_integer()) return j["t_ms"].get<std::int64_t>();
    return std::nullopt;
}

bool compare(const std::vector<std::string>& got, const std::vector<std::string>& want, const char* file,
             GoldenReport& report) {
    const std::size_t n = std::max(got.size(), want.size());
    for (std::size_t i = 0; i < n; ++i) {
        const bool have_got = i < got.size();
        const bool have_want = i < want.size();
        if (have_got && have_want && got[i] == want[i]) continue;
        report.pass = false;
        report.file = file;
        report.line = i + 1;
        if (have_got && have_want) {
            report.t_ms = t_of(got[i]);
            json a = json::parse(want[i], nullptr, false);
            json b = json::parse(got[i], nullptr, false);
            report.pointer = first_difference(a, b).value_or("");
            report.message = "content differs";
        } else if (have_got) {
            report.t_ms = t_of(got[i]);
            report.message = "extra line not in golden";
        } else {
            report.t_ms = t_of(want[i]);
            report.message = "golden line missing from output";
        }
        return false;
    }
    return true;
}

} // namespace

ReplayOutput replay(const Trace& trace, std::shared_ptr<const Deck> deck, const ReplayOptions& opts) {
    check_hash(trace, *deck);
    Runner run{Pipeline(deck, effective_config(trace, opts)), opts, std::nullopt};
    ReplayOutput out;
    json state = run.pipeline.state_json();
    std::int64_t seq = 0;
    out.render.push_back(encode({std::string(kMsgRenderFull), seq++, run.pipeline.now_ms(), state}));

    std::vector<GestureEvent> events;
    for (const auto& r : trace.records) {
        run.step(r, &events);
        for (const auto& ev : events) out.events.push_back(event_to_json(ev).dump());
        json next = run.pipeline.state_json();
        json diff = compute_diff(state, next);
        if (diff_empty(diff)) continue;
        out.render.push_back(encode({std::string(kMsgRenderDiff), seq++, record_time(r), diff}));
        state = std::move(next);
    }
    out.final_state = std::move(state);
    return out;
}

Pipeline replay_to(const Trace& trace, std::shared_ptr<const Deck> deck, std::int64_t at, const ReplayOptions& opts) {
    if (at < 0 || at > trace.last_t()) {
        throw Error(Errc::TimestampOutOfRange, "t_ms " + std::to_string(at) + " outside [0, " +
                                                   std::to_string(trace.last_t()) + "]");
    }
    check_hash(trace, *deck);
    Runner run{Pipeline(deck, effective_config(trace, opts)), opts, std::nullopt};
    for (const auto& r : trace.records) {
        if (record_time(r) > at) break;
        run.step(r, nullptr);
    }
    return std::move(run.pipeline);
}

GoldenReport diff_golden(const ReplayOutput& out, const std::string& golden_dir) {
    const std::filesystem::path dir(golden_dir);
    const auto events = read_lines(dir / kGoldenEvents);
    const auto render = read_lines(dir / kGoldenRender);
    GoldenReport report;
    if (compare(out.events, events, kGoldenEvents, report)) compare(out.render, render, kGoldenRender, report);
    return report;
}

void write_outputs(const ReplayOutput& out, const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const char* name, const std::vector<std::string>& lines) {
        std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
        if (!f) throw Error(Errc::Io, "cannot write " + (std::filesystem::path(dir) / name).string());
        for (const auto& l : lines) f << l << '\n';
    };
    write(kGoldenEvents, out.events);
    write(kGoldenRender, out.render);
}

} // namespace chirono
