#include "chirono/error.hpp"
#include "chirono/session.hpp"
#include "chirono/svg.hpp"
#include "chirono/trace.hpp"
#include "chirono/ws_server.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using namespace chirono;

constexpr int kExitPass = 0;
constexpr int kExitDivergence = 1;
constexpr int kExitUsage = 2;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

struct Common {
    std::string scenes;
    std::string config;
    std::string trace;
    std::string mode = "fast";
};

ReplayOptions options(const Common& c) {
    ReplayOptions opts;
    opts.mode = c.mode == "realtime" ? ReplayMode::Realtime : ReplayMode::Fast;
    if (!c.config.empty()) opts.config = load_config(c.config);
    return opts;
}

std::shared_ptr<const Deck> deck_from(const Common& c) { return std::make_shared<const Deck>(load_deck(c.scenes)); }

int cmd_replay(const Common& c, const std::string& out_dir, const std::string& stream) {
    const ReplayOutput out = replay(load_trace(c.trace), deck_from(c), options(c));
    if (!out_dir.empty()) {
        write_outputs(out, out_dir);
        return kExitPass;
    }
    for (const auto& line : stream == "render" ? out.render : out.events) std::cout << line << '\n';
    return kExitPass;
}

int cmd_snapshot(const Common& c, const std::vector<std::int64_t>& at, const std::string& out_dir) {
    const Trace trace = load_trace(c.trace);
    const auto deck = deck_from(c);
    const auto opts = options(c);
    if (out_dir.empty() && at.size() != 1) {
        std::cerr << "snapshot: several --at values need --out-dir\n";
        return kExitUsage;
    }
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    for (auto t : at) {
        const Pipeline p = replay_to(trace, deck, t, opts);
        const std::string svg = render_svg(p.engine());
        if (out_dir.empty()) {
            std::cout << svg;
            continue;
        }
        const auto path = std::filesystem::path(out_dir) / ("snapshot_" + std::to_string(t) + ".svg");
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error(Errc::Io, "cannot write " + path.string());
        f << svg;
        std::cout << path.string() << '\n';
    }
    return kExitPass;
}

int cmd_diff_golden(const Common& c, const std::string& golden_dir) {
    const ReplayOutput out = replay(load_trace(c.trace), deck_from(c), options(c));
    const GoldenReport r = diff_golden(out, golden_dir);
    if (r.pass) {
        std::cout << "PASS " << golden_dir << " (" << out.events.size() << " events, " << out.render.size()
                  << " render messages)\n";
        return kExitPass;
    }
    std::cout << "FAIL " << r.file << ":" << r.line << " " << r.message;
    if (r.t_ms) std::cout << " t_ms=" << *r.t_ms;
    if (!r.pointer.empty()) std::cout << " pointer=" << r.pointer;
    std::cout << '\n';
    return kExitDivergence;
}

int cmd_serve(const Common& c, std::string listen, const std::string& record, bool events) {
    if (listen.empty()) {
        const char* env = std::getenv("CHIRONO_LISTEN");
        listen = env ? env : "127.0.0.1:8765";
    }
    const auto deck = deck_from(c);
    SessionConfig cfg = c.config.empty() ? SessionConfig{} : load_config(c.config);
    SessionHub hub(deck, cfg, HubOptions{.send_events = events});

    std::ofstream rec;
    if (!record.empty()) {
        rec.open(record, std::ios::binary);
        if (!rec) throw Error(Errc::Io, "cannot write " + record);
        hub.set_recorder(&rec, deck->source_hash);
    }
    std::thread engine([&] { hub.run(); });
    WsServer server(hub, listen);
    std::cout << "listening on " << parse_listen(listen).first << ":" << server.port() << std::endl;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    server.stop();
    hub.stop();
    engine.join();
    std::cerr << "stopped; " << hub.dropped_frames() << " stale frames dropped\n";
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chirono: gesture-driven chart presentation engine"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub, bool needs_trace) {
        sub->add_option("--scenes", common.scenes, "Scene file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--config", common.config, "Gesture/session config (JSON)")->check(CLI::ExistingFile);
        if (needs_trace) {
            sub->add_option("--trace", common.trace, "Trace file (JSON Lines)")->required()->check(CLI::ExistingFile);
            sub->add_option("--mode", common.mode, "Clock mode")->check(CLI::IsMember({"fast", "realtime"}));
        }
    };

    std::string out_dir;
    std::string stream = "events";
    auto* replay_cmd = app.add_subcommand("replay", "Replay a trace; emit the event log or render stream");
    add_common(replay_cmd, true);
    replay_cmd->add_option("--out-dir", out_dir, "Write events.jsonl and render.jsonl here");
    replay_cmd->add_option("--stream", stream, "Stream printed to stdout")->check(CLI::IsMember({"events", "render"}));

    std::vector<std::int64_t> at;
    auto* snapshot_cmd = app.add_subcommand("snapshot", "Render SVG snapshots at trace timestamps");
    add_common(snapshot_cmd, true);
    snapshot_cmd->add_option("--at", at, "Timestamp(s) in ms")->required()->delimiter(',');
    snapshot_cmd->add_option("--out-dir", out_dir, "Directory for snapshot_<t>.svg files");

    std::string golden_dir;
    auto* golden_cmd = app.add_subcommand("diff-golden", "Compare a replay against committed goldens");
    add_common(golden_cmd, true);
    golden_cmd->add_option("--golden-dir", golden_dir, "Directory with events.jsonl and render.jsonl")->required();

    std::string listen;
    std::string record;
    bool events = false;
    auto* serve_cmd = app.add_subcommand("record-proxy", "Run a headless WebSocket session server");
    serve_cmd->alias("serve");
    add_common(serve_cmd, false);
    serve_cmd->add_option("--listen", listen, "host:port (default $CHIRONO_LISTEN or 127.0.0.1:8765)");
    serve_cmd->add_option("--record", record, "Write the processed inbound trace here");
    serve_cmd->add_flag("--events", events, "Send gesture events to the presenter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*replay_cmd) return cmd_replay(common, out_dir, stream);
        if (*snapshot_cmd) return cmd_snapshot(common, at, out_dir);
        if (*golden_cmd) return cmd_diff_golden(common, golden_dir);
        if (*serve_cmd) return cmd_serve(common, listen, record, events);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
