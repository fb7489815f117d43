#pragma once

#include "chirono/session.hpp"
#include "chirono/wire.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chirono {

inline constexpr int kTraceVersion = 1;

struct TraceHeader {
    int version = kTraceVersion;
    SessionConfig config;
    std::string scene_hash;
};

using TraceRecord = std::variant<RawFrame, KeyCommand>;

std::int64_t record_time(const TraceRecord& r);

/// JSON Lines: an optional header line, then frame and key records sorted
/// by t_ms.
struct Trace {
    std::optional<TraceHeader> header;
    std::vector<TraceRecord> records;

    [[nodiscard]] std::int64_t last_t() const { return records.empty() ? 0 : record_time(records.back()); }
};

/// Throws Error(MalformedTrace) naming the offending line.
Trace parse_trace(std::string_view text);
Trace load_trace(const std::string& path);
std::string serialize(const Trace& trace);
void save_trace(const Trace& trace, const std::string& path);

enum class ReplayMode : std::uint8_t { Fast, Realtime };

struct ReplayOptions {
    ReplayMode mode = ReplayMode::Fast;
    std::optional<SessionConfig> config; // overrides the trace header
    /// Realtime mode only; defaults to std::this_thread::sleep_for.
    std::function<void(std::chrono::milliseconds)> sleep;
};

/// Event log lines and the render stream a client connected from the
/// start would receive (render_full, then render_diff messages).
struct ReplayOutput {
    std::vector<std::string> events;
    std::vector<std::string> render;
    nlohmann::json final_state;
};

/// Throws Error(SceneHashMismatch) when the header hash differs from the
/// deck's.
ReplayOutput replay(const Trace& trace, std::shared_ptr<const Deck> deck, const ReplayOptions& opts = {});

/// Runs every record with t_ms <= at. Throws Error(TimestampOutOfRange)
/// when at lies outside [0, last record t_ms].
Pipeline replay_to(const Trace& trace, std::shared_ptr<const Deck> deck, std::int64_t at,
                   const ReplayOptions& opts = {});

struct GoldenReport {
    bool pass = true;
    std::string file;            // events.jsonl or render.jsonl
    std::size_t line = 0;        // 1-based
    std::optional<std::int64_t> t_ms;
    std::string pointer;         // JSON pointer of the first difference
    std::string message;
};

inline constexpr const char* kGoldenEvents = "events.jsonl";
inline constexpr const char* kGoldenRender = "render.jsonl";

/// Byte comparison against golden_dir/{events,render}.jsonl. Throws
/// Error(MissingGolden).
GoldenReport diff_golden(const ReplayOutput& out, const std::string& golden_dir);
void write_outputs(const ReplayOutput& out, const std::string& dir);

} // namespace chirono
