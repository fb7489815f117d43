#pragma once

#include "chirono/interaction_engine.hpp"
#include "chirono/landmark_ingest.hpp"
#include "chirono/mailbox.hpp"
#include "chirono/scene_manager.hpp"
#include "chirono/wire.hpp"

#include <json.hpp>

#include <atomic>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace chirono {

struct KeyCommand {
    std::int64_t t_ms = 0;
    NavCommand command;

    friend bool operator==(const KeyCommand&, const KeyCommand&) = default;
};

/// ingest -> gesture runtime -> interaction engine, plus keyboard scene
/// navigation. Single-threaded; one instance per session.
class Pipeline {
public:
    Pipeline(std::shared_ptr<const Deck> deck, SessionConfig cfg = {});

    struct FrameOutcome {
        IngestStatus status = IngestStatus::Accepted;
        std::string detail;
        std::vector<GestureEvent> events;
    };

    FrameOutcome on_frame(const RawFrame& raw);
    NavOutcome on_key(const KeyCommand& key);
    /// Throws Error(InvalidConfig); the running config is kept on failure.
    void on_config(const nlohmann::json& patch);

    [[nodiscard]] RenderState render() const { return engine_.render(); }
    [[nodiscard]] nlohmann::json state_json() const { return to_json(engine_.render()); }
    [[nodiscard]] const InteractionEngine& engine() const { return engine_; }
    [[nodiscard]] const SessionConfig& config() const { return cfg_; }
    [[nodiscard]] std::int64_t now_ms() const { return now_ms_; }

private:
    std::shared_ptr<const Deck> deck_;
    SessionConfig cfg_;
    LandmarkIngest ingest_;
    GestureRuntime runtime_;
    InteractionEngine engine_;
    SceneNavigator nav_;
    std::int64_t now_ms_ = 0;
};

enum class Role : std::uint8_t { Presenter, Audience };

std::string_view to_string(Role r);
std::optional<Role> parse_role(std::string_view s);

using ClientId = std::uint64_t;

struct HubOptions {
    std::size_t outbox_capacity = 1024; // per client, in messages
    bool send_events = false;           // "event" debug stream to the presenter
};

/**
 * Transport-independent session: connection bookkeeping, the ordered
 * command queue and broadcast fan-out.
 *
 * Any thread may call accept/submit/drain/disconnect. Commands are executed
 * only by process_pending() or run(), on a single engine thread. A client
 * whose outbox overflows has its backlog replaced by one render_full.
 */
class SessionHub {
public:
    using Notify = std::function<void()>;

    SessionHub(std::shared_ptr<const Deck> deck, SessionConfig cfg = {}, HubOptions opts = {});
    ~SessionHub();

    /// Throws Error(SecondPresenter). The client's outbox starts with a
    /// render_full of the current state.
    ClientId accept(Role role, Notify notify = {});
    void disconnect(ClientId id);

    /// Queues an inbound text message. Malformed or unauthorized messages
    /// get an error reply on this connection only.
    void submit(ClientId id, std::string_view text);

    /// Takes every message waiting for the client, in seq order.
    std::vector<std::string> drain(ClientId id);

    /// Runs queued commands on the calling thread; returns how many ran.
    std::size_t process_pending();
    /// Engine loop: blocks on the command queue until stop().
    void run();
    void stop();

    /// Trace records (header, then every processed frame and key) are
    /// written here.
    void set_recorder(std::ostream* out, std::string scene_hash);

    [[nodiscard]] nlohmann::json state() const;
    [[nodiscard]] std::size_t dropped_frames() const { return dropped_.load(); }
    [[nodiscard]] std::size_t client_count() const;

private:
    struct ConfigCommand {
        ClientId from = 0;
        std::int64_t t_ms = 0;
        nlohmann::json patch;
    };
    using Command = std::variant<RawFrame, KeyCommand, ConfigCommand>;

    struct Client {
        Role role = Role::Audience;
        Notify notify;
        std::int64_t next_seq = 0;
        std::optional<std::int64_t> last_inbound_seq;
        std::deque<std::string> outbox;
        std::size_t resyncs = 0;
    };

    void execute(Command& cmd);
    void broadcast_state(std::int64_t t_ms);
    void send_locked(Client& c, std::string_view type, std::int64_t t_ms, const nlohmann::json& payload,
                     std::vector<Notify>& wake);
    void reply_error(ClientId id, std::int64_t t_ms, const std::string& message);
    void record(const nlohmann::ordered_json& line);

    HubOptions opts_;
    Pipeline pipeline_;
    LatestWinsQueue<Command> queue_;
    std::atomic<std::size_t> dropped_{0};

    mutable std::mutex mu_; // clients_, state_, recorder
    std::map<ClientId, Client> clients_;
    ClientId next_id_ = 1;
    nlohmann::json state_;
    std::ostream* recorder_ = nullptr;
};

} // namespace chirono
