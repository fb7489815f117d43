#include "chirono/session.hpp"
#include "chirono/error.hpp"

namespace chirono {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(std::shared_ptr<const Deck> deck, SessionConfig cfg)
    : deck_(std::move(deck)),
      cfg_(cfg),
      ingest_(cfg.ingest),
      runtime_(cfg.gesture),
      engine_(deck_, EngineConfig{.dominant_hand = cfg.gesture.dominant_hand}),
      nav_(deck_->scenes.size()) {
    cfg_.gesture.validate();
}

Pipeline::FrameOutcome Pipeline::on_frame(const RawFrame& raw) {
    FrameOutcome out;
    IngestResult r = ingest_.ingest(raw);
    out.status = r.status;
    out.detail = std::move(r.detail);
    if (!r.accepted()) return out;
    now_ms_ = r.frame.t_ms;
    out.events = runtime_.step(r.frame);
    engine_.tick(now_ms_);
    engine_.apply(out.events);
    engine_.update_markers(r.frame, runtime_);
    return out;
}

NavOutcome Pipeline::on_key(const KeyCommand& key) {
    now_ms_ = std::max(now_ms_, key.t_ms);
    engine_.tick(now_ms_);
    NavOutcome nav = nav_.navigate(key.command);
    if (nav.changed()) {
        TransitionPlan plan = plan_transition(deck_->scenes[nav.from], deck_->scenes[nav.to]);
        plan.duration_ms = deck_->scenes[nav.to].transition_ms;
        engine_.enter_scene(nav.to, now_ms_, std::move(plan));
    }
    return nav;
}

void Pipeline::on_config(const json& patch) {
    SessionConfig next = apply_config_patch(cfg_, patch);
    cfg_ = next;
    runtime_.reconfigure(cfg_.gesture);
    ingest_.set_config(cfg_.ingest);
    engine_.set_dominant(cfg_.gesture.dominant_hand);
}

// ---------------------------------------------------------------------------
// Roles

std::string_view to_string(Role r) { return r == Role::Presenter ? "presenter" : "audience"; }

std::optional<Role> parse_role(std::string_view s) {
    if (s == "presenter") return Role::Presenter;
    if (s == "audience") return Role::Audience;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Hub

SessionHub::SessionHub(std::shared_ptr<const Deck> deck, SessionConfig cfg, HubOptions opts)
    : opts_(opts),
      pipeline_(std::move(deck), cfg),
      queue_([](const Command& c) { return std::holds_alternative<RawFrame>(c); }),
      state_(pipeline_.state_json()) {}

SessionHub::~SessionHub() { stop(); }

ClientId SessionHub::accept(Role role, Notify notify) {
    std::vector<Notify> wake;
    ClientId id = 0;
    {
        std::lock_guard lock(mu_);
        if (role == Role::Presenter) {
            for (const auto& [_, c] : clients_) {
                if (c.role == Role::Presenter) throw Error(Errc::SecondPresenter, "session already has a presenter");
            }
        }
        id = next_id_++;
        Client& c = clients_[id];
        c.role = role;
        c.notify = std::move(notify);
        send_locked(c, kMsgRenderFull, pipeline_.now_ms(), state_, wake);
    }
    for (auto& w : wake) w();
    return id;
}

void SessionHub::disconnect(ClientId id) {
    std::lock_guard lock(mu_);
    clients_.erase(id);
}

std::size_t SessionHub::client_count() const {
    std::lock_guard lock(mu_);
    return clients_.size();
}

json SessionHub::state() const {
    std::lock_guard lock(mu_);
    return state_;
}

void SessionHub::set_recorder(std::ostream* out, std::string scene_hash) {
    std::lock_guard lock(mu_);
    recorder_ = out;
    if (!out) return;
    nlohmann::ordered_json header;
    header["format"] = "chirono-trace";
    header["version"] = 1;
    header["config"] = config_to_json(pipeline_.config());
    header["scene_hash"] = std::move(scene_hash);
    *out << header.dump() << '\n';
    out->flush();
}

void SessionHub::reply_error(ClientId id, std::int64_t t_ms, const std::string& message) {
    std::vector<Notify> wake;
    {
        std::lock_guard lock(mu_);
        auto it = clients_.find(id);
        if (it == clients_.end()) return;
        send_locked(it->second, kMsgError, t_ms, {{"code", "MalformedMessage"}, {"message", message}}, wake);
    }
    for (auto& w : wake) w();
}

void SessionHub::submit(ClientId id, std::string_view text) {
    WireMessage msg;
    try {
        msg = decode(text);
    } catch (const Error& e) {
        reply_error(id, 0, e.what());
        return;
    }
    std::optional<std::string> rejection;
    {
        std::lock_guard lock(mu_);
        auto it = clients_.find(id);
        if (it == clients_.end()) return;
        Client& c = it->second;
        if (c.last_inbound_seq && msg.seq <= *c.last_inbound_seq) {
            rejection = "seq " + std::to_string(msg.seq) + " is not increasing";
        } else {
            c.last_inbound_seq = msg.seq;
            if (c.role != Role::Presenter) rejection = "audience connections cannot send commands";
        }
    }
    if (rejection) {
        reply_error(id, msg.t_ms, *rejection);
        return;
    }
    try {
        if (msg.type == kMsgFrame) {
            if (auto dropped = queue_.push(frame_from_json(msg.payload, msg.t_ms))) ++dropped_;
        } else if (msg.type == kMsgKey) {
            const json& k = msg.payload.is_object() && msg.payload.contains("key") ? msg.payload["key"] : msg.payload;
            auto cmd = k.is_string() ? parse_nav_command(k.get<std::string>()) : std::nullopt;
            if (!cmd) throw Error(Errc::MalformedMessage, "key payload must be next, prev or goto:<n>");
            queue_.push(KeyCommand{msg.t_ms, *cmd});
        } else if (msg.type == kMsgConfig) {
            if (!msg.payload.is_object()) throw Error(Errc::MalformedMessage, "config payload must be an object");
            queue_.push(ConfigCommand{id, msg.t_ms, msg.payload});
        } else {
            throw Error(Errc::MalformedMessage, "unexpected message type '" + msg.type + "'");
        }
    } catch (const Error& e) {
        reply_error(id, msg.t_ms, e.what());
    }
}

std::vector<std::string> SessionHub::drain(ClientId id) {
    std::lock_guard lock(mu_);
    auto it = clients_.find(id);
    if (it == clients_.end()) return {};
    std::vector<std::string> out(std::make_move_iterator(it->second.outbox.begin()),
                                 std::make_move_iterator(it->second.outbox.end()));
    it->second.outbox.clear();
    return out;
}

std::size_t SessionHub::process_pending() {
    std::size_t n = 0;
    while (auto cmd = queue_.try_pop()) {
        execute(*cmd);
        ++n;
    }
    return n;
}

void SessionHub::run() {
    while (auto cmd = queue_.wait_pop()) execute(*cmd);
}

void SessionHub::stop() { queue_.close(); }

void SessionHub::record(const nlohmann::ordered_json& line) {
    std::lock_guard lock(mu_);
    if (!recorder_) return;
    *recorder_ << line.dump() << '\n';
    recorder_->flush();
}

void SessionHub::execute(Command& cmd) {
    if (auto* frame = std::get_if<RawFrame>(&cmd)) {
        record(frame_to_json(*frame));
        auto out = pipeline_.on_frame(*frame);
        broadcast_state(frame->t_ms);
        if (opts_.send_events && !out.events.empty()) {
            std::vector<Notify> wake;
            {
                std::lock_guard lock(mu_);
                for (auto& [_, c] : clients_) {
                    if (c.role != Role::Presenter) continue;
                    for (const auto& ev : out.events) send_locked(c, kMsgEvent, ev.t_ms, json(event_to_json(ev)), wake);
                }
            }
            for (auto& w : wake) w();
        }
    } else if (auto* key = std::get_if<KeyCommand>(&cmd)) {
        nlohmann::ordered_json line;
        line["t_ms"] = key->t_ms;
        line["key"] = to_string(key->command);
        record(line);
        pipeline_.on_key(*key);
        broadcast_state(key->t_ms);
    } else if (auto* config = std::get_if<ConfigCommand>(&cmd)) {
        try {
            pipeline_.on_config(config->patch);
        } catch (const Error& e) {
            reply_error(config->from, config->t_ms, e.what());
        }
    }
}

void SessionHub::send_locked(Client& c, std::string_view type, std::int64_t t_ms, const json& payload,
                             std::vector<Notify>& wake) {
    const bool resync = c.outbox.size() >= opts_.outbox_capacity;
    if (resync) {
        c.outbox.clear();
        ++c.resyncs;
        c.outbox.push_back(encode({std::string(kMsgRenderFull), c.next_seq++, t_ms, state_}));
    }
    // A fresh snapshot already carries any state change.
    if (!resync || type != kMsgRenderDiff) c.outbox.push_back(encode({std::string(type), c.next_seq++, t_ms, payload}));
    if (c.notify) wake.push_back(c.notify);
}

void SessionHub::broadcast_state(std::int64_t t_ms) {
    json next = pipeline_.state_json();
    std::vector<Notify> wake;
    {
        std::lock_guard lock(mu_);
        json diff = compute_diff(state_, next);
        if (diff_empty(diff)) return;
        state_ = std::move(next);
        for (auto& [_, c] : clients_) send_locked(c, kMsgRenderDiff, t_ms, diff, wake);
    }
    for (auto& w : wake) w();
}

} // namespace chirono
