#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <utility>

namespace chirono {

/**
 * Thread-safe handoff queue with latest-wins coalescing.
 *
 * When a coalescible item is pushed while the most recent pending item is
 * also coalescible, the pending one is replaced and returned to the caller as
 * dropped. With every item coalescible this is a single-slot mailbox: at most
 * one item ever waits behind the one being processed.
 */
template <class T>
class LatestWinsQueue {
public:
    using Predicate = std::function<bool(const T&)>;

    explicit LatestWinsQueue(Predicate coalescible = [](const T&) { return true; })
        : coalescible_(std::move(coalescible)) {}

    /// Returns the item displaced by this push, if any.
    std::optional<T> push(T item) {
        std::optional<T> dropped;
        {
            std::lock_guard lock(mutex_);
            if (!pending_.empty() && coalescible_(pending_.back()) && coalescible_(item)) {
                dropped = std::move(pending_.back());
                pending_.back() = std::move(item);
            } else {
                pending_.push_back(std::move(item));
            }
        }
        cv_.notify_one();
        return dropped;
    }

    std::optional<T> try_pop() {
        std::lock_guard lock(mutex_);
        return pop_locked();
    }

    /// Blocks until an item is available or the queue is closed.
    std::optional<T> wait_pop() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return closed_ || !pending_.empty(); });
        return pop_locked();
    }

    void close() {
        {
            std::lock_guard lock(mutex_);
            closed_ = true;
        }
        cv_.notify_all();
    }

    [[nodiscard]] std::size_t size() const {
        std::lock_guard lock(mutex_);
        return pending_.size();
    }

private:
    std::optional<T> pop_locked() {
        if (pending_.empty()) return std::nullopt;
        T item = std::move(pending_.front());
        pending_.pop_front();
        return item;
    }

    Predicate coalescible_;
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<T> pending_;
    bool closed_ = false;
};

} // namespace chirono
