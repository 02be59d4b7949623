#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>

namespace ppeseq {

/// Bounded FIFO connecting pipeline stages. push() blocks while full (the
/// backpressure contract for live sources: no silent drops); the
/// drop-oldest variant is for fire-and-forget consumers like the webhook
/// worker. close() wakes everyone; pop() then drains what is left and
/// returns nullopt.
template <typename T>
class BoundedQueue {
  public:
    explicit BoundedQueue(std::size_t capacity = 1024) : capacity_(capacity) {}

    /// Blocking push; returns false when the queue was closed first.
    bool push(T item) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
        if (closed_) return false;
        items_.push_back(std::move(item));
        not_empty_.notify_one();
        return true;
    }

    /// Non-blocking push that evicts the oldest item when full. Returns the
    /// number of items dropped (0 or 1), or -1 when closed.
    int push_drop_oldest(T item) {
        std::unique_lock lock(mutex_);
        if (closed_) return -1;
        int dropped = 0;
        if (items_.size() >= capacity_) {
            items_.pop_front();
            dropped = 1;
            ++dropped_total_;
        }
        items_.push_back(std::move(item));
        not_empty_.notify_one();
        return dropped;
    }

    /// Blocking pop; nullopt once closed and drained.
    std::optional<T> pop() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
        return take(lock);
    }

    /// Pop with a wait bound, for consumers that must wake periodically
    /// (timeout checks). nullopt on timeout or when closed and drained.
    template <typename Rep, typename Period>
    std::optional<T> pop_for(std::chrono::duration<Rep, Period> timeout) {
        std::unique_lock lock(mutex_);
        not_empty_.wait_for(lock, timeout, [&] { return !items_.empty() || closed_; });
        if (items_.empty()) return std::nullopt;
        return take(lock);
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

    bool closed() const {
        std::lock_guard lock(mutex_);
        return closed_;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return items_.size();
    }

    std::uint64_t dropped_total() const {
        std::lock_guard lock(mutex_);
        return dropped_total_;
    }

  private:
    std::optional<T> take(std::unique_lock<std::mutex>& /*held*/) {
        if (items_.empty()) return std::nullopt;
        T item = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return item;
    }

    mutable std::mutex mutex_;
    std::condition_variable not_empty_;
    std::condition_variable not_full_;
    std::deque<T> items_;
    std::size_t capacity_;
    std::uint64_t dropped_total_ = 0;
    bool closed_ = false;
};

}  // namespace ppeseq
