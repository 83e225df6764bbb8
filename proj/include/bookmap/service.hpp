#pragma once
// Journaled application state behind the HTTP API.
//
// One writer at a time plans a mutation against the current store, appends it
// to the journal (fsync'd), then applies it. Readers share the lock and see
// whole mutations only.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bookmap/context_graph.hpp"
#include "bookmap/journal.hpp"
#include "bookmap/sessions.hpp"
#include "bookmap/store.hpp"

namespace bookmap {

struct ServiceConfig {
    std::filesystem::path journal = "bookmap.journal";
    std::optional<std::filesystem::path> snapshot;
    Timestamp session_gap = kDefaultSessionGap;
    FilterParams default_filter;
    // Seconds since epoch; system clock when empty.
    std::function<Timestamp()> clock;
};

class Service {
public:
    // Recovers state from the snapshot and journal. Throws CorruptJournal,
    // VersionMismatch or Storage when that fails.
    explicit Service(ServiceConfig config);

    std::vector<Triple> add_annotation(const UserId& user, std::string_view url,
                                       std::string_view title,
                                       const std::vector<std::string>& tags);
    std::size_t remove_resource(const UserId& user, std::string_view url);
    TagDiff set_tags(const UserId& user, std::string_view url, const std::vector<std::string>& tags);
    void set_title(const UserId& user, std::string_view url, std::string_view title);
    std::size_t rename_tag(const UserId& user, std::string_view old_tag, std::string_view new_tag);
    DragEffect drag(const UserId& user, const NodeRef& dragged, const NodeRef& target);
    void record_events(const std::vector<ClickEvent>& events);

    // Runs f(const AppState&) under the shared lock.
    template <class F>
    decltype(auto) read(F&& f) const {
        std::shared_lock lock(mutex_);
        return std::forward<F>(f)(std::as_const(state_));
    }

    AppState state() const;
    SessionStats stats(std::optional<Timestamp> gap = std::nullopt) const;

    // Writes to the configured snapshot path, or to `path` when given.
    void snapshot(const std::optional<std::filesystem::path>& path = std::nullopt) const;

    const ServiceConfig& config() const noexcept { return config_; }
    Timestamp now() const;

private:
    std::vector<Mutation> commit(std::vector<Mutation> plan);

    ServiceConfig config_;
    mutable std::shared_mutex mutex_;
    AppState state_;
    JournalWriter journal_;
};

}  // namespace bookmap
