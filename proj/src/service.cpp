#include "bookmap/service.hpp"

#include <chrono>

#include "bookmap/error.hpp"

namespace bookmap {

Service::Service(ServiceConfig config)
    : config_(std::move(config)),
      state_(recover(config_.snapshot, config_.journal)),
      journal_(config_.journal, state_.seq + 1) {
    config_.default_filter.validate();
    if (config_.session_gap <= 0) {
        throw Error(ErrorCode::InvalidArgument, "session gap must be positive");
    }
}

Timestamp Service::now() const {
    if (config_.clock) return config_.clock();
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

// Caller holds the exclusive lock.
std::vector<Mutation> Service::commit(std::vector<Mutation> plan) {
    std::vector<RecordPayload> payloads;
    payloads.reserve(plan.size());
    for (const auto& m : plan) payloads.push_back(to_payload(m));
    for (const auto& record : journal_.append(payloads)) state_.apply(record);
    return plan;
}

std::vector<Triple> Service::add_annotation(const UserId& user, std::string_view url,
                                            std::string_view title,
                                            const std::vector<std::string>& tags) {
    std::unique_lock lock(mutex_);
    return added_triples(commit(state_.store.plan_add_annotation(user, url, title, tags, now())));
}

std::size_t Service::remove_resource(const UserId& user, std::string_view url) {
    ResourceId resource(url);
    std::unique_lock lock(mutex_);
    return removed_count(commit(state_.store.plan_remove_resource(user, resource)));
}

TagDiff Service::set_tags(const UserId& user, std::string_view url,
                          const std::vector<std::string>& tags) {
    ResourceId resource(url);
    std::unique_lock lock(mutex_);
    return tag_diff(commit(state_.store.plan_set_tags(user, resource, tags, now())));
}

void Service::set_title(const UserId& user, std::string_view url, std::string_view title) {
    ResourceId resource(url);
    std::unique_lock lock(mutex_);
    commit(state_.store.plan_set_title(user, resource, title));
}

std::size_t Service::rename_tag(const UserId& user, std::string_view old_tag,
                                std::string_view new_tag) {
    TagLabel old_label(old_tag);
    std::unique_lock lock(mutex_);
    return removed_count(commit(state_.store.plan_rename_tag(user, old_label, new_tag, now())));
}

DragEffect Service::drag(const UserId& user, const NodeRef& dragged, const NodeRef& target) {
    std::unique_lock lock(mutex_);
    auto plan = plan_drag(state_.store, user, dragged, target, now());
    commit(std::move(plan.mutations));
    return plan.effect;
}

void Service::record_events(const std::vector<ClickEvent>& events) {
    std::vector<RecordPayload> payloads(events.begin(), events.end());
    std::unique_lock lock(mutex_);
    for (const auto& record : journal_.append(payloads)) state_.apply(record);
}

AppState Service::state() const {
    return read([](const AppState& s) { return s; });
}

SessionStats Service::stats(std::optional<Timestamp> gap) const {
    std::vector<ClickEvent> events = read([](const AppState& s) { return s.events; });
    auto sessions = sessionize(events, gap.value_or(config_.session_gap));
    return compute_stats(sessions);
}

void Service::snapshot(const std::optional<std::filesystem::path>& path) const {
    const auto target = path ? path : config_.snapshot;
    if (!target) throw Error(ErrorCode::InvalidArgument, "no snapshot path configured");
    read([&](const AppState& s) { save_snapshot(s, *target); });
}

}  // namespace bookmap
