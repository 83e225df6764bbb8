#include "bookmap/store.hpp"

#include <algorithm>

#include "bookmap/error.hpp"

namespace bookmap {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};

// Distinct normalized tags in first-seen order; blank entries are dropped.
std::vector<TagLabel> normalize_tag_set(std::span<const std::string> raw) {
    std::vector<TagLabel> out;
    for (const auto& text : raw) {
        try {
            TagLabel tag(text);
            if (std::find(out.begin(), out.end(), tag) == out.end()) out.push_back(std::move(tag));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyTag) throw;
        }
    }
    if (out.empty()) throw Error(ErrorCode::EmptyTagSet, "no usable tags after normalization");
    return out;
}

[[noreturn]] void not_in_collection(const UserId& user, const ResourceId& url) {
    throw Error(ErrorCode::NotInCollection,
                url.str() + " is not in the collection of " + user.str());
}

template <class Map>
const typename Map::mapped_type& find_or_empty(const Map& map, const typename Map::key_type& key) {
    static const typename Map::mapped_type empty{};
    auto it = map.find(key);
    return it == map.end() ? empty : it->second;
}

}  // namespace

std::vector<Triple> added_triples(std::span<const Mutation> plan) {
    std::vector<Triple> out;
    for (const auto& m : plan) {
        if (const auto* add = std::get_if<TripleAdd>(&m)) out.push_back(add->triple);
    }
    return out;
}

std::size_t removed_count(std::span<const Mutation> plan) {
    return static_cast<std::size_t>(std::count_if(plan.begin(), plan.end(), [](const Mutation& m) {
        return std::holds_alternative<TripleRemove>(m);
    }));
}

TagDiff tag_diff(std::span<const Mutation> plan) {
    TagDiff diff;
    for (const auto& m : plan) {
        if (const auto* add = std::get_if<TripleAdd>(&m)) diff.added.push_back(add->triple.tag);
        if (const auto* rem = std::get_if<TripleRemove>(&m)) diff.removed.push_back(rem->tag);
    }
    std::sort(diff.added.begin(), diff.added.end());
    std::sort(diff.removed.begin(), diff.removed.end());
    return diff;
}

// ---------------------------------------------------------------------------
// planning

Timestamp Store::stamp_for(const UserId& user, Timestamp now) const {
    auto last = last_stamp(user);
    return last ? std::max(*last, now) : now;
}

std::vector<Mutation> Store::plan_add_annotation(const UserId& user, std::string_view url,
                                                 std::string_view title,
                                                 std::span<const std::string> tags,
                                                 Timestamp now) const {
    ResourceId resource(url);
    const auto labels = normalize_tag_set(tags);
    const Timestamp stamp = stamp_for(user, now);

    std::vector<Mutation> plan;
    for (const auto& tag : labels) {
        if (!contains(user, tag, resource)) plan.push_back(TripleAdd{{user, tag, resource, stamp}});
    }
    if (!title.empty() && this->title(user, resource) != title) {
        plan.push_back(TitleSet{user, resource, std::string(title)});
    }
    return plan;
}

std::vector<Mutation> Store::plan_remove_resource(const UserId& user,
                                                  const ResourceId& url) const {
    std::vector<Mutation> plan;
    for (const auto& tag : tags_of(user, url)) plan.push_back(TripleRemove{user, tag, url});
    return plan;
}

std::vector<Mutation> Store::plan_set_tags(const UserId& user, const ResourceId& url,
                                           std::span<const std::string> tags,
                                           Timestamp now) const {
    if (!owns(user, url)) not_in_collection(user, url);
    const auto wanted = normalize_tag_set(tags);
    const auto current = tags_of(user, url);
    const Timestamp stamp = stamp_for(user, now);

    // Additions go first so the resource never leaves the collection midway.
    std::vector<Mutation> plan;
    for (const auto& tag : wanted) {
        if (!current.contains(tag)) plan.push_back(TripleAdd{{user, tag, url, stamp}});
    }
    for (const auto& tag : current) {
        if (std::find(wanted.begin(), wanted.end(), tag) == wanted.end()) {
            plan.push_back(TripleRemove{user, tag, url});
        }
    }
    return plan;
}

std::vector<Mutation> Store::plan_set_title(const UserId& user, const ResourceId& url,
                                            std::string_view title) const {
    if (!owns(user, url)) not_in_collection(user, url);
    return {TitleSet{user, url, std::string(title)}};
}

std::vector<Mutation> Store::plan_rename_tag(const UserId& user, const TagLabel& old_tag,
                                             std::string_view new_tag, Timestamp now) const {
    if (!uses_tag(user, old_tag)) {
        throw Error(ErrorCode::UnknownTag, user.str() + " has no tag '" + old_tag.str() + "'");
    }
    TagLabel target(new_tag);
    if (target == old_tag) return {};

    const Timestamp stamp = stamp_for(user, now);
    std::vector<Mutation> plan;
    for (const auto& resource : user_resources_with(user, old_tag)) {
        if (!contains(user, target, resource)) {
            plan.push_back(TripleAdd{{user, target, resource, stamp}});
        }
        plan.push_back(TripleRemove{user, old_tag, resource});
    }
    return plan;
}

std::vector<Mutation> Store::plan_tag_resource(const UserId& user, const TagLabel& tag,
                                               const ResourceId& resource, Timestamp now) const {
    if (contains(user, tag, resource)) return {};
    return {TripleAdd{{user, tag, resource, stamp_for(user, now)}}};
}

// ---------------------------------------------------------------------------
// mutation

void Store::apply(const Mutation& mutation) {
    std::visit(overloaded{
                   [this](const TripleAdd& m) { add_triple(m.triple); },
                   [this](const TripleRemove& m) { remove_triple(m); },
                   [this](const TitleSet& m) { put_title(m); },
               },
               mutation);
}

void Store::apply_all(std::span<const Mutation> plan) {
    for (const auto& m : plan) apply(m);
}

void Store::add_triple(const Triple& t) {
    if (contains(t.user, t.tag, t.resource)) return;
    if (auto last = last_stamp(t.user); last && t.created_at < *last) {
        throw Error(ErrorCode::InvalidArgument,
                    "triple for " + t.user.str() + " is older than the user's latest triple");
    }
    by_user_[t.user][t.resource].emplace(t.tag, t.created_at);
    user_tags_[t.user][t.tag].insert(t.resource);
    by_tag_[t.tag][t.resource].insert(t.user);
    by_resource_[t.resource][t.tag].insert(t.user);
    last_stamp_[t.user] = t.created_at;
    ++size_;
}

void Store::remove_triple(const TripleRemove& m) {
    auto user_it = by_user_.find(m.user);
    if (user_it == by_user_.end()) return;
    auto res_it = user_it->second.find(m.resource);
    if (res_it == user_it->second.end() || res_it->second.erase(m.tag) == 0) return;
    --size_;

    if (res_it->second.empty()) {
        user_it->second.erase(res_it);
        if (auto meta_it = meta_.find(m.resource); meta_it != meta_.end()) {
            meta_it->second.titles.erase(m.user);
            if (meta_it->second.titles.empty() && !meta_it->second.favicon_url) {
                meta_.erase(meta_it);
            }
        }
    }
    if (user_it->second.empty()) by_user_.erase(user_it);

    auto& tags = user_tags_[m.user];
    tags[m.tag].erase(m.resource);
    if (tags[m.tag].empty()) tags.erase(m.tag);
    if (tags.empty()) user_tags_.erase(m.user);

    auto& users_by_res = by_tag_[m.tag];
    users_by_res[m.resource].erase(m.user);
    if (users_by_res[m.resource].empty()) users_by_res.erase(m.resource);
    if (users_by_res.empty()) by_tag_.erase(m.tag);

    auto& users_by_tag = by_resource_[m.resource];
    users_by_tag[m.tag].erase(m.user);
    if (users_by_tag[m.tag].empty()) users_by_tag.erase(m.tag);
    if (users_by_tag.empty()) by_resource_.erase(m.resource);
}

void Store::put_title(const TitleSet& m) {
    if (!owns(m.user, m.resource)) not_in_collection(m.user, m.resource);
    auto it = meta_.try_emplace(m.resource, ResourceMeta{m.resource, {}, std::nullopt}).first;
    it->second.titles.insert_or_assign(m.user, m.title);
}

void Store::restore_clock(const UserId& user, Timestamp stamp) {
    auto& slot = last_stamp_.try_emplace(user, stamp).first->second;
    slot = std::max(slot, stamp);
}

// ---------------------------------------------------------------------------
// convenience edits

std::vector<Triple> Store::add_annotation(const UserId& user, std::string_view url,
                                          std::string_view title,
                                          std::span<const std::string> tags, Timestamp now) {
    auto plan = plan_add_annotation(user, url, title, tags, now);
    apply_all(plan);
    return added_triples(plan);
}

std::size_t Store::remove_resource(const UserId& user, const ResourceId& url) {
    auto plan = plan_remove_resource(user, url);
    apply_all(plan);
    return removed_count(plan);
}

TagDiff Store::set_tags(const UserId& user, const ResourceId& url,
                        std::span<const std::string> tags, Timestamp now) {
    auto plan = plan_set_tags(user, url, tags, now);
    apply_all(plan);
    return tag_diff(plan);
}

void Store::set_title(const UserId& user, const ResourceId& url, std::string_view title) {
    apply_all(plan_set_title(user, url, title));
}

std::size_t Store::rename_tag(const UserId& user, const TagLabel& old_tag,
                              std::string_view new_tag, Timestamp now) {
    auto plan = plan_rename_tag(user, old_tag, new_tag, now);
    apply_all(plan);
    return removed_count(plan);
}

// ---------------------------------------------------------------------------
// queries

std::map<TagLabel, std::size_t> Store::tag_counts(const PopularityScope& scope) const {
    std::map<TagLabel, std::size_t> counts;
    if (scope.is_global()) {
        for (const auto& [tag, by_res] : by_tag_) {
            std::size_t pairs = 0;
            for (const auto& [res, users] : by_res) pairs += users.size();
            counts.emplace(tag, pairs);
        }
    } else if (auto it = user_tags_.find(scope.user()); it != user_tags_.end()) {
        for (const auto& [tag, resources] : it->second) counts.emplace(tag, resources.size());
    }
    return counts;
}

std::vector<WeightedResource> Store::resources_for_tags(const PopularityScope& scope,
                                                        const std::set<TagLabel>& tags,
                                                        bool conjunctive) const {
    if (tags.empty()) throw Error(ErrorCode::InvalidArgument, "at least one tag is required");

    struct Hit {
        std::size_t matched = 0;
        UserSet users;
    };
    std::map<ResourceId, Hit> hits;
    for (const auto& tag : tags) {
        if (scope.is_global()) {
            for (const auto& [res, users] : resources_with(tag)) {
                auto& hit = hits[res];
                ++hit.matched;
                hit.users.insert(users.begin(), users.end());
            }
        } else {
            for (const auto& res : user_resources_with(scope.user(), tag)) ++hits[res].matched;
        }
    }

    std::vector<WeightedResource> out;
    for (auto& [res, hit] : hits) {
        if (conjunctive && hit.matched != tags.size()) continue;
        out.push_back({res, scope.is_global() ? hit.users.size() : hit.matched});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.weight > b.weight;
    });
    return out;
}

const Store::UserCollection* Store::collection(const UserId& user) const {
    auto it = by_user_.find(user);
    return it == by_user_.end() ? nullptr : &it->second;
}

bool Store::contains(const UserId& user, const TagLabel& tag, const ResourceId& resource) const {
    return created_at(user, tag, resource).has_value();
}

std::optional<Timestamp> Store::created_at(const UserId& user, const TagLabel& tag,
                                           const ResourceId& resource) const {
    const auto* coll = collection(user);
    if (!coll) return std::nullopt;
    auto res_it = coll->find(resource);
    if (res_it == coll->end()) return std::nullopt;
    auto tag_it = res_it->second.find(tag);
    if (tag_it == res_it->second.end()) return std::nullopt;
    return tag_it->second;
}

bool Store::owns(const UserId& user, const ResourceId& resource) const {
    const auto* coll = collection(user);
    return coll && coll->contains(resource);
}

bool Store::uses_tag(const UserId& user, const TagLabel& tag) const {
    return !user_resources_with(user, tag).empty();
}

std::optional<Timestamp> Store::last_stamp(const UserId& user) const {
    auto it = last_stamp_.find(user);
    if (it == last_stamp_.end()) return std::nullopt;
    return it->second;
}

std::vector<Triple> Store::triples() const {
    std::vector<Triple> out;
    out.reserve(size_);
    for (const auto& [user, coll] : by_user_) {
        for (const auto& [res, tags] : coll) {
            for (const auto& [tag, stamp] : tags) out.push_back({user, tag, res, stamp});
        }
    }
    return out;
}

std::vector<UserId> Store::users() const {
    std::vector<UserId> out;
    for (const auto& [user, coll] : by_user_) out.push_back(user);
    return out;
}

std::set<TagLabel> Store::tags_of(const UserId& user, const ResourceId& resource) const {
    std::set<TagLabel> out;
    const auto* coll = collection(user);
    if (!coll) return out;
    if (auto it = coll->find(resource); it != coll->end()) {
        for (const auto& [tag, stamp] : it->second) out.insert(tag);
    }
    return out;
}

std::optional<std::string> Store::title(const UserId& user, const ResourceId& resource) const {
    const auto* m = meta(resource);
    if (!m) return std::nullopt;
    auto it = m->titles.find(user);
    if (it == m->titles.end()) return std::nullopt;
    return it->second;
}

const ResourceMeta* Store::meta(const ResourceId& resource) const {
    auto it = meta_.find(resource);
    return it == meta_.end() ? nullptr : &it->second;
}

const Store::ResourceUsers& Store::resources_with(const TagLabel& tag) const {
    return find_or_empty(by_tag_, tag);
}

const Store::TagUsers& Store::tags_on(const ResourceId& resource) const {
    return find_or_empty(by_resource_, resource);
}

const std::set<ResourceId>& Store::user_resources_with(const UserId& user,
                                                       const TagLabel& tag) const {
    static const std::set<ResourceId> empty;
    auto it = user_tags_.find(user);
    if (it == user_tags_.end()) return empty;
    auto tag_it = it->second.find(tag);
    return tag_it == it->second.end() ? empty : tag_it->second;
}

std::size_t Store::annotator_count(const ResourceId& resource) const {
    UserSet users;
    for (const auto& [tag, tag_users] : tags_on(resource)) {
        users.insert(tag_users.begin(), tag_users.end());
    }
    return users.size();
}

std::size_t Store::pair_count(const TagLabel& tag) const {
    std::size_t pairs = 0;
    for (const auto& [res, users] : resources_with(tag)) pairs += users.size();
    return pairs;
}

bool Store::operator==(const Store& other) const {
    return size_ == other.size_ && by_user_ == other.by_user_ && meta_ == other.meta_ &&
           last_stamp_ == other.last_stamp_;
}

}  // namespace bookmap
