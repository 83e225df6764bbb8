#pragma once
// In-memory folksonomy store.
//
// Every high-level edit is split in two steps: a const plan_* call that
// validates the request and returns the primitive mutations it implies, and
// apply(), which performs them. The service journals the plan between the two
// steps; the convenience wrappers (add_annotation, ...) just run both.
//
// Store is a plain value type with no internal locking. Concurrent readers are
// fine; writers must be serialized by the owner (see Service).

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bookmap/types.hpp"

namespace bookmap {

struct TripleAdd {
    Triple triple;
    bool operator==(const TripleAdd&) const = default;
};

struct TripleRemove {
    UserId user;
    TagLabel tag;
    ResourceId resource;
    bool operator==(const TripleRemove&) const = default;
};

struct TitleSet {
    UserId user;
    ResourceId resource;
    std::string title;
    bool operator==(const TitleSet&) const = default;
};

using Mutation = std::variant<TripleAdd, TripleRemove, TitleSet>;

struct TagDiff {
    std::vector<TagLabel> added;
    std::vector<TagLabel> removed;
};

struct WeightedResource {
    ResourceId resource;
    std::size_t weight = 0;
};

// Result extraction from a plan.
std::vector<Triple> added_triples(std::span<const Mutation> plan);
std::size_t removed_count(std::span<const Mutation> plan);
TagDiff tag_diff(std::span<const Mutation> plan);

class Store {
public:
    using UserSet = std::set<UserId>;
    using ResourceUsers = std::map<ResourceId, UserSet>;
    using TagUsers = std::map<TagLabel, UserSet>;

    // -- planning ------------------------------------------------------------

    std::vector<Mutation> plan_add_annotation(const UserId& user, std::string_view url,
                                              std::string_view title,
                                              std::span<const std::string> tags,
                                              Timestamp now) const;
    std::vector<Mutation> plan_remove_resource(const UserId& user, const ResourceId& url) const;
    std::vector<Mutation> plan_set_tags(const UserId& user, const ResourceId& url,
                                        std::span<const std::string> tags, Timestamp now) const;
    std::vector<Mutation> plan_set_title(const UserId& user, const ResourceId& url,
                                         std::string_view title) const;
    std::vector<Mutation> plan_rename_tag(const UserId& user, const TagLabel& old_tag,
                                          std::string_view new_tag, Timestamp now) const;
    // Adds (user, tag, resource) if absent, keeping the per-user clock monotone.
    std::vector<Mutation> plan_tag_resource(const UserId& user, const TagLabel& tag,
                                            const ResourceId& resource, Timestamp now) const;

    // Adding a present triple and removing an absent one are no-ops. Throws
    // NotInCollection for a title on an unowned resource and InvalidArgument
    // for a triple older than the user's latest.
    void apply(const Mutation& mutation);
    void apply_all(std::span<const Mutation> plan);

    // -- edits (plan + apply) -----------------------------------------------

    std::vector<Triple> add_annotation(const UserId& user, std::string_view url,
                                       std::string_view title, std::span<const std::string> tags,
                                       Timestamp now);
    std::size_t remove_resource(const UserId& user, const ResourceId& url);
    TagDiff set_tags(const UserId& user, const ResourceId& url, std::span<const std::string> tags,
                     Timestamp now);
    void set_title(const UserId& user, const ResourceId& url, std::string_view title);
    std::size_t rename_tag(const UserId& user, const TagLabel& old_tag, std::string_view new_tag,
                           Timestamp now);

    // -- queries ------------------------------------------------------------

    std::map<TagLabel, std::size_t> tag_counts(const PopularityScope& scope) const;

    // Weight: PERSONAL counts matched tags, GLOBAL counts distinct users who
    // put any of the requested tags on the resource. Heaviest first, ties by URL.
    std::vector<WeightedResource> resources_for_tags(const PopularityScope& scope,
                                                     const std::set<TagLabel>& tags,
                                                     bool conjunctive) const;

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    bool contains(const UserId& user, const TagLabel& tag, const ResourceId& resource) const;
    bool owns(const UserId& user, const ResourceId& resource) const;
    bool uses_tag(const UserId& user, const TagLabel& tag) const;
    std::optional<Timestamp> created_at(const UserId& user, const TagLabel& tag,
                                        const ResourceId& resource) const;
    // Latest created_at ever stored for the user.
    std::optional<Timestamp> last_stamp(const UserId& user) const;

    // All triples ordered by (user, resource, tag).
    std::vector<Triple> triples() const;
    std::vector<UserId> users() const;
    std::set<TagLabel> tags_of(const UserId& user, const ResourceId& resource) const;
    std::optional<std::string> title(const UserId& user, const ResourceId& resource) const;
    const ResourceMeta* meta(const ResourceId& resource) const;
    const std::map<ResourceId, ResourceMeta>& all_meta() const noexcept { return meta_; }
    const std::map<UserId, Timestamp>& clocks() const noexcept { return last_stamp_; }

    // Global incidence indexes.
    const ResourceUsers& resources_with(const TagLabel& tag) const;
    const TagUsers& tags_on(const ResourceId& resource) const;
    const std::map<TagLabel, ResourceUsers>& tag_index() const noexcept { return by_tag_; }
    const std::map<ResourceId, TagUsers>& resource_index() const noexcept { return by_resource_; }

    // Per-user incidence.
    const std::set<ResourceId>& user_resources_with(const UserId& user, const TagLabel& tag) const;
    // Distinct users with any triple on the resource.
    std::size_t annotator_count(const ResourceId& resource) const;
    // Distinct (user, resource) pairs carrying the tag.
    std::size_t pair_count(const TagLabel& tag) const;

    // Restores a user's clock (snapshot loading).
    void restore_clock(const UserId& user, Timestamp stamp);

    bool operator==(const Store& other) const;

private:
    using UserCollection = std::map<ResourceId, std::map<TagLabel, Timestamp>>;

    void add_triple(const Triple& triple);
    void remove_triple(const TripleRemove& removal);
    void put_title(const TitleSet& entry);
    Timestamp stamp_for(const UserId& user, Timestamp now) const;
    const UserCollection* collection(const UserId& user) const;

    std::map<UserId, UserCollection> by_user_;
    std::map<UserId, std::map<TagLabel, std::set<ResourceId>>> user_tags_;
    std::map<TagLabel, ResourceUsers> by_tag_;
    std::map<ResourceId, TagUsers> by_resource_;
    std::map<ResourceId, ResourceMeta> meta_;
    std::map<UserId, Timestamp> last_stamp_;
    std::size_t size_ = 0;
};

}  // namespace bookmap
