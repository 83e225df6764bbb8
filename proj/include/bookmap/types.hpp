#pragma once
// Folksonomy value types. Each identifier type normalizes on construction,
// so any live instance satisfies its invariants.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace bookmap {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

// Lowercased, trimmed, internal whitespace collapsed to one space. Never empty.
class TagLabel {
public:
    explicit TagLabel(std::string_view raw);

    const std::string& str() const noexcept { return value_; }
    auto operator<=>(const TagLabel&) const = default;

private:
    std::string value_;
};

// Canonical URL: "<scheme>://<authority><path>[?query]" with scheme and host
// lowercased, no fragment and a path of at least "/".
class ResourceId {
public:
    explicit ResourceId(std::string_view raw);

    const std::string& str() const noexcept { return value_; }
    std::string_view scheme() const noexcept;
    std::string_view host() const noexcept;
    // Path plus query, always starting with '/'.
    std::string_view path() const noexcept;

    auto operator<=>(const ResourceId&) const = default;

private:
    std::string value_;
    std::size_t authority_begin_ = 0;
    std::size_t path_begin_ = 0;
};

class UserId {
public:
    explicit UserId(std::string_view raw);

    const std::string& str() const noexcept { return value_; }
    auto operator<=>(const UserId&) const = default;

private:
    std::string value_;
};

TagLabel normalize_tag(std::string_view raw);
ResourceId canonicalize_url(std::string_view raw);

struct Triple {
    UserId user;
    TagLabel tag;
    ResourceId resource;
    Timestamp created_at = 0;

    bool operator==(const Triple&) const = default;
};

struct ResourceMeta {
    ResourceId resource;
    std::map<UserId, std::string> titles;
    std::optional<std::string> favicon_url;

    bool operator==(const ResourceMeta&) const = default;
};

class PopularityScope {
public:
    static PopularityScope personal(UserId user) { return PopularityScope(std::move(user)); }
    static PopularityScope global() { return PopularityScope(); }

    bool is_global() const noexcept { return !user_.has_value(); }
    // Precondition: !is_global().
    const UserId& user() const { return *user_; }

private:
    PopularityScope() = default;
    explicit PopularityScope(UserId user) : user_(std::move(user)) {}

    std::optional<UserId> user_;
};

}  // namespace bookmap
