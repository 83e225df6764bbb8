#include "bookmap/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "bookmap/error.hpp"

namespace bookmap {

namespace {

void require_positive(std::size_t k) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
}

template <class Scored>
void rank_and_truncate(std::vector<Scored>& items, std::size_t k, auto key) {
    std::sort(items.begin(), items.end(), [&](const Scored& a, const Scored& b) {
        return a.score != b.score ? a.score > b.score : key(a) < key(b);
    });
    if (items.size() > k) items.erase(items.begin() + static_cast<std::ptrdiff_t>(k), items.end());
}

std::size_t shared_prefix(std::string_view a, std::string_view b) {
    auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
    return static_cast<std::size_t>(ia - a.begin());
}

std::optional<ResourceId> closest_on_host(const Store& store, const ResourceId& url) {
    std::optional<ResourceId> best;
    std::size_t best_prefix = 0;
    std::size_t best_users = 0;
    for (const auto& [res, tags] : store.resource_index()) {
        if (res == url || res.host() != url.host()) continue;
        const auto prefix = shared_prefix(res.path(), url.path());
        const auto users = store.annotator_count(res);
        if (!best || prefix > best_prefix || (prefix == best_prefix && users > best_users)) {
            best = res;
            best_prefix = prefix;
            best_users = users;
        }
    }
    return best;
}

}  // namespace

double set_cosine(std::size_t overlap, std::size_t size_a, std::size_t size_b) noexcept {
    if (overlap == 0 || size_a == 0 || size_b == 0) return 0.0;
    return static_cast<double>(overlap) /
           std::sqrt(static_cast<double>(size_a) * static_cast<double>(size_b));
}

std::vector<ScoredTag> related_tags(const Store& store, const TagLabel& tag, std::size_t k) {
    require_positive(k);
    const auto& resources = store.resources_with(tag);

    std::map<TagLabel, std::size_t> overlap;
    for (const auto& [res, users] : resources) {
        for (const auto& [other, other_users] : store.tags_on(res)) {
            if (other != tag) ++overlap[other];
        }
    }

    std::vector<ScoredTag> out;
    for (const auto& [other, shared] : overlap) {
        out.push_back({other, set_cosine(shared, resources.size(),
                                         store.resources_with(other).size())});
    }
    rank_and_truncate(out, k, [](const ScoredTag& s) -> const TagLabel& { return s.label; });
    return out;
}

std::vector<ScoredResource> similar_resources(const Store& store, const ResourceId& resource,
                                              std::size_t k) {
    require_positive(k);
    const auto& tags = store.tags_on(resource);

    std::map<ResourceId, std::size_t> overlap;
    for (const auto& [tag, users] : tags) {
        for (const auto& [other, other_users] : store.resources_with(tag)) {
            if (other != resource) ++overlap[other];
        }
    }

    std::vector<ScoredResource> out;
    for (const auto& [other, shared] : overlap) {
        out.push_back({other, set_cosine(shared, tags.size(), store.tags_on(other).size())});
    }
    rank_and_truncate(out, k,
                      [](const ScoredResource& s) -> const ResourceId& { return s.resource; });
    return out;
}

std::vector<ScoredTag> recommend_tags(const Store& store, const UserId& user,
                                      const ResourceId& url, std::size_t k) {
    require_positive(k);
    ResourceId source = url;
    if (store.tags_on(url).empty()) {
        auto nearest = closest_on_host(store, url);
        if (!nearest) return {};
        source = *nearest;
    }

    const auto own = store.tags_of(user, url);
    std::vector<ScoredTag> out;
    for (const auto& [tag, users] : store.tags_on(source)) {
        if (!own.contains(tag)) out.push_back({tag, static_cast<double>(users.size())});
    }
    rank_and_truncate(out, k, [](const ScoredTag& s) -> const TagLabel& { return s.label; });
    return out;
}

}  // namespace bookmap
