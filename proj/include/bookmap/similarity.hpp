#pragma once
// Co-occurrence similarity and tag recommendation over the global triple set.
//
// Similarity is set cosine: |A ∩ B| / sqrt(|A| |B|), where a tag is described
// by the resources carrying it and a resource by the tags on it.

#include <cstddef>
#include <vector>

#include "bookmap/store.hpp"
#include "bookmap/types.hpp"

namespace bookmap {

struct ScoredTag {
    TagLabel label;
    double score = 0.0;

    bool operator==(const ScoredTag&) const = default;
};

struct ScoredResource {
    ResourceId resource;
    double score = 0.0;

    bool operator==(const ScoredResource&) const = default;
};

double set_cosine(std::size_t overlap, std::size_t size_a, std::size_t size_b) noexcept;

// Top-k tags by cosine over resource sets; the tag itself and tags with no
// shared resource are excluded. Ties break alphabetically.
std::vector<ScoredTag> related_tags(const Store& store, const TagLabel& tag, std::size_t k);

std::vector<ScoredResource> similar_resources(const Store& store, const ResourceId& resource,
                                              std::size_t k);

// Tags other users put on the URL, scored by distinct annotators, minus the
// ones the user already has there. An unannotated URL borrows the tags of the
// closest annotated resource on the same host (longest shared path prefix,
// then most annotators, then URL order). Empty on cold start.
std::vector<ScoredTag> recommend_tags(const Store& store, const UserId& user,
                                      const ResourceId& url, std::size_t k);

}  // namespace bookmap
