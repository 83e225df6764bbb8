#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "bookmap/types.hpp"

namespace bookmap {

struct CloudConfig {
    double min_size = 10.0;
    double max_size = 32.0;
    std::size_t max_tags = 100;

    // Throws InvalidArgument unless 0 < min_size <= max_size and max_tags >= 1.
    void validate() const;
};

struct SizedTag {
    TagLabel label;
    std::size_t count = 0;
    double size = 0.0;

    bool operator==(const SizedTag&) const = default;
};

// Keeps the max_tags most popular tags (ties keep the alphabetically earlier
// label), sizes them linearly between min_size and max_size over the kept
// count range, and returns them in alphabetical order. A flat count range maps
// every tag to the midpoint size.
std::vector<SizedTag> build_cloud(const std::map<TagLabel, std::size_t>& counts,
                                  const CloudConfig& cfg);

}  // namespace bookmap
