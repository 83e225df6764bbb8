#include "bookmap/tagcloud.hpp"

#include <algorithm>

#include "bookmap/error.hpp"

namespace bookmap {

void CloudConfig::validate() const {
    if (!(min_size > 0.0) || !(max_size >= min_size) || max_tags < 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "cloud config needs 0 < min_size <= max_size and max_tags >= 1");
    }
}

std::vector<SizedTag> build_cloud(const std::map<TagLabel, std::size_t>& counts,
                                  const CloudConfig& cfg) {
    cfg.validate();

    std::vector<SizedTag> kept;
    kept.reserve(counts.size());
    for (const auto& [label, count] : counts) {
        if (count == 0) {
            throw Error(ErrorCode::InvalidArgument, "tag '" + label.str() + "' has a zero count");
        }
        kept.push_back({label, count, 0.0});
    }

    // counts is label-ordered, so a stable sort by count keeps earlier labels on ties.
    if (kept.size() > cfg.max_tags) {
        std::stable_sort(kept.begin(), kept.end(),
                         [](const SizedTag& a, const SizedTag& b) { return a.count > b.count; });
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(cfg.max_tags), kept.end());
        std::sort(kept.begin(), kept.end(),
                  [](const SizedTag& a, const SizedTag& b) { return a.label < b.label; });
    }
    if (kept.empty()) return kept;

    const auto [lo, hi] = std::minmax_element(
        kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.count < b.count; });
    const auto c_min = lo->count;
    const auto c_max = hi->count;

    for (auto& tag : kept) {
        if (c_max == c_min) {
            tag.size = (cfg.min_size + cfg.max_size) / 2.0;
        } else {
            const double t = static_cast<double>(tag.count - c_min) /
                             static_cast<double>(c_max - c_min);
            tag.size = std::clamp(cfg.min_size + (cfg.max_size - cfg.min_size) * t, cfg.min_size,
                                  cfg.max_size);
        }
    }
    return kept;
}

}  // namespace bookmap
