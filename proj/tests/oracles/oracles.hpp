#pragma once
// Brute-force reference implementations used by the unit and acceptance
// suites. They work on flat lists of plain strings and never call into the
// library's indexes, so they check the production code paths independently.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

struct RawTriple {
    std::string user;
    std::string tag;
    std::string resource;
};

// ---------------------------------------------------------------------------
// Context graph

enum class Kind { Tag = 0, Resource = 1 };

struct Node {
    Kind kind;
    std::string id;
    auto operator<=>(const Node&) const = default;
};

struct GraphNode {
    Node node;
    bool local = false;
    std::size_t weight = 0;
    bool is_center = false;
    bool operator==(const GraphNode&) const = default;
};

struct Graph {
    std::vector<GraphNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

struct Filter {
    int depth = 2;
    int max_neighbors = 10;
    int max_nodes = 60;
    std::vector<std::string> extra_tags;  // sorted, distinct
};

inline bool touches(const RawTriple& t, const Node& n) {
    return n.kind == Kind::Tag ? t.tag == n.id : t.resource == n.id;
}

inline std::size_t brute_weight(const std::vector<RawTriple>& active, const Node& n) {
    std::set<std::pair<std::string, std::string>> keys;
    for (const auto& t : active) {
        if (!touches(t, n)) continue;
        if (n.kind == Kind::Resource) keys.insert({t.user, ""});
        else keys.insert({t.user, t.resource});
    }
    return keys.size();
}

// Returns nullopt when a center has no incidence in the view.
inline std::optional<Graph> brute_context(const std::vector<RawTriple>& all, const std::string& user,
                                          const std::vector<Node>& centers, bool social,
                                          const Filter& filter) {
    std::vector<RawTriple> active;
    for (const auto& t : all) {
        if (social || t.user == user) active.push_back(t);
    }

    std::vector<Node> admitted;
    auto seen = [&](const Node& n) {
        return std::find(admitted.begin(), admitted.end(), n) != admitted.end();
    };
    std::size_t n_centers = 0;
    for (const auto& c : centers) {
        if (seen(c)) continue;
        if (brute_weight(active, c) == 0) return std::nullopt;
        admitted.push_back(c);
        ++n_centers;
    }
    const auto cap = static_cast<std::size_t>(filter.max_nodes);
    for (const auto& tag : filter.extra_tags) {
        Node n{Kind::Tag, tag};
        if (admitted.size() < cap && !seen(n) && brute_weight(active, n) > 0) admitted.push_back(n);
    }

    std::size_t ring_begin = 0;
    std::size_t ring_end = admitted.size();
    bool full = admitted.size() >= cap;
    for (int ring = 0; ring < filter.depth && !full; ++ring) {
        for (std::size_t f = ring_begin; f < ring_end && !full; ++f) {
            const Node from = admitted[f];
            std::vector<Node> candidates;
            for (const auto& t : active) {
                if (!touches(t, from)) continue;
                Node other = from.kind == Kind::Tag ? Node{Kind::Resource, t.resource}
                                                    : Node{Kind::Tag, t.tag};
                if (!seen(other) &&
                    std::find(candidates.begin(), candidates.end(), other) == candidates.end()) {
                    candidates.push_back(other);
                }
            }
            // Selection sort: heaviest first, then smallest id.
            for (int pick = 0; pick < filter.max_neighbors && !candidates.empty(); ++pick) {
                auto best = candidates.begin();
                for (auto it = candidates.begin(); it != candidates.end(); ++it) {
                    auto wi = brute_weight(active, *it);
                    auto wb = brute_weight(active, *best);
                    if (wi > wb || (wi == wb && it->id < best->id)) best = it;
                }
                if (admitted.size() >= cap) {
                    full = true;
                    break;
                }
                admitted.push_back(*best);
                candidates.erase(best);
            }
            if (admitted.size() >= cap) full = true;
        }
        ring_begin = ring_end;
        ring_end = admitted.size();
        if (ring_begin == ring_end) break;
    }

    Graph g;
    for (std::size_t i = 0; i < admitted.size(); ++i) {
        bool local = std::any_of(all.begin(), all.end(), [&](const RawTriple& t) {
            return t.user == user && touches(t, admitted[i]);
        });
        g.nodes.push_back({admitted[i], local, brute_weight(active, admitted[i]), i < n_centers});
    }
    for (std::size_t i = 0; i < admitted.size(); ++i) {
        for (std::size_t j = 0; j < admitted.size(); ++j) {
            if (admitted[i].kind != Kind::Tag || admitted[j].kind != Kind::Resource) continue;
            bool linked = std::any_of(active.begin(), active.end(), [&](const RawTriple& t) {
                return t.tag == admitted[i].id && t.resource == admitted[j].id;
            });
            if (linked) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Similarity and recommendation

inline std::set<std::string> resources_of_tag(const std::vector<RawTriple>& all, const std::string& tag) {
    std::set<std::string> out;
    for (const auto& t : all) if (t.tag == tag) out.insert(t.resource);
    return out;
}

inline std::set<std::string> tags_of_resource(const std::vector<RawTriple>& all, const std::string& res) {
    std::set<std::string> out;
    for (const auto& t : all) if (t.resource == res) out.insert(t.tag);
    return out;
}

inline double cosine(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (common.empty()) return 0.0;
    return static_cast<double>(common.size()) /
           std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

inline std::string host_of(const std::string& url) {
    auto start = url.find("://") + 3;
    auto end = url.find_first_of("/:?", start);
    return url.substr(start, end - start);
}

inline std::string path_of(const std::string& url) {
    auto start = url.find("://") + 3;
    return url.substr(url.find('/', start));
}

// Ranked (tag, distinct users) for a URL, following the fallback rule for
// unannotated URLs.
inline std::vector<std::pair<std::string, std::size_t>> brute_recommend(
    const std::vector<RawTriple>& all, const std::string& user, const std::string& url,
    std::size_t k) {
    std::string source = url;
    if (tags_of_resource(all, url).empty()) {
        std::set<std::string> same_host;
        for (const auto& t : all) {
            if (t.resource != url && host_of(t.resource) == host_of(url)) same_host.insert(t.resource);
        }
        if (same_host.empty()) return {};
        auto key = [&](const std::string& r) {
            const auto a = path_of(r);
            const auto b = path_of(url);
            std::size_t prefix = 0;
            while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
            std::set<std::string> users;
            for (const auto& t : all) if (t.resource == r) users.insert(t.user);
            return std::make_tuple(prefix, users.size());
        };
        source = *same_host.begin();
        for (const auto& r : same_host) {
            if (key(r) > key(source)) source = r;
        }
    }

    std::map<std::string, std::set<std::string>> users_by_tag;
    std::set<std::string> own;
    for (const auto& t : all) {
        if (t.resource == source) users_by_tag[t.tag].insert(t.user);
        if (t.resource == url && t.user == user) own.insert(t.tag);
    }
    std::vector<std::pair<std::string, std::size_t>> out;
    for (const auto& [tag, users] : users_by_tag) {
        if (!own.contains(tag)) out.emplace_back(tag, users.size());
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

// ---------------------------------------------------------------------------
// Sessions

struct RawEvent {
    std::string user;
    std::int64_t at = 0;
    int mode = 0;    // 0 list, 1 viz
    int action = 0;  // index into the action vocabulary; 7 is mode_switch
};

inline constexpr int kModeSwitch = 7;

struct RawSession {
    std::vector<RawEvent> events;
    bool ended_by_switch = false;
};

// Boundary-predicate formulation: decide independently for each adjacent pair
// of sorted events whether a session boundary lies between them.
inline std::vector<RawSession> brute_sessionize(std::vector<RawEvent> events, std::int64_t gap) {
    std::sort(events.begin(), events.end(), [](const RawEvent& a, const RawEvent& b) {
        return std::tie(a.user, a.at, a.mode, a.action) < std::tie(b.user, b.at, b.mode, b.action);
    });
    std::vector<RawSession> out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const bool starts = i == 0 || events[i].user != events[i - 1].user ||
                            events[i].at - events[i - 1].at > gap ||
                            events[i].mode != events[i - 1].mode ||
                            events[i - 1].action == kModeSwitch;
        if (starts) out.emplace_back();
        out.back().events.push_back(events[i]);
    }
    for (auto& s : out) {
        const auto& last = s.events.back();
        if (last.action == kModeSwitch) s.ended_by_switch = true;
    }
    // A mode change inside the gap also counts as a switch for the closed session.
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        const auto& a = out[i].events.back();
        const auto& b = out[i + 1].events.front();
        if (a.user == b.user && b.at - a.at <= gap && a.mode != b.mode) out[i].ended_by_switch = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random generators

struct StoreScript {
    std::vector<std::tuple<std::string, std::string, std::vector<std::string>>> adds;  // user, url, tags
};

inline std::vector<std::string> pick_tags(std::mt19937& rng, int pool, int max_count) {
    std::uniform_int_distribution<int> n(1, max_count);
    std::uniform_int_distribution<int> which(0, pool - 1);
    std::vector<std::string> out;
    for (int i = n(rng); i > 0; --i) out.push_back("t" + std::to_string(which(rng)));
    return out;
}

inline std::string pick_url(std::mt19937& rng, int hosts, int paths) {
    std::uniform_int_distribution<int> h(0, hosts - 1);
    std::uniform_int_distribution<int> p(0, paths - 1);
    return "http://h" + std::to_string(h(rng)) + ".org/p" + std::to_string(p(rng));
}

inline std::string pick_user(std::mt19937& rng, int users) {
    return "u" + std::to_string(std::uniform_int_distribution<int>(0, users - 1)(rng));
}

}  // namespace oracle
