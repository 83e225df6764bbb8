#pragma once
// Glue between library types and the brute-force oracles.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "bookmap/context_graph.hpp"
#include "bookmap/service.hpp"
#include "bookmap/sessions.hpp"
#include "bookmap/store.hpp"
#include "oracles/oracles.hpp"

namespace support {

inline std::vector<oracle::RawTriple> raw_triples(const bookmap::Store& store) {
    std::vector<oracle::RawTriple> out;
    for (const auto& t : store.triples()) out.push_back({t.user.str(), t.tag.str(), t.resource.str()});
    return out;
}

inline oracle::Node to_oracle(const bookmap::NodeRef& ref) {
    return {bookmap::kind_of(ref) == bookmap::NodeKind::Tag ? oracle::Kind::Tag : oracle::Kind::Resource,
            bookmap::id_of(ref)};
}

inline oracle::Graph to_oracle(const bookmap::ContextGraph& g) {
    oracle::Graph out;
    for (const auto& n : g.nodes) {
        out.nodes.push_back({to_oracle(n.ref), n.locality == bookmap::Locality::Local, n.weight, n.is_center});
    }
    out.edges = g.edges;
    return out;
}

inline oracle::Filter to_oracle(const bookmap::FilterParams& f) {
    oracle::Filter out{f.depth, f.max_neighbors, f.max_nodes, {}};
    for (const auto& t : f.extra_tags) out.extra_tags.push_back(t.str());
    return out;
}

// Random store of at most max_triples triples built through add_annotation.
inline bookmap::Store random_store(std::mt19937& rng, std::size_t max_triples, int users = 4,
                                   int tags = 6, int hosts = 3, int paths = 3) {
    bookmap::Store store;
    const auto target = std::uniform_int_distribution<std::size_t>(1, max_triples)(rng);
    bookmap::Timestamp now = 0;
    for (int attempts = 0; store.size() < target && attempts < 500; ++attempts) {
        auto wanted = oracle::pick_tags(rng, tags, 3);
        while (store.size() + wanted.size() > max_triples && wanted.size() > 1) wanted.pop_back();
        if (store.size() + wanted.size() > max_triples) break;
        store.add_annotation(bookmap::UserId(oracle::pick_user(rng, users)),
                             oracle::pick_url(rng, hosts, paths), "title", wanted, ++now);
    }
    return store;
}

inline oracle::RawEvent to_oracle(const bookmap::ClickEvent& e) {
    return {e.user.str(), e.at, static_cast<int>(e.mode), static_cast<int>(e.action)};
}

inline std::vector<bookmap::ClickEvent> random_events(std::mt19937& rng, std::size_t max_events,
                                                      bookmap::Timestamp gap) {
    std::vector<bookmap::ClickEvent> out;
    const auto n = std::uniform_int_distribution<std::size_t>(0, max_events)(rng);
    std::uniform_int_distribution<int> action(0, 8);
    std::uniform_int_distribution<int> mode(0, 1);
    // Steps straddle the gap so every boundary rule gets exercised.
    std::uniform_int_distribution<bookmap::Timestamp> step(0, gap + gap / 2);
    std::vector<bookmap::Timestamp> clock(3, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const int u = std::uniform_int_distribution<int>(0, 2)(rng);
        clock[static_cast<std::size_t>(u)] += step(rng);
        out.push_back({bookmap::UserId("user" + std::to_string(u)), clock[static_cast<std::size_t>(u)],
                       static_cast<bookmap::Mode>(mode(rng)), static_cast<bookmap::ClickAction>(action(rng))});
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

}  // namespace support

namespace support {

// A random edit, replayable against a Service or a bare Store.
struct Op {
    enum Kind { Add, Remove, SetTags, SetTitle, Rename, Drag, Events } kind = Add;
    std::string user;
    std::string url;
    std::string title;
    std::vector<std::string> tags;
    std::vector<bookmap::ClickEvent> events;
};

inline Op random_op(std::mt19937& rng) {
    Op op;
    // Adds are drawn more often so stores grow.
    const int k = std::uniform_int_distribution<int>(0, 9)(rng);
    op.kind = k > 6 ? Op::Add : static_cast<Op::Kind>(k);
    op.user = oracle::pick_user(rng, 3);
    op.url = oracle::pick_url(rng, 2, 3);
    op.title = "title " + std::to_string(rng() % 5);
    op.tags = oracle::pick_tags(rng, 5, 3);
    if (op.kind == Op::Events) {
        const int n = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int i = 0; i < n; ++i) {
            op.events.push_back({bookmap::UserId(op.user), static_cast<bookmap::Timestamp>(rng() % 5000),
                                 static_cast<bookmap::Mode>(rng() % 2),
                                 static_cast<bookmap::ClickAction>(rng() % 9)});
        }
    }
    return op;
}

// Runs op on a bare store at time now; returns false when the op was rejected.
inline bool run_op(bookmap::Store& store, std::vector<bookmap::ClickEvent>& log, const Op& op,
                   bookmap::Timestamp now) {
    using namespace bookmap;
    const UserId user(op.user);
    try {
        switch (op.kind) {
            case Op::Add: store.add_annotation(user, op.url, op.title, op.tags, now); break;
            case Op::Remove: store.remove_resource(user, ResourceId(op.url)); break;
            case Op::SetTags: store.set_tags(user, ResourceId(op.url), op.tags, now); break;
            case Op::SetTitle: store.set_title(user, ResourceId(op.url), op.title); break;
            case Op::Rename: store.rename_tag(user, TagLabel(op.tags[0]), op.tags.back() + "x", now); break;
            case Op::Drag:
                apply_drag(store, user, ResourceId(op.url), TagLabel(op.tags[0]), now);
                break;
            case Op::Events: log.insert(log.end(), op.events.begin(), op.events.end()); break;
        }
    } catch (const Error&) {
        return false;
    }
    return true;
}

// Same op through the service; the service clock must already read `now`.
inline bool run_op(bookmap::Service& service, const Op& op) {
    using namespace bookmap;
    const UserId user(op.user);
    try {
        switch (op.kind) {
            case Op::Add: service.add_annotation(user, op.url, op.title, op.tags); break;
            case Op::Remove: service.remove_resource(user, op.url); break;
            case Op::SetTags: service.set_tags(user, op.url, op.tags); break;
            case Op::SetTitle: service.set_title(user, op.url, op.title); break;
            case Op::Rename: service.rename_tag(user, op.tags[0], op.tags.back() + "x"); break;
            case Op::Drag: service.drag(user, ResourceId(op.url), TagLabel(op.tags[0])); break;
            case Op::Events: service.record_events(op.events); break;
        }
    } catch (const Error&) {
        return false;
    }
    return true;
}

}  // namespace support
