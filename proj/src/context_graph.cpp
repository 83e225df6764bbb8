#include "bookmap/context_graph.hpp"

#include <algorithm>
#include <map>

#include "bookmap/error.hpp"

namespace bookmap {

NodeKind kind_of(const NodeRef& ref) noexcept {
    return std::holds_alternative<TagLabel>(ref) ? NodeKind::Tag : NodeKind::Resource;
}

const std::string& id_of(const NodeRef& ref) noexcept {
    return std::visit([](const auto& id) -> const std::string& { return id.str(); }, ref);
}

NodeRef make_node_ref(std::string_view kind, std::string_view id) {
    if (kind == "tag") return TagLabel(id);
    if (kind == "resource") return ResourceId(id);
    throw Error(ErrorCode::InvalidArgument, "node kind must be 'tag' or 'resource'");
}

void FilterParams::validate() const {
    if (depth < 1 || max_neighbors < 1 || max_nodes < 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "depth, max_neighbors and max_nodes must all be positive");
    }
}

namespace {

// Incidence and weights restricted to the triples visible in one view.
class ViewIndex {
public:
    ViewIndex(const Store& store, const UserId& user, ViewMode view)
        : store_(store), user_(user), social_(view == ViewMode::Social) {}

    std::vector<NodeRef> neighbors(const NodeRef& node) const {
        std::vector<NodeRef> out;
        if (const auto* tag = std::get_if<TagLabel>(&node)) {
            if (social_) {
                for (const auto& [res, users] : store_.resources_with(*tag)) out.emplace_back(res);
            } else {
                for (const auto& res : store_.user_resources_with(user_, *tag)) out.emplace_back(res);
            }
        } else {
            const auto& res = std::get<ResourceId>(node);
            if (social_) {
                for (const auto& [t, users] : store_.tags_on(res)) out.emplace_back(t);
            } else {
                for (const auto& t : store_.tags_of(user_, res)) out.emplace_back(t);
            }
        }
        return out;
    }

    std::size_t weight(const NodeRef& node) const {
        if (const auto* tag = std::get_if<TagLabel>(&node)) {
            return social_ ? store_.pair_count(*tag)
                           : store_.user_resources_with(user_, *tag).size();
        }
        const auto& res = std::get<ResourceId>(node);
        if (social_) return store_.annotator_count(res);
        return store_.owns(user_, res) ? 1 : 0;
    }

    Locality locality(const NodeRef& node) const {
        const bool local = std::holds_alternative<TagLabel>(node)
                               ? store_.uses_tag(user_, std::get<TagLabel>(node))
                               : store_.owns(user_, std::get<ResourceId>(node));
        return local ? Locality::Local : Locality::Global;
    }

    std::optional<std::string> title(const NodeRef& node) const {
        const auto* res = std::get_if<ResourceId>(&node);
        if (!res) return std::nullopt;
        if (auto own = store_.title(user_, *res)) return own;
        if (!social_) return std::nullopt;
        if (const auto* meta = store_.meta(*res)) {
            for (const auto& [owner, text] : meta->titles) {
                if (!text.empty()) return text;
            }
        }
        return std::nullopt;
    }

private:
    const Store& store_;
    const UserId& user_;
    bool social_;
};

}  // namespace

ContextGraph build_context(const Store& store, const UserId& user,
                           std::span<const NodeRef> centers, ViewMode view,
                           const FilterParams& filter) {
    filter.validate();
    if (centers.empty()) throw Error(ErrorCode::InvalidArgument, "at least one center is required");

    const ViewIndex index(store, user, view);
    ContextGraph graph;
    for (const auto& c : centers) {
        if (std::find(graph.centers.begin(), graph.centers.end(), c) != graph.centers.end()) continue;
        if (index.weight(c) == 0) {
            throw Error(ErrorCode::UnknownCenter, "center '" + id_of(c) + "' has no triples in view");
        }
        graph.centers.push_back(c);
    }
    const auto cap = static_cast<std::size_t>(filter.max_nodes);
    if (graph.centers.size() > cap) {
        throw Error(ErrorCode::InvalidArgument, "more centers than max_nodes");
    }

    std::vector<NodeRef> admitted;
    std::map<NodeRef, std::size_t> position;
    auto admit = [&](const NodeRef& ref) {
        position.emplace(ref, admitted.size());
        admitted.push_back(ref);
    };

    for (const auto& c : graph.centers) admit(c);
    for (const auto& tag : filter.extra_tags) {
        if (admitted.size() >= cap) break;
        NodeRef ref(tag);
        if (!position.contains(ref) && index.weight(ref) > 0) admit(ref);
    }

    std::vector<std::size_t> frontier(admitted.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) frontier[i] = i;

    for (int ring = 1; ring <= filter.depth && !frontier.empty() && admitted.size() < cap; ++ring) {
        std::vector<std::size_t> next;
        for (std::size_t f : frontier) {
            std::vector<std::pair<std::size_t, NodeRef>> ranked;
            for (auto& n : index.neighbors(admitted[f])) {
                if (!position.contains(n)) ranked.emplace_back(index.weight(n), std::move(n));
            }
            std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                return a.first != b.first ? a.first > b.first : a.second < b.second;
            });
            if (ranked.size() > static_cast<std::size_t>(filter.max_neighbors)) {
                ranked.erase(ranked.begin() + filter.max_neighbors, ranked.end());
            }
            for (auto& [w, ref] : ranked) {
                if (admitted.size() >= cap) break;
                next.push_back(admitted.size());
                admit(ref);
            }
            if (admitted.size() >= cap) break;
        }
        frontier = std::move(next);
    }

    graph.nodes.reserve(admitted.size());
    for (std::size_t i = 0; i < admitted.size(); ++i) {
        const auto& ref = admitted[i];
        graph.nodes.push_back(ContextNode{
            ref, index.locality(ref), index.weight(ref), index.title(ref),
            i < graph.centers.size()});
    }

    for (std::size_t i = 0; i < admitted.size(); ++i) {
        if (kind_of(admitted[i]) != NodeKind::Tag) continue;
        for (const auto& res : index.neighbors(admitted[i])) {
            if (auto it = position.find(res); it != position.end()) {
                graph.edges.emplace_back(i, it->second);
            }
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    return graph;
}

std::string_view to_string(NodeAction action) noexcept {
    switch (action) {
        case NodeAction::EditTitle: return "edit_title";
        case NodeAction::ChangeTags: return "change_tags";
        case NodeAction::Remove: return "remove";
        case NodeAction::AddToCollection: return "add_to_collection";
        case NodeAction::RenameTag: return "rename_tag";
        case NodeAction::CenterHere: return "center_here";
        case NodeAction::OpenUrl: return "open_url";
    }
    return "unknown";
}

std::vector<NodeAction> node_actions(const ContextNode& node) {
    using enum NodeAction;
    const bool local = node.locality == Locality::Local;
    if (kind_of(node.ref) == NodeKind::Resource) {
        if (local) return {OpenUrl, EditTitle, ChangeTags, Remove, CenterHere};
        return {OpenUrl, AddToCollection, CenterHere};
    }
    if (local) return {CenterHere, RenameTag, Remove};
    return {CenterHere, AddToCollection};
}

std::string_view to_string(DragEffect effect) noexcept {
    return effect == DragEffect::Tagged ? "tagged" : "unsupported";
}

DragPlan plan_drag(const Store& store, const UserId& user, const NodeRef& dragged,
                   const NodeRef& target, Timestamp now) {
    const TagLabel* tag = std::get_if<TagLabel>(&dragged);
    const ResourceId* res = std::get_if<ResourceId>(&target);
    if (!tag || !res) {
        tag = std::get_if<TagLabel>(&target);
        res = std::get_if<ResourceId>(&dragged);
    }
    if (!tag || !res) return {};
    return {DragEffect::Tagged, store.plan_tag_resource(user, *tag, *res, now)};
}

DragEffect apply_drag(Store& store, const UserId& user, const NodeRef& dragged,
                      const NodeRef& target, Timestamp now) {
    auto plan = plan_drag(store, user, dragged, target, now);
    store.apply_all(plan.mutations);
    return plan.effect;
}

}  // namespace bookmap
