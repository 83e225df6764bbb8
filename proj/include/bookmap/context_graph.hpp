#pragma once
// Contextual maps: bounded bipartite tag/resource neighborhoods around a
// selection, plus the per-node menus and drag-and-drop shortcuts the client
// offers on them.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bookmap/store.hpp"
#include "bookmap/types.hpp"

namespace bookmap {

enum class NodeKind { Tag, Resource };

// The alternative held fixes the node kind.
using NodeRef = std::variant<TagLabel, ResourceId>;

NodeKind kind_of(const NodeRef& ref) noexcept;
const std::string& id_of(const NodeRef& ref) noexcept;
// kind is "tag" or "resource"; the id is normalized accordingly.
NodeRef make_node_ref(std::string_view kind, std::string_view id);

enum class ViewMode { Personal, Social };
enum class Locality { Local, Global };

struct FilterParams {
    int depth = 2;
    int max_neighbors = 10;
    int max_nodes = 60;
    std::set<TagLabel> extra_tags;

    void validate() const;
};

struct ContextNode {
    NodeRef ref;
    Locality locality = Locality::Global;
    std::size_t weight = 0;
    std::optional<std::string> title;
    bool is_center = false;

    bool operator==(const ContextNode&) const = default;
};

struct ContextGraph {
    std::vector<NodeRef> centers;
    // Admission order: ring by ring, frontier order within a ring.
    std::vector<ContextNode> nodes;
    // (tag node index, resource node index), sorted.
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    bool operator==(const ContextGraph&) const = default;
};

// Capped breadth-first expansion over the view's triples. Each frontier node
// admits its max_neighbors heaviest unvisited neighbors (resources weigh by
// distinct annotators, tags by distinct user/resource pairs; ties by id) until
// depth rings are done or max_nodes is reached. Edges are the induced
// incidences between admitted nodes.
//
// Throws UnknownCenter when a center has no triple in the view, and
// InvalidArgument for an empty center list or more centers than max_nodes.
// Extra tags without triples in the view are ignored.
ContextGraph build_context(const Store& store, const UserId& user,
                           std::span<const NodeRef> centers, ViewMode view,
                           const FilterParams& filter);

enum class NodeAction {
    EditTitle,
    ChangeTags,
    Remove,
    AddToCollection,
    RenameTag,
    CenterHere,
    OpenUrl,
};

std::string_view to_string(NodeAction action) noexcept;

// Menu for a node as seen by the user its locality was computed for.
std::vector<NodeAction> node_actions(const ContextNode& node);

enum class DragEffect { Tagged, Unsupported };

std::string_view to_string(DragEffect effect) noexcept;

struct DragPlan {
    DragEffect effect = DragEffect::Unsupported;
    std::vector<Mutation> mutations;
};

// Resource dropped on tag (or tag on resource) tags the resource for the user,
// pulling a global resource into the collection. Anything else is a no-op.
DragPlan plan_drag(const Store& store, const UserId& user, const NodeRef& dragged,
                   const NodeRef& target, Timestamp now);
DragEffect apply_drag(Store& store, const UserId& user, const NodeRef& dragged,
                      const NodeRef& target, Timestamp now);

}  // namespace bookmap
