#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bookmap/context_graph.hpp"
#include "bookmap/error.hpp"
#include "bookmap/journal.hpp"
#include "bookmap/sessions.hpp"
#include "bookmap/similarity.hpp"
#include "bookmap/store.hpp"
#include "bookmap/tagcloud.hpp"

namespace py = pybind11;
using namespace bookmap;

namespace {

PopularityScope scope_for(const std::optional<std::string>& user) {
    return user ? PopularityScope::personal(UserId(*user)) : PopularityScope::global();
}

py::tuple triple_tuple(const Triple& t) {
    return py::make_tuple(t.user.str(), t.tag.str(), t.resource.str(), t.created_at);
}

py::list triple_list(const std::vector<Triple>& triples) {
    py::list out;
    for (const auto& t : triples) out.append(triple_tuple(t));
    return out;
}

std::vector<std::string> label_strings(const std::vector<TagLabel>& labels) {
    std::vector<std::string> out;
    for (const auto& l : labels) out.push_back(l.str());
    return out;
}

// "tech" is a tag; ("resource", "http://...") or ("tag", "tech") are explicit.
NodeRef node_from(const py::handle& obj) {
    if (py::isinstance<py::str>(obj)) return TagLabel(obj.cast<std::string>());
    auto pair = obj.cast<std::pair<std::string, std::string>>();
    return make_node_ref(pair.first, pair.second);
}

py::tuple node_tuple(const NodeRef& ref) {
    return py::make_tuple(kind_of(ref) == NodeKind::Tag ? "tag" : "resource", id_of(ref));
}

py::dict graph_dict(const ContextGraph& graph) {
    py::list centers;
    for (const auto& c : graph.centers) centers.append(node_tuple(c));
    py::list nodes;
    for (const auto& n : graph.nodes) {
        py::dict node;
        node["kind"] = kind_of(n.ref) == NodeKind::Tag ? "tag" : "resource";
        node["id"] = id_of(n.ref);
        node["locality"] = n.locality == Locality::Local ? "local" : "global";
        node["weight"] = n.weight;
        node["title"] = n.title ? py::object(py::str(*n.title)) : py::object(py::none());
        node["is_center"] = n.is_center;
        py::list actions;
        for (auto a : node_actions(n)) actions.append(std::string(to_string(a)));
        node["actions"] = actions;
        nodes.append(node);
    }
    py::dict out;
    out["centers"] = centers;
    out["nodes"] = nodes;
    out["edges"] = graph.edges;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Folksonomy store, contextual maps, tag clouds and session analytics";

    static py::exception<Error> error_type(m, "BookmapError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("normalize_tag", [](std::string_view raw) { return normalize_tag(raw).str(); });
    m.def("canonicalize_url", [](std::string_view raw) { return canonicalize_url(raw).str(); });

    py::class_<Store>(m, "Store")
        .def(py::init<>())
        .def("add_annotation",
             [](Store& s, const std::string& user, const std::string& url, const std::string& title,
                const std::vector<std::string>& tags, Timestamp now) {
                 return triple_list(s.add_annotation(UserId(user), url, title, tags, now));
             },
             py::arg("user"), py::arg("url"), py::arg("title"), py::arg("tags"), py::arg("now"))
        .def("remove_resource",
             [](Store& s, const std::string& user, const std::string& url) {
                 return s.remove_resource(UserId(user), ResourceId(url));
             })
        .def("set_tags",
             [](Store& s, const std::string& user, const std::string& url,
                const std::vector<std::string>& tags, Timestamp now) {
                 auto diff = s.set_tags(UserId(user), ResourceId(url), tags, now);
                 return std::make_pair(label_strings(diff.added), label_strings(diff.removed));
             })
        .def("set_title",
             [](Store& s, const std::string& user, const std::string& url, const std::string& title) {
                 s.set_title(UserId(user), ResourceId(url), title);
             })
        .def("rename_tag",
             [](Store& s, const std::string& user, const std::string& old_tag,
                const std::string& new_tag, Timestamp now) {
                 return s.rename_tag(UserId(user), TagLabel(old_tag), new_tag, now);
             })
        .def("title",
             [](const Store& s, const std::string& user, const std::string& url) {
                 return s.title(UserId(user), ResourceId(url));
             })
        .def("tag_counts",
             [](const Store& s, const std::optional<std::string>& user) {
                 std::map<std::string, std::size_t> out;
                 for (const auto& [tag, n] : s.tag_counts(scope_for(user))) out.emplace(tag.str(), n);
                 return out;
             },
             py::arg("user") = py::none(), "Personal counts for `user`, global counts otherwise.")
        .def("resources_for_tags",
             [](const Store& s, const std::vector<std::string>& tags,
                const std::optional<std::string>& user, bool conjunctive) {
                 std::set<TagLabel> labels;
                 for (const auto& t : tags) labels.emplace(t);
                 std::vector<std::pair<std::string, std::size_t>> out;
                 for (const auto& r : s.resources_for_tags(scope_for(user), labels, conjunctive)) {
                     out.emplace_back(r.resource.str(), r.weight);
                 }
                 return out;
             },
             py::arg("tags"), py::arg("user") = py::none(), py::arg("conjunctive") = false)
        .def("triples", [](const Store& s) { return triple_list(s.triples()); })
        .def("__len__", &Store::size)
        .def("__eq__", [](const Store& a, const Store& b) { return a == b; });

    m.def("build_cloud",
          [](const std::map<std::string, std::size_t>& counts, double min_size, double max_size,
             std::size_t max_tags) {
              std::map<TagLabel, std::size_t> labeled;
              for (const auto& [label, n] : counts) labeled[TagLabel(label)] += n;
              std::vector<std::tuple<std::string, std::size_t, double>> out;
              for (const auto& t : build_cloud(labeled, {min_size, max_size, max_tags})) {
                  out.emplace_back(t.label.str(), t.count, t.size);
              }
              return out;
          },
          py::arg("counts"), py::arg("min_size") = 10.0, py::arg("max_size") = 32.0,
          py::arg("max_tags") = 100);

    m.def("build_context",
          [](const Store& store, const std::string& user, const py::list& centers,
             const std::string& view, int depth, int max_neighbors, int max_nodes,
             const std::vector<std::string>& extra_tags) {
              std::vector<NodeRef> refs;
              for (const auto& c : centers) refs.push_back(node_from(c));
              FilterParams filter{depth, max_neighbors, max_nodes, {}};
              for (const auto& t : extra_tags) filter.extra_tags.emplace(t);
              ViewMode mode = view == "social" ? ViewMode::Social : ViewMode::Personal;
              if (view != "social" && view != "personal") {
                  throw Error(ErrorCode::InvalidArgument, "view must be personal or social");
              }
              return graph_dict(build_context(store, UserId(user), refs, mode, filter));
          },
          py::arg("store"), py::arg("user"), py::arg("centers"), py::arg("view") = "personal",
          py::arg("depth") = 2, py::arg("max_neighbors") = 10, py::arg("max_nodes") = 60,
          py::arg("extra_tags") = std::vector<std::string>{});

    m.def("apply_drag",
          [](Store& store, const std::string& user, const py::object& dragged,
             const py::object& target, Timestamp now) {
              return std::string(
                  to_string(apply_drag(store, UserId(user), node_from(dragged), node_from(target), now)));
          });

    m.def("related_tags", [](const Store& store, const std::string& tag, std::size_t k) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& t : related_tags(store, TagLabel(tag), k)) out.emplace_back(t.label.str(), t.score);
        return out;
    });
    m.def("similar_resources", [](const Store& store, const std::string& url, std::size_t k) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& r : similar_resources(store, ResourceId(url), k)) {
            out.emplace_back(r.resource.str(), r.score);
        }
        return out;
    });
    m.def("recommend_tags",
          [](const Store& store, const std::string& user, const std::string& url, std::size_t k) {
              std::vector<std::pair<std::string, double>> out;
              for (const auto& t : recommend_tags(store, UserId(user), ResourceId(url), k)) {
                  out.emplace_back(t.label.str(), t.score);
              }
              return out;
          });

    py::class_<ClickEvent>(m, "ClickEvent")
        .def(py::init([](const std::string& user, Timestamp at, const std::string& mode,
                         const std::string& action) {
                 return ClickEvent{UserId(user), at, parse_mode(mode), parse_action(action)};
             }),
             py::arg("user"), py::arg("at"), py::arg("mode"), py::arg("action"))
        .def_property_readonly("user", [](const ClickEvent& e) { return e.user.str(); })
        .def_readonly("at", &ClickEvent::at)
        .def_property_readonly("mode", [](const ClickEvent& e) { return std::string(to_string(e.mode)); })
        .def_property_readonly("action",
                               [](const ClickEvent& e) { return std::string(to_string(e.action)); })
        .def("to_json", &format_event_line)
        .def_static("from_json", &parse_event_line);

    py::class_<Session>(m, "Session")
        .def_property_readonly("user", [](const Session& s) { return s.user.str(); })
        .def_property_readonly("mode", [](const Session& s) { return std::string(to_string(s.mode)); })
        .def_readonly("events", &Session::events)
        .def_readonly("ended_by_switch", &Session::ended_by_switch);

    py::class_<ModeStats>(m, "ModeStats")
        .def(py::init([](std::size_t n, double duration, double clicks, double content, double sw) {
                 return ModeStats{n, duration, clicks, content, sw};
             }),
             py::arg("n_sessions"), py::arg("mean_duration_sec"), py::arg("mean_clicks"),
             py::arg("content_fraction"), py::arg("switch_fraction"))
        .def_readonly("n_sessions", &ModeStats::n_sessions)
        .def_readonly("mean_duration_sec", &ModeStats::mean_duration_sec)
        .def_readonly("mean_clicks", &ModeStats::mean_clicks)
        .def_readonly("content_fraction", &ModeStats::content_fraction)
        .def_readonly("switch_fraction", &ModeStats::switch_fraction);

    py::class_<SessionStats>(m, "SessionStats")
        .def(py::init([](const ModeStats& list, const ModeStats& viz) { return SessionStats{list, viz}; }),
             py::arg("list"), py::arg("viz"))
        .def_readonly("list", &SessionStats::list)
        .def_readonly("viz", &SessionStats::viz);

    m.def("classify_click", &classify_click);
    m.def("sessionize",
          [](const std::vector<ClickEvent>& events, Timestamp gap) { return sessionize(events, gap); },
          py::arg("events"), py::arg("gap") = kDefaultSessionGap);
    m.def("compute_stats",
          [](const std::vector<Session>& sessions) { return compute_stats(sessions); });
    m.def("render_report", &render_report);

    m.def("replay_journal", [](const std::string& journal, const std::optional<std::string>& snapshot) {
              std::optional<std::filesystem::path> snap;
              if (snapshot) snap = *snapshot;
              auto state = recover(snap, journal);
              return py::make_tuple(std::move(state.store), state.events, state.seq);
          },
          py::arg("journal"), py::arg("snapshot") = py::none(),
          "Returns (store, events, seq) rebuilt from a journal and optional snapshot.");
}
