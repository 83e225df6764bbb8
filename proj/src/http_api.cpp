#include "bookmap/http_api.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bookmap/context_graph.hpp"
#include "bookmap/service.hpp"
#include "bookmap/similarity.hpp"
#include "bookmap/tagcloud.hpp"
#include "httplib.h"
#include "json.hpp"

namespace bookmap {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultK = 10;

// Raised for request-level problems that have no domain error code.
struct RequestError {
    ApiError error;
};

[[noreturn]] void bad_request(const std::string& message) {
    throw RequestError{{400, "bad_request", message}};
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const ApiError& e) {
    send_json(res, {{"status", e.http_status}, {"code", e.code}, {"message", e.message}},
              e.http_status);
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const RequestError& e) {
            send_error(res, e.error);
        } catch (const Error& e) {
            send_error(res, to_api_error(e));
        } catch (const std::exception& e) {
            send_error(res, {500, "internal", e.what()});
        }
    };
}

UserId require_user(const httplib::Request& req) {
    const auto header = req.get_header_value("X-User");
    if (header.empty()) throw RequestError{{401, "unauthorized", "X-User header is required"}};
    return UserId(header);
}

std::optional<UserId> optional_user(const httplib::Request& req) {
    if (!req.has_header("X-User")) return std::nullopt;
    return require_user(req);
}

json parse_body(const httplib::Request& req) {
    try {
        auto body = json::parse(req.body);
        if (!body.is_object() && !body.is_array()) bad_request("body must be a JSON object or array");
        return body;
    } catch (const json::parse_error&) {
        bad_request("body is not valid JSON");
    }
}

std::string body_text(const json& body, const char* key, bool required = true) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) {
        if (required) bad_request(std::string("missing '") + key + "'");
        return {};
    }
    if (!it->is_string()) bad_request(std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::string> body_tags(const json& body) {
    auto it = body.find("tags");
    if (it == body.end() || !it->is_array()) bad_request("'tags' must be an array of strings");
    std::vector<std::string> tags;
    for (const auto& t : *it) {
        if (!t.is_string()) bad_request("'tags' must be an array of strings");
        tags.push_back(t.get<std::string>());
    }
    return tags;
}

std::string param(const httplib::Request& req, const char* key, bool required = false) {
    if (!req.has_param(key)) {
        if (required) bad_request(std::string("missing query parameter '") + key + "'");
        return {};
    }
    return req.get_param_value(key);
}

template <class Int>
Int int_param(const httplib::Request& req, const char* key, Int fallback) {
    const auto text = param(req, key);
    if (text.empty()) return fallback;
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        bad_request(std::string("'") + key + "' must be an integer");
    }
    return value;
}

double double_param(const httplib::Request& req, const char* key, double fallback) {
    const auto text = param(req, key);
    if (text.empty()) return fallback;
    try {
        std::size_t used = 0;
        double value = std::stod(text, &used);
        if (used == text.size()) return value;
    } catch (const std::exception&) {
    }
    bad_request(std::string("'") + key + "' must be a number");
}

bool bool_param(const httplib::Request& req, const char* key, bool fallback) {
    const auto text = param(req, key);
    if (text.empty()) return fallback;
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    bad_request(std::string("'") + key + "' must be true or false");
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = text.substr(0, comma);
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::set<TagLabel> tag_set(std::string_view text) {
    std::set<TagLabel> tags;
    for (const auto& item : split_list(text)) tags.emplace(item);
    return tags;
}

bool global_scope(const httplib::Request& req, const char* key, std::string_view global_name) {
    const auto scope = param(req, key);
    if (scope.empty() || scope == "personal") return false;
    if (scope == global_name) return true;
    bad_request(std::string("'") + key + "' must be personal or " + std::string(global_name));
}

json node_ref_json(const NodeRef& ref) {
    return {{"kind", kind_of(ref) == NodeKind::Tag ? "tag" : "resource"}, {"id", id_of(ref)}};
}

NodeRef node_ref_from(const json& j) {
    if (!j.is_object()) bad_request("node must be an object with kind and id");
    return make_node_ref(body_text(j, "kind"), body_text(j, "id"));
}

json triple_json(const Triple& t) {
    return {{"user", t.user.str()},
            {"tag", t.tag.str()},
            {"resource", t.resource.str()},
            {"created_at", t.created_at}};
}

json labels_json(const std::vector<TagLabel>& labels) {
    json out = json::array();
    for (const auto& l : labels) out.push_back(l.str());
    return out;
}

json mode_stats_json(const ModeStats& s) {
    return {{"n_sessions", s.n_sessions},
            {"mean_duration_sec", s.mean_duration_sec},
            {"mean_clicks", s.mean_clicks},
            {"content_fraction", s.content_fraction},
            {"switch_fraction", s.switch_fraction}};
}

json graph_json(const ContextGraph& graph) {
    json centers = json::array();
    for (const auto& c : graph.centers) centers.push_back(node_ref_json(c));
    json nodes = json::array();
    for (const auto& n : graph.nodes) {
        json node = node_ref_json(n.ref);
        node["locality"] = n.locality == Locality::Local ? "local" : "global";
        node["weight"] = n.weight;
        node["title"] = n.title ? json(*n.title) : json(nullptr);
        node["is_center"] = n.is_center;
        json actions = json::array();
        for (auto a : node_actions(n)) actions.push_back(to_string(a));
        node["actions"] = std::move(actions);
        nodes.push_back(std::move(node));
    }
    json edges = json::array();
    for (const auto& [tag, res] : graph.edges) edges.push_back({tag, res});
    return {{"centers", std::move(centers)}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

std::vector<NodeRef> parse_centers(const httplib::Request& req) {
    std::vector<NodeRef> centers;
    const auto count = req.get_param_value_count("centers");
    for (std::size_t i = 0; i < count; ++i) {
        const auto value = req.get_param_value("centers", i);
        if (value.starts_with("resource:")) {
            centers.emplace_back(ResourceId(std::string_view(value).substr(9)));
            continue;
        }
        for (const auto& item : split_list(value)) {
            std::string_view label = item;
            if (label.starts_with("tag:")) label.remove_prefix(4);
            centers.emplace_back(TagLabel(label));
        }
    }
    if (req.has_param("url")) centers.emplace_back(ResourceId(req.get_param_value("url")));
    if (centers.empty()) bad_request("give at least one center via 'centers' or 'url'");
    return centers;
}

constexpr std::string_view kFallbackPage = R"html(<!doctype html>
<html><head><meta charset="utf-8"><title>bookmap</title></head>
<body>
<h1>bookmap</h1>
<p>The web client is not installed; start the server with <code>--static-dir</code>.</p>
<pre id="context"></pre>
<script>
const url = new URLSearchParams(location.search).get('url');
if (url) {
  fetch('/api/context?view=social&url=' + encodeURIComponent(url),
        {headers: {'X-User': localStorage.getItem('bookmap-user') || 'guest'}})
    .then(r => r.json())
    .then(j => { document.getElementById('context').textContent = JSON.stringify(j, null, 2); });
}
</script>
</body></html>
)html";

void serve_app(const HttpOptions& options, const httplib::Request& req, httplib::Response& res) {
    if (options.static_dir) {
        auto index = *options.static_dir / "index.html";
        std::ifstream in(index, std::ios::binary);
        if (in) {
            std::ostringstream buf;
            buf << in.rdbuf();
            res.set_content(buf.str(), "text/html; charset=utf-8");
            return;
        }
    }
    (void)req;
    res.set_content(std::string(kFallbackPage), "text/html; charset=utf-8");
}

}  // namespace

ApiError to_api_error(const Error& error) {
    int status = 500;
    switch (error.code()) {
        case ErrorCode::EmptyTag:
        case ErrorCode::EmptyTagSet:
        case ErrorCode::InvalidUrl:
        case ErrorCode::InvalidUser:
        case ErrorCode::InvalidArgument:
            status = 400;
            break;
        case ErrorCode::UnknownTag:
        case ErrorCode::UnknownCenter:
            status = 404;
            break;
        case ErrorCode::NotInCollection:
            status = 409;
            break;
        case ErrorCode::Storage:
        case ErrorCode::CorruptJournal:
        case ErrorCode::VersionMismatch:
            status = 500;
            break;
    }
    return {status, std::string(to_string(error.code())), error.what()};
}

std::string bookmarklet_script(std::string_view base_url) {
    json base = std::string(base_url);
    return "(function(){var base=" + base.dump() +
           ";window.open(base+'/app/context?url='+encodeURIComponent(location.href),'_blank');})();\n";
}

void install_routes(httplib::Server& server, Service& service, const HttpOptions& options) {
    // -- mutations -----------------------------------------------------------

    server.Post("/api/annotations", guarded([&](const auto& req, auto& res) {
        auto user = require_user(req);
        auto body = parse_body(req);
        auto created = service.add_annotation(user, body_text(body, "url"),
                                              body_text(body, "title", false), body_tags(body));
        json out = json::array();
        for (const auto& t : created) out.push_back(triple_json(t));
        send_json(res, {{"created", std::move(out)}});
    }));

    server.Delete("/api/resources", guarded([&](const auto& req, auto& res) {
        auto user = require_user(req);
        send_json(res, {{"removed", service.remove_resource(user, param(req, "url", true))}});
    }));

    server.Put("/api/resources/tags", guarded([&](const auto& req, auto& res) {
        auto user = require_user(req);
        auto body = parse_body(req);
        auto diff = service.set_tags(user, body_text(body, "url"), body_tags(body));
        send_json(res, {{"added", labels_json(diff.added)}, {"removed", labels_json(diff.removed)}});
    }));

    server.Put("/api/resources/title", guarded([&](const auto& req, auto& res) {
        auto user = require_user(req);
        auto body = parse_body(req);
        const auto url = body_text(body, "url");
        const auto title = body_text(body, "title");
        service.set_title(user, url, title);
        send_json(res, {{"url", ResourceId(url).str()}, {"title", title}});
    }));

    server.Post("/api/tags/rename", guarded([&](const auto& req, auto& res) {
        auto user = require_user(req);
        auto body = parse_body(req);
        send_json(res, {{"rewritten",
                         service.rename_tag(user, body_text(body, "old"), body_text(body, "new"))}});
    }));

    server.Post("/api/drag", guarded([&](const auto& req, auto& res) {
        auto user = require_user(req);
        auto body = parse_body(req);
        if (!body.contains("dragged") || !body.contains("target")) {
            bad_request("'dragged' and 'target' are required");
        }
        auto effect = service.drag(user, node_ref_from(body["dragged"]), node_ref_from(body["target"]));
        send_json(res, {{"effect", to_string(effect)}});
    }));

    server.Post("/api/events", guarded([&](const auto& req, auto& res) {
        auto user = require_user(req);
        auto body = parse_body(req);
        const json& list = body.is_array() ? body : body.value("events", json::array());
        if (!list.is_array()) bad_request("'events' must be an array");
        std::vector<ClickEvent> events;
        for (json item : list) {
            if (!item.is_object()) bad_request("each event must be an object");
            if (!item.contains("user")) item["user"] = user.str();
            if (!item.contains("at")) item["at"] = service.now();
            auto event = parse_event_line(item.dump());
            if (event.user != user) bad_request("event user does not match X-User");
            events.push_back(std::move(event));
        }
        service.record_events(events);
        send_json(res, {{"accepted", events.size()}});
    }));

    // -- reads ---------------------------------------------------------------

    server.Get("/api/cloud", guarded([&](const auto& req, auto& res) {
        const bool global = global_scope(req, "scope", "global");
        CloudConfig cfg;
        cfg.max_tags = int_param<std::size_t>(req, "max", cfg.max_tags);
        cfg.min_size = double_param(req, "min_size", cfg.min_size);
        cfg.max_size = double_param(req, "max_size", cfg.max_size);
        auto scope = global ? PopularityScope::global() : PopularityScope::personal(require_user(req));
        auto cloud = service.read(
            [&](const AppState& s) { return build_cloud(s.store.tag_counts(scope), cfg); });
        json out = json::array();
        for (const auto& t : cloud) {
            out.push_back({{"label", t.label.str()}, {"count", t.count}, {"size", t.size}});
        }
        send_json(res, out);
    }));

    server.Get("/api/context", guarded([&](const auto& req, auto& res) {
        auto user = require_user(req);
        const bool social = global_scope(req, "view", "social");
        auto centers = parse_centers(req);
        FilterParams filter = service.config().default_filter;
        filter.depth = int_param(req, "depth", filter.depth);
        filter.max_neighbors = int_param(req, "max_neighbors", filter.max_neighbors);
        filter.max_nodes = int_param(req, "max_nodes", filter.max_nodes);
        if (req.has_param("extra_tags")) filter.extra_tags = tag_set(param(req, "extra_tags"));
        auto graph = service.read([&](const AppState& s) {
            return build_context(s.store, user, centers,
                                 social ? ViewMode::Social : ViewMode::Personal, filter);
        });
        send_json(res, graph_json(graph));
    }));

    server.Get("/api/resources", guarded([&](const auto& req, auto& res) {
        const bool global = global_scope(req, "scope", "global");
        auto tags = tag_set(param(req, "tags", true));
        const bool conjunctive = bool_param(req, "conjunctive", false);
        auto viewer = optional_user(req);
        if (!global && !viewer) require_user(req);
        auto scope = global ? PopularityScope::global() : PopularityScope::personal(*viewer);
        json out = service.read([&](const AppState& s) {
            json list = json::array();
            for (const auto& r : s.store.resources_for_tags(scope, tags, conjunctive)) {
                std::optional<std::string> title;
                if (viewer) title = s.store.title(*viewer, r.resource);
                if (!title && global) {
                    if (const auto* meta = s.store.meta(r.resource); meta && !meta->titles.empty()) {
                        title = meta->titles.begin()->second;
                    }
                }
                list.push_back({{"url", r.resource.str()},
                                {"weight", r.weight},
                                {"title", title ? json(*title) : json(nullptr)}});
            }
            return list;
        });
        send_json(res, out);
    }));

    server.Get("/api/recommend", guarded([&](const auto& req, auto& res) {
        auto user = require_user(req);
        ResourceId url(param(req, "url", true));
        const auto k = int_param<std::size_t>(req, "k", kDefaultK);
        auto tags = service.read([&](const AppState& s) { return recommend_tags(s.store, user, url, k); });
        json out = json::array();
        for (const auto& t : tags) out.push_back({{"label", t.label.str()}, {"score", t.score}});
        send_json(res, out);
    }));

    server.Get("/api/related_tags", guarded([&](const auto& req, auto& res) {
        TagLabel tag(param(req, "tag", true));
        const auto k = int_param<std::size_t>(req, "k", kDefaultK);
        auto tags = service.read([&](const AppState& s) { return related_tags(s.store, tag, k); });
        json out = json::array();
        for (const auto& t : tags) out.push_back({{"label", t.label.str()}, {"score", t.score}});
        send_json(res, out);
    }));

    server.Get("/api/similar", guarded([&](const auto& req, auto& res) {
        ResourceId url(param(req, "url", true));
        const auto k = int_param<std::size_t>(req, "k", kDefaultK);
        auto similar =
            service.read([&](const AppState& s) { return similar_resources(s.store, url, k); });
        json out = json::array();
        for (const auto& r : similar) out.push_back({{"url", r.resource.str()}, {"score", r.score}});
        send_json(res, out);
    }));

    server.Get("/api/stats", guarded([&](const auto& req, auto& res) {
        const auto gap = int_param<Timestamp>(req, "gap", service.config().session_gap);
        auto stats = service.stats(gap);
        send_json(res, {{"list", mode_stats_json(stats.list)},
                        {"viz", mode_stats_json(stats.viz)},
                        {"report", render_report(stats)}});
    }));

    // -- client assets -------------------------------------------------------

    server.Get("/bookmarklet.js", [](const httplib::Request& req, httplib::Response& res) {
        const auto host = req.get_header_value("Host");
        res.set_content(bookmarklet_script(host.empty() ? "" : "http://" + host),
                        "application/javascript");
    });

    server.Get("/app/context", [options](const httplib::Request& req, httplib::Response& res) {
        serve_app(options, req, res);
    });
    if (options.static_dir && std::filesystem::is_directory(*options.static_dir)) {
        server.set_mount_point("/app", options.static_dir->string());
    } else {
        server.Get("/app/?", [options](const httplib::Request& req, httplib::Response& res) {
            serve_app(options, req, res);
        });
    }

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            send_error(res, {res.status, res.status == 404 ? "not_found" : "http_error",
                             "no handler for this request"});
        }
    });
}

bool serve(Service& service, const std::string& host, int port, const HttpOptions& options,
           const std::function<void()>& on_bound) {
    httplib::Server server;
    // The library default also sets SO_REUSEPORT, which would let a second
    // instance share an occupied port instead of failing.
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    install_routes(server, service, options);
    if (!server.bind_to_port(host, port)) return false;
    if (on_bound) on_bound();
    return server.listen_after_bind();
}

}  // namespace bookmap
