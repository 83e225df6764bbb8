#pragma once
// HTTP+JSON facade over Service. Endpoint shapes are listed in README.md.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "bookmap/error.hpp"

namespace httplib {
class Server;
}

namespace bookmap {

class Service;

struct HttpOptions {
    // Directory with the built web client; a minimal built-in page is served
    // under /app when unset.
    std::optional<std::filesystem::path> static_dir;
};

// Error body: {"status":N,"code":"...","message":"..."}.
struct ApiError {
    int http_status = 500;
    std::string code;
    std::string message;
};

ApiError to_api_error(const Error& error);

void install_routes(httplib::Server& server, Service& service, const HttpOptions& options = {});

// Blocks until the server stops. Returns false when the address cannot be bound;
// on_bound runs once the socket is bound, before requests are accepted.
bool serve(Service& service, const std::string& host, int port, const HttpOptions& options = {},
           const std::function<void()>& on_bound = {});

std::string bookmarklet_script(std::string_view base_url);

}  // namespace bookmap
