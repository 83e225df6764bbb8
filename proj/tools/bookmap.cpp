// bookmap: social bookmark service and log tooling.
//
//   bookmap serve    --journal data.journal [--snapshot data.snap] [--port 8080]
//   bookmap report   --events clicks.jsonl [--gap 1800]
//   bookmap report   --journal data.journal
//   bookmap snapshot --journal data.journal --snapshot data.snap
//   bookmap check    --journal data.journal [--snapshot data.snap]

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bookmap/error.hpp"
#include "bookmap/http_api.hpp"
#include "bookmap/journal.hpp"
#include "bookmap/service.hpp"
#include "bookmap/sessions.hpp"

namespace {

std::optional<std::filesystem::path> optional_path(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return std::filesystem::path(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social bookmark manager with contextual tag/resource maps"};
    app.require_subcommand(1);

    std::string journal = "bookmap.journal";
    std::string snapshot;
    bookmap::Timestamp gap = bookmap::kDefaultSessionGap;

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
    bookmap::FilterParams filter;
    serve->add_option("--host", host, "Bind address")->envname("BOOKMAP_HOST")->capture_default_str();
    serve->add_option("--port", port, "Bind port")->envname("BOOKMAP_PORT")->capture_default_str();
    serve->add_option("--journal", journal, "Journal file")->envname("BOOKMAP_JOURNAL")->capture_default_str();
    serve->add_option("--snapshot", snapshot, "Snapshot file")->envname("BOOKMAP_SNAPSHOT");
    serve->add_option("--gap", gap, "Session inactivity gap (seconds)")
        ->envname("BOOKMAP_SESSION_GAP")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    serve->add_option("--static-dir", static_dir, "Web client directory served under /app")
        ->envname("BOOKMAP_STATIC_DIR");
    serve->add_option("--depth", filter.depth, "Default expansion depth")->check(CLI::PositiveNumber);
    serve->add_option("--max-neighbors", filter.max_neighbors, "Default per-node fan-out")
        ->check(CLI::PositiveNumber);
    serve->add_option("--max-nodes", filter.max_nodes, "Default graph size cap")
        ->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "Print per-mode session statistics");
    std::string events_path;
    auto* events_opt = report->add_option("--events", events_path, "Click log (JSON lines)");
    report->add_option("--journal", journal, "Read click events from a journal")->excludes(events_opt);
    report->add_option("--gap", gap, "Session inactivity gap (seconds)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* snap = app.add_subcommand("snapshot", "Write a snapshot of the replayed journal");
    snap->add_option("--journal", journal, "Journal file")->required();
    snap->add_option("--snapshot", snapshot, "Snapshot file")->required();

    auto* check = app.add_subcommand("check", "Replay the journal and print a summary");
    check->add_option("--journal", journal, "Journal file")->required();
    check->add_option("--snapshot", snapshot, "Snapshot file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve) {
            bookmap::Service service({journal, optional_path(snapshot), gap, filter, {}});
            bookmap::HttpOptions options{optional_path(static_dir)};
            auto announce = [&] { std::cerr << "listening on " << host << ":" << port << std::endl; };
            if (!bookmap::serve(service, host, port, options, announce)) {
                std::cerr << "error: cannot bind " << host << ":" << port << "\n";
                return 1;
            }
            return 0;
        }
        if (*report) {
            std::vector<bookmap::ClickEvent> events;
            if (!events_path.empty()) {
                std::ifstream in(events_path);
                if (!in) {
                    std::cerr << "error: cannot read " << events_path << "\n";
                    return 1;
                }
                events = bookmap::read_event_log(in);
            } else {
                events = bookmap::recover(std::nullopt, journal).events;
            }
            auto sessions = bookmap::sessionize(events, gap);
            std::cout << bookmap::render_report(bookmap::compute_stats(sessions));
            return 0;
        }
        if (*snap) {
            auto state = bookmap::recover(std::nullopt, journal);
            bookmap::save_snapshot(state, snapshot);
            std::cout << "snapshot at seq " << state.seq << " written to " << snapshot << "\n";
            return 0;
        }
        if (*check) {
            auto state = bookmap::recover(optional_path(snapshot), journal);
            std::cout << "seq " << state.seq << ", " << state.store.size() << " triples, "
                      << state.store.users().size() << " users, " << state.events.size()
                      << " events\n";
            return 0;
        }
    } catch (const bookmap::Error& e) {
        std::cerr << "error [" << bookmap::to_string(e.code()) << "]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
