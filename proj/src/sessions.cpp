#include "bookmap/sessions.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <tuple>
#include <utility>

#include "bookmap/error.hpp"
#include "json.hpp"

namespace bookmap {

namespace {

constexpr std::array<std::pair<ClickAction, std::string_view>, 9> kActionNames{{
    {ClickAction::TagSelect, "tag_select"},
    {ClickAction::ResourceSelect, "resource_select"},
    {ClickAction::Edit, "edit"},
    {ClickAction::Add, "add"},
    {ClickAction::Remove, "remove"},
    {ClickAction::ViewSwitch, "view_switch"},
    {ClickAction::FilterChange, "filter_change"},
    {ClickAction::ModeSwitch, "mode_switch"},
    {ClickAction::Other, "other"},
}};

ModeStats stats_for(std::span<const Session> sessions, Mode mode) {
    ModeStats s;
    std::size_t events = 0;
    std::size_t content = 0;
    std::size_t switched = 0;
    double duration = 0.0;
    for (const auto& session : sessions) {
        if (session.mode != mode) continue;
        ++s.n_sessions;
        events += session.events.size();
        duration += static_cast<double>(session.events.back().at - session.events.front().at);
        content += static_cast<std::size_t>(
            std::count_if(session.events.begin(), session.events.end(), classify_click));
        if (session.ended_by_switch) ++switched;
    }
    if (s.n_sessions == 0) return s;
    const auto n = static_cast<double>(s.n_sessions);
    s.mean_duration_sec = duration / n;
    s.mean_clicks = static_cast<double>(events) / n;
    s.content_fraction = static_cast<double>(content) / static_cast<double>(events);
    s.switch_fraction = static_cast<double>(switched) / n;
    return s;
}

// Inserts thousands separators into the integer part of a formatted number.
std::string group_thousands(std::string digits) {
    const auto start = digits.find_first_of("0123456789");
    auto end = digits.find('.');
    if (end == std::string::npos) end = digits.size();
    for (auto pos = end; pos > start + 3; pos -= 3) digits.insert(pos - 3, ",");
    return digits;
}

std::string fixed1(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", value);
    return group_thousands(buf);
}

}  // namespace

std::string_view to_string(Mode mode) noexcept {
    return mode == Mode::List ? "list" : "viz";
}

std::string_view to_string(ClickAction action) noexcept {
    for (const auto& [value, name] : kActionNames) {
        if (value == action) return name;
    }
    return "other";
}

Mode parse_mode(std::string_view name) {
    if (name == "list") return Mode::List;
    if (name == "viz") return Mode::Viz;
    throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

ClickAction parse_action(std::string_view name) {
    for (const auto& [value, known] : kActionNames) {
        if (known == name) return value;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown action '" + std::string(name) + "'");
}

bool classify_click(const ClickEvent& event) noexcept {
    switch (event.action) {
        case ClickAction::TagSelect:
        case ClickAction::ResourceSelect:
        case ClickAction::Edit:
        case ClickAction::Add:
        case ClickAction::Remove:
            return true;
        default:
            return false;
    }
}

std::vector<Session> sessionize(std::span<const ClickEvent> events, Timestamp gap) {
    if (gap <= 0) throw Error(ErrorCode::InvalidArgument, "session gap must be positive");

    std::vector<ClickEvent> sorted(events.begin(), events.end());
    std::sort(sorted.begin(), sorted.end(), [](const ClickEvent& a, const ClickEvent& b) {
        return std::tie(a.user, a.at, a.mode, a.action) < std::tie(b.user, b.at, b.mode, b.action);
    });

    std::vector<Session> sessions;
    bool open = false;
    for (auto& event : sorted) {
        if (open) {
            auto& current = sessions.back();
            const auto& prev = current.events.back();
            if (event.user != prev.user || event.at - prev.at > gap) {
                open = false;
            } else if (event.mode != current.mode) {
                current.ended_by_switch = true;
                open = false;
            }
        }
        if (!open) {
            sessions.push_back(Session{event.user, event.mode, {}, false});
            open = true;
        }
        sessions.back().events.push_back(event);
        if (event.action == ClickAction::ModeSwitch) {
            sessions.back().ended_by_switch = true;
            open = false;
        }
    }
    return sessions;
}

SessionStats compute_stats(std::span<const Session> sessions) {
    return {stats_for(sessions, Mode::List), stats_for(sessions, Mode::Viz)};
}

std::string render_report(const SessionStats& stats) {
    auto row = [](std::string_view label, const std::string& list, const std::string& viz) {
        return std::string(label) + " | " + list + " | " + viz + "\n";
    };
    const auto& l = stats.list;
    const auto& v = stats.viz;
    std::string out = row("Mode", "List", "Visualization");
    out += row("Number of sessions", group_thousands(std::to_string(l.n_sessions)),
               group_thousands(std::to_string(v.n_sessions)));
    out += row("Time per session (sec)", fixed1(l.mean_duration_sec), fixed1(v.mean_duration_sec));
    out += row("Clicks per session", fixed1(l.mean_clicks), fixed1(v.mean_clicks));
    out += row("Content-related clicks", fixed1(l.content_fraction * 100.0) + "%",
               fixed1(v.content_fraction * 100.0) + "%");
    out += row("Switch to other mode", fixed1(l.switch_fraction * 100.0) + "%",
               fixed1(v.switch_fraction * 100.0) + "%");
    return out;
}

std::string format_event_line(const ClickEvent& event) {
    nlohmann::json j = {
        {"user", event.user.str()},
        {"at", event.at},
        {"mode", to_string(event.mode)},
        {"action", to_string(event.action)},
    };
    return j.dump();
}

ClickEvent parse_event_line(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed event: ") + e.what());
    }
    if (!j.is_object() || !j.contains("user") || !j["user"].is_string() || !j.contains("at") ||
        !j["at"].is_number_integer() || !j.contains("mode") || !j["mode"].is_string() ||
        !j.contains("action") || !j["action"].is_string()) {
        throw Error(ErrorCode::InvalidArgument,
                    "event needs string user/mode/action and integer at");
    }
    return ClickEvent{UserId(j["user"].get<std::string>()), j["at"].get<Timestamp>(),
                      parse_mode(j["mode"].get<std::string>()),
                      parse_action(j["action"].get<std::string>())};
}

std::vector<ClickEvent> read_event_log(std::istream& in) {
    std::vector<ClickEvent> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_event_line(line));
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace bookmap
