#pragma once
// Click-log sessionization and the per-mode usage report (list vs
// visualization interface).

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bookmap/types.hpp"

namespace bookmap {

enum class Mode { List, Viz };

enum class ClickAction {
    TagSelect,
    ResourceSelect,
    Edit,
    Add,
    Remove,
    ViewSwitch,
    FilterChange,
    ModeSwitch,
    Other,
};

std::string_view to_string(Mode mode) noexcept;
std::string_view to_string(ClickAction action) noexcept;
// Throw InvalidArgument on unknown names.
Mode parse_mode(std::string_view name);
ClickAction parse_action(std::string_view name);

struct ClickEvent {
    UserId user;
    Timestamp at = 0;
    Mode mode = Mode::List;
    ClickAction action = ClickAction::Other;

    bool operator==(const ClickEvent&) const = default;
};

struct Session {
    UserId user;
    Mode mode = Mode::List;
    std::vector<ClickEvent> events;
    bool ended_by_switch = false;

    bool operator==(const Session&) const = default;
};

struct ModeStats {
    std::size_t n_sessions = 0;
    double mean_duration_sec = 0.0;
    double mean_clicks = 0.0;
    double content_fraction = 0.0;
    double switch_fraction = 0.0;
};

struct SessionStats {
    ModeStats list;
    ModeStats viz;
};

inline constexpr Timestamp kDefaultSessionGap = 1800;

// Tag selection, resource selection and content edits.
bool classify_click(const ClickEvent& event) noexcept;

// Events are ordered by (user, at, mode, action), so the result does not depend
// on input order. A session breaks on a gap longer than `gap`, on a mode
// change, or right after a MODE_SWITCH click (which stays in the session it
// closes). Sessions closed by a switch click or by a mode change within the
// gap are flagged ended_by_switch; a timeout takes precedence.
std::vector<Session> sessionize(std::span<const ClickEvent> events,
                                Timestamp gap = kDefaultSessionGap);

SessionStats compute_stats(std::span<const Session> sessions);

// Five-row plain-text table, one column per mode.
std::string render_report(const SessionStats& stats);

// One JSON object per line: {"user":..,"at":..,"mode":"list|viz","action":..}.
std::string format_event_line(const ClickEvent& event);
ClickEvent parse_event_line(std::string_view line);
// Blank lines are skipped; errors name the 1-based line.
std::vector<ClickEvent> read_event_log(std::istream& in);

}  // namespace bookmap
