#include <algorithm>
#include <random>
#include <sstream>

#include "bookmap/error.hpp"
#include "bookmap/sessions.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bookmap;

namespace {

ClickEvent ev(const char* user, Timestamp at, Mode mode, ClickAction action) {
    return {UserId(user), at, mode, action};
}

constexpr auto List = Mode::List;
constexpr auto Viz = Mode::Viz;

}  // namespace

TEST_CASE("classify_click") {
    using enum ClickAction;
    for (auto a : {TagSelect, ResourceSelect, Edit, Add, Remove}) CHECK(classify_click(ev("u", 0, Viz, a)));
    for (auto a : {ViewSwitch, FilterChange, ModeSwitch, Other}) CHECK_FALSE(classify_click(ev("u", 0, Viz, a)));
}

TEST_CASE("sessionize basic rules") {
    using enum ClickAction;
    SUBCASE("one run") {
        std::vector<ClickEvent> e{ev("u", 0, Viz, TagSelect), ev("u", 10, Viz, TagSelect), ev("u", 20, Viz, Other)};
        auto s = sessionize(e, 1800);
        REQUIRE(s.size() == 1);
        CHECK(s[0].events.size() == 3);
    }
    SUBCASE("gap") {
        std::vector<ClickEvent> e{ev("u", 0, Viz, TagSelect), ev("u", 4000, Viz, TagSelect)};
        CHECK(sessionize(e, 1800).size() == 2);
        std::vector<ClickEvent> edge{ev("u", 0, Viz, TagSelect), ev("u", 1800, Viz, TagSelect)};
        CHECK(sessionize(edge, 1800).size() == 1);
    }
    SUBCASE("switch click closes its session") {
        std::vector<ClickEvent> e{ev("u", 0, Viz, TagSelect), ev("u", 5, Viz, ResourceSelect),
                                  ev("u", 9, Viz, ModeSwitch), ev("u", 12, List, TagSelect)};
        auto s = sessionize(e, 1800);
        REQUIRE(s.size() == 2);
        CHECK(s[0].events.size() == 3);
        CHECK(s[0].mode == Viz);
        CHECK(s[0].ended_by_switch);
        CHECK(s[1].events.size() == 1);
        CHECK(s[1].mode == List);
        CHECK_FALSE(s[1].ended_by_switch);
    }
    SUBCASE("timeout beats a mode change") {
        std::vector<ClickEvent> e{ev("u", 0, Viz, TagSelect), ev("u", 5000, List, TagSelect)};
        auto s = sessionize(e, 1800);
        REQUIRE(s.size() == 2);
        CHECK_FALSE(s[0].ended_by_switch);
    }
    SUBCASE("empty and invalid") {
        CHECK(sessionize({}, 10).empty());
        std::vector<ClickEvent> e{ev("u", 0, Viz, TagSelect)};
        CHECK_THROWS_AS(sessionize(e, 0), Error);
    }
}

TEST_CASE("seven-event fixture, hand-computed") {
    using enum ClickAction;
    // a: viz 0,10,30(switch) | list 40 | timeout | list 5000
    // b: list 100 | viz 200 (mode change within the gap)
    std::vector<ClickEvent> e{
        ev("b", 200, Viz, TagSelect),   ev("a", 30, Viz, ModeSwitch), ev("a", 0, Viz, TagSelect),
        ev("a", 5000, List, Other),     ev("b", 100, List, Edit),     ev("a", 10, Viz, ResourceSelect),
        ev("a", 40, List, TagSelect),
    };
    auto sessions = sessionize(e, 1800);
    REQUIRE(sessions.size() == 5);
    std::vector<std::size_t> sizes;
    std::vector<bool> switched;
    for (const auto& s : sessions) {
        sizes.push_back(s.events.size());
        switched.push_back(s.ended_by_switch);
    }
    CHECK(sizes == std::vector<std::size_t>{3, 1, 1, 1, 1});
    CHECK(switched == std::vector<bool>{true, false, false, true, false});

    auto stats = compute_stats(sessions);
    CHECK(stats.viz.n_sessions == 2);
    CHECK(stats.viz.mean_duration_sec == 15.0);
    CHECK(stats.viz.mean_clicks == 2.0);
    CHECK(stats.viz.content_fraction == 0.75);
    CHECK(stats.viz.switch_fraction == 0.5);
    CHECK(stats.list.n_sessions == 3);
    CHECK(stats.list.mean_duration_sec == 0.0);
    CHECK(stats.list.mean_clicks == 1.0);
    CHECK(stats.list.content_fraction == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(stats.list.switch_fraction == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mean duration") {
    using enum ClickAction;
    std::vector<ClickEvent> e{ev("u", 0, Viz, Other), ev("u", 100, Viz, Other), ev("v", 0, Viz, Other),
                              ev("v", 200, Viz, Other)};
    CHECK(compute_stats(sessionize(e, 1800)).viz.mean_duration_sec == 150.0);
}

TEST_CASE("render_report") {
    const SessionStats published{{960, 197.4, 12.4, 0.576, 0.323}, {1192, 172.3, 17.3, 0.831, 0.334}};
    CHECK(render_report(published) ==
          "Mode | List | Visualization\n"
          "Number of sessions | 960 | 1,192\n"
          "Time per session (sec) | 197.4 | 172.3\n"
          "Clicks per session | 12.4 | 17.3\n"
          "Content-related clicks | 57.6% | 83.1%\n"
          "Switch to other mode | 32.3% | 33.4%\n");

    const auto zero = render_report(compute_stats({}));
    CHECK(zero.find("Number of sessions | 0 | 0\n") != std::string::npos);
    CHECK(zero.find("Switch to other mode | 0.0% | 0.0%\n") != std::string::npos);

    SessionStats half;
    half.viz.content_fraction = 0.5;
    CHECK(render_report(half).find("Content-related clicks | 0.0% | 50.0%") != std::string::npos);

    SessionStats big;
    big.list.n_sessions = 1234567;
    CHECK(render_report(big).find("| 1,234,567 |") != std::string::npos);
}

TEST_CASE("event log lines") {
    const auto e = ev("alice", 1700000000, Viz, ClickAction::TagSelect);
    const auto line = format_event_line(e);
    CHECK(parse_event_line(line) == e);
    CHECK(parse_event_line(R"({"user":"bob","at":5,"mode":"list","action":"mode_switch"})") ==
          ev("bob", 5, List, ClickAction::ModeSwitch));
    CHECK_THROWS_AS(parse_event_line(R"({"user":"bob","at":5,"mode":"grid","action":"edit"})"), Error);
    CHECK_THROWS_AS(parse_event_line(R"({"user":"bob","mode":"list","action":"edit"})"), Error);
    CHECK_THROWS_AS(parse_event_line("nope"), Error);

    std::istringstream log(line + "\n\n" + line + "\n{bad\n");
    try {
        read_event_log(log);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(std::string(err.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("sessionize against the boundary oracle") {
    std::mt19937 rng(2024);
    for (int round = 0; round < 200; ++round) {
        const Timestamp gap = std::uniform_int_distribution<Timestamp>(1, 60)(rng);
        auto events = support::random_events(rng, 100, gap);
        auto sessions = sessionize(events, gap);

        std::vector<oracle::RawEvent> raw;
        for (const auto& e : events) raw.push_back(support::to_oracle(e));
        auto brute = oracle::brute_sessionize(raw, gap);
        REQUIRE(sessions.size() == brute.size());
        std::size_t total = 0;
        for (std::size_t i = 0; i < sessions.size(); ++i) {
            const auto& s = sessions[i];
            CHECK(s.ended_by_switch == brute[i].ended_by_switch);
            REQUIRE(s.events.size() == brute[i].events.size());
            for (std::size_t j = 0; j < s.events.size(); ++j) {
                const auto mine = support::to_oracle(s.events[j]);
                CHECK(std::tie(mine.user, mine.at, mine.mode, mine.action) ==
                      std::tie(brute[i].events[j].user, brute[i].events[j].at, brute[i].events[j].mode,
                               brute[i].events[j].action));
                CHECK(s.events[j].user == s.user);
                CHECK(s.events[j].mode == s.mode);
                if (j > 0) {
                    CHECK(s.events[j].at >= s.events[j - 1].at);
                    CHECK(s.events[j].at - s.events[j - 1].at <= gap);
                }
            }
            total += s.events.size();
        }
        CHECK(total == events.size());

        auto stats = compute_stats(sessions);
        auto shuffled = events;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto again = compute_stats(sessionize(shuffled, gap));
        CHECK(again.list.mean_duration_sec == stats.list.mean_duration_sec);
        CHECK(again.viz.content_fraction == stats.viz.content_fraction);
        CHECK(render_report(again) == render_report(stats));

        for (auto mode : {List, Viz}) {
            std::size_t content = 0;
            std::size_t n = 0;
            for (const auto& e : events) {
                if (e.mode != mode) continue;
                ++n;
                content += classify_click(e) ? 1 : 0;
            }
            const auto& m = mode == List ? stats.list : stats.viz;
            const double want = n == 0 ? 0.0 : static_cast<double>(content) / static_cast<double>(n);
            CHECK(m.content_fraction == doctest::Approx(want).epsilon(1e-12));
        }
    }
}
