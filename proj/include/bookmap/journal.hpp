#pragma once
// Append-only JSON-lines journal and versioned snapshots.
//
// Journal line: {"seq":N,"kind":"triple_add|triple_remove|title_set|event","payload":{...}}
// Snapshot: one JSON document tagged with kSnapshotVersion that records the
// last journal seq it covers; recovery loads it and replays the later records.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bookmap/sessions.hpp"
#include "bookmap/store.hpp"

namespace bookmap {

enum class RecordKind { TripleAdd, TripleRemove, TitleSet, Event };

std::string_view to_string(RecordKind kind) noexcept;

using RecordPayload = std::variant<TripleAdd, TripleRemove, TitleSet, ClickEvent>;

struct JournalRecord {
    std::uint64_t seq = 0;
    RecordPayload payload;

    RecordKind kind() const noexcept;
    bool operator==(const JournalRecord&) const = default;
};

RecordPayload to_payload(const Mutation& mutation);

std::string encode_record(const JournalRecord& record);
// Throws CorruptJournal.
JournalRecord decode_record(std::string_view line);

// Everything the journal reconstructs: the triple store plus the click log.
struct AppState {
    Store store;
    std::vector<ClickEvent> events;
    std::uint64_t seq = 0;

    // Records at or below seq are skipped, so a snapshot can be followed by
    // the full journal.
    void apply(const JournalRecord& record);

    bool operator==(const AppState&) const = default;
};

// Parses every record; the error for a bad line names the file and line.
// Sequence numbers must be strictly increasing.
std::vector<JournalRecord> read_journal(const std::filesystem::path& path);

class JournalWriter {
public:
    // Opens (creating if needed) for appending; next_seq is the first seq to issue.
    JournalWriter(const std::filesystem::path& path, std::uint64_t next_seq);
    ~JournalWriter();

    JournalWriter(const JournalWriter&) = delete;
    JournalWriter& operator=(const JournalWriter&) = delete;
    JournalWriter(JournalWriter&& other) noexcept;
    JournalWriter& operator=(JournalWriter&& other) noexcept;

    // Writes all payloads in one batch and fsyncs. On failure the file is
    // truncated back, no seq is consumed, and Storage is thrown.
    std::vector<JournalRecord> append(std::span<const RecordPayload> payloads);

    std::uint64_t next_seq() const noexcept { return next_seq_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    int fd_ = -1;
    std::uint64_t next_seq_ = 1;
};

inline constexpr std::string_view kSnapshotVersion = "bookmap-snapshot/1";

// Written to a temporary file and renamed into place.
void save_snapshot(const AppState& state, const std::filesystem::path& path);
// Throws VersionMismatch for another version tag, CorruptJournal for bad content.
AppState load_snapshot(const std::filesystem::path& path);

// Snapshot (if present) plus the journal records after it.
AppState recover(const std::optional<std::filesystem::path>& snapshot,
                 const std::filesystem::path& journal);

}  // namespace bookmap
