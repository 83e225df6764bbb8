#include "bookmap/journal.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>

#include "bookmap/error.hpp"
#include "json.hpp"

namespace bookmap {

using nlohmann::json;

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};

[[noreturn]] void corrupt(const std::string& what) {
    throw Error(ErrorCode::CorruptJournal, what);
}

void rollback(int fd, off_t size) {
    if (::ftruncate(fd, size) != 0) {
        // Nothing more to do; the reader will reject the torn tail.
    }
}

[[noreturn]] void storage_failure(const std::string& what) {
    throw Error(ErrorCode::Storage, what + ": " + std::strerror(errno));
}

const json& field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) corrupt(std::string("missing field '") + key + "'");
    return *it;
}

std::string text_field(const json& obj, const char* key) {
    const auto& v = field(obj, key);
    if (!v.is_string()) corrupt(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Timestamp int_field(const json& obj, const char* key) {
    const auto& v = field(obj, key);
    if (!v.is_number_integer()) corrupt(std::string("field '") + key + "' must be an integer");
    return v.get<Timestamp>();
}

json payload_json(const RecordPayload& payload) {
    return std::visit(
        overloaded{
            [](const TripleAdd& m) {
                return json{{"user", m.triple.user.str()},
                            {"tag", m.triple.tag.str()},
                            {"resource", m.triple.resource.str()},
                            {"created_at", m.triple.created_at}};
            },
            [](const TripleRemove& m) {
                return json{{"user", m.user.str()},
                            {"tag", m.tag.str()},
                            {"resource", m.resource.str()}};
            },
            [](const TitleSet& m) {
                return json{{"user", m.user.str()},
                            {"resource", m.resource.str()},
                            {"title", m.title}};
            },
            [](const ClickEvent& e) {
                return json{{"user", e.user.str()},
                            {"at", e.at},
                            {"mode", to_string(e.mode)},
                            {"action", to_string(e.action)}};
            },
        },
        payload);
}

RecordPayload payload_from(std::string_view kind, const json& p) {
    if (!p.is_object()) corrupt("payload must be an object");
    try {
        if (kind == "triple_add") {
            return TripleAdd{{UserId(text_field(p, "user")), TagLabel(text_field(p, "tag")),
                              ResourceId(text_field(p, "resource")),
                              int_field(p, "created_at")}};
        }
        if (kind == "triple_remove") {
            return TripleRemove{UserId(text_field(p, "user")), TagLabel(text_field(p, "tag")),
                                ResourceId(text_field(p, "resource"))};
        }
        if (kind == "title_set") {
            return TitleSet{UserId(text_field(p, "user")), ResourceId(text_field(p, "resource")),
                            text_field(p, "title")};
        }
        if (kind == "event") {
            return ClickEvent{UserId(text_field(p, "user")), int_field(p, "at"),
                              parse_mode(text_field(p, "mode")),
                              parse_action(text_field(p, "action"))};
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptJournal) throw;
        corrupt(e.what());
    }
    corrupt("unknown record kind '" + std::string(kind) + "'");
}

}  // namespace

std::string_view to_string(RecordKind kind) noexcept {
    switch (kind) {
        case RecordKind::TripleAdd: return "triple_add";
        case RecordKind::TripleRemove: return "triple_remove";
        case RecordKind::TitleSet: return "title_set";
        case RecordKind::Event: return "event";
    }
    return "unknown";
}

RecordKind JournalRecord::kind() const noexcept {
    return static_cast<RecordKind>(payload.index());
}

RecordPayload to_payload(const Mutation& mutation) {
    return std::visit([](const auto& m) -> RecordPayload { return m; }, mutation);
}

std::string encode_record(const JournalRecord& record) {
    json j = {
        {"seq", record.seq},
        {"kind", to_string(record.kind())},
        {"payload", payload_json(record.payload)},
    };
    return j.dump();
}

JournalRecord decode_record(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error&) {
        corrupt("malformed JSON");
    }
    if (!j.is_object()) corrupt("record must be an object");
    const auto& seq = field(j, "seq");
    if (!seq.is_number_unsigned()) corrupt("seq must be a non-negative integer");
    return JournalRecord{seq.get<std::uint64_t>(),
                         payload_from(text_field(j, "kind"), field(j, "payload"))};
}

void AppState::apply(const JournalRecord& record) {
    if (record.seq <= seq) return;
    std::visit(overloaded{
                   [this](const ClickEvent& e) { events.push_back(e); },
                   [this](const auto& m) { store.apply(m); },
               },
               record.payload);
    seq = record.seq;
}

std::vector<JournalRecord> read_journal(const std::filesystem::path& path) {
    std::vector<JournalRecord> records;
    std::ifstream in(path);
    if (!in) {
        if (!std::filesystem::exists(path)) return records;
        throw Error(ErrorCode::Storage, "cannot read journal " + path.string());
    }
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.empty()) continue;
        try {
            auto record = decode_record(line);
            if (!records.empty() && record.seq <= records.back().seq) {
                corrupt("seq " + std::to_string(record.seq) + " is not increasing");
            }
            records.push_back(std::move(record));
        } catch (const Error& e) {
            throw Error(ErrorCode::CorruptJournal,
                        path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

// ---------------------------------------------------------------------------

JournalWriter::JournalWriter(const std::filesystem::path& path, std::uint64_t next_seq)
    : path_(path), next_seq_(next_seq) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) storage_failure("cannot open journal " + path.string());
}

JournalWriter::~JournalWriter() {
    if (fd_ >= 0) ::close(fd_);
}

JournalWriter::JournalWriter(JournalWriter&& other) noexcept
    : path_(std::move(other.path_)), fd_(std::exchange(other.fd_, -1)), next_seq_(other.next_seq_) {}

JournalWriter& JournalWriter::operator=(JournalWriter&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        path_ = std::move(other.path_);
        fd_ = std::exchange(other.fd_, -1);
        next_seq_ = other.next_seq_;
    }
    return *this;
}

std::vector<JournalRecord> JournalWriter::append(std::span<const RecordPayload> payloads) {
    std::vector<JournalRecord> records;
    std::string batch;
    auto seq = next_seq_;
    for (const auto& p : payloads) {
        records.push_back({seq++, p});
        batch += encode_record(records.back());
        batch += '\n';
    }
    if (batch.empty()) return records;

    struct stat st {};
    const bool sized = ::fstat(fd_, &st) == 0;
    const char* data = batch.data();
    std::size_t left = batch.size();
    while (left > 0) {
        const auto n = ::write(fd_, data, left);
        if (n < 0) {
            if (errno == EINTR) continue;
            const int saved = errno;
            if (sized && S_ISREG(st.st_mode)) rollback(fd_, st.st_size);
            errno = saved;
            storage_failure("journal write failed");
        }
        data += n;
        left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0 && errno != EINVAL) {
        const int saved = errno;
        if (sized && S_ISREG(st.st_mode)) rollback(fd_, st.st_size);
        errno = saved;
        storage_failure("journal fsync failed");
    }
    next_seq_ = seq;
    return records;
}

// ---------------------------------------------------------------------------

void save_snapshot(const AppState& state, const std::filesystem::path& path) {
    json triples = json::array();
    for (const auto& t : state.store.triples()) {
        triples.push_back({t.user.str(), t.tag.str(), t.resource.str(), t.created_at});
    }
    json titles = json::array();
    for (const auto& [res, meta] : state.store.all_meta()) {
        for (const auto& [user, title] : meta.titles) {
            titles.push_back({res.str(), user.str(), title});
        }
    }
    json clocks = json::object();
    for (const auto& [user, stamp] : state.store.clocks()) clocks[user.str()] = stamp;
    json events = json::array();
    for (const auto& e : state.events) events.push_back(payload_json(e));

    json doc = {
        {"version", kSnapshotVersion},
        {"seq", state.seq},
        {"triples", std::move(triples)},
        {"titles", std::move(titles)},
        {"clocks", std::move(clocks)},
        {"events", std::move(events)},
    };

    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << doc.dump() << '\n';
        out.flush();
        if (!out) throw Error(ErrorCode::Storage, "cannot write snapshot " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::Storage, "cannot move snapshot into place: " + ec.message());
}

AppState load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Storage, "cannot read snapshot " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error&) {
        corrupt(path.string() + ": malformed snapshot");
    }
    if (!doc.is_object() || !doc.contains("version") || doc["version"] != kSnapshotVersion) {
        throw Error(ErrorCode::VersionMismatch,
                    path.string() + ": expected snapshot version " + std::string(kSnapshotVersion));
    }

    AppState state;
    try {
        std::vector<Triple> triples;
        for (const auto& t : doc.at("triples")) {
            triples.push_back({UserId(t.at(0).get<std::string>()), TagLabel(t.at(1).get<std::string>()),
                               ResourceId(t.at(2).get<std::string>()), t.at(3).get<Timestamp>()});
        }
        std::stable_sort(triples.begin(), triples.end(),
                         [](const Triple& a, const Triple& b) { return a.created_at < b.created_at; });
        for (auto& t : triples) state.store.apply(TripleAdd{std::move(t)});
        for (const auto& t : doc.at("titles")) {
            state.store.apply(TitleSet{UserId(t.at(1).get<std::string>()),
                                       ResourceId(t.at(0).get<std::string>()),
                                       t.at(2).get<std::string>()});
        }
        for (const auto& [user, stamp] : doc.at("clocks").items()) {
            state.store.restore_clock(UserId(user), stamp.get<Timestamp>());
        }
        for (const auto& e : doc.at("events")) {
            state.events.push_back(std::get<ClickEvent>(payload_from("event", e)));
        }
        state.seq = doc.at("seq").get<std::uint64_t>();
    } catch (const json::exception& e) {
        corrupt(path.string() + ": " + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptJournal) throw;
        corrupt(path.string() + ": " + e.what());
    }
    return state;
}

AppState recover(const std::optional<std::filesystem::path>& snapshot,
                 const std::filesystem::path& journal) {
    AppState state;
    if (snapshot && std::filesystem::exists(*snapshot)) state = load_snapshot(*snapshot);
    for (const auto& record : read_journal(journal)) {
        try {
            state.apply(record);
        } catch (const Error& e) {
            throw Error(ErrorCode::CorruptJournal, journal.string() + ": seq " +
                                                       std::to_string(record.seq) + ": " + e.what());
        }
    }
    return state;
}

}  // namespace bookmap
