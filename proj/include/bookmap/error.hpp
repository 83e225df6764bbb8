#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bookmap {

enum class ErrorCode {
    EmptyTag,
    EmptyTagSet,
    InvalidUrl,
    InvalidUser,
    InvalidArgument,
    NotInCollection,
    UnknownTag,
    UnknownCenter,
    Storage,
    CorruptJournal,
    VersionMismatch,
};

// Stable machine-readable name, e.g. "not_in_collection".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bookmap
