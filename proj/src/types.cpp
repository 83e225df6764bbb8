#include "bookmap/types.hpp"

#include <algorithm>
#include <cctype>

#include "bookmap/error.hpp"

namespace bookmap {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyTag: return "empty_tag";
        case ErrorCode::EmptyTagSet: return "empty_tag_set";
        case ErrorCode::InvalidUrl: return "invalid_url";
        case ErrorCode::InvalidUser: return "invalid_user";
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::NotInCollection: return "not_in_collection";
        case ErrorCode::UnknownTag: return "unknown_tag";
        case ErrorCode::UnknownCenter: return "unknown_center";
        case ErrorCode::Storage: return "storage_failure";
        case ErrorCode::CorruptJournal: return "corrupt_journal";
        case ErrorCode::VersionMismatch: return "version_mismatch";
    }
    return "unknown";
}

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

bool valid_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
    });
}

bool valid_host_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_' ||
           c == '~' || c == '%' || c == '[' || c == ']' || c == ':' ||
           static_cast<unsigned char>(c) >= 0x80;
}

[[noreturn]] void invalid_url(std::string_view raw) {
    throw Error(ErrorCode::InvalidUrl, "invalid url: '" + std::string(raw) + "'");
}

}  // namespace

TagLabel::TagLabel(std::string_view raw) {
    bool pending_space = false;
    for (char c : trim(raw)) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space) value_.push_back(' ');
        pending_space = false;
        value_.push_back(lower(c));
    }
    if (value_.empty()) throw Error(ErrorCode::EmptyTag, "tag is empty after normalization");
}

ResourceId::ResourceId(std::string_view raw) {
    const std::string_view text = trim(raw);
    if (text.empty() || std::any_of(text.begin(), text.end(), is_space)) invalid_url(raw);

    std::string scheme;
    std::string_view rest;
    if (auto sep = text.find("://"); sep != std::string_view::npos) {
        if (!valid_scheme(text.substr(0, sep))) invalid_url(raw);
        scheme.assign(text.substr(0, sep));
        rest = text.substr(sep + 3);
    } else {
        // Bare "host.tld/..." is accepted as http when the host part has a dot.
        std::string_view host = text.substr(0, text.find_first_of("/?#"));
        if (host.find('.') == std::string_view::npos || host.find(':') != std::string_view::npos)
            invalid_url(raw);
        scheme = "http";
        rest = text;
    }
    std::transform(scheme.begin(), scheme.end(), scheme.begin(), lower);

    rest = rest.substr(0, rest.find('#'));
    const auto authority_end = std::min(rest.find_first_of("/?"), rest.size());
    std::string authority(rest.substr(0, authority_end));
    std::string_view tail = rest.substr(authority_end);

    // userinfo keeps its case; everything after the last '@' is host[:port].
    const auto at = authority.rfind('@');
    const std::size_t host_begin = at == std::string::npos ? 0 : at + 1;
    if (host_begin >= authority.size()) invalid_url(raw);
    for (std::size_t i = host_begin; i < authority.size(); ++i) {
        if (!valid_host_char(authority[i])) invalid_url(raw);
        authority[i] = lower(authority[i]);
    }
    if (authority[host_begin] == ':' || authority[host_begin] == '.') invalid_url(raw);

    value_ = scheme + "://";
    authority_begin_ = value_.size();
    value_ += authority;
    path_begin_ = value_.size();
    if (tail.empty() || tail.front() == '?') value_.push_back('/');
    value_ += tail;
}

std::string_view ResourceId::scheme() const noexcept {
    return std::string_view(value_).substr(0, authority_begin_ - 3);
}

std::string_view ResourceId::host() const noexcept {
    std::string_view authority =
        std::string_view(value_).substr(authority_begin_, path_begin_ - authority_begin_);
    if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
    if (!authority.empty() && authority.front() == '[') {
        return authority.substr(0, authority.find(']') + 1);
    }
    return authority.substr(0, authority.find(':'));
}

std::string_view ResourceId::path() const noexcept {
    return std::string_view(value_).substr(path_begin_);
}

UserId::UserId(std::string_view raw) : value_(raw) {
    if (value_.empty() || std::any_of(value_.begin(), value_.end(), is_space)) {
        throw Error(ErrorCode::InvalidUser, "user id must be non-empty without whitespace");
    }
}

TagLabel normalize_tag(std::string_view raw) { return TagLabel(raw); }

ResourceId canonicalize_url(std::string_view raw) { return ResourceId(raw); }

}  // namespace bookmap
