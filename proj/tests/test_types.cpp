#include <random>

#include "bookmap/error.hpp"
#include "bookmap/types.hpp"
#include "doctest.h"

using namespace bookmap;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected bookmap::Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("normalize_tag") {
    CHECK(normalize_tag("  Tech News ").str() == "tech news");
    CHECK(normalize_tag("blog").str() == "blog");
    CHECK(normalize_tag("Multi\t\n  Word   TAG").str() == "multi word tag");
    CHECK(code_of([] { normalize_tag("   "); }) == ErrorCode::EmptyTag);
    CHECK(code_of([] { normalize_tag(""); }) == ErrorCode::EmptyTag);
}

TEST_CASE("canonicalize_url") {
    CHECK(canonicalize_url("HTTP://Engadget.com/#top").str() == "http://engadget.com/");
    CHECK(canonicalize_url("http://a.com/x").str() == "http://a.com/x");
    CHECK(canonicalize_url("http://a.com").str() == "http://a.com/");
    CHECK(canonicalize_url("engadget.com").str() == "http://engadget.com/");
    CHECK(canonicalize_url("https://A.com?q=1#f").str() == "https://a.com/?q=1");
    CHECK(canonicalize_url("https://A.com/Path/Case").str() == "https://a.com/Path/Case");
    CHECK(code_of([] { canonicalize_url("not a url"); }) == ErrorCode::InvalidUrl);
    CHECK(code_of([] { canonicalize_url("http://"); }) == ErrorCode::InvalidUrl);
    CHECK(code_of([] { canonicalize_url("localhost"); }) == ErrorCode::InvalidUrl);
    CHECK(code_of([] { canonicalize_url("1http://x.com"); }) == ErrorCode::InvalidUrl);

    ResourceId r("https://user@Example.ORG:8080/a/b?x#y");
    CHECK(r.str() == "https://user@example.org:8080/a/b?x");
    CHECK(r.scheme() == "https");
    CHECK(r.host() == "example.org");
    CHECK(r.path() == "/a/b?x");
}

TEST_CASE("UserId rejects blanks") {
    CHECK(UserId("alice").str() == "alice");
    CHECK(code_of([] { UserId(""); }) == ErrorCode::InvalidUser);
    CHECK(code_of([] { UserId("a b"); }) == ErrorCode::InvalidUser);
}

TEST_CASE("normalization is idempotent on random input") {
    std::mt19937 rng(7);
    const std::string alphabet = "aBc XyZ\t-./:#?%09";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 16);
    for (int i = 0; i < 2000; ++i) {
        std::string raw;
        for (int n = len(rng); n > 0; --n) raw.push_back(alphabet[pick(rng)]);
        try {
            auto once = normalize_tag(raw);
            CHECK(normalize_tag(once.str()) == once);
        } catch (const Error&) {
        }
        for (const std::string& candidate : {raw, "http://" + raw, "Ex.com/" + raw}) {
            try {
                auto once = canonicalize_url(candidate);
                CHECK(canonicalize_url(once.str()) == once);
            } catch (const Error&) {
            }
        }
    }
}
