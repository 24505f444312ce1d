#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace echolab {

/// Lexical attribute tables used by the hash embedder, in declared order.
enum class Attr : int { Norm = 0, Prefix = 1, Suffix = 2, Shape = 3 };
inline constexpr int kNumAttrs = 4;

struct Token {
    std::string text;
    int start = 0;  // character offsets (Unicode scalar values), end exclusive
    int end = 0;
    std::string norm;    // lowercased text
    std::string prefix;  // first character
    std::string suffix;  // last 3 characters (whole token if shorter)
    std::string shape;   // X/x/d classes, runs capped at 4, punctuation verbatim

    const std::string& attr(Attr a) const {
        switch (a) {
            case Attr::Norm: return norm;
            case Attr::Prefix: return prefix;
            case Attr::Suffix: return suffix;
            default: return shape;
        }
    }
};

struct TokenizedDocument {
    std::string doc_id;
    std::vector<Token> tokens;

    int size() const { return static_cast<int>(tokens.size()); }
};

/// Whitespace split with leading/trailing punctuation peeled into their own
/// tokens. Internal hyphens/slashes stay put, so "3/4" and
/// "mitralisklep-insufficientie" are single tokens.
TokenizedDocument tokenize(std::string_view text, std::string doc_id = {});

std::string shape_of(std::string_view token_text);

/// FNV-1a over the attribute's UTF-8 bytes, salted per table, reduced mod
/// n_rows. Stable across runs and platforms.
uint64_t hash_attr(std::string_view attr_value, int table_index, uint64_t n_rows);

}  // namespace echolab
