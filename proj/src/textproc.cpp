#include "echolab/textproc.hpp"

#include "echolab/util.hpp"

namespace echolab {

namespace {

bool is_space_cp(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' ||
           c == U' ';
}

bool is_digit_cp(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_upper_cp(char32_t c) {
    return (c >= U'A' && c <= U'Z') || (c >= 0xC0 && c <= 0xDE && c != 0xD7);
}

bool is_lower_cp(char32_t c) {
    return (c >= U'a' && c <= U'z') || (c >= 0xDF && c <= 0xFF && c != 0xF7);
}

bool is_letter_cp(char32_t c) {
    // Non-ASCII code points outside Latin-1 count as letters; they are never peeled.
    return is_upper_cp(c) || is_lower_cp(c) || c > 0xFF;
}

bool is_peelable_cp(char32_t c) { return !is_letter_cp(c) && !is_digit_cp(c); }

char32_t lower_cp(char32_t c) { return is_upper_cp(c) ? c + 0x20 : c; }

Token make_token(const std::vector<char32_t>& cps, size_t from, size_t to) {
    Token t;
    t.start = static_cast<int>(from);
    t.end = static_cast<int>(to);
    t.text = utf8_encode(cps.data() + from, to - from);

    std::vector<char32_t> norm(cps.begin() + static_cast<ptrdiff_t>(from),
                               cps.begin() + static_cast<ptrdiff_t>(to));
    for (auto& c : norm) c = lower_cp(c);
    t.norm = utf8_encode(norm.data(), norm.size());

    t.prefix = utf8_encode(cps.data() + from, 1);
    const size_t n = to - from;
    const size_t suf = n < 3 ? n : 3;
    t.suffix = utf8_encode(cps.data() + to - suf, suf);

    t.shape = shape_of(t.text);
    return t;
}

}  // namespace

std::string shape_of(std::string_view token_text) {
    const Utf8View v = utf8_decode(token_text);
    std::vector<char32_t> out;
    out.reserve(v.size());
    char32_t prev = 0;
    int run = 0;
    for (char32_t c : v.cps) {
        char32_t cls;
        if (is_upper_cp(c))
            cls = U'X';
        else if (is_lower_cp(c) || c > 0xFF)
            cls = U'x';
        else if (is_digit_cp(c))
            cls = U'd';
        else
            cls = c;  // punctuation kept verbatim
        run = (cls == prev) ? run + 1 : 1;
        prev = cls;
        if (run <= 4) out.push_back(cls);
    }
    return utf8_encode(out.data(), out.size());
}

TokenizedDocument tokenize(std::string_view text, std::string doc_id) {
    TokenizedDocument doc;
    doc.doc_id = std::move(doc_id);
    const Utf8View v = utf8_decode(text);
    const auto& cps = v.cps;

    size_t i = 0;
    while (i < cps.size()) {
        if (is_space_cp(cps[i])) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < cps.size() && !is_space_cp(cps[j])) ++j;

        // Peel leading punctuation one character at a time.
        size_t b = i;
        while (b < j && is_peelable_cp(cps[b])) {
            doc.tokens.push_back(make_token(cps, b, b + 1));
            ++b;
        }
        // Find trailing punctuation boundary.
        size_t e = j;
        while (e > b && is_peelable_cp(cps[e - 1])) --e;
        if (e > b) doc.tokens.push_back(make_token(cps, b, e));
        for (size_t k = e; k < j; ++k) doc.tokens.push_back(make_token(cps, k, k + 1));

        i = j;
    }
    return doc;
}

uint64_t hash_attr(std::string_view attr_value, int table_index, uint64_t n_rows) {
    if (n_rows == 0) throw ValidationError("hash_attr: n_rows must be positive");
    // FNV-1a, basis salted per table so the four attribute spaces stay independent.
    uint64_t h = 14695981039346656037ULL ^
                 (0x9E3779B97F4A7C15ULL * (static_cast<uint64_t>(table_index) + 1));
    for (unsigned char c : attr_value) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h % n_rows;
}

}  // namespace echolab
