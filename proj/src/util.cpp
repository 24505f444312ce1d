#include "echolab/util.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace echolab {

uint64_t mix_seed(uint64_t seed, std::string_view tag) {
    uint64_t h = 14695981039346656037ULL ^ seed;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    // splitmix64 finalizer
    h += 0x9E3779B97F4A7C15ULL;
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ULL;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBULL;
    return h ^ (h >> 31);
}

Utf8View utf8_decode(std::string_view s) {
    Utf8View v;
    v.cps.reserve(s.size());
    v.byte_at.reserve(s.size() + 1);
    size_t i = 0;
    while (i < s.size()) {
        v.byte_at.push_back(i);
        const unsigned char b0 = static_cast<unsigned char>(s[i]);
        size_t len = 1;
        char32_t cp = b0;
        if (b0 >= 0xF0)
            len = 4;
        else if (b0 >= 0xE0)
            len = 3;
        else if (b0 >= 0xC0)
            len = 2;
        if (len > 1) {
            if (i + len > s.size()) len = 1;
            cp = b0 & (0x7F >> len);
            for (size_t k = 1; k < len; ++k) {
                const unsigned char bk = static_cast<unsigned char>(s[i + k]);
                if ((bk & 0xC0) != 0x80) {  // truncated sequence: fall back to single byte
                    len = 1;
                    cp = b0;
                    break;
                }
                cp = (cp << 6) | (bk & 0x3F);
            }
        }
        v.cps.push_back(cp);
        i += len;
    }
    v.byte_at.push_back(s.size());
    return v;
}

size_t utf8_cp_count(std::string_view s) {
    size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

std::string utf8_encode(const char32_t* cps, size_t n) {
    std::string out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        const char32_t c = cps[i];
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else if (c < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else if (c < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (c >> 12)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (c >> 18)));
            out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return ss.str();
}

void atomic_write_file(const std::string& path, std::string_view contents) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open file for writing: " + tmp);
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("rename failed for " + path + ": " + ec.message());
    }
}

}  // namespace echolab
