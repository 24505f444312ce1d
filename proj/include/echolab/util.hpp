#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace echolab {

/// Validation / parse failure (bad config, bad annotation, bad flags). CLI maps it to exit 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem / stream failure. CLI maps it to exit 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic RNG
//
// std::mt19937_64 is fully specified by the standard; the distribution
// wrappers below are hand-rolled because std::uniform_*_distribution is
// implementation-defined and would break byte-identical reproducibility.
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /// Unbiased integer in [0, n) via rejection sampling.
    uint64_t below(uint64_t n) {
        if (n == 0) throw ValidationError("Rng::below: n must be positive");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return v % n;
    }

    /// Inclusive integer range.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        if (hi < lo) throw ValidationError("Rng::uniform_int: empty range");
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller (no spare caching; two draws per call).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Index draw from unnormalized nonnegative weights.
    size_t categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) throw ValidationError("Rng::categorical: nonpositive weight total");
        double r = uniform01() * total;
        for (size_t i = 0; i + 1 < weights.size(); ++i) {
            r -= weights[i];
            if (r < 0.0) return i;
        }
        return weights.size() - 1;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

/// Mixes a base seed with a stream tag so per-characteristic jobs stay
/// independent of scheduling order.
uint64_t mix_seed(uint64_t seed, std::string_view tag);

// ---------------------------------------------------------------------------
// UTF-8 — annotation offsets are Unicode scalar values, not bytes.
// ---------------------------------------------------------------------------

/// Decoded view of a UTF-8 string. Invalid bytes decode as single code points
/// (lossy-tolerant; ingestion of JSON guarantees valid UTF-8 anyway).
struct Utf8View {
    std::vector<char32_t> cps;
    std::vector<size_t> byte_at;  // byte_at[i] = byte offset of code point i; size = cps.size()+1

    size_t size() const { return cps.size(); }
    /// Bytes of code points [from, to).
    std::string_view slice(std::string_view src, size_t from, size_t to) const {
        return src.substr(byte_at[from], byte_at[to] - byte_at[from]);
    }
};

Utf8View utf8_decode(std::string_view s);
size_t utf8_cp_count(std::string_view s);
std::string utf8_encode(const char32_t* cps, size_t n);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path);

/// Writes via temp file + rename so concurrent jobs never expose partial files.
void atomic_write_file(const std::string& path, std::string_view contents);

}  // namespace echolab
