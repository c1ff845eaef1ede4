#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace clc {

// Thrown for malformed files, bad magics, truncated payloads and the like.
// The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Row-major T x C matrix of doubles. Time is always the row axis.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

    double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return v.size(); }
    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

// Deterministic RNG: std::mt19937_64 has a standard-fixed sequence, but the
// standard distributions do not, so all variate generation is done by hand.
class Rng {
public:
    explicit Rng(uint64_t seed) : s_(splitmix(seed)) {}

    // derive an independent stream; mixing is stateless so streams commute
    Rng stream(uint64_t key) const { return Rng(seed_ ^ (0x9E3779B97F4A7C15ull * (key + 1))); }

    uint64_t next_u64() {
        // xorshift* is tiny and has a fixed sequence everywhere
        s_ ^= s_ >> 12;
        s_ ^= s_ << 25;
        s_ ^= s_ >> 27;
        return s_ * 0x2545F4914F6CDD1Dull;
    }

    // uniform in the open interval (0, 1); never returns 0 or 1
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n)
    uint64_t below(uint64_t n) {
        uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do { x = next_u64(); } while (x >= lim);
        return x % n;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // standard Gumbel(0,1)
    double gumbel() { return -std::log(-std::log(uniform())); }

private:
    static uint64_t splitmix(uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        x = x ^ (x >> 31);
        return x ? x : 0x853C49E6748FEA9Bull;
    }

    uint64_t s_;
    uint64_t seed_ = s_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// FNV-1a over raw bytes; used for parameter freeze checks
inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xCBF29CE484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

inline uint64_t hash_doubles(const std::vector<double>& v, uint64_t h = 0xCBF29CE484222325ull) {
    return fnv1a(v.data(), v.size() * sizeof(double), h);
}

// little-endian byte IO
namespace le {

inline void put_u8(std::vector<uint8_t>& b, uint8_t x) { b.push_back(x); }
inline void put_u16(std::vector<uint8_t>& b, uint16_t x) {
    b.push_back(static_cast<uint8_t>(x & 0xFF));
    b.push_back(static_cast<uint8_t>(x >> 8));
}
inline void put_u32(std::vector<uint8_t>& b, uint32_t x) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<uint8_t>((x >> (8 * i)) & 0xFF));
}
inline void put_u64(std::vector<uint8_t>& b, uint64_t x) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<uint8_t>((x >> (8 * i)) & 0xFF));
}
inline void put_f32(std::vector<uint8_t>& b, float x) {
    uint32_t u;
    std::memcpy(&u, &x, 4);
    put_u32(b, u);
}
inline void put_f64(std::vector<uint8_t>& b, double x) {
    uint64_t u;
    std::memcpy(&u, &x, 8);
    put_u64(b, u);
}

// cursor-based reader that throws DataError on truncation
struct Reader {
    const uint8_t* p;
    size_t n;
    size_t pos = 0;

    Reader(const uint8_t* data, size_t len) : p(data), n(len) {}

    void need(size_t k) const {
        if (pos + k > n) throw DataError("truncated input");
    }
    uint8_t u8() { need(1); return p[pos++]; }
    uint16_t u16() {
        need(2);
        uint16_t x = static_cast<uint16_t>(p[pos]) | static_cast<uint16_t>(p[pos + 1]) << 8;
        pos += 2;
        return x;
    }
    uint32_t u32() {
        need(4);
        uint32_t x = 0;
        for (int i = 0; i < 4; ++i) x |= static_cast<uint32_t>(p[pos + i]) << (8 * i);
        pos += 4;
        return x;
    }
    uint64_t u64() {
        need(8);
        uint64_t x = 0;
        for (int i = 0; i < 8; ++i) x |= static_cast<uint64_t>(p[pos + i]) << (8 * i);
        pos += 8;
        return x;
    }
    float f32() {
        uint32_t u = u32();
        float x;
        std::memcpy(&x, &u, 4);
        return x;
    }
    double f64() {
        uint64_t u = u64();
        double x;
        std::memcpy(&x, &u, 8);
        return x;
    }
    void bytes(void* dst, size_t k) {
        need(k);
        std::memcpy(dst, p + pos, k);
        pos += k;
    }
    size_t remaining() const { return n - pos; }
};

}  // namespace le

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<uint8_t>& bytes);

// flat "key = value" text with '#' comments; keys must be unique
std::vector<std::pair<std::string, std::string>> parse_kv_text(const std::string& text);
std::string render_kv_text(const std::vector<std::pair<std::string, std::string>>& kv);

}  // namespace clc
