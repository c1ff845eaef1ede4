#include "clc/dsp.hpp"

#include <algorithm>
#include <cmath>

#include "clc/kernels.hpp"

namespace clc::dsp {

void MelConfig::validate() const {
    if (sample_rate <= 0 || hop <= 0) throw std::invalid_argument("mel: nonpositive rate or hop");
    if (!(hop <= window && window <= fft_size)) throw std::invalid_argument("mel: need hop <= window <= fft_size");
    if ((fft_size & (fft_size - 1)) != 0) throw std::invalid_argument("mel: fft_size must be a power of two");
    if (n_mels < 1) throw std::invalid_argument("mel: n_mels < 1");
    if (!(fmin >= 0.0 && fmin < fmax)) throw std::invalid_argument("mel: invalid frequency range");
    if (fmax > 0.5 * sample_rate) throw std::invalid_argument("mel: fmax above Nyquist");
    if (!(log_floor > 0.0)) throw std::invalid_argument("mel: log_floor must be positive");
}

MelConfig codec_mel_config() { return MelConfig{}; }

MelConfig loss_mel_config() {
    MelConfig cfg;
    cfg.window = 160;
    cfg.fft_size = 256;
    return cfg;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Mat mel_filterbank(const MelConfig& cfg) {
    cfg.validate();
    const int n_bins = cfg.fft_size / 2 + 1;
    Mat fb(cfg.n_mels, n_bins);

    const double mel_lo = hz_to_mel(cfg.fmin);
    const double mel_hi = hz_to_mel(cfg.fmax);
    std::vector<double> hz_pts(cfg.n_mels + 2);
    for (int i = 0; i < cfg.n_mels + 2; ++i) {
        const double t = static_cast<double>(i) / (cfg.n_mels + 1);
        hz_pts[i] = mel_to_hz(mel_lo + t * (mel_hi - mel_lo));
    }

    // triangles evaluated at bin center frequencies, not snapped to bins
    const double bin_hz = static_cast<double>(cfg.sample_rate) / cfg.fft_size;
    for (int m = 0; m < cfg.n_mels; ++m) {
        const double left = hz_pts[m], center = hz_pts[m + 1], right = hz_pts[m + 2];
        for (int k = 0; k < n_bins; ++k) {
            const double f = k * bin_hz;
            double w = 0.0;
            if (f > left && f < center)
                w = (f - left) / (center - left);
            else if (f == center)
                w = 1.0;
            else if (f > center && f < right)
                w = (right - f) / (right - center);
            fb.at(m, k) = w;
        }
    }
    return fb;
}

void fft(std::vector<std::complex<double>>& buf) {
    const size_t n = buf.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");
    // bit-reversal permutation
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(buf[i], buf[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = buf[i + k];
                const std::complex<double> v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

namespace {

// reflect (no edge repeat): ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
inline size_t reflect_index(long long s, long long n) {
    if (n == 1) return 0;
    while (s < 0 || s >= n) {
        if (s < 0) s = -s;
        if (s >= n) s = 2 * n - 2 - s;
    }
    return static_cast<size_t>(s);
}

void mel_frame(const std::vector<double>& wave, const MelConfig& cfg, const Mat& fb,
               const std::vector<double>& window, int t, Mat& out) {
    const int half = cfg.window / 2;
    const int offset = (cfg.fft_size - cfg.window) / 2;
    std::vector<std::complex<double>> buf(cfg.fft_size, 0.0);
    const long long n = static_cast<long long>(wave.size());
    const long long center = static_cast<long long>(t) * cfg.hop;
    for (int j = 0; j < cfg.window; ++j) {
        const double s = wave[reflect_index(center - half + j, n)];
        buf[offset + j] = s * window[j];
    }
    fft(buf);
    const int n_bins = cfg.fft_size / 2 + 1;
    std::vector<double> power(n_bins);
    for (int k = 0; k < n_bins; ++k) power[k] = std::norm(buf[k]);
    for (int m = 0; m < cfg.n_mels; ++m) {
        double e = 0.0;
        for (int k = 0; k < n_bins; ++k) e += fb.at(m, k) * power[k];
        out.at(t, m) = std::log(e + cfg.log_floor);
    }
}

}  // namespace

LogMel log_mel(const std::vector<double>& wave, const MelConfig& cfg) {
    cfg.validate();
    if (wave.empty()) throw std::invalid_argument("log_mel: empty waveform");
    for (double s : wave)
        if (!std::isfinite(s)) throw std::invalid_argument("log_mel: non-finite sample");

    const int frames = static_cast<int>((wave.size() + cfg.hop - 1) / cfg.hop);
    const Mat fb = mel_filterbank(cfg);
    std::vector<double> window(cfg.window);
    for (int j = 0; j < cfg.window; ++j)
        window[j] = 0.5 * (1.0 - std::cos(2.0 * M_PI * j / cfg.window));

    Mat out(frames, cfg.n_mels);
    if (kernels::parallel_enabled() && frames >= 8) {
#pragma omp parallel for schedule(static)
        for (int t = 0; t < frames; ++t) mel_frame(wave, cfg, fb, window, t, out);
    } else {
        for (int t = 0; t < frames; ++t) mel_frame(wave, cfg, fb, window, t, out);
    }
    return out;
}

double mel_l1(const LogMel& a, const LogMel& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("mel_l1: shape mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) acc += std::fabs(a.v[i] - b.v[i]);
    return acc / static_cast<double>(a.v.size());
}

std::vector<double> decode_waveform(const std::vector<uint8_t>& bytes) {
    if (bytes.size() >= 12 && std::memcmp(bytes.data(), "RIFF", 4) == 0) {
        if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) throw DataError("wav: RIFF without WAVE form");
        le::Reader r(bytes.data(), bytes.size());
        r.pos = 12;
        int channels = 0, rate = 0, bits = 0, format = 0;
        bool have_fmt = false;
        while (r.remaining() >= 8) {
            char id[4];
            r.bytes(id, 4);
            uint32_t sz = r.u32();
            if (std::memcmp(id, "fmt ", 4) == 0) {
                if (sz < 16) throw DataError("wav: short fmt chunk");
                format = r.u16();
                channels = r.u16();
                rate = static_cast<int>(r.u32());
                r.u32();  // byte rate
                r.u16();  // block align
                bits = r.u16();
                if (sz > 16) r.pos += sz - 16;
                have_fmt = true;
            } else if (std::memcmp(id, "data", 4) == 0) {
                if (!have_fmt) throw DataError("wav: data before fmt");
                if (format != 1) throw DataError("wav: only PCM supported");
                if (channels != 1) throw DataError("wav: only mono supported");
                if (rate != 16000) throw DataError("wav: only 16 kHz supported");
                if (bits != 16) throw DataError("wav: only 16-bit supported");
                if (sz % 2 != 0 || r.remaining() < sz) throw DataError("wav: truncated data chunk");
                const size_t n = sz / 2;
                std::vector<double> wave(n);
                for (size_t i = 0; i < n; ++i) {
                    const auto u = static_cast<uint16_t>(r.u8()) | static_cast<uint16_t>(r.u8()) << 8;
                    wave[i] = static_cast<int16_t>(u) / 32768.0;
                }
                return wave;
            } else {
                if (r.remaining() < sz) throw DataError("wav: truncated chunk");
                r.pos += sz + (sz & 1);
            }
        }
        throw DataError("wav: no data chunk");
    }
    // raw little-endian float32
    if (bytes.empty() || bytes.size() % 4 != 0) throw DataError("raw f32: length not a multiple of 4");
    le::Reader r(bytes.data(), bytes.size());
    std::vector<double> wave(bytes.size() / 4);
    for (double& s : wave) s = r.f32();
    return wave;
}

std::vector<double> load_waveform(const std::string& path) { return decode_waveform(read_file(path)); }

std::vector<uint8_t> encode_logmel(const LogMel& mel) {
    std::vector<uint8_t> out;
    out.reserve(12 + mel.v.size() * 4);
    out.insert(out.end(), {'C', 'L', 'M', 'F'});
    le::put_u32(out, static_cast<uint32_t>(mel.rows));
    le::put_u32(out, static_cast<uint32_t>(mel.cols));
    for (double x : mel.v) le::put_f32(out, static_cast<float>(x));
    return out;
}

LogMel decode_logmel(const std::vector<uint8_t>& bytes) {
    le::Reader r(bytes.data(), bytes.size());
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, "CLMF", 4) != 0) throw DataError("logmel: bad magic");
    const uint32_t rows = r.u32();
    const uint32_t cols = r.u32();
    if (rows == 0 || cols == 0) throw DataError("logmel: empty shape");
    if (r.remaining() != static_cast<size_t>(rows) * cols * 4) throw DataError("logmel: payload size mismatch");
    Mat mel(static_cast<int>(rows), static_cast<int>(cols));
    for (double& x : mel.v) {
        x = r.f32();
        if (!std::isfinite(x)) throw DataError("logmel: non-finite value");
    }
    return mel;
}

void save_logmel(const std::string& path, const LogMel& mel) { write_file(path, encode_logmel(mel)); }
LogMel load_logmel(const std::string& path) { return decode_logmel(read_file(path)); }

LogMel quantize_f32(const LogMel& mel) {
    Mat out = mel;
    for (double& x : out.v) x = static_cast<double>(static_cast<float>(x));
    return out;
}

}  // namespace clc::dsp
