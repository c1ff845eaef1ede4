#pragma once

#include <complex>
#include <string>
#include <vector>

#include "clc/util.hpp"

namespace clc::dsp {

// Log-mel features on a 10 ms grid. Frames are rows, mel bins are columns.
using LogMel = Mat;

struct MelConfig {
    int sample_rate = 16000;
    int hop = 160;
    int window = 400;
    int fft_size = 512;
    int n_mels = 80;
    double fmin = 0.0;
    double fmax = 8000.0;
    double log_floor = 1e-5;

    void validate() const;
};

// features fed to the codec
MelConfig codec_mel_config();
// mel used by the training losses: window 160, fft 256, otherwise identical
MelConfig loss_mel_config();

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// triangular filters, n_mels x (fft_size/2 + 1); rows are nonnegative and unimodal
Mat mel_filterbank(const MelConfig& cfg);

// T = ceil(len/hop) frames with centered reflect padding; values = ln(energy + log_floor)
LogMel log_mel(const std::vector<double>& wave, const MelConfig& cfg);

// mean absolute elementwise difference; throws on shape mismatch
double mel_l1(const LogMel& a, const LogMel& b);

// in-place radix-2 FFT; size must be a power of two
void fft(std::vector<std::complex<double>>& buf);

// 16-bit PCM mono 16 kHz RIFF/WAVE, or raw little-endian float32 when the
// RIFF magic is absent
std::vector<double> load_waveform(const std::string& path);
std::vector<double> decode_waveform(const std::vector<uint8_t>& bytes);

// "CLMF" container: u32 frames, u32 bins, row-major float32 payload
std::vector<uint8_t> encode_logmel(const LogMel& mel);
LogMel decode_logmel(const std::vector<uint8_t>& bytes);
void save_logmel(const std::string& path, const LogMel& mel);
LogMel load_logmel(const std::string& path);

// round every cell through float32, as a disk round-trip would
LogMel quantize_f32(const LogMel& mel);

}  // namespace clc::dsp
