#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clc/quantizer.hpp"

namespace clc::bits {

// ".clc1" container: little-endian header, then the token frames packed
// MSB-first as 12-bit codes (layer 1 then layer 2), zero-padded to a byte
// boundary at the very end only.
struct BitstreamHeader {
    static constexpr char kMagic[4] = {'C', 'L', 'C', '1'};
    uint8_t version = 1;
    uint16_t frame_rate_num = 25;
    uint16_t frame_rate_den = 2;  // 25/2 = 12.5 Hz
    uint8_t bits_per_frame = 24;
    uint32_t n_frames = 0;
};

constexpr size_t kHeaderBytes = 14;
constexpr double kFrameRateHz = 12.5;
constexpr int kBitsPerFrame = 24;

std::vector<uint8_t> pack(const std::vector<quant::TokenFrame>& frames);
std::vector<quant::TokenFrame> unpack(const std::vector<uint8_t>& bytes);

// frame_rate * bits_per_frame, in bits per second
double bitrate(double frame_rate_hz, double bits_per_frame);

void save(const std::string& path, const std::vector<quant::TokenFrame>& frames);
std::vector<quant::TokenFrame> load(const std::string& path);

}  // namespace clc::bits
