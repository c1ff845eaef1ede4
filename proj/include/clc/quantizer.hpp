#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "clc/util.hpp"

namespace clc::quant {

constexpr int kDims = 4;
constexpr int kLevels = 8;
constexpr int kCodesPerLayer = 4096;  // 8^4

using Vec4 = std::array<double, 4>;
using Idx4 = std::array<int, 4>;

// Uniformly spaced scalar grids, one list of points per latent dimension.
struct FsqGrid {
    std::vector<int> levels;                   // per dim
    std::vector<double> lo, hi;                // per dim
    std::vector<std::vector<double>> points;   // per dim, strictly increasing

    static FsqGrid uniform(const std::vector<int>& levels, double lo, double hi);

    int dims() const { return static_cast<int>(levels.size()); }
    double spacing(int dim) const { return (hi[dim] - lo[dim]) / (levels[dim] - 1); }
};

// componentwise logistic sigmoid; maps raw latents into (0,1)
double bound(double z);
Vec4 bound(const Vec4& z);
double bound_derivative(double bounded);  // b*(1-b), in terms of the output

// negative squared distances to each grid level of one dimension.
// Computed in rescaled grid coordinates so that exact midpoints produce
// exactly equal logits; this keeps argmax consistent with nearest_index.
std::vector<double> policy_logits(double b, const FsqGrid& grid, int dim);

// argmin of |b - g_k| with ties toward the lower index
int nearest_index(double b, const FsqGrid& grid, int dim);
Idx4 nearest_index(const Vec4& b, const FsqGrid& grid);

double dequantize(int idx, const FsqGrid& grid, int dim);
Vec4 dequantize(const Idx4& idx, const FsqGrid& grid);

// Gumbel-max draw from Categorical(softmax(logits/tau)). A null noise source
// disables the perturbation, which collapses to the argmax (= nearest level).
int sample_index(const std::vector<double>& logits, double tau, Rng* noise);

// log softmax(logits/tau) at idx; noise-free by definition
double log_prob(int idx, const std::vector<double>& logits, double tau);

// per-(layer,dim) categorical the RL stage treats as its action distribution
struct PolicyDistribution {
    std::vector<double> logits;
    std::vector<double> probs;
    double tau = 1.0;
};
PolicyDistribution make_policy(const std::vector<double>& logits, double tau);

// mixed-radix packing of one layer's indices, dim 0 least significant
int indices_to_code(const Idx4& idx, const FsqGrid& grid);
Idx4 code_to_indices(int code, const FsqGrid& grid);

// one transmitted latent frame: a 12-bit code per residual layer
struct TokenFrame {
    uint16_t code1 = 0;
    uint16_t code2 = 0;
    bool operator==(const TokenFrame&) const = default;
};

struct QuantResult {
    TokenFrame frame;
    Vec4 value;    // dequantized two-layer sum
    Idx4 idx1, idx2;
};

struct SampleResult {
    TokenFrame frame;
    Vec4 value;
    Idx4 idx1, idx2;
    double logp = 0.0;  // sum of the 8 per-(layer,dim) action log-probs
};

// Two-layer residual grid: layer 1 on [0,1], layer 2 spanning +/- half of
// layer 1's spacing, the exact range of the layer-1 rounding error.
class ResidualQuantizer {
public:
    ResidualQuantizer();

    const FsqGrid& layer1() const { return layer1_; }
    const FsqGrid& layer2() const { return layer2_; }
    int bits_per_layer() const { return bits_per_layer_; }
    int bits_per_frame() const { return 2 * bits_per_layer_; }

    // deterministic path: sigmoid bound, round, quantize the residual, sum
    QuantResult quantize(const Vec4& z) const;
    QuantResult quantize_bounded(const Vec4& b) const;

    // stochastic path; noise == nullptr reproduces the deterministic indices
    SampleResult sample_bounded(const Vec4& b, double tau, Rng* noise) const;

    // decode a token frame back to the latent value it represents
    Vec4 decode_frame(const TokenFrame& f) const;

    // d(logp)/d(b) for a recorded pair of actions, advantages held constant
    Vec4 logp_grad_bounded(const Vec4& b, const Idx4& idx1, const Idx4& idx2, double tau) const;

    uint64_t grid_hash() const;

private:
    FsqGrid layer1_;
    FsqGrid layer2_;
    int bits_per_layer_ = 0;
};

}  // namespace clc::quant
