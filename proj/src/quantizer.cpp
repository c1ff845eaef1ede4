#include "clc/quantizer.hpp"

#include <cmath>
#include <stdexcept>

namespace clc::quant {

FsqGrid FsqGrid::uniform(const std::vector<int>& levels, double lo, double hi) {
    if (levels.empty()) throw std::invalid_argument("grid: no dimensions");
    if (!(lo < hi)) throw std::invalid_argument("grid: lo must be below hi");
    FsqGrid g;
    g.levels = levels;
    for (int L : levels) {
        if (L < 2) throw std::invalid_argument("grid: need at least 2 levels");
        g.lo.push_back(lo);
        g.hi.push_back(hi);
        std::vector<double> pts(L);
        for (int k = 0; k < L; ++k) pts[k] = lo + (hi - lo) * (static_cast<double>(k) / (L - 1));
        g.points.push_back(std::move(pts));
    }
    return g;
}

double bound(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Vec4 bound(const Vec4& z) {
    Vec4 b;
    for (int d = 0; d < kDims; ++d) b[d] = bound(z[d]);
    return b;
}

double bound_derivative(double b) { return b * (1.0 - b); }

std::vector<double> policy_logits(double b, const FsqGrid& grid, int dim) {
    const int L = grid.levels[dim];
    const double span = grid.hi[dim] - grid.lo[dim];
    const double s = grid.spacing(dim);
    // x is the position in grid units; s*(x-k) equals b - g_k up to rounding,
    // and midpoints land exactly halfway so ties are exact
    const double x = (b - grid.lo[dim]) / span * (L - 1);
    std::vector<double> logits(L);
    for (int k = 0; k < L; ++k) {
        const double d = s * (x - k);
        logits[k] = -(d * d);
    }
    return logits;
}

namespace {
int argmax_first(const std::vector<double>& v) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(v.size()); ++k)
        if (v[k] > v[best]) best = k;
    return best;
}
}  // namespace

int nearest_index(double b, const FsqGrid& grid, int dim) {
    return argmax_first(policy_logits(b, grid, dim));
}

Idx4 nearest_index(const Vec4& b, const FsqGrid& grid) {
    Idx4 idx;
    for (int d = 0; d < kDims; ++d) idx[d] = nearest_index(b[d], grid, d);
    return idx;
}

double dequantize(int idx, const FsqGrid& grid, int dim) {
    if (idx < 0 || idx >= grid.levels[dim]) throw std::out_of_range("dequantize: index out of range");
    return grid.points[dim][idx];
}

Vec4 dequantize(const Idx4& idx, const FsqGrid& grid) {
    Vec4 v;
    for (int d = 0; d < kDims; ++d) v[d] = dequantize(idx[d], grid, d);
    return v;
}

int sample_index(const std::vector<double>& logits, double tau, Rng* noise) {
    if (!(tau > 0.0)) throw std::invalid_argument("sample_index: tau must be positive");
    const int L = static_cast<int>(logits.size());
    int best = 0;
    double best_score = 0.0;
    for (int k = 0; k < L; ++k) {
        double score = logits[k] / tau;
        if (noise) score += noise->gumbel();
        if (k == 0 || score > best_score) {
            best = k;
            best_score = score;
        }
    }
    return best;
}

double log_prob(int idx, const std::vector<double>& logits, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("log_prob: tau must be positive");
    const int L = static_cast<int>(logits.size());
    if (idx < 0 || idx >= L) throw std::out_of_range("log_prob: invalid index");
    double m = logits[0] / tau;
    for (int k = 1; k < L; ++k) m = std::max(m, logits[k] / tau);
    double z = 0.0;
    for (int k = 0; k < L; ++k) z += std::exp(logits[k] / tau - m);
    return logits[idx] / tau - m - std::log(z);
}

PolicyDistribution make_policy(const std::vector<double>& logits, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("make_policy: tau must be positive");
    PolicyDistribution p;
    p.logits = logits;
    p.tau = tau;
    p.probs.resize(logits.size());
    for (size_t k = 0; k < logits.size(); ++k)
        p.probs[k] = std::exp(log_prob(static_cast<int>(k), logits, tau));
    return p;
}

int indices_to_code(const Idx4& idx, const FsqGrid& grid) {
    int code = 0;
    int radix = 1;
    for (int d = 0; d < kDims; ++d) {
        if (idx[d] < 0 || idx[d] >= grid.levels[d]) throw std::out_of_range("indices_to_code: bad index");
        code += idx[d] * radix;
        radix *= grid.levels[d];
    }
    return code;
}

Idx4 code_to_indices(int code, const FsqGrid& grid) {
    int total = 1;
    for (int d = 0; d < kDims; ++d) total *= grid.levels[d];
    if (code < 0 || code >= total) throw std::out_of_range("code_to_indices: code out of range");
    Idx4 idx;
    for (int d = 0; d < kDims; ++d) {
        idx[d] = code % grid.levels[d];
        code /= grid.levels[d];
    }
    return idx;
}

ResidualQuantizer::ResidualQuantizer() {
    const std::vector<int> levels(kDims, kLevels);
    layer1_ = FsqGrid::uniform(levels, 0.0, 1.0);
    const double half = layer1_.spacing(0) / 2.0;  // 1/14: the layer-1 rounding range
    layer2_ = FsqGrid::uniform(levels, -half, half);
    bits_per_layer_ = 0;
    for (int L : levels) {
        int bits = 0;
        while ((1 << bits) < L) ++bits;
        if ((1 << bits) != L) throw std::invalid_argument("quantizer: levels must be powers of two");
        bits_per_layer_ += bits;
    }
}

QuantResult ResidualQuantizer::quantize(const Vec4& z) const { return quantize_bounded(bound(z)); }

QuantResult ResidualQuantizer::quantize_bounded(const Vec4& b) const {
    QuantResult r;
    for (int d = 0; d < kDims; ++d) {
        r.idx1[d] = nearest_index(b[d], layer1_, d);
        const double q1 = dequantize(r.idx1[d], layer1_, d);
        r.idx2[d] = nearest_index(b[d] - q1, layer2_, d);
        r.value[d] = q1 + dequantize(r.idx2[d], layer2_, d);
    }
    r.frame.code1 = static_cast<uint16_t>(indices_to_code(r.idx1, layer1_));
    r.frame.code2 = static_cast<uint16_t>(indices_to_code(r.idx2, layer2_));
    return r;
}

SampleResult ResidualQuantizer::sample_bounded(const Vec4& b, double tau, Rng* noise) const {
    SampleResult r;
    r.logp = 0.0;
    for (int d = 0; d < kDims; ++d) {
        const auto l1 = policy_logits(b[d], layer1_, d);
        r.idx1[d] = sample_index(l1, tau, noise);
        r.logp += log_prob(r.idx1[d], l1, tau);
        const double q1 = dequantize(r.idx1[d], layer1_, d);
        const auto l2 = policy_logits(b[d] - q1, layer2_, d);
        r.idx2[d] = sample_index(l2, tau, noise);
        r.logp += log_prob(r.idx2[d], l2, tau);
        r.value[d] = q1 + dequantize(r.idx2[d], layer2_, d);
    }
    r.frame.code1 = static_cast<uint16_t>(indices_to_code(r.idx1, layer1_));
    r.frame.code2 = static_cast<uint16_t>(indices_to_code(r.idx2, layer2_));
    return r;
}

Vec4 ResidualQuantizer::decode_frame(const TokenFrame& f) const {
    const Idx4 i1 = code_to_indices(f.code1, layer1_);
    const Idx4 i2 = code_to_indices(f.code2, layer2_);
    Vec4 v;
    for (int d = 0; d < kDims; ++d) v[d] = dequantize(i1[d], layer1_, d) + dequantize(i2[d], layer2_, d);
    return v;
}

Vec4 ResidualQuantizer::logp_grad_bounded(const Vec4& b, const Idx4& idx1, const Idx4& idx2, double tau) const {
    Vec4 grad{};
    for (int d = 0; d < kDims; ++d) {
        const auto l1 = policy_logits(b[d], layer1_, d);
        const auto p1 = make_policy(l1, tau).probs;
        double g = 0.0;
        for (int k = 0; k < kLevels; ++k) {
            const double dlogit = -2.0 * (b[d] - layer1_.points[d][k]);
            const double coeff = ((k == idx1[d]) ? 1.0 : 0.0) - p1[k];
            g += coeff / tau * dlogit;
        }
        const double q1 = dequantize(idx1[d], layer1_, d);
        const double r = b[d] - q1;  // d r / d b = 1 with the action fixed
        const auto l2 = policy_logits(r, layer2_, d);
        const auto p2 = make_policy(l2, tau).probs;
        for (int k = 0; k < kLevels; ++k) {
            const double dlogit = -2.0 * (r - layer2_.points[d][k]);
            const double coeff = ((k == idx2[d]) ? 1.0 : 0.0) - p2[k];
            g += coeff / tau * dlogit;
        }
        grad[d] = g;
    }
    return grad;
}

uint64_t ResidualQuantizer::grid_hash() const {
    uint64_t h = 0xCBF29CE484222325ull;
    for (const auto& grid : {layer1_, layer2_})
        for (const auto& pts : grid.points) h = hash_doubles(pts, h);
    return h;
}

}  // namespace clc::quant
