#include "clc/kernels.hpp"

#include <atomic>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clc::kernels {

namespace {
std::atomic<bool> g_parallel{true};

// below this many multiply-adds the fork/join overhead dominates
constexpr int64_t kParallelMinWork = 1 << 15;

int64_t conv_work(const Conv1dShape& s) {
    return static_cast<int64_t>(s.t_out) * s.c_out * (s.c_in / s.groups) * s.kernel;
}
}  // namespace

void set_parallel(bool on) { g_parallel.store(on); }
bool parallel_enabled() { return g_parallel.load(); }

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

inline void conv_forward_row(const Conv1dShape& s, const double* x, const double* w, const double* bias,
                             double* y, int t) {
    const int cin_g = s.c_in / s.groups;
    const int cout_g = s.c_out / s.groups;
    double* yr = y + static_cast<size_t>(t) * s.c_out;
    for (int o = 0; o < s.c_out; ++o) {
        const int g = o / cout_g;
        const int ibase = g * cin_g;
        const double* wo = w + static_cast<size_t>(o) * cin_g * s.kernel;
        double acc = bias ? bias[o] : 0.0;
        for (int i = 0; i < cin_g; ++i) {
            const double* wi = wo + static_cast<size_t>(i) * s.kernel;
            for (int k = 0; k < s.kernel; ++k) {
                const int src = t * s.stride + k - s.pad_left;
                if (src < 0 || src >= s.t_in) continue;
                acc += wi[k] * x[static_cast<size_t>(src) * s.c_in + ibase + i];
            }
        }
        yr[o] = acc;
    }
}

inline void conv_backward_input_row(const Conv1dShape& s, const double* w, const double* dy, double* dx,
                                    int src) {
    const int cin_g = s.c_in / s.groups;
    const int cout_g = s.c_out / s.groups;
    double* dxr = dx + static_cast<size_t>(src) * s.c_in;
    for (int ci = 0; ci < s.c_in; ++ci) {
        const int g = ci / cin_g;
        const int i = ci - g * cin_g;
        double acc = 0.0;
        for (int oo = 0; oo < cout_g; ++oo) {
            const int o = g * cout_g + oo;
            const double* wo = w + (static_cast<size_t>(o) * cin_g + i) * s.kernel;
            for (int k = 0; k < s.kernel; ++k) {
                const int num = src + s.pad_left - k;
                if (num < 0 || num % s.stride != 0) continue;
                const int t = num / s.stride;
                if (t >= s.t_out) continue;
                acc += wo[k] * dy[static_cast<size_t>(t) * s.c_out + o];
            }
        }
        dxr[ci] = acc;
    }
}

inline void conv_backward_params_ch(const Conv1dShape& s, const double* x, const double* dy, double* dw,
                                    double* db, int o) {
    const int cin_g = s.c_in / s.groups;
    const int cout_g = s.c_out / s.groups;
    const int g = o / cout_g;
    const int ibase = g * cin_g;
    double* dwo = dw + static_cast<size_t>(o) * cin_g * s.kernel;
    double dbacc = 0.0;
    for (int t = 0; t < s.t_out; ++t) {
        const double gy = dy[static_cast<size_t>(t) * s.c_out + o];
        dbacc += gy;
        for (int i = 0; i < cin_g; ++i) {
            for (int k = 0; k < s.kernel; ++k) {
                const int src = t * s.stride + k - s.pad_left;
                if (src < 0 || src >= s.t_in) continue;
                dwo[static_cast<size_t>(i) * s.kernel + k] +=
                    gy * x[static_cast<size_t>(src) * s.c_in + ibase + i];
            }
        }
    }
    if (db) db[o] += dbacc;
}

}  // namespace

namespace serial {

void conv1d_forward(const Conv1dShape& s, const double* x, const double* w, const double* bias, double* y) {
    for (int t = 0; t < s.t_out; ++t) conv_forward_row(s, x, w, bias, y, t);
}

void conv1d_backward_input(const Conv1dShape& s, const double* w, const double* dy, double* dx) {
    for (int src = 0; src < s.t_in; ++src) conv_backward_input_row(s, w, dy, dx, src);
}

void conv1d_backward_params(const Conv1dShape& s, const double* x, const double* dy, double* dw, double* db) {
    for (int o = 0; o < s.c_out; ++o) conv_backward_params_ch(s, x, dy, dw, db, o);
}

}  // namespace serial

namespace par {

void conv1d_forward(const Conv1dShape& s, const double* x, const double* w, const double* bias, double* y) {
#pragma omp parallel for schedule(static)
    for (int t = 0; t < s.t_out; ++t) conv_forward_row(s, x, w, bias, y, t);
}

void conv1d_backward_input(const Conv1dShape& s, const double* w, const double* dy, double* dx) {
#pragma omp parallel for schedule(static)
    for (int src = 0; src < s.t_in; ++src) conv_backward_input_row(s, w, dy, dx, src);
}

void conv1d_backward_params(const Conv1dShape& s, const double* x, const double* dy, double* dw, double* db) {
#pragma omp parallel for schedule(static)
    for (int o = 0; o < s.c_out; ++o) conv_backward_params_ch(s, x, dy, dw, db, o);
}

}  // namespace par

void conv1d_forward(const Conv1dShape& s, const double* x, const double* w, const double* bias, double* y) {
    if (parallel_enabled() && conv_work(s) >= kParallelMinWork)
        par::conv1d_forward(s, x, w, bias, y);
    else
        serial::conv1d_forward(s, x, w, bias, y);
}

void conv1d_backward_input(const Conv1dShape& s, const double* w, const double* dy, double* dx) {
    if (parallel_enabled() && conv_work(s) >= kParallelMinWork)
        par::conv1d_backward_input(s, w, dy, dx);
    else
        serial::conv1d_backward_input(s, w, dy, dx);
}

void conv1d_backward_params(const Conv1dShape& s, const double* x, const double* dy, double* dw, double* db) {
    if (parallel_enabled() && conv_work(s) >= kParallelMinWork)
        par::conv1d_backward_params(s, x, dy, dw, db);
    else
        serial::conv1d_backward_params(s, x, dy, dw, db);
}

}  // namespace clc::kernels
