#pragma once

#include <cstddef>

namespace clc::kernels {

// Every parallel kernel computes each output element with the same arithmetic
// as its serial reference, so results are bit-identical for any thread count.
// The toggle exists for the benchmark tool and the parity tests.
void set_parallel(bool on);
bool parallel_enabled();
int max_threads();

struct Conv1dShape {
    int t_in = 0;
    int c_in = 0;
    int c_out = 0;
    int kernel = 1;
    int stride = 1;
    int groups = 1;
    int pad_left = 0;  // zero padding; right side implied by t_out
    int t_out = 0;
};

// x: [t_in x c_in] row-major; w: [c_out][c_in/groups][kernel]; y: [t_out x c_out]
void conv1d_forward(const Conv1dShape& s, const double* x, const double* w, const double* bias, double* y);
// dx accumulated from scratch (overwritten); dw/db accumulated in place
void conv1d_backward_input(const Conv1dShape& s, const double* w, const double* dy, double* dx);
void conv1d_backward_params(const Conv1dShape& s, const double* x, const double* dy, double* dw, double* db);

namespace serial {
void conv1d_forward(const Conv1dShape& s, const double* x, const double* w, const double* bias, double* y);
void conv1d_backward_input(const Conv1dShape& s, const double* w, const double* dy, double* dx);
void conv1d_backward_params(const Conv1dShape& s, const double* x, const double* dy, double* dw, double* db);
}  // namespace serial

namespace par {
void conv1d_forward(const Conv1dShape& s, const double* x, const double* w, const double* bias, double* y);
void conv1d_backward_input(const Conv1dShape& s, const double* w, const double* dy, double* dx);
void conv1d_backward_params(const Conv1dShape& s, const double* x, const double* dy, double* dw, double* db);
}  // namespace par

}  // namespace clc::kernels
