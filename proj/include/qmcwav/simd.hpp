#pragma once

#include <cstddef>
#include <string>

namespace qmcwav::simd {

// sum_r w[r] * v^a * (v + shift)^c with v = lo + h * u[r]; a == 0 drops the
// first factor. All v must be positive.
using PowerSumFn = double (*)(const double* u, const double* w, int n, double lo, double h, double a,
                              double shift, double c);
// out[i] = (x[i] - t)_+^e. e == 0 gives the indicator of x > t; e < 0 at
// x == t gives +inf.
using ShiftedPowerFn = void (*)(const double* x, std::size_t n, double t, double e, double* out);
using DotFn = double (*)(const double* a, const double* b, std::size_t n);
// out[i] = a[i] * b[i]
using MulFn = void (*)(const double* a, const double* b, double* out, std::size_t n);

struct Kernels {
  const char* name;
  PowerSumFn power_sum;
  ShiftedPowerFn shifted_power;
  DotFn dot;
  MulFn mul;
};

const Kernels& scalar_kernels();
// nullptr when not compiled in or not supported by this CPU.
const Kernels* avx2_kernels();

// Best available set; QMCWAV_SIMD=scalar in the environment forces the
// reference kernels.
const Kernels& active();
// "scalar" or "avx2"; throws ValidationError if unavailable.
void select(const std::string& name);

}  // namespace qmcwav::simd
