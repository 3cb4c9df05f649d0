#pragma once

#include <cstddef>
#include <string_view>

// Dense double-precision kernels with a portable scalar reference and an
// AVX2+FMA variant. The variant is chosen once per process; results differ
// from the scalar path only by summation order.
namespace saddle::kernels {

enum class Isa { kScalar, kAvx2 };

struct Table {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i w_i x_i y_i
  double (*wdot)(const double* w, const double* x, const double* y,
                 std::size_t n);
  // y += a x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y);
};

const Table& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks it.
const Table* avx2_table();

// Active table. Honors SADDLE_KERNELS=scalar|avx2 on first use.
const Table& active();
std::string_view isa_name(Isa isa);

}  // namespace saddle::kernels
