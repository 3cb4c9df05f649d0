#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "saddle/problems.hpp"

namespace saddle {

// Plain "key = values" text format, one key per line, '#' comments.
// Saddle instances need quadratic data; VIP instances need polymatrix data.
// Matrices are row-major with their shape given by the dimension keys.
//
//   type = saddle            type = vip
//   kind = ...               kind = ...
//   nx, ny                   dims = d_1 ... d_K
//   hx, gx, a, hy, gy        m, b
//   L = L_x L_xy L_y         L = K x K row-major
//   D = D_x D_y              D = D_1 ... D_K
//   z0, [metric_x, metric_y, psi_x, psi_y, solution]
//
// psi entries: "zero" or "ball r c_1 ... c_n".
void write_instance(std::ostream& os, const SaddleInstance& sp);
void write_instance(std::ostream& os, const VipInstance& vip);

struct LoadedInstance {
  std::optional<SaddleInstance> saddle;
  std::optional<VipInstance> vip;
};

LoadedInstance read_instance(std::istream& is);
LoadedInstance load_instance(const std::string& path);
void save_instance(const std::string& path, const SaddleInstance& sp);
void save_instance(const std::string& path, const VipInstance& vip);

}  // namespace saddle
