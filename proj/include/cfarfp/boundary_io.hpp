#pragma once

// Boundary exchange format (JSON):
//   {"type": "piecewise_linear", "k": int, "m": [...], "eps": [...]}
//   {"type": "tabulated", "beta": [...], "t": [...]}
//   {"type": "spline", "order": int, "control": [[beta, t], ...]}

#include <memory>
#include <string>

#include "cfarfp/boundary.hpp"

namespace cfarfp {

std::string boundary_to_json(const Boundary& b);
std::unique_ptr<Boundary> boundary_from_json(const std::string& text);

std::unique_ptr<Boundary> load_boundary(const std::string& path);
void save_boundary(const Boundary& b, const std::string& path);

}  // namespace cfarfp
