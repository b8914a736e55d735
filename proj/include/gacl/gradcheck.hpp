#pragma once

#include "gacl/matrix.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace gacl {

/// Central-difference check of analytic gradients.
///
/// loss_fn(true) must zero the params' grad buffers, run forward + backward,
/// and return the loss; loss_fn(false) must return the loss without touching
/// gradients. A random subsample of at least min_coords coordinates per tensor
/// is probed (all of them for small tensors). Returns the max over probed
/// coordinates of |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
/// Throws on a non-finite loss.
double finite_diff_check(const std::function<double(bool)>& loss_fn,
                         std::span<ParamTensor* const> params,
                         double h = 1e-5,
                         int min_coords = 64,
                         std::uint64_t seed = 12345);

} // namespace gacl
