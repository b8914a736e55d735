#include "gacl/gradcheck.hpp"

#include "gacl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gacl {

double finite_diff_check(const std::function<double(bool)>& loss_fn,
                         std::span<ParamTensor* const> params,
                         double h, int min_coords, std::uint64_t seed) {
    if (h < 1e-7 || h > 1e-4) throw std::invalid_argument("finite_diff_check: h outside [1e-7, 1e-4]");

    const double base = loss_fn(true);
    if (!std::isfinite(base)) throw std::runtime_error("finite_diff_check: non-finite loss");

    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (const ParamTensor* p : params) analytic.push_back(p->grad.data);

    Rng rng(seed);
    double max_rel = 0.0;
    for (size_t t = 0; t < params.size(); ++t) {
        ParamTensor* p = params[t];
        const size_t n = p->value.data.size();
        std::vector<size_t> coords;
        if (n <= static_cast<size_t>(min_coords)) {
            coords.resize(n);
            for (size_t i = 0; i < n; ++i) coords[i] = i;
        } else {
            coords.reserve(min_coords);
            for (int i = 0; i < min_coords; ++i) coords.push_back(rng.uniform_index(n));
        }
        for (size_t c : coords) {
            const double saved = p->value.data[c];
            p->value.data[c] = saved + h;
            const double f_plus = loss_fn(false);
            p->value.data[c] = saved - h;
            const double f_minus = loss_fn(false);
            p->value.data[c] = saved;
            if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
                throw std::runtime_error("finite_diff_check: non-finite loss at perturbed point");
            }
            const double numeric = (f_plus - f_minus) / (2.0 * h);
            const double a = analytic[t][c];
            const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
            max_rel = std::max(max_rel, std::abs(a - numeric) / denom);
        }
    }
    return max_rel;
}

} // namespace gacl
