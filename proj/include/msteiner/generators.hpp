#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "msteiner/instance.hpp"

namespace msteiner::generators {

/// Prize range for prize-collecting output; without one, terminals are SPG terminals.
using PrizeRange = std::optional<std::pair<double, double>>;

/// nx * ny * nz lattice with nearest-neighbour edges, weights uniform in (0, 1],
/// `terminals` vertices sampled without replacement.
Instance grid(std::int32_t nx, std::int32_t ny, std::int32_t nz, std::int32_t terminals, PrizeRange prizes,
              std::uint64_t seed);

/// Barabasi-Albert graph: a clique on m vertices, then every new vertex links to m
/// distinct earlier vertices chosen with probability proportional to degree.
/// Has C(m, 2) + m (n - m) edges.
Instance scale_free(std::int32_t n, std::int32_t m, std::int32_t terminals, PrizeRange prizes, std::uint64_t seed);

}  // namespace msteiner::generators
