#pragma once

#include <cstddef>
#include <vector>

#include "msa/params.hpp"
#include "msa/rng.hpp"

namespace msa {

struct SimConfig; // sim_engine.hpp

struct Link {
  double tx_x, tx_y;
  double rx_x, rx_y;
};

// One sampled bipolar topology: transmitters from a PPP over the square
// window, each receiver at distance r0 under a uniform orientation. Receivers
// of edge links may fall outside the window; that is fine, only transmitter
// positions decide interior membership.
struct Topology {
  std::vector<Link> links;
  double window_side = 0.0;
  double margin = 0.0;

  bool interior(size_t i) const {
    const Link& l = links[i];
    return l.tx_x >= margin && l.tx_x <= window_side - margin &&
           l.tx_y >= margin && l.tx_y <= window_side - margin;
  }
};

// Poisson(lambda * side^2) transmitter count, uniform positions, uniform
// orientations. Draw order: count, then per link x, y, angle.
Topology sample_topology(const SystemParams& params, const SimConfig& config, Rng& rng);

// Re-draws every link in place (rigid pair, fresh position and orientation);
// used by the high-mobility mode between slots. Queue state is unaffected:
// queues belong to links, not locations.
void resample_positions(Topology& topology, const SystemParams& params, Rng& rng);

}  // namespace msa
