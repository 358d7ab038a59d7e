#include "msa/topology.hpp"

#include <cmath>

#include "msa/sim_engine.hpp"

namespace msa {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;

Link draw_link(double side, double r0, Rng& rng) {
  Link l;
  l.tx_x = rng.uniform(0.0, side);
  l.tx_y = rng.uniform(0.0, side);
  const double angle = rng.uniform(0.0, kTwoPi);
  l.rx_x = l.tx_x + r0 * std::cos(angle);
  l.rx_y = l.tx_y + r0 * std::sin(angle);
  return l;
}
}  // namespace

Topology sample_topology(const SystemParams& params, const SimConfig& config, Rng& rng) {
  Topology topo;
  topo.window_side = config.window_side;
  topo.margin = config.margin;
  const int count = rng.poisson(params.density_lambda * config.window_side * config.window_side);
  topo.links.reserve(count);
  for (int i = 0; i < count; ++i)
    topo.links.push_back(draw_link(config.window_side, params.link_distance_r0, rng));
  return topo;
}

void resample_positions(Topology& topology, const SystemParams& params, Rng& rng) {
  for (auto& link : topology.links)
    link = draw_link(topology.window_side, params.link_distance_r0, rng);
}

}  // namespace msa
