#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace oscicell::lgca {

// Six channel directions at 60-degree increments; channel i moves a particle
// to the axial-coordinate neighbor AXIAL_OFFSET[i].
inline constexpr int kChannels = 6;
extern const std::array<std::array<int, 2>, 6> kAxialOffset;
extern const std::array<std::array<double, 2>, 6> kUnitDir;

struct Channel {
  double theta = 0.0;
  std::int32_t id = -1;  // -1 = empty
  bool occupied() const { return id >= 0; }
};

// Periodic hexagonal lattice, axial coordinates (q, r); node index = r*width+q.
struct HexLattice {
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  std::int64_t step_count = 0;
  std::vector<std::array<Channel, kChannels>> nodes;

  HexLattice() = default;
  HexLattice(int w, int h, std::uint64_t s)
      : width(w), height(h), seed(s),
        nodes(static_cast<std::size_t>(w) * h) {}

  int node_index(int q, int r) const { return r * width + q; }
  int neighbor(int node, int dir) const;
  int particle_count() const;
};

struct LgcaParams {
  double J0 = 0.0;
  double J = 0.0;
  double K = 0.0;
  double omega = 0.0;
  int n_substeps = 10;
  bool clock_before_propagation = false;  // sub-phase order switch
};

// Exactly round(confluency * width * height * 6) particles placed uniformly at
// random into distinct channels, phases iid uniform [0, 2pi). Deterministic
// given seed. Throws ValidationError for confluency outside (0, 1].
HexLattice init_random(int width, int height, double confluency,
                       std::uint64_t seed);

// Per-direction phases of the particles in the six adjacent nodes.
struct NeighborContext {
  std::array<std::vector<double>, kChannels> phases;
};
NeighborContext gather_neighbors(const HexLattice& lat, int node);

// H = sum_i sum_neighbors c_i . p_nb (J0 + J cos(theta_nb - theta_i)) for the
// given injective assignment of resident particles to channels.
double node_energy(std::span<const double> resident_theta,
                   std::span<const int> assignment, const NeighborContext& ctx,
                   double J0, double J);

// Per node: enumerate all injective channel assignments of its residents,
// sample one with probability exp(H)/Z (max-H shifted), reading the pre-step
// neighbor configuration. One RNG draw per occupied node from the stream
// hash(seed, step, node).
void interaction_step(HexLattice& lat, double J0, double J, int threads = 1);

// Every particle moves one site along its channel direction, periodic wrap.
void propagation_step(HexLattice& lat);

// n_substeps synchronous Kuramoto updates, dt = 1/n: dtheta_i = (omega +
// K/N_i sum_j sin(theta_j - theta_i)) dt over the particles in the six
// adjacent nodes plus the other residents of the same node.
void clock_step(HexLattice& lat, double K, double omega, int n_substeps,
                int threads = 1);

// interaction -> propagation -> clock (or clock before propagation when
// configured); increments step_count.
void lgca_step(HexLattice& lat, const LgcaParams& p, int threads = 1);

struct Metrics {
  double r = 0.0;
  double r_local = 0.0;
  int N = 0;
};
// Throws DegenerateField when the lattice holds no particles. r_local averages
// |mean e^{i theta}| over each node's six neighbors plus the node itself,
// skipping nodes whose combined neighborhood is empty.
Metrics metrics(const HexLattice& lat);

// Binary PPM (P6): one small hexagonal tile per node, hue = circular mean
// phase of the residents, brightness scaled by occupancy/6; empty nodes black.
std::vector<std::uint8_t> render_ppm(const HexLattice& lat, int tile_px = 8);

}  // namespace oscicell::lgca
