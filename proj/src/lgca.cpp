#include "oscicell/lgca.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "oscicell/errors.hpp"
#include "oscicell/parallel.hpp"
#include "oscicell/rng.hpp"

namespace oscicell::lgca {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}
}  // namespace

// Channel i points at angle 60*i degrees; axial basis x = q + r/2, y = r*sqrt3/2.
const std::array<std::array<int, 2>, 6> kAxialOffset = {{
    {1, 0},    // 0deg
    {0, 1},    // 60deg
    {-1, 1},   // 120deg
    {-1, 0},   // 180deg
    {0, -1},   // 240deg
    {1, -1},   // 300deg
}};

const std::array<std::array<double, 2>, 6> kUnitDir = {{
    {1.0, 0.0},
    {0.5, 0.8660254037844386},
    {-0.5, 0.8660254037844386},
    {-1.0, 0.0},
    {-0.5, -0.8660254037844386},
    {0.5, -0.8660254037844386},
}};

int HexLattice::neighbor(int node, int dir) const {
  const int q = node % width;
  const int r = node / width;
  const int nq = (q + kAxialOffset[dir][0] + width) % width;
  const int nr = (r + kAxialOffset[dir][1] + height) % height;
  return nr * width + nq;
}

int HexLattice::particle_count() const {
  int n = 0;
  for (const auto& node : nodes)
    for (const auto& ch : node)
      if (ch.occupied()) ++n;
  return n;
}

HexLattice init_random(int width, int height, double confluency,
                       std::uint64_t seed) {
  if (width < 2 || height < 2)
    throw ValidationError("lattice must be at least 2x2");
  if (!(confluency > 0.0 && confluency <= 1.0))
    throw ValidationError("confluency must lie in (0, 1]");
  HexLattice lat(width, height, seed);
  const std::int64_t slots =
      static_cast<std::int64_t>(width) * height * kChannels;
  const std::int64_t n =
      std::llround(confluency * static_cast<double>(slots));

  // partial Fisher-Yates over all channel slots picks n distinct ones
  std::vector<std::int64_t> perm(slots);
  for (std::int64_t i = 0; i < slots; ++i) perm[i] = i;
  Rng rng = substream(seed, 0x696e6974ULL, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t j =
        i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(slots - i)));
    std::swap(perm[i], perm[j]);
  }
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t slot = perm[i];
    Channel& ch = lat.nodes[slot / kChannels][slot % kChannels];
    ch.id = static_cast<std::int32_t>(i);
    ch.theta = rng.uniform(0.0, kTwoPi);
  }
  return lat;
}

NeighborContext gather_neighbors(const HexLattice& lat, int node) {
  NeighborContext ctx;
  for (int d = 0; d < kChannels; ++d) {
    const auto& nb = lat.nodes[lat.neighbor(node, d)];
    for (const auto& ch : nb)
      if (ch.occupied()) ctx.phases[d].push_back(ch.theta);
  }
  return ctx;
}

namespace {

// per-particle channel weights: w[p][c] = sum_d (c_c . u_d) * phi[p][d],
// phi[p][d] = sum over particles in neighbor d of (J0 + J cos(theta_nb - theta_p))
void particle_channel_weights(std::span<const double> theta,
                              const NeighborContext& ctx, double J0, double J,
                              double w[][kChannels]) {
  // dot(c_i, u_d) = cos(60deg * (i - d))
  static constexpr double dot6[6] = {1.0, 0.5, -0.5, -1.0, -0.5, 0.5};
  for (std::size_t p = 0; p < theta.size(); ++p) {
    double phi[kChannels];
    for (int d = 0; d < kChannels; ++d) {
      double acc = 0.0;
      for (const double tn : ctx.phases[d])
        acc += J0 + J * std::cos(tn - theta[p]);
      phi[d] = acc;
    }
    for (int c = 0; c < kChannels; ++c) {
      double acc = 0.0;
      for (int d = 0; d < kChannels; ++d) acc += dot6[((c - d) % 6 + 6) % 6] * phi[d];
      w[p][c] = acc;
    }
  }
}

}  // namespace

double node_energy(std::span<const double> resident_theta,
                   std::span<const int> assignment, const NeighborContext& ctx,
                   double J0, double J) {
  const std::size_t m = resident_theta.size();
  if (assignment.size() != m)
    throw ValidationError("assignment size must match resident count");
  double w[kChannels][kChannels];
  particle_channel_weights(resident_theta, ctx, J0, J, w);
  double h = 0.0;
  for (std::size_t p = 0; p < m; ++p) {
    const int c = assignment[p];
    if (c < 0 || c >= kChannels)
      throw ValidationError("assignment channel out of range");
    for (std::size_t q = 0; q < p; ++q)
      if (assignment[q] == c)
        throw ValidationError("assignment must be injective");
    h += w[p][c];
  }
  return h;
}

void interaction_step(HexLattice& lat, double J0, double J, int threads) {
  const HexLattice before = lat;
  const std::size_t nn = lat.nodes.size();

  parallel_for(nn, threads, [&](std::size_t b, std::size_t e) {
    // enumeration state local to the worker
    double theta[kChannels];
    std::int32_t ids[kChannels];
    int assign[kChannels];
    bool used[kChannels];
    std::vector<double> energy;
    std::vector<std::array<std::int8_t, kChannels>> choice;
    energy.reserve(720);
    choice.reserve(720);

    for (std::size_t node = b; node < e; ++node) {
      const auto& src = before.nodes[node];
      int m = 0;
      for (int c = 0; c < kChannels; ++c) {
        if (src[c].occupied()) {
          theta[m] = src[c].theta;
          ids[m] = src[c].id;
          ++m;
        }
      }
      if (m == 0) continue;

      const NeighborContext ctx =
          gather_neighbors(before, static_cast<int>(node));
      double w[kChannels][kChannels];
      particle_channel_weights({theta, static_cast<std::size_t>(m)}, ctx, J0, J,
                               w);

      energy.clear();
      choice.clear();
      std::fill(used, used + kChannels, false);
      // lexicographic enumeration of injective assignments
      auto enumerate = [&](auto&& self, int p, double h) -> void {
        if (p == m) {
          energy.push_back(h);
          std::array<std::int8_t, kChannels> a{};
          for (int i = 0; i < m; ++i) a[i] = static_cast<std::int8_t>(assign[i]);
          choice.push_back(a);
          return;
        }
        for (int c = 0; c < kChannels; ++c) {
          if (used[c]) continue;
          used[c] = true;
          assign[p] = c;
          self(self, p + 1, h + w[p][c]);
          used[c] = false;
        }
      };
      enumerate(enumerate, 0, 0.0);

      double hmax = energy[0];
      for (const double h : energy) hmax = std::max(hmax, h);
      double z = 0.0;
      for (double& h : energy) {
        h = std::exp(h - hmax);
        z += h;
      }
      Rng rng = substream(lat.seed, static_cast<std::uint64_t>(lat.step_count),
                          node);
      const double u = rng.u01() * z;
      std::size_t pick = energy.size() - 1;
      double cum = 0.0;
      for (std::size_t a = 0; a < energy.size(); ++a) {
        cum += energy[a];
        if (u < cum) {
          pick = a;
          break;
        }
      }

      auto& dst = lat.nodes[node];
      for (int c = 0; c < kChannels; ++c) dst[c] = Channel{};
      for (int p = 0; p < m; ++p) {
        Channel& ch = dst[choice[pick][p]];
        ch.theta = theta[p];
        ch.id = ids[p];
      }
    }
  });
}

void propagation_step(HexLattice& lat) {
  std::vector<std::array<Channel, kChannels>> next(lat.nodes.size());
  for (std::size_t node = 0; node < lat.nodes.size(); ++node) {
    for (int c = 0; c < kChannels; ++c) {
      const Channel& ch = lat.nodes[node][c];
      if (!ch.occupied()) continue;
      next[lat.neighbor(static_cast<int>(node), c)][c] = ch;
    }
  }
  lat.nodes.swap(next);
}

void clock_step(HexLattice& lat, double K, double omega, int n_substeps,
                int threads) {
  if (n_substeps < 1) throw ValidationError("n_substeps must be >= 1");
  const double dt = 1.0 / n_substeps;
  const std::size_t nn = lat.nodes.size();
  std::vector<double> node_cos(nn), node_sin(nn);
  std::vector<int> node_cnt(nn);
  std::vector<double> dtheta(nn * kChannels);

  for (int sub = 0; sub < n_substeps; ++sub) {
    parallel_for(nn, threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t node = b; node < e; ++node) {
        double cs = 0.0, sn = 0.0;
        int cnt = 0;
        for (const auto& ch : lat.nodes[node]) {
          if (!ch.occupied()) continue;
          cs += std::cos(ch.theta);
          sn += std::sin(ch.theta);
          ++cnt;
        }
        node_cos[node] = cs;
        node_sin[node] = sn;
        node_cnt[node] = cnt;
      }
    });
    parallel_for(nn, threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t node = b; node < e; ++node) {
        double cs = node_cos[node], sn = node_sin[node];
        int cnt = node_cnt[node];
        for (int d = 0; d < kChannels; ++d) {
          const int nb = lat.neighbor(static_cast<int>(node), d);
          cs += node_cos[nb];
          sn += node_sin[nb];
          cnt += node_cnt[nb];
        }
        for (int c = 0; c < kChannels; ++c) {
          const Channel& ch = lat.nodes[node][c];
          if (!ch.occupied()) continue;
          const int ni = cnt - 1;  // neighbors exclude the particle itself
          double coupling = 0.0;
          if (ni > 0) {
            // sum_j sin(theta_j - theta_i); the self term is zero, so the
            // aggregates can include it
            coupling =
                K / ni * (sn * std::cos(ch.theta) - cs * std::sin(ch.theta));
          }
          dtheta[node * kChannels + c] = (omega + coupling) * dt;
        }
      }
    });
    parallel_for(nn, threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t node = b; node < e; ++node)
        for (int c = 0; c < kChannels; ++c) {
          Channel& ch = lat.nodes[node][c];
          if (ch.occupied())
            ch.theta = wrap_2pi(ch.theta + dtheta[node * kChannels + c]);
        }
    });
  }
}

void lgca_step(HexLattice& lat, const LgcaParams& p, int threads) {
  interaction_step(lat, p.J0, p.J, threads);
  if (p.clock_before_propagation) {
    clock_step(lat, p.K, p.omega, p.n_substeps, threads);
    propagation_step(lat);
  } else {
    propagation_step(lat);
    clock_step(lat, p.K, p.omega, p.n_substeps, threads);
  }
  ++lat.step_count;
}

Metrics metrics(const HexLattice& lat) {
  Metrics m;
  double cs = 0.0, sn = 0.0;
  const std::size_t nn = lat.nodes.size();
  std::vector<double> node_cos(nn), node_sin(nn);
  std::vector<int> node_cnt(nn);
  for (std::size_t node = 0; node < nn; ++node) {
    double c = 0.0, s = 0.0;
    int cnt = 0;
    for (const auto& ch : lat.nodes[node]) {
      if (!ch.occupied()) continue;
      c += std::cos(ch.theta);
      s += std::sin(ch.theta);
      ++cnt;
    }
    node_cos[node] = c;
    node_sin[node] = s;
    node_cnt[node] = cnt;
    cs += c;
    sn += s;
    m.N += cnt;
  }
  if (m.N == 0) throw DegenerateField("lattice holds no particles");
  m.r = std::hypot(cs, sn) / m.N;

  double acc = 0.0;
  int contributing = 0;
  for (std::size_t node = 0; node < nn; ++node) {
    double c = node_cos[node], s = node_sin[node];
    int cnt = node_cnt[node];
    for (int d = 0; d < kChannels; ++d) {
      const int nb = lat.neighbor(static_cast<int>(node), d);
      c += node_cos[nb];
      s += node_sin[nb];
      cnt += node_cnt[nb];
    }
    if (cnt == 0) continue;
    acc += std::hypot(c, s) / cnt;
    ++contributing;
  }
  m.r_local = contributing > 0 ? acc / contributing : 0.0;
  return m;
}

namespace {

void hsv_to_rgb(double h, double s, double v, std::uint8_t rgb[3]) {
  h = wrap_2pi(h) / kTwoPi * 6.0;
  const int i = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  double r, g, b;
  switch (i) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  rgb[0] = static_cast<std::uint8_t>(std::lround(255.0 * r));
  rgb[1] = static_cast<std::uint8_t>(std::lround(255.0 * g));
  rgb[2] = static_cast<std::uint8_t>(std::lround(255.0 * b));
}

}  // namespace

std::vector<std::uint8_t> render_ppm(const HexLattice& lat, int tile_px) {
  if (tile_px < 2) throw ValidationError("tile_px must be >= 2");
  const double s = tile_px;                 // horizontal pitch
  const double vy = s * 0.8660254037844386; // vertical pitch (sqrt(3)/2 s)
  const double rc = s / 1.7320508075688772; // hexagon circumradius
  const int W = lat.width * tile_px;
  const int H = static_cast<int>(std::lround(lat.height * vy));
  std::string header =
      "P6\n" + std::to_string(W) + " " + std::to_string(H) + "\n255\n";
  std::vector<std::uint8_t> img(header.size() + 3ull * W * H, 0);
  std::memcpy(img.data(), header.data(), header.size());
  std::uint8_t* px = img.data() + header.size();

  for (int r = 0; r < lat.height; ++r) {
    for (int q = 0; q < lat.width; ++q) {
      const auto& node = lat.nodes[lat.node_index(q, r)];
      double c = 0.0, sN = 0.0;
      int cnt = 0;
      for (const auto& ch : node) {
        if (!ch.occupied()) continue;
        c += std::cos(ch.theta);
        sN += std::sin(ch.theta);
        ++cnt;
      }
      if (cnt == 0) continue;  // stays black
      std::uint8_t rgb[3];
      hsv_to_rgb(std::atan2(sN, c), 1.0, cnt / 6.0, rgb);

      // pointy-top hexagon tiling; axial x offset wraps periodically
      double u = std::fmod(q + 0.5 * r, static_cast<double>(lat.width));
      const double cx = (u + 0.5) * s;
      const double cy = (r + 0.5) * vy;
      const int x0 = static_cast<int>(std::floor(cx - s));
      const int x1 = static_cast<int>(std::ceil(cx + s));
      const int y0 = static_cast<int>(std::floor(cy - s));
      const int y1 = static_cast<int>(std::ceil(cy + s));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double dx = std::fabs(x + 0.5 - cx);
          const double dy = std::fabs(y + 0.5 - cy);
          if (dx > 0.8660254037844386 * rc) continue;
          if (dy > rc - dx / 1.7320508075688772) continue;
          const int xm = ((x % W) + W) % W;
          const int ym = ((y % H) + H) % H;
          std::uint8_t* dst = px + 3ull * (static_cast<std::size_t>(ym) * W + xm);
          dst[0] = rgb[0];
          dst[1] = rgb[1];
          dst[2] = rgb[2];
        }
      }
    }
  }
  return img;
}

}  // namespace oscicell::lgca
