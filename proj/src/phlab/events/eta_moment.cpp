#include "phlab/events/eta_moment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "phlab/common/error.hpp"
#include "phlab/common/parallel.hpp"
#include "phlab/common/quadrature.hpp"
#include "phlab/geometry/configuration.hpp"

namespace phlab {

namespace {

constexpr double kPi = std::numbers::pi;

double segment_area(double r, double a) {
  if (a >= r) return 0.0;
  return r * r * std::acos(a / r) - a * std::sqrt(r * r - a * a);
}

// Area of {x > a, y > b} inside the disk of radius r, a, b >= 0.
double corner_area(double r, double a, double b) {
  if (a * a + b * b >= r * r) return 0.0;
  auto F = [r](double x) {
    const double c = std::clamp(x / r, -1.0, 1.0);
    return 0.5 * (x * std::sqrt(std::max(0.0, r * r - x * x)) + r * r * std::asin(c));
  };
  const double xm = std::sqrt(r * r - b * b);
  return F(xm) - F(a) - b * (xm - a);
}

// Disk of radius r intersected with {x >= -a} and {y >= -b}; infinite a or b
// means no cut.
double cut_disk_area(double r, double a, double b) {
  double area = kPi * r * r - segment_area(r, a) - segment_area(r, b);
  if (std::isfinite(a) && std::isfinite(b)) area += corner_area(r, a, b);
  return area;
}

const QuadratureRule& gl16() {
  static const QuadratureRule rule = gauss_legendre(16);
  return rule;
}

}  // namespace

double cut_ball_volume(int k, const double* tau) {
  if (k < 0 || k > 3) throw InvalidArgument("cut_ball_volume: k must be in [0, 3]");
  const double inf = std::numeric_limits<double>::infinity();
  if (k == 0) return 4.0 * kPi / 3.0;
  if (k == 1) {
    const double t = tau[0];
    return kPi * ((1.0 + t) - (1.0 + t * t * t) / 3.0);
  }
  // Slice along z (last cut); the remaining cuts act in the slice plane.
  const double a = tau[0];
  const double b = k == 3 ? tau[1] : inf;
  const double zlo = -tau[k - 1];
  std::vector<double> breaks{zlo, 1.0};
  auto add = [&](double r2) {
    if (r2 > 0.0 && r2 < 1.0) {
      const double z = std::sqrt(1.0 - r2);
      for (double zz : {-z, z})
        if (zz > zlo && zz < 1.0) breaks.push_back(zz);
    }
  };
  add(a * a);
  if (std::isfinite(b)) {
    add(b * b);
    add(a * a + b * b);
  }
  std::sort(breaks.begin(), breaks.end());
  const QuadratureRule& q = gl16();
  double v = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double z = mid + half * q.nodes[i];
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      v += half * q.weights[i] * cut_disk_area(r, a, b);
    }
  }
  return v;
}

namespace {

// Cut-ball volumes at tensor Gauss-Legendre nodes on [0,1]^k, k = 1..3.
struct CutBallTable {
  std::vector<double> v[4];
  std::vector<double> w[4];
  CutBallTable() {
    v[0] = {4.0 * kPi / 3.0};
    w[0] = {1.0};
    const int orders[4] = {1, 32, 24, 16};
    for (int k = 1; k <= 3; ++k) {
      const QuadratureRule q = gauss_legendre(orders[k], 0.0, 1.0);
      const int n = orders[k];
      const int total = k == 1 ? n : (k == 2 ? n * n : n * n * n);
      v[k].resize(total);
      w[k].resize(total);
      for (int idx = 0; idx < total; ++idx) {
        double tau[3] = {0, 0, 0};
        double weight = 1.0;
        int rem = idx;
        for (int d = 0; d < k; ++d) {
          tau[d] = q.nodes[rem % n];
          weight *= q.weights[rem % n];
          rem /= n;
        }
        v[k][idx] = cut_ball_volume(k, tau);
        w[k][idx] = weight;
      }
    }
  }
};

const CutBallTable& cut_table() {
  static const CutBallTable table;
  return table;
}

}  // namespace

double uniform_box_nn_survival(const Box& box, std::size_t n, double s) {
  if (n < 2) return 1.0;
  if (s <= 0.0) return 1.0;
  const Vec3 L = box.extent();
  if (s > 0.5 * L.minCoeff()) throw DomainError("uniform_box_nn_survival: s exceeds half the smallest side");
  const double vol = box.volume();
  const double m = static_cast<double>(n - 1);
  // Per axis: interior fraction (L - 2s)/L where the ball is uncut, boundary
  // fraction 2s/L where the cut depth is uniform on [0, s].
  double in[3], bd[3];
  for (int d = 0; d < 3; ++d) {
    bd[d] = 2.0 * s / L[d];
    in[d] = 1.0 - bd[d];
  }
  const double e[4] = {in[0] * in[1] * in[2],
                       bd[0] * in[1] * in[2] + in[0] * bd[1] * in[2] + in[0] * in[1] * bd[2],
                       bd[0] * bd[1] * in[2] + bd[0] * in[1] * bd[2] + in[0] * bd[1] * bd[2],
                       bd[0] * bd[1] * bd[2]};
  const CutBallTable& t = cut_table();
  const double s3 = s * s * s;
  double p = 0.0;
  for (int k = 0; k <= 3; ++k) {
    if (e[k] == 0.0) continue;
    double avg = 0.0;
    for (std::size_t i = 0; i < t.v[k].size(); ++i) {
      const double frac = std::min(1.0, s3 * t.v[k][i] / vol);
      avg += t.w[k][i] * std::exp(m * std::log1p(-frac));
    }
    p += e[k] * avg;
  }
  return std::clamp(p, 0.0, 1.0);
}

namespace {

// Composite Simpson on a geometric grid in s over [s_min, cap] of
// g(s) = |kappa| s^kappa * tailprob(s) d(log s), doubling from 400 nodes
// until the relative change is below 1e-3.
template <typename Prob>
double layer_cake_integral(double kappa, double cap, Prob&& prob) {
  const double s_min = cap * 1e-5;
  const double lo = std::log(s_min), hi = std::log(cap);
  auto integrand = [&](double u) {
    const double s = std::exp(u);
    return std::abs(kappa) * std::pow(s, kappa) * prob(s);
  };
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int intervals = 400; intervals <= 409600; intervals *= 2) {
    const double h = (hi - lo) / intervals;
    double acc = integrand(lo) + integrand(hi);
    for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(lo + i * h);
    const double value = acc * h / 3.0;
    if (std::isfinite(prev) && std::abs(value - prev) <= 1e-3 * std::abs(value)) return value;
    prev = value;
  }
  throw NumericalError("eta_moment: layer-cake quadrature did not converge");
}

}  // namespace

std::vector<double> sample_eta(const DensityModel& density, std::size_t n, double beta, double m_eta,
                               std::size_t trials, std::uint64_t seed, unsigned threads) {
  const double cap = m_eta * std::pow(ParticleConfiguration::eps_for(n), beta);
  std::vector<double> eta(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    RandomStream rng = RandomStream::derive(seed, {t});
    const Vec3 x0 = density.sample(rng);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < n; ++j) best = std::min(best, (density.sample(rng) - x0).squaredNorm());
    eta[t] = std::min(cap, std::sqrt(best));
  });
  return eta;
}

EtaMomentResult eta_moment_from_samples(const std::vector<double>& eta, double kappa, double cap) {
  if (eta.empty()) throw InvalidArgument("eta_moment: no samples");
  std::vector<double> v(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) v[i] = kappa == 0.0 ? 1.0 : std::pow(eta[i], kappa);
  const double n = static_cast<double>(v.size());
  const double mean = pairwise_sum(v) / n;
  for (double& x : v) x = (x - mean) * (x - mean);
  const double var = v.size() > 1 ? pairwise_sum(v) / (n - 1.0) : 0.0;
  EtaMomentResult r;
  r.value = mean;
  r.std_error = std::sqrt(var / n);
  r.trials = eta.size();
  // eta <= cap pointwise, so the moment is bounded by cap^kappa from the
  // appropriate side.
  const double ck = std::pow(cap, kappa);
  const double slack = 1e-12 * ck;
  if ((kappa < 0.0 && mean < ck - slack) || (kappa > 0.0 && mean > ck + slack))
    throw NumericalError("eta_moment: pointwise bound eta <= m_eta eps^beta violated");
  return r;
}

EtaMomentResult eta_moment(const DensityModel& density, std::size_t n, double beta, double m_eta, double kappa,
                           std::size_t trials, EtaMode mode, std::uint64_t seed, unsigned threads) {
  if (!(kappa > -3.0) || !std::isfinite(kappa)) throw DomainError("eta_moment: kappa must be > -3");
  if (!(beta >= 1.0)) throw DomainError("eta_moment: beta must be >= 1");
  if (!(m_eta > 0.0 && m_eta <= 1.0)) throw DomainError("eta_moment: m_eta must lie in (0, 1]");
  if (n == 0) throw InvalidArgument("eta_moment: N must be >= 1");
  if (trials == 0 && !(mode == EtaMode::kLayerCake && density.kind() == DensityModel::Kind::kUniformBox))
    throw InvalidArgument("eta_moment: trials must be >= 1");
  const double cap = m_eta * std::pow(ParticleConfiguration::eps_for(n), beta);

  if (kappa == 0.0) {
    EtaMomentResult r;
    r.value = 1.0;
    r.trials = trials;
    r.exact_distribution = mode == EtaMode::kLayerCake;
    return r;
  }

  if (mode == EtaMode::kMonteCarlo)
    return eta_moment_from_samples(sample_eta(density, n, beta, m_eta, trials, seed, threads), kappa, cap);

  const double ck = std::pow(cap, kappa);
  if (n < 2) {
    EtaMomentResult r;  // d_1 = inf, eta = cap
    r.value = ck;
    r.exact_distribution = true;
    return r;
  }

  EtaMomentResult r;
  const bool exact = density.kind() == DensityModel::Kind::kUniformBox &&
                     cap <= 0.5 * density.support_box().extent().minCoeff();
  if (exact) {
    const Box box = density.support_box();
    auto survival = [&](double s) { return uniform_box_nn_survival(box, n, s); };
    if (kappa > 0.0) {
      const double tail = std::pow(cap * 1e-5, kappa);  // P[d >= s] ~ 1 below s_min
      r.value = tail + layer_cake_integral(kappa, cap, survival);
    } else {
      const double s_min = cap * 1e-5;
      const double p_min = 1.0 - survival(s_min);  // ~ c s^3 near zero
      const double tail = std::abs(kappa) * p_min * std::pow(s_min, kappa) / (kappa + 3.0);
      r.value = ck + tail + layer_cake_integral(kappa, cap, [&](double s) { return 1.0 - survival(s); });
    }
    r.exact_distribution = true;
    r.trials = 0;
    return r;
  }

  // Empirical distribution of d_1 on streams disjoint from the Monte Carlo ones.
  std::vector<double> eta = sample_eta(density, n, beta, m_eta, trials, mix64(seed ^ 0x1a7e4cace0ull), threads);
  std::sort(eta.begin(), eta.end());
  const double total = static_cast<double>(eta.size());
  // P[eta < s] equals P[d_1 < s] for s <= cap; eta = cap carries the mass of d_1 >= cap.
  auto below = [&](double s) {
    return static_cast<double>(std::lower_bound(eta.begin(), eta.end(), s) - eta.begin()) / total;
  };
  const double s_min = cap * 1e-5;
  if (kappa > 0.0) {
    r.value = std::pow(s_min, kappa) + layer_cake_integral(kappa, cap, [&](double s) { return 1.0 - below(s); });
  } else {
    r.value = ck + std::abs(kappa) * below(s_min) * std::pow(s_min, kappa) / (kappa + 3.0) +
              layer_cake_integral(kappa, cap, below);
  }
  const EtaMomentResult stats = eta_moment_from_samples(eta, kappa, cap);
  r.std_error = stats.std_error;
  r.trials = eta.size();
  return r;
}

}  // namespace phlab
