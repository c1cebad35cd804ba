#include "cloud/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "cloud/parallel.hpp"

namespace cloud {

const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::linear_beta:
      return "linear-beta";
    case ScheduleKind::cosine:
      return "cosine";
    case ScheduleKind::custom:
      return "custom";
  }
  return "custom";
}

namespace {

void require_step(const Schedule& s, int t, int lowest) {
  if (t < lowest || t > s.steps()) {
    throw InputError("timestep " + std::to_string(t) + " outside [" + std::to_string(lowest) + ", " +
                     std::to_string(s.steps()) + "]");
  }
}

Schedule from_alphas(ScheduleKind kind, std::vector<double> alphas) {
  Schedule s;
  s.kind = kind;
  s.alpha_bars.resize(alphas.size());
  double running = 1.0;
  for (std::size_t n = 0; n < alphas.size(); ++n) {
    running *= alphas[n];
    s.alpha_bars[n] = running;
  }
  s.alphas = std::move(alphas);
  return s;
}

}  // namespace

double Schedule::alpha(int t) const {
  require_step(*this, t, 1);
  return alphas[t - 1];
}

double Schedule::alpha_bar(int t) const {
  require_step(*this, t, 0);
  return t == 0 ? 1.0 : alpha_bars[t - 1];
}

double Schedule::theta(int t) const { return std::acos(std::sqrt(alpha_bar(t))); }

Schedule make_linear_beta_schedule(int steps, double beta_start, double beta_end) {
  if (steps < 1) throw InputError("schedule needs at least one step");
  if (!(0.0 < beta_start && beta_start < beta_end && beta_end < 1.0)) {
    throw InputError("linear-beta schedule needs 0 < beta_start < beta_end < 1");
  }
  std::vector<double> alphas(steps);
  for (int n = 0; n < steps; ++n) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(n) / (steps - 1);
    alphas[n] = 1.0 - (beta_start + (beta_end - beta_start) * frac);
  }
  return from_alphas(ScheduleKind::linear_beta, std::move(alphas));
}

Schedule make_cosine_schedule(int steps, double offset, double max_beta) {
  if (steps < 1) throw InputError("schedule needs at least one step");
  if (!(offset > 0.0)) throw InputError("cosine schedule offset must be positive");
  if (!(0.0 < max_beta && max_beta < 1.0)) throw InputError("max_beta must lie in (0, 1)");
  const auto f = [&](int t) {
    const double c = std::cos((static_cast<double>(t) / steps + offset) / (1.0 + offset) *
                              std::numbers::pi / 2.0);
    return c * c;
  };
  std::vector<double> alphas(steps);
  for (int t = 1; t <= steps; ++t) {
    const double beta = std::min(max_beta, 1.0 - f(t) / f(t - 1));
    alphas[t - 1] = 1.0 - beta;
  }
  return from_alphas(ScheduleKind::cosine, std::move(alphas));
}

Schedule make_custom_schedule(std::vector<double> alphas) {
  if (alphas.empty()) throw InputError("schedule needs at least one step");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw InputError("custom alphas must lie in [0, 1]");
  }
  return from_alphas(ScheduleKind::custom, std::move(alphas));
}

Grid NoiseSource::sample(int side, std::uint64_t seed, std::uint64_t stream) const {
  if (kind == Kind::white) return white_noise(side, seed, stream);
  NoiseSpec spec;
  spec.delta = delta;
  spec.side = side;
  spec.oversample = oversample;
  spec.seed = seed;
  return cloud_noise(spec, stream);
}

Grid blend(const Grid& x, double keep, const Grid& eps) {
  if (x.rows() != eps.rows() || x.cols() != eps.cols()) throw InputError("noise shape mismatch");
  return std::sqrt(keep) * x + std::sqrt(1.0 - keep) * eps;
}

Grid noising_step(const Grid& x_prev, int t, const Schedule& schedule, NoiseSampler& noise) {
  const double a = schedule.alpha(t);
  const int side = require_square(x_prev);
  return blend(x_prev, a, noise.next(side));
}

NoisyState jump(const Grid& x0, int t, const Schedule& schedule, const NoiseSource& source,
                std::uint64_t seed, std::uint64_t stream) {
  require_step(schedule, t, 1);
  const int side = require_square(x0);
  NoisyState state;
  state.t = t;
  state.theta = schedule.theta(t);
  state.eps_cum = source.sample(side, seed, stream);
  state.x_t = std::cos(state.theta) * x0 + std::sin(state.theta) * state.eps_cum;
  return state;
}

std::vector<TimeProfile> covariance_through_time(std::span<const Grid> set, const Schedule& schedule,
                                                 const NoiseSource& source, std::span<const int> timesteps,
                                                 std::uint64_t seed, int cross_halfwidth) {
  require_uniform(set);
  for (int t : timesteps) require_step(schedule, t, 1);
  std::vector<TimeProfile> out;
  out.reserve(timesteps.size());
  std::vector<Grid> corrupted(set.size());
  for (int t : timesteps) {
    parallel_for(set.size(), [&](std::size_t n) {
      const std::uint64_t stream = (static_cast<std::uint64_t>(t) << 32) | n;
      corrupted[n] = jump(set[n], t, schedule, source, seed, stream).x_t;
    });
    TimeProfile tp;
    tp.t = t;
    tp.theta = schedule.theta(t);
    tp.diag = spectral_covariance_diag(corrupted, cross_halfwidth);
    tp.profile = radial_profile(tp.diag);
    tp.fit = fit_power_law(tp.profile);
    out.push_back(std::move(tp));
  }
  return out;
}

Grid white_mixture_diagonal(const PowerLawFit& clean, double theta, int side) {
  const Grid k = kmag_grid(side);
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const double a2 = clean.amplitude * clean.amplitude;
  const double white = static_cast<double>(side) * side;
  Grid out(side, side);
  for (Eigen::Index p = 0; p < k.size(); ++p) {
    out(p) = k(p) > 0.0 ? c2 * a2 * std::pow(k(p), -2.0 * clean.delta) + s2 * white : 0.0;
  }
  return out;
}

}  // namespace cloud
