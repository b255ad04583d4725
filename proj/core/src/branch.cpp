#include "pvt/branch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pvt/equilibria.hpp"
#include "pvt/error.hpp"
#include "pvt/numeric.hpp"

namespace pvt {

std::string_view to_string(CriticalKind kind) noexcept {
  switch (kind) {
    case CriticalKind::Crossing: return "crossing";
    case CriticalKind::Fold: return "fold";
    case CriticalKind::Touch: return "touch";
  }
  return "crossing";
}

namespace {

// True when `rho` belongs to the closest adjacent pair of the set, i.e. the
// pair that collides first when real roots are lost.
bool in_closest_pair(const EquilibriumSet& set, double rho) {
  const auto& e = set.equilibria;
  if (e.size() < 2) return false;
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < e.size(); ++i) {
    if (e[i + 1].rho - e[i].rho < e[best + 1].rho - e[best].rho) best = i;
  }
  return rho == e[best].rho || rho == e[best + 1].rho;
}

int total_multiplicity(const EquilibriumSet& set) {
  int n = 0;
  for (const auto& e : set.equilibria) n += e.multiplicity;
  return n;
}

}  // namespace

ReferenceBranch::ReferenceBranch(const CoefficientModel& model, StateLine line, double s_start, double s_end,
                                 int steps, std::optional<double> seed)
    : model_(model), line_(line), s_start_(s_start), s_end_(s_end) {
  if (steps < 2 || !(s_start != s_end)) {
    throw Error(ErrorKind::InvalidArgument, "reference branch needs a nonempty range and >= 2 steps");
  }
  dir_ = s_end > s_start ? 1.0 : -1.0;
  step_ = (s_end - s_start) / steps;

  EquilibriumSet prev_set;
  for (int k = 0; k <= steps; ++k) {
    const double s = s_start + k * step_;
    EquilibriumSet set;
    ReducedCoeffs rc;
    try {
      set = full_steady_states(line_.at(s), model_);
    } catch (const Error&) {
      break;
    }
    double rho;
    if (samples_.empty() && seed) {
      const auto it = std::min_element(set.equilibria.begin(), set.equilibria.end(),
                                       [&](const Equilibrium& a, const Equilibrium& b) {
                                         return std::abs(a.rho - *seed) < std::abs(b.rho - *seed);
                                       });
      if (it == set.equilibria.end()) break;
      rho = it->rho;
    } else if (samples_.empty()) {
      rho = gas_branch_select(set);
    } else {
      const auto& last = samples_.back();
      double pred = last.rho0;
      double last_change = 0.0;
      if (samples_.size() >= 2) {
        last_change = last.rho0 - samples_[samples_.size() - 2].rho0;
        pred += last_change;
      }
      const auto it = std::min_element(set.equilibria.begin(), set.equilibria.end(),
                                       [&](const Equilibrium& a, const Equilibrium& b) {
                                         return std::abs(a.rho - pred) < std::abs(b.rho - pred);
                                       });
      const double jump_tol = std::max(8.0 * std::abs(last_change), 0.02 * (1.0 + std::abs(last.rho0)));
      const bool lost_pair =
          total_multiplicity(set) < total_multiplicity(prev_set) && in_closest_pair(prev_set, last.rho0);
      if (it == set.equilibria.end() || lost_pair || std::abs(it->rho - pred) > jump_tol) {
        vanished_ = true;
        break;
      }
      rho = it->rho;
    }
    try {
      rc = reduced_coefficients(rho, line_.at(s), model_);
    } catch (const Error&) {
      break;
    }
    samples_.push_back({s, rho, rc});
    prev_set = std::move(set);
  }
  if (samples_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "reference branch could not be started inside the validity box");
  }
}

std::optional<double> ReferenceBranch::nearest_root(double s, double guess,
                                                    std::optional<double> lambda_sign) const {
  EquilibriumSet set;
  try {
    set = full_steady_states(line_.at(s), model_);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::optional<double> best;
  int best_mult = 1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& e : set.equilibria) {
    if (lambda_sign && *lambda_sign != 0.0 && e.multiplicity == 1 && e.fprime * *lambda_sign < 0.0) continue;
    const double d = std::abs(e.rho - guess);
    if (d < best_dist) {
      best_dist = d;
      best = e.rho;
      best_mult = e.multiplicity;
    }
  }
  if (best && best_mult > 1) {
    // A merged cluster hides which of its simple roots continues the branch.
    if (const auto r = polish_from(s, guess); r && std::abs(*r - *best) <= 1e-4 * (1.0 + std::abs(*best))) return r;
  }
  return best;
}

std::optional<double> ReferenceBranch::polish_from(double s, double guess) const {
  SteadyCubic f;
  try {
    f = steady_cubic(line_.at(s), model_);
  } catch (const Error&) {
    return std::nullopt;
  }
  double x = guess;
  for (int it = 0; it < 60; ++it) {
    const double d = f.derivative(x);
    if (d == 0.0 || !std::isfinite(d)) return std::nullopt;
    const double dx = f(x) / d;
    x -= dx;
    if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) return x;
  }
  return std::abs(f(x)) <= 1e-13 ? std::optional<double>(x) : std::nullopt;
}

std::optional<double> ReferenceBranch::rho0(double s) const {
  const double t = (s - s_start_) * dir_;
  if (t < -1e-15 * (1.0 + std::abs(s_start_))) return std::nullopt;
  const double pos = t / std::abs(step_);
  const auto n = samples_.size();
  const auto k = static_cast<std::size_t>(std::floor(pos));
  if (k + 1 < n) {
    const auto& a = samples_[k];
    const auto& b = samples_[k + 1];
    const double w = (s - a.s) / (b.s - a.s);
    const double guess = a.rho0 + w * (b.rho0 - a.rho0);
    const auto r = nearest_root(s, guess, std::nullopt);
    if (!r) return std::nullopt;
    const double tol = std::max(4.0 * std::abs(b.rho0 - a.rho0), 1e-6 * (1.0 + std::abs(guess)));
    if (std::abs(*r - guess) > tol) return std::nullopt;
    return r;
  }
  // At or just past the last sample: only allowed up to one grid step, and
  // only on the root whose stability matches the branch.
  const auto& last = samples_.back();
  if (pos > static_cast<double>(n - 1) + 1.0) return std::nullopt;
  if (!vanished_ && pos > static_cast<double>(n - 1) + 1e-12) return std::nullopt;
  const double sign = last.rc.lambda < 0.0 ? -1.0 : (last.rc.lambda > 0.0 ? 1.0 : 0.0);
  const auto r = nearest_root(s, last.rho0, sign);
  if (!r) return std::nullopt;
  double last_change = n >= 2 ? std::abs(last.rho0 - samples_[n - 2].rho0) : 0.0;
  if (std::abs(*r - last.rho0) > std::max(8.0 * last_change, 0.02 * (1.0 + std::abs(last.rho0)))) {
    return std::nullopt;
  }
  return r;
}

std::optional<ReducedCoeffs> ReferenceBranch::reduced(double s) const {
  const auto r = rho0(s);
  if (!r) return std::nullopt;
  try {
    return reduced_coefficients(*r, line_.at(s), model_);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<CriticalEvent> ReferenceBranch::solve_fold(double rho, double s, double lo, double hi,
                                                         CriticalKind kind) const {
  if (lo > hi) std::swap(lo, hi);
  auto residual = [&](double r, double ss, std::array<double, 2>& F) -> bool {
    try {
      const SteadyCubic f = steady_cubic(line_.at(ss), model_);
      F = {f(r), f.derivative(r)};
      return std::isfinite(F[0]) && std::isfinite(F[1]);
    } catch (const Error&) {
      return false;
    }
  };
  double scale = 1.0;
  try {
    const SteadyCubic f0 = steady_cubic(line_.at(s), model_);
    scale = std::max({std::abs(f0.c[0]), std::abs(f0.c[1]), std::abs(f0.c[2]), std::abs(f0.c[3])});
  } catch (const Error&) {
    return std::nullopt;
  }

  std::array<double, 2> F{};
  if (!residual(rho, s, F)) return std::nullopt;
  auto norm = [](const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); };
  double best_norm = norm(F);
  double best_rho = rho, best_s = s;

  for (int it = 0; it < 200 && norm(F) > 1e-15 * scale; ++it) {
    const double h = 1e-6 * (1.0 + std::abs(s));
    std::array<double, 2> Fp{}, Fm{};
    if (!residual(rho, s + h, Fp) || !residual(rho, s - h, Fm)) return std::nullopt;
    const SteadyCubic f = steady_cubic(line_.at(s), model_);
    const double j11 = f.derivative(rho), j12 = (Fp[0] - Fm[0]) / (2.0 * h);
    const double j21 = f.second(rho), j22 = (Fp[1] - Fm[1]) / (2.0 * h);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double dr = (F[0] * j22 - F[1] * j12) / det;
    const double ds = (j11 * F[1] - j21 * F[0]) / det;
    double lam = 1.0;
    bool accepted = false;
    for (int halve = 0; halve < 20; ++halve, lam *= 0.5) {
      const double rn = rho - lam * dr;
      const double sn = s - lam * ds;
      std::array<double, 2> Fn{};
      if (residual(rn, sn, Fn) && norm(Fn) < norm(F)) {
        rho = rn;
        s = sn;
        F = Fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (norm(F) < best_norm) {
      best_norm = norm(F);
      best_rho = rho;
      best_s = s;
    }
    if (std::abs(lam * ds) < 1e-16 * (1.0 + std::abs(s)) && std::abs(lam * dr) < 1e-16 * (1.0 + std::abs(rho))) break;
  }
  const double slack = 1e-9 * (1.0 + std::abs(hi));
  if (best_norm > 1e-11 * scale || best_s < lo - slack || best_s > hi + slack) return std::nullopt;
  CriticalEvent ev;
  ev.s = best_s;
  ev.rho0 = best_rho;
  ev.kind = kind;
  try {
    ev.rc = reduced_coefficients(best_rho, line_.at(best_s), model_);
  } catch (const Error&) {
    return std::nullopt;
  }
  return ev;
}

std::optional<CriticalEvent> ReferenceBranch::critical() const {
  for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
    const double l0 = samples_[k].rc.lambda;
    const double l1 = samples_[k + 1].rc.lambda;
    if (l0 == 0.0 && k > 0) {
      return CriticalEvent{samples_[k].s, samples_[k].rho0, samples_[k].rc, CriticalKind::Crossing};
    }
    if ((l0 < 0.0 && l1 > 0.0) || (l0 > 0.0 && l1 < 0.0)) {
      auto lam = [&](double s) {
        const auto rc = reduced(s);
        return rc ? rc->lambda : std::numeric_limits<double>::quiet_NaN();
      };
      const auto s_star = numeric::bisect(lam, samples_[k].s, samples_[k + 1].s, 1e-15);
      if (!s_star) continue;
      const auto rc = reduced(*s_star);
      if (!rc) continue;
      return CriticalEvent{*s_star, rc->rho0, *rc, CriticalKind::Crossing};
    }
  }
  if (vanished_) {
    const auto& last = samples_.back();
    return solve_fold(last.rho0, last.s, last.s, last.s + step_, CriticalKind::Fold);
  }
  // Touching zero: lambda has an interior maximum close to zero.
  if (samples_.size() < 3) return std::nullopt;
  std::size_t kmax = 0;
  for (std::size_t k = 1; k < samples_.size(); ++k) {
    if (samples_[k].rc.lambda > samples_[kmax].rc.lambda) kmax = k;
  }
  if (kmax == 0 || kmax + 1 == samples_.size()) return std::nullopt;
  return solve_fold(samples_[kmax].rho0, samples_[kmax].s, samples_[kmax - 1].s, samples_[kmax + 1].s,
                    CriticalKind::Touch);
}

std::optional<double> ReferenceBranch::fold_after(double from) const {
  auto disc = [&](double s) {
    const auto rc = reduced(s);
    return rc ? rc->discriminant() : std::numeric_limits<double>::quiet_NaN();
  };
  double s_prev = from;
  double d_prev = disc(from);
  if (std::isnan(d_prev)) d_prev = std::numeric_limits<double>::infinity();
  if (!(d_prev > 0.0)) return std::nullopt;
  // Walk back toward the gas end through the stored samples.
  for (auto it = samples_.rbegin(); it != samples_.rend(); ++it) {
    if ((it->s - from) * dir_ >= 0.0) continue;
    const double d = it->rc.discriminant();
    if (d < 0.0) {
      if (std::isinf(d_prev)) return numeric::bisect(disc, it->s - step_, it->s, 1e-15);
      return numeric::bisect(disc, s_prev, it->s, 1e-15);
    }
    s_prev = it->s;
    d_prev = d;
  }
  return std::nullopt;
}

std::optional<double> ReferenceBranch::first_discriminant_change() const {
  auto disc = [&](double s) {
    const auto rc = reduced(s);
    return rc ? rc->discriminant() : std::numeric_limits<double>::quiet_NaN();
  };
  for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
    const double d0 = samples_[k].rc.discriminant();
    const double d1 = samples_[k + 1].rc.discriminant();
    if ((d0 > 0.0 && d1 < 0.0) || (d0 < 0.0 && d1 > 0.0)) {
      return numeric::bisect(disc, samples_[k].s, samples_[k + 1].s, 1e-15);
    }
  }
  return std::nullopt;
}

}  // namespace pvt
