#include "pvt/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "pvt/error.hpp"

namespace pvt {

Field1D Field1D::uniform(int n, double h, double rho, double S) {
  Field1D f;
  f.n = n;
  f.h = h;
  f.rho.assign(static_cast<std::size_t>(std::max(n, 0)), rho);
  f.S.assign(static_cast<std::size_t>(std::max(n, 0)), S);
  f.validate();
  return f;
}

void Field1D::validate() const {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "field needs at least 3 nodes");
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be > 0");
  if (rho.size() != static_cast<std::size_t>(n) || S.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::InvalidArgument, "field arrays must have n entries");
  }
}

std::string_view to_string(PdeScheme scheme) noexcept {
  return scheme == PdeScheme::SemiImplicit ? "semi_implicit" : "explicit";
}

PdeScheme pde_scheme_from_string(std::string_view name) {
  if (name == "semi_implicit") return PdeScheme::SemiImplicit;
  if (name == "explicit") return PdeScheme::Explicit;
  throw Error(ErrorKind::InvalidArgument, "unknown PDE scheme '" + std::string(name) + "'");
}

void PdeConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be > 0");
  if (snapshots < 1) throw Error(ErrorKind::InvalidArgument, "snapshots must be >= 1");
  if (!(energy_tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "energy_tol must be >= 0");
}

double explicit_dt_limit(const Field1D& fields, const CoefficientModel& model) {
  const double mu = std::max(model.mu1, model.mu2);
  if (mu == 0.0) return std::numeric_limits<double>::infinity();
  return fields.h * fields.h / (2.0 * mu);
}

namespace {

// Neumann Laplacian with mirror ghost nodes.
double laplacian(const std::vector<double>& u, int i, double inv_h2) {
  const int n = static_cast<int>(u.size());
  if (i == 0) return 2.0 * (u[1] - u[0]) * inv_h2;
  if (i == n - 1) return 2.0 * (u[n - 2] - u[n - 1]) * inv_h2;
  return (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2;
}

// Solves (I - r L) x = rhs in place, L the ghost-node Laplacian times h^2.
void implicit_diffusion(std::vector<double>& x, double r) {
  if (r == 0.0) return;
  const std::size_t n = x.size();
  std::vector<double> sub(n, -r), diag(n, 1.0 + 2.0 * r), sup(n, -r);
  sup[0] = -2.0 * r;
  sub[n - 1] = -2.0 * r;
  std::vector<double> cp(n), dp(n);
  cp[0] = sup[0] / diag[0];
  dp[0] = x[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - sub[i] * cp[i - 1];
    cp[i] = i + 1 < n ? sup[i] / m : 0.0;
    dp[i] = (x[i] - sub[i] * dp[i - 1]) / m;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
}

}  // namespace

Field1D step(const Field1D& fields, const ThermoState& state, const CoefficientModel& model, double dt,
             PdeScheme scheme) {
  fields.validate();
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  if (scheme == PdeScheme::Explicit) {
    const double limit = explicit_dt_limit(fields, model);
    if (dt > limit) {
      std::ostringstream os;
      os << "explicit dt = " << dt << " exceeds h^2/(2 max mu) = " << limit;
      throw Error(ErrorKind::CflViolation, os.str());
    }
  }
  const auto cv = eval_coefficients(model, state);
  const double inv_h2 = 1.0 / (fields.h * fields.h);
  Field1D next = fields;
  for (int i = 0; i < fields.n; ++i) {
    const auto r = coupled_rhs(fields.rho[i], fields.S[i], state, cv);
    next.rho[i] = fields.rho[i] + dt * r[0];
    next.S[i] = fields.S[i] + dt * r[1];
    if (scheme == PdeScheme::Explicit) {
      next.rho[i] += dt * model.mu1 * laplacian(fields.rho, i, inv_h2);
      next.S[i] += dt * model.mu2 * laplacian(fields.S, i, inv_h2);
    }
  }
  if (scheme == PdeScheme::SemiImplicit) {
    implicit_diffusion(next.rho, dt * model.mu1 * inv_h2);
    implicit_diffusion(next.S, dt * model.mu2 * inv_h2);
  }
  return next;
}

double discrete_energy(const Field1D& fields, const ThermoState& state, const CoefficientModel& model) {
  fields.validate();
  const auto cv = eval_coefficients(model, state);
  double gradient = 0.0;
  for (int i = 0; i + 1 < fields.n; ++i) {
    const double dr = (fields.rho[i + 1] - fields.rho[i]) / fields.h;
    const double ds = (fields.S[i + 1] - fields.S[i]) / fields.h;
    gradient += 0.5 * (model.mu1 * dr * dr + model.mu2 * ds * ds) * fields.h;
  }
  double bulk = 0.0;
  for (int i = 0; i < fields.n; ++i) {
    const double w = (i == 0 || i == fields.n - 1) ? 0.5 * fields.h : fields.h;
    bulk += w * gibbs_homogeneous(fields.rho[i], fields.S[i], state, cv, model.g_ref);
  }
  return gradient + bulk;
}

double discrete_mass(const Field1D& fields) {
  double m = 0.0;
  for (int i = 0; i < fields.n; ++i) {
    const double w = (i == 0 || i == fields.n - 1) ? 0.5 * fields.h : fields.h;
    m += w * fields.rho[i];
  }
  return m;
}

BoundaryFlux boundary_flux(const Field1D& f) {
  const int n = f.n;
  const auto& u = f.rho;
  return BoundaryFlux{(4.0 * (u[1] - u[0]) - (u[2] - u[0])) / (2.0 * f.h),
                      (-4.0 * (u[n - 2] - u[n - 1]) + (u[n - 3] - u[n - 1])) / (2.0 * f.h)};
}

SimulationResult simulate(const Field1D& fields0, const ThermoState& state, const CoefficientModel& model,
                          const PdeConfig& cfg) {
  cfg.validate();
  fields0.validate();
  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  const long every = std::max(1L, steps / cfg.snapshots);

  SimulationResult res;
  res.steps = steps;
  Field1D f = fields0;
  res.snapshots.push_back({0.0, f, boundary_flux(f)});
  double e_prev = cfg.energy_audit ? discrete_energy(f, state, model) : 0.0;
  if (cfg.energy_audit) res.energy.emplace_back(0.0, e_prev);
  for (long k = 0; k < steps; ++k) {
    const double t = k * cfg.dt;
    const double dt = std::min(cfg.dt, cfg.t_end - t);
    f = step(f, state, model, dt, cfg.scheme);
    const double t_next = k + 1 == steps ? cfg.t_end : t + dt;
    if (cfg.energy_audit) {
      const double e = discrete_energy(f, state, model);
      const double inc = std::isfinite(e) ? e - e_prev : std::numeric_limits<double>::infinity();
      res.max_energy_increase = std::max(res.max_energy_increase, inc);
      res.energy.emplace_back(t_next, e);
      e_prev = e;
    }
    if ((k + 1) % every == 0 || k + 1 == steps) {
      if (res.snapshots.back().t != t_next) res.snapshots.push_back({t_next, f, boundary_flux(f)});
    }
  }
  res.energy_ok = !(res.max_energy_increase > cfg.energy_tol);
  return res;
}

}  // namespace pvt
