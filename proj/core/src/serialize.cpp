#include "pvt/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pvt/error.hpp"

namespace pvt {

namespace {

constexpr const char* kCoeffNames[] = {"alpha1", "alpha2", "alpha3", "beta1", "beta2", "b"};

Poly2* coeff_slot(CoefficientModel& m, int i) {
  Poly2* slots[] = {&m.alpha1, &m.alpha2, &m.alpha3, &m.beta1, &m.beta2, &m.b};
  return slots[i];
}

const Poly2& coeff_slot(const CoefficientModel& m, int i) {
  const Poly2* slots[] = {&m.alpha1, &m.alpha2, &m.alpha3, &m.beta1, &m.beta2, &m.b};
  return *slots[i];
}

Poly2 poly_from_json(const json& j, const char* name) {
  Poly2 p;
  if (j.is_number()) {
    p.c[0] = j.get<double>();
    return p;
  }
  if (!j.is_array() || j.empty() || j.size() > 6) {
    throw Error(ErrorKind::ParseError, std::string("coefficient '") + name + "' must be a number or 1..6 numbers");
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::ParseError, std::string("non-numeric entry in '") + name + "'");
    p.c[i] = j[i].get<double>();
  }
  return p;
}

double number_or(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number()) throw Error(ErrorKind::ParseError, std::string("'") + key + "' must be a number");
  return doc.at(key).get<double>();
}

ValidityBox box_from_json(const json& j, ValidityBox box) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "'box' must be an object");
  box.T_min = number_or(j, "T_min", box.T_min);
  box.T_max = number_or(j, "T_max", box.T_max);
  box.p_min = number_or(j, "p_min", box.p_min);
  box.p_max = number_or(j, "p_max", box.p_max);
  return box;
}

json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_json(const std::optional<double>& v) { return v ? number_json(*v) : json(nullptr); }

}  // namespace

// --- model files --------------------------------------------------------------

json to_json(const CoefficientModel& model) {
  json coeffs = json::object();
  for (int i = 0; i < 6; ++i) {
    const auto& c = coeff_slot(model, i).c;
    coeffs[kCoeffNames[i]] = json(std::vector<double>(c.begin(), c.end()));
  }
  return json{{"preset", std::string(to_string(model.preset))},
              {"tref", model.T_ref},
              {"pref", model.p_ref},
              {"coeffs", coeffs},
              {"mu1", model.mu1},
              {"mu2", model.mu2},
              {"gref", model.g_ref},
              {"box",
               {{"T_min", model.box.T_min},
                {"T_max", model.box.T_max},
                {"p_min", model.box.p_min},
                {"p_max", model.box.p_max}}}};
}

CoefficientModel model_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorKind::ParseError, "model document must be a JSON object");
    const Preset preset =
        doc.contains("preset") ? preset_from_string(doc.at("preset").get<std::string>()) : Preset::Custom;
    CoefficientModel m;
    if (doc.contains("coeffs")) {
      const json& c = doc.at("coeffs");
      if (!c.is_object()) throw Error(ErrorKind::ParseError, "'coeffs' must be an object");
      for (int i = 0; i < 6; ++i) {
        const char* name = kCoeffNames[i];
        if (c.contains(name)) {
          *coeff_slot(m, i) = poly_from_json(c.at(name), name);
        } else if (i < 4) {
          throw Error(ErrorKind::ParseError, std::string("missing coefficient '") + name + "'");
        }
      }
      m.T_ref = number_or(doc, "tref", 0.0);
      m.p_ref = number_or(doc, "pref", 0.0);
      m.box = doc.contains("box") ? box_from_json(doc.at("box"), ValidityBox{}) : ValidityBox{};
    } else if (preset == Preset::Vdw) {
      const json params = doc.value("params", json::object());
      VdwParams v{number_or(params, "a", 1.0), number_or(params, "b", 1.0), number_or(params, "R", 1.0)};
      const ValidityBox box =
          doc.contains("box") ? box_from_json(doc.at("box"), default_vdw_box()) : default_vdw_box();
      m = vdw_compatible_model(v, number_or(params, "beta1", 1.0), box);
    } else if (preset == Preset::Landau) {
      const json params = doc.value("params", json::object());
      LandauPresetParams lp;
      lp.alpha_slope = number_or(params, "alpha_slope", lp.alpha_slope);
      lp.T_C = number_or(params, "T_C", lp.T_C);
      lp.a3_c = number_or(params, "a3_c", lp.a3_c);
      lp.a2_c = number_or(params, "a2_c", lp.a2_c);
      lp.rho_ref = number_or(params, "rho_ref", lp.rho_ref);
      lp.T_half_width = number_or(params, "T_half_width", lp.T_half_width);
      lp.p_half_width = number_or(params, "p_half_width", lp.p_half_width);
      m = landau_model(lp);
      if (doc.contains("box")) m.box = box_from_json(doc.at("box"), m.box);
    } else {
      throw Error(ErrorKind::ParseError, "model needs 'coeffs' (or 'params' for the vdw and landau presets)");
    }
    m.preset = preset;
    m.mu1 = number_or(doc, "mu1", m.mu1);
    m.mu2 = number_or(doc, "mu2", m.mu2);
    m.g_ref = number_or(doc, "gref", m.g_ref);
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    throw Error(ErrorKind::ParseError, e.what());
  }
}

CoefficientModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open model file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, "'" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

std::uint64_t model_hash(const CoefficientModel& model) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_json(model).dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string model_hash_hex(const CoefficientModel& model) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(model_hash(model)));
  return buf;
}

// --- results --------------------------------------------------------------------

json to_json(const ThermoState& s) { return json{{"T", s.T}, {"p", s.p}}; }

json to_json(const ReducedCoeffs& rc) {
  return json{{"lambda", rc.lambda}, {"a2", rc.a2}, {"a3", rc.a3}, {"rho0", rc.rho0},
              {"discriminant", rc.discriminant()}};
}

json to_json(const EquilibriumSet& set) {
  json roots = json::array();
  for (const auto& e : set.equilibria) {
    roots.push_back({{"rho", e.rho},
                     {"stable", e.stable()},
                     {"branch", std::string(to_string(e.branch))},
                     {"fprime", e.fprime},
                     {"multiplicity", e.multiplicity}});
  }
  return json{{"discriminant", set.discriminant}, {"roots", roots}};
}

json to_json(const SaddleNode& sn) {
  return json{{"T", sn.T}, {"p", sn.p}, {"rho_offset", sn.rho_offset}, {"rho", sn.rho}};
}

json to_json(const TransitionReport& r) {
  return json{{"dynamic_type", std::string(to_string(r.dynamic_type))},
              {"thermo_order", std::string(to_string(r.thermo_order))},
              {"critical_state", to_json(r.critical_state)},
              {"rho0", r.rho0},
              {"reduced", to_json(r.reduced)},
              {"leading_order", r.leading_order},
              {"leading_coeff", r.leading_coeff},
              {"saddle_node", r.saddle_node ? to_json(*r.saddle_node) : json(nullptr)},
              {"notes", r.notes}};
}

json to_json(const AndrewsPoint& a) {
  return json{{"T_C", a.T_C}, {"p_C", a.p_C}, {"rho_C", a.rho_C}, {"residual", a.residual},
              {"iterations", a.iterations}};
}

json to_json(const CriticalCurve& curve) {
  json samples = json::array();
  for (const auto& s : curve.samples) {
    samples.push_back({{"p", s.p},
                       {"T_phi", s.T},
                       {"rho0", s.rho0},
                       {"a2", s.a2},
                       {"kind", std::string(to_string(s.kind))},
                       {"lambda_above", number_json(s.lambda_above)},
                       {"lambda_below", number_json(s.lambda_below)}});
  }
  return json{{"samples", samples}, {"skipped", curve.skipped}, {"slope_sign", curve.slope_sign},
              {"monotone", curve.monotone}};
}

json to_json(const TransitionFunctionTable& t) {
  json samples = json::array();
  for (const auto& [T, phi] : t.samples) samples.push_back({number_json(T), number_json(phi)});
  return json{{"branch", std::string(to_string(t.branch))},
              {"T0", t.T0},
              {"T_star", optional_json(t.T_star)},
              {"T1", optional_json(t.T1)},
              {"samples", samples}};
}

json to_json(const ThermoSignature& s) {
  return json{{"p", s.p},
              {"T0", s.T0},
              {"T_star", s.T_star},
              {"T1", number_json(s.T1)},
              {"rho_gas", s.rho_gas},
              {"rho_liquid", s.rho_liquid},
              {"deltaE", s.deltaE},
              {"deltaE_at_star", s.deltaE_at_star},
              {"deltaS", s.deltaS},
              {"deltaV", s.deltaV},
              {"deltaH", s.deltaH},
              {"deltaC", s.deltaC}};
}

json to_json(const CoexistenceCurve& curve) {
  json samples = json::array();
  for (const auto& s : curve.samples) {
    samples.push_back({{"p", s.p},
                       {"T_star", s.T_star},
                       {"rho_gas", s.rho_gas},
                       {"rho_liquid", s.rho_liquid},
                       {"deltaS", s.deltaS},
                       {"deltaV", s.deltaV},
                       {"deltaH", s.deltaH},
                       {"dpdT_curve", s.dpdT_curve},
                       {"dpdT_clapeyron", s.dpdT_clapeyron}});
  }
  return json{{"samples", samples}, {"skipped", curve.skipped}};
}

json to_json(const MetastableWindow& w) {
  json samples = json::array();
  for (const auto& s : w.samples) {
    samples.push_back({{"T", s.T},
                       {"rho_gas", number_json(s.rho_gas)},
                       {"rho_separatrix", number_json(s.rho_separatrix)},
                       {"rho_liquid", number_json(s.rho_liquid)},
                       {"gas_basin", number_json(s.gas_basin)},
                       {"liquid_basin", number_json(s.liquid_basin)},
                       {"stable_count", s.stable_count}});
  }
  return json{{"T0", w.T0}, {"T1", w.T1}, {"samples", samples}};
}

json to_json(const IntegratorConfig& c) {
  return json{{"scheme", std::string(to_string(c.scheme))},
              {"dt", c.dt},
              {"abs_tol", c.abs_tol},
              {"rel_tol", c.rel_tol},
              {"t_end", c.t_end},
              {"convergence_eps", c.convergence_eps},
              {"dwell", c.dwell}};
}

json to_json(const PdeConfig& c) {
  return json{{"scheme", std::string(to_string(c.scheme))},
              {"dt", c.dt},
              {"t_end", c.t_end},
              {"energy_audit", c.energy_audit},
              {"snapshots", c.snapshots},
              {"energy_tol", c.energy_tol}};
}

json to_json(const Trajectory& traj, const IntegratorConfig& cfg) {
  json samples = json::array();
  for (const auto& s : traj.samples) {
    if (traj.coupled) {
      samples.push_back({number_json(s.t), number_json(s.rho), number_json(s.S)});
    } else {
      samples.push_back({number_json(s.t), number_json(s.rho)});
    }
  }
  json conv = nullptr;
  if (traj.converged_to) {
    conv = {{"rho", traj.converged_to->rho},
            {"stable", traj.converged_to->stable()},
            {"branch", std::string(to_string(traj.converged_to->branch))}};
  }
  return json{{"config", to_json(cfg)},
              {"columns", traj.coupled ? json{"t", "rho", "S"} : json{"t", "rho"}},
              {"samples", samples},
              {"converged_to", conv}};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void row(std::ostringstream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format_number(v);
    first = false;
  }
  os << '\n';
}

}  // namespace

std::string critical_curve_csv(const CriticalCurve& curve) {
  std::ostringstream os;
  os << "p,T_phi,rho0\n";
  for (const auto& s : curve.samples) row(os, {s.p, s.T, s.rho0});
  return os.str();
}

std::string transition_rows_csv(const std::vector<TransitionRow>& rows) {
  std::ostringstream os;
  os << "T,phi_plus,phi_minus,G_plus,G_zero\n";
  for (const auto& r : rows) row(os, {r.T, r.phi_plus, r.phi_minus, r.G_plus, r.G_zero});
  return os.str();
}

std::string bifurcation_csv(const std::vector<BifurcationRow>& rows) {
  std::ostringstream os;
  os << "T,lambda,rho,branch,stability,marker\n";
  for (const auto& r : rows) {
    os << format_number(r.T) << ',' << format_number(r.lambda) << ',' << format_number(r.rho) << ','
       << to_string(r.branch) << ',' << (r.stable ? "stable" : "unstable") << ',' << r.marker << '\n';
  }
  return os.str();
}

std::string coexistence_csv(const CoexistenceCurve& curve) {
  std::ostringstream os;
  os << "p,T_star,rho_gas,rho_liquid,deltaS,deltaV,deltaH,dpdT_curve,dpdT_clapeyron\n";
  for (const auto& s : curve.samples) {
    row(os, {s.p, s.T_star, s.rho_gas, s.rho_liquid, s.deltaS, s.deltaV, s.deltaH, s.dpdT_curve, s.dpdT_clapeyron});
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << (traj.coupled ? "t,rho,S\n" : "t,rho\n");
  for (const auto& s : traj.samples) {
    if (traj.coupled) {
      row(os, {s.t, s.rho, s.S});
    } else {
      row(os, {s.t, s.rho});
    }
  }
  return os.str();
}

std::string snapshot_csv(const Field1D& f) {
  std::ostringstream os;
  os << "x,rho,S\n";
  for (int i = 0; i < f.n; ++i) row(os, {f.x(i), f.rho[i], f.S[i]});
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw Error(ErrorKind::InvalidArgument, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::InvalidArgument, "cannot rename onto '" + path + "'");
  }
}

}  // namespace pvt
