#include "moreau/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace moreau {

namespace {

const Json& need(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw UsageError(where + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

double read_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw UsageError(where + ": expected a number");
  return v.get<double>();
}

// A scalar broadcasts to every coordinate.
Vec read_vec(const Json& v, Index n, const std::string& where) {
  if (v.is_number()) return Vec::Constant(n, v.get<double>());
  if (!v.is_array() || static_cast<Index>(v.size()) != n) {
    throw UsageError(where + ": expected a number or an array of length " + std::to_string(n));
  }
  Vec out(n);
  for (Index i = 0; i < n; ++i) out[i] = read_number(v[static_cast<std::size_t>(i)], where);
  return out;
}

Mat read_mat(const Json& v, Index rows, Index cols, const std::string& where) {
  if (!v.is_array() || static_cast<Index>(v.size()) != rows) {
    throw UsageError(where + ": expected " + std::to_string(rows) + " rows");
  }
  Mat out(rows, cols);
  for (Index i = 0; i < rows; ++i) out.row(i) = read_vec(v[static_cast<std::size_t>(i)], cols, where);
  return out;
}

// Vectors given as rows -> columns of a matrix.
Mat read_columns(const Json& v, Index n, const std::string& where) {
  if (!v.is_array() || v.empty()) throw UsageError(where + ": expected a non-empty list of vectors");
  Mat out(n, static_cast<Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) out.col(static_cast<Index>(j)) = read_vec(v[j], n, where);
  return out;
}

std::string entry_name(const Json& spec, const char* what) {
  if (spec.is_string()) return spec.get<std::string>();
  return need(spec, "name", what).get<std::string>();
}

const Json& params_of(const Json& spec) {
  static const Json empty = Json::object();
  return spec.is_object() ? spec : empty;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string resolve_path(const std::string& base, const std::string& path) {
  if (path.empty() || path.front() == '/' || base.empty() || base == ".") return path;
  return base + "/" + path;
}

}  // namespace

// ---------------------------------------------------------------------------
// Registry

void Registry::add_geometry(const std::string& name, GeometryMaker make) {
  geometries_[name] = std::move(make);
}

void Registry::add_phi(const std::string& name, PhiMaker make) { phis_[name] = std::move(make); }

std::vector<std::string> Registry::geometry_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : geometries_) out.push_back(k);
  return out;
}

std::vector<std::string> Registry::phi_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : phis_) out.push_back(k);
  return out;
}

LegendreFunction Registry::make_geometry(const Json& spec, Index n, Rng& rng) const {
  const std::string name = entry_name(spec, "geometry");
  const auto it = geometries_.find(name);
  if (it == geometries_.end()) throw UsageError("unknown geometry \"" + name + "\"");
  try {
    return it->second(n, params_of(spec), rng);
  } catch (const Json::exception& e) {
    throw UsageError("geometry \"" + name + "\": " + e.what());
  } catch (const UnsupportedError& e) {
    throw UsageError("geometry \"" + name + "\": " + e.what());
  }
}

ConvexFunction Registry::make_phi(const Json& spec, Index n, Rng& rng) const {
  const std::string name = entry_name(spec, "phi");
  const auto it = phis_.find(name);
  if (it == phis_.end()) throw UsageError("unknown phi \"" + name + "\"");
  try {
    return it->second(n, params_of(spec), rng);
  } catch (const Json::exception& e) {
    throw UsageError("phi \"" + name + "\": " + e.what());
  }
}

Registry Registry::standard() {
  Registry r;
  r.add_geometry("euclidean", [](Index n, const Json&, Rng&) {
    return LegendreFunction::euclidean(n);
  });
  r.add_geometry("quadratic_spd", [](Index n, const Json& p, Rng& rng) {
    if (p.contains("matrix")) {
      return LegendreFunction::quadratic_spd(read_mat(p.at("matrix"), n, n, "quadratic_spd.matrix"));
    }
    const Mat b = rng.gaussian(n, n);
    const Mat m = b.transpose() * b / static_cast<double>(n) + 0.5 * Mat::Identity(n, n);
    return LegendreFunction::quadratic_spd(0.5 * (m + m.transpose()));
  });
  r.add_geometry("pnorm_energy", [](Index n, const Json& p, Rng&) {
    const double e = read_number(need(p, "p", "pnorm_energy"), "pnorm_energy.p");
    if (!(e > 1.0) || !std::isfinite(e)) throw UsageError("pnorm_energy: need 1 < p < oo");
    return LegendreFunction::pnorm_energy(n, e);
  });
  r.add_geometry("shannon_entropy", [](Index n, const Json&, Rng&) {
    return LegendreFunction::shannon_entropy(n);
  });

  r.add_phi("zero", [](Index n, const Json&, Rng&) { return ConvexFunction::zero(n); });
  r.add_phi("linear", [](Index n, const Json& p, Rng& rng) {
    if (p.contains("c")) return ConvexFunction::linear(read_vec(p.at("c"), n, "linear.c"));
    return ConvexFunction::linear(0.5 * rng.gaussian(n));
  });
  r.add_phi("l1", [](Index n, const Json& p, Rng&) {
    return ConvexFunction::l1(n, p.contains("lambda") ? read_number(p.at("lambda"), "l1.lambda")
                                                      : 1.0);
  });
  r.add_phi("box", [](Index n, const Json& p, Rng&) {
    return ConvexFunction::box(read_vec(need(p, "lo", "box"), n, "box.lo"),
                               read_vec(need(p, "hi", "box"), n, "box.hi"));
  });
  r.add_phi("box_support", [](Index n, const Json& p, Rng&) {
    return ConvexFunction::box_support(read_vec(need(p, "lo", "box_support"), n, "box_support.lo"),
                                       read_vec(need(p, "hi", "box_support"), n, "box_support.hi"));
  });
  r.add_phi("singleton", [](Index n, const Json& p, Rng&) {
    return ConvexFunction::singleton(read_vec(need(p, "c", "singleton"), n, "singleton.c"));
  });
  r.add_phi("nonneg_orthant", [](Index n, const Json&, Rng&) {
    return ConvexFunction::indicator(ConeSpec::nonneg_orthant(n));
  });
  r.add_phi("second_order_cone", [](Index n, const Json&, Rng&) {
    if (n < 2) throw UsageError("second_order_cone: dimension must be >= 2");
    return ConvexFunction::indicator(ConeSpec::second_order(n));
  });
  r.add_phi("subspace", [](Index n, const Json& p, Rng&) {
    return ConvexFunction::indicator(
        ConeSpec::subspace(read_columns(need(p, "generators", "subspace"), n, "subspace")));
  });
  r.add_phi("halfspace", [](Index n, const Json& p, Rng&) {
    return ConvexFunction::indicator(
        ConeSpec::halfspace(read_vec(need(p, "normal", "halfspace"), n, "halfspace.normal")));
  });
  r.add_phi("ray", [](Index n, const Json& p, Rng&) {
    return ConvexFunction::indicator(
        ConeSpec::ray(read_vec(need(p, "direction", "ray"), n, "ray.direction")));
  });
  r.add_phi("quadratic", [](Index n, const Json& p, Rng&) {
    const Mat q = read_mat(need(p, "q", "quadratic"), n, n, "quadratic.q");
    const Vec c = p.contains("c") ? read_vec(p.at("c"), n, "quadratic.c") : Vec::Zero(n);
    const double off = p.contains("offset") ? read_number(p.at("offset"), "quadratic.offset") : 0.0;
    return ConvexFunction::quadratic(q, c, off);
  });
  return r;
}

// ---------------------------------------------------------------------------
// Catalog

Json list_catalog(const Registry& registry, const PairingLedger& ledger) {
  Json out;
  out["schema"] = kSchemaVersion;
  out["geometries"] = Json::array();
  Rng rng(0);
  for (const auto& name : registry.geometry_names()) {
    Json params = Json::object();
    if (name == "pnorm_energy") params["p"] = 4.0;
    params["name"] = name;
    const LegendreFunction f = registry.make_geometry(params, 2, rng);
    out["geometries"].push_back({{"name", name},
                                 {"supercoercive", f.supercoercive()},
                                 {"dom_f", f.dom_f().describe()},
                                 {"dom_fstar", f.dom_fstar().describe()},
                                 {"conjugate", f.conjugate().name()}});
  }
  out["phi"] = Json::array();
  for (const auto& name : registry.phi_names()) out["phi"].push_back(name);
  out["pairings"] = Json::array();
  for (const auto& e : ledger.entries()) {
    if (!registry.has_geometry(e.geometry) || !registry.has_phi(e.phi)) continue;
    out["pairings"].push_back({{"geometry", e.geometry},
                               {"phi", e.phi},
                               {"cq_primal", e.cq_primal},
                               {"cq_dual", e.cq_dual},
                               {"parameter_check", static_cast<bool>(e.witness)},
                               {"justification", e.justification},
                               {"bprox_set", e.bprox_set}});
  }
  return out;
}

std::string format_catalog(const Json& catalog) {
  std::ostringstream os;
  os << "geometries:\n";
  for (const auto& g : catalog.at("geometries")) {
    os << "  " << g.at("name").get<std::string>()
       << "  supercoercive=" << (g.at("supercoercive").get<bool>() ? "true" : "false")
       << "  dom f=" << g.at("dom_f").get<std::string>()
       << "  dom f*=" << g.at("dom_fstar").get<std::string>() << "\n";
  }
  os << "phi:\n";
  for (const auto& p : catalog.at("phi")) os << "  " << p.get<std::string>() << "\n";
  os << "pairings:\n";
  for (const auto& e : catalog.at("pairings")) {
    os << "  (" << e.at("geometry").get<std::string>() << ", " << e.at("phi").get<std::string>()
       << ")  cq_primal=" << (e.at("cq_primal").get<bool>() ? "true" : "false")
       << " cq_dual=" << (e.at("cq_dual").get<bool>() ? "true" : "false") << "  "
       << e.at("justification").get<std::string>() << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Serialization

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

Json json_vector(const Vec& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(json_number(v[i]));
  return out;
}

Json report_to_json(const DecompositionReport& r, std::size_t index, const std::string& error) {
  Json j;
  j["index"] = index;
  j["seed"] = r.seed;
  j["geometry"] = r.geometry;
  j["phi"] = r.phi;
  j["x"] = json_vector(r.x.coords());
  if (!error.empty()) {
    j["error"] = error;
    j["verified"] = false;
    return j;
  }
  j["p"] = json_vector(r.p.coords());
  j["dstar"] = json_vector(r.dstar.coords());
  j["dstar_primal"] = json_vector(r.dstar_primal.coords());
  j["reconstruction"] = json_vector(r.reconstruction.coords());
  j["f_value"] = json_number(r.f_value);
  j["infconv_value"] = json_number(r.infconv_value);
  j["diamond_value"] = json_number(r.diamond_value);
  j["residual_i"] = json_number(r.residual_i);
  j["residual_ii"] = json_number(r.residual_ii);
  j["residual_iii"] = json_number(r.residual_iii);
  j["residual_iv"] = json_number(r.residual_iv);
  j["dstar_gap"] = json_number(r.dstar_gap);
  j["aprox_inclusion"] = json_number(r.aprox_inclusion);
  j["bprox_inclusion"] = json_number(r.bprox_inclusion);
  j["cq_primal"] = r.cq_primal;
  j["cq_dual"] = r.cq_dual;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["newton_steps"] = r.newton_steps;
  j["verified"] = r.converged;
  return j;
}

Json suite_to_json(const SuiteReport& s) {
  Json j;
  j["name"] = s.suite;
  j["passed"] = s.passed();
  j["failed"] = s.failed();
  j["ok"] = s.ok();
  Json maxima = Json::object();
  for (const auto& c : s.checks) {
    if (!maxima.contains(c.name)) maxima[c.name] = json_number(s.max_value(c.name));
  }
  j["max"] = maxima;
  Json failures = Json::array();
  for (const auto& c : s.checks) {
    if (c.passed) continue;
    if (failures.size() >= 50) break;
    failures.push_back(
        {{"check", c.name}, {"value", json_number(c.value)}, {"bound", json_number(c.bound)}});
  }
  j["failures"] = failures;
  return j;
}

// ---------------------------------------------------------------------------
// Inputs

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::vector<Vec> load_csv_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::vector<Vec> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw UsageError(path + ":" + std::to_string(lineno) + ": not a number: \"" + cell + "\"");
      }
    }
    if (!rows.empty() && rows.front().size() != static_cast<Index>(vals.size())) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": row length differs");
    }
    rows.push_back(Eigen::Map<Vec>(vals.data(), static_cast<Index>(vals.size())));
  }
  if (rows.empty()) throw UsageError(path + ": no vectors");
  return rows;
}

void apply_tol_override(ToleranceProfile& tol, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw UsageError("tolerance override needs key=value");
  const std::string key = assignment.substr(0, eq);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(assignment.substr(eq + 1), &used);
    if (used != assignment.size() - eq - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw UsageError("tolerance override \"" + assignment + "\": bad value");
  }
  if (key == "value_tol") {
    tol.value_tol = value;
  } else if (key == "vector_tol") {
    tol.vector_tol = value;
  } else if (key == "fd_step") {
    tol.fd_step = value;
  } else if (key == "gap_tol") {
    tol.gap_tol = value;
  } else {
    throw UsageError("unknown tolerance \"" + key + "\"");
  }
}

// ---------------------------------------------------------------------------
// Run

namespace {

const std::set<std::string> kSuites = {"theorem", "hilbert", "cone", "frame", "resolvent", "oracle"};
const std::set<std::string> kKeys = {"dim",  "geometry",   "phi",   "points",
                                     "seed", "tolerances", "suites", "frame",
                                     "oracle_resolution", "execution"};

std::vector<std::string> read_suites(const Json& config, bool frame_mode) {
  if (!config.contains("suites")) {
    return {frame_mode ? "frame" : "theorem"};
  }
  const Json& s = config.at("suites");
  if (!s.is_array() || s.empty()) throw UsageError("suites: expected a non-empty list");
  std::vector<std::string> out;
  for (const auto& v : s) {
    if (!v.is_string() || !kSuites.count(v.get<std::string>())) {
      throw UsageError("suites: unknown suite " + v.dump());
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

Mat read_frame(const Json& config, const RunOverrides& ov) {
  std::vector<Vec> rows;
  if (ov.frame_csv) {
    rows = load_csv_vectors(*ov.frame_csv);
  } else if (config.contains("frame")) {
    const Json& fr = config.at("frame");
    if (fr.is_object() && fr.contains("csv")) {
      rows = load_csv_vectors(resolve_path(ov.base_dir, fr.at("csv").get<std::string>()));
    } else {
      const Json& vs = fr.is_object() ? need(fr, "vectors", "frame") : fr;
      if (!vs.is_array() || vs.empty() || !vs[0].is_array()) {
        throw UsageError("frame: expected a list of vectors");
      }
      const auto n = static_cast<Index>(vs[0].size());
      const Mat cols = read_columns(vs, n, "frame");
      for (Index j = 0; j < cols.cols(); ++j) rows.push_back(cols.col(j));
    }
  } else {
    throw UsageError("frame suite needs frame vectors (config \"frame\" or a CSV file)");
  }
  Mat cols(rows.front().size(), static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) cols.col(static_cast<Index>(j)) = rows[j];
  return cols;
}

}  // namespace

RunOutcome run_config(const Json& config, const RunOverrides& ov, const Registry& registry) {
  if (!config.is_object()) throw UsageError("config: expected a JSON object");
  for (const auto& [k, v] : config.items()) {
    if (!kKeys.count(k)) throw UsageError("config: unknown key \"" + k + "\"");
  }
  try {
    const bool frame_mode = ov.frame_csv.has_value();
    const std::vector<std::string> suites = read_suites(config, frame_mode);
    const auto wants = [&](const char* s) {
      return std::find(suites.begin(), suites.end(), s) != suites.end();
    };

    std::uint64_t seed = config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 0;
    if (ov.seed) seed = *ov.seed;

    ToleranceProfile tol;
    if (config.contains("tolerances")) {
      for (const auto& [k, v] : config.at("tolerances").items()) {
        apply_tol_override(tol, k + "=" + fmt(read_number(v, "tolerances." + k)));
      }
    }
    for (const auto& a : ov.tol_overrides) apply_tol_override(tol, a);
    tol.validate();

    Execution exec = Execution::parallel;
    if (config.contains("execution")) {
      const std::string e = config.at("execution").get<std::string>();
      if (e == "serial") {
        exec = Execution::serial;
      } else if (e != "parallel") {
        throw UsageError("execution: expected \"serial\" or \"parallel\"");
      }
    }
    const int resolution =
        config.contains("oracle_resolution") ? config.at("oracle_resolution").get<int>() : 201;

    std::optional<FrameSystem> frame;
    if (wants("frame")) frame = build_frame(read_frame(config, ov));

    // Points and dimension.
    std::vector<Vec> explicit_points;
    int count = 10;
    std::uint64_t point_seed = seed;
    if (config.contains("points")) {
      const Json& pts = config.at("points");
      if (pts.is_array()) {
        if (pts.empty()) throw UsageError("points: empty list");
        const auto n = static_cast<Index>(pts[0].is_array() ? pts[0].size() : 0);
        for (const auto& v : pts) explicit_points.push_back(read_vec(v, n, "points"));
      } else if (pts.is_object() && pts.contains("csv")) {
        explicit_points = load_csv_vectors(resolve_path(ov.base_dir, pts.at("csv").get<std::string>()));
      } else if (pts.is_object()) {
        count = need(pts, "count", "points").get<int>();
        if (pts.contains("seed")) point_seed = pts.at("seed").get<std::uint64_t>();
      } else {
        throw UsageError("points: expected a list, {count, seed} or {csv}");
      }
    }
    if (count < 1) throw UsageError("points.count must be >= 1");

    Index n = 0;
    if (config.contains("dim")) n = config.at("dim").get<Index>();
    if (!explicit_points.empty()) {
      if (n != 0 && explicit_points.front().size() != n) throw UsageError("points: dimension differs from dim");
      n = explicit_points.front().size();
      count = static_cast<int>(explicit_points.size());
    }
    if (frame) {
      if (n != 0 && frame->dim() != n) throw UsageError("frame: dimension differs from dim");
      n = frame->dim();
    }
    if (n < 1) throw UsageError("config: \"dim\" is required");

    Rng param_rng(seed);
    const bool need_geometry =
        wants("theorem") || wants("resolvent") || wants("oracle") || wants("cone");
    const ConvexFunction phi = registry.make_phi(need(config, "phi", "config"), n, param_rng);
    std::optional<LegendreFunction> f;
    if (need_geometry) f = registry.make_geometry(need(config, "geometry", "config"), n, param_rng);

    Json report;
    report["schema"] = kSchemaVersion;
    report["tool"] = {{"name", "moreau"}, {"version", kToolVersion}};
    report["seed"] = seed;
    report["config"] = {{"dim", n},
                        {"phi", phi.label()},
                        {"suites", suites},
                        {"points", count},
                        {"execution", exec == Execution::serial ? "serial" : "parallel"}};
    if (f) report["config"]["geometry"] = f->label();
    report["tolerances"] = {{"value_tol", tol.value_tol},
                            {"vector_tol", tol.vector_tol},
                            {"fd_step", tol.fd_step},
                            {"gap_tol", tol.gap_tol}};

    ProxOptions opts;
    opts.tol = tol;
    std::vector<SuiteReport> results;
    std::vector<Scenario> scenarios;
    std::vector<ScenarioOutcome> outcomes;

    if (need_geometry) {
      const auto cert = PairingLedger::standard().certify(*f, phi);
      if (!cert || !cert->cq_dual) {
        throw UsageError("pairing (" + f->label() + ", " + phi.label() +
                         ") is not certified by the pairing ledger");
      }
      report["pairing"] = {{"cq_primal", cert->cq_primal},
                           {"cq_dual", cert->cq_dual},
                           {"automatic", cert->automatic},
                           {"justification", cert->justification}};
      if (wants("oracle") && n > 2) throw UsageError("oracle suite needs dim <= 2");
      if (wants("cone")) {
        const bool lp = f->kind() == LegendreFunction::Kind::pnorm_energy ||
                        f->kind() == LegendreFunction::Kind::euclidean;
        if (!lp || phi.kind() != ConvexFunction::Kind::cone_indicator) {
          throw UsageError("cone suite needs an l^p geometry and a cone indicator");
        }
      }
      SumInterior si;
      try {
        si = sum_interior(f->dom_f(), phi.domain());
      } catch (const UnsupportedError& e) {
        throw UsageError(e.what());
      }
      for (int i = 0; i < count; ++i) {
        Scenario s{static_cast<std::size_t>(i), Pairing{*f, phi}, PrimalVector::zero(n), 0};
        if (!explicit_points.empty()) {
          const Vec& x = explicit_points[static_cast<std::size_t>(i)];
          if (!f->dom_f().contains_interior(x) || !si.contains(x)) {
            throw UsageError("points[" + std::to_string(i) + "] is not admissible for the pairing");
          }
          s.x = PrimalVector(x);
          s.seed = point_seed;
        } else {
          s.seed = derive_seed(point_seed, static_cast<std::uint64_t>(i));
          Rng rng(s.seed);
          s.x = PrimalVector(sample_admissible(*f, phi, rng));
        }
        scenarios.push_back(std::move(s));
      }
      outcomes = run_scenarios(scenarios, opts, exec);
      if (wants("theorem")) results.push_back(theorem_suite(outcomes, tol));
      if (wants("cone")) results.push_back(cone_suite(outcomes, tol));
      if (wants("resolvent")) results.push_back(resolvent_suite(scenarios, outcomes, tol));
      if (wants("oracle")) results.push_back(oracle_suite(scenarios, outcomes, opts, resolution, exec));
    }
    if (wants("hilbert")) {
      SuiteReport h = verify_hilbert_special_cases(seed, tol, count, {n});
      results.push_back(std::move(h));
    }
    if (frame) results.push_back(frame_suite(*frame, {phi}, count, seed, opts));

    Json scen = Json::array();
    Json maxima = Json::object();
    double mx[5] = {-kInf, -kInf, -kInf, -kInf, -kInf};
    long long iters = 0, newton = 0, nonconv = 0;
    std::ostringstream csv;
    csv << "index,seed,residual_i,residual_ii,residual_iii,residual_iv,dstar_gap,converged,error\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      const auto& r = o.report;
      scen.push_back(report_to_json(r, i, o.error));
      csv << i << "," << r.seed;
      if (o.error.empty()) {
        const double vals[5] = {r.residual_i, r.residual_ii, r.residual_iii, r.residual_iv,
                                r.dstar_gap};
        for (int k = 0; k < 5; ++k) {
          mx[k] = std::max(mx[k], std::isnan(vals[k]) ? kInf : vals[k]);
          csv << "," << fmt(vals[k]);
        }
        csv << "," << (r.converged ? 1 : 0) << ",\n";
        iters += r.iterations;
        newton += r.newton_steps;
        if (!r.converged) ++nonconv;
      } else {
        ++nonconv;
        std::string e = o.error;
        for (char& ch : e) {
          if (ch == ',' || ch == '\n') ch = ';';
        }
        csv << ",,,,,,0," << e << "\n";
      }
    }
    if (!outcomes.empty()) {
      const char* names[5] = {"residual_i", "residual_ii", "residual_iii", "residual_iv",
                              "dstar_gap"};
      for (int k = 0; k < 5; ++k) maxima[names[k]] = json_number(mx[k]);
    }
    report["scenarios"] = scen;
    report["max_residuals"] = maxima;
    report["solver"] = {{"iterations", iters}, {"newton_steps", newton}, {"nonconverged", nonconv}};

    bool ok = true;
    report["suites"] = Json::array();
    for (const auto& s : results) {
      report["suites"].push_back(suite_to_json(s));
      ok = ok && s.ok();
    }
    report["ok"] = ok;
    return RunOutcome{report, csv.str(), ok};
  } catch (const Json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  } catch (const NotAFrameError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace moreau
