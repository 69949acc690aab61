#include "spvqe/scan.hpp"

#include "spvqe/errors.hpp"
#include "spvqe/seed.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace spvqe {

namespace fs = std::filesystem;
using nlohmann::json;

Method method_from_string(const std::string& name) {
  if (name == "vqe") return Method::Vqe;
  if (name == "cvqe") return Method::Cvqe;
  if (name == "spvqe") return Method::Spvqe;
  throw StructuralError("unknown method '" + name + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Vqe: return "vqe";
    case Method::Cvqe: return "cvqe";
    case Method::Spvqe: return "spvqe";
  }
  return "spvqe";
}

void ScanConfig::validate() const {
  if (repeats < 1) throw StructuralError("config: repeats must be >= 1");
  if (restarts < 1) throw StructuralError("config: restarts must be >= 1");
  if (depth < 0) throw StructuralError("config: depth must be >= 0");
  if (shots < 0) throw StructuralError("config: shots must be >= 0");
  if (jobs < 1) throw StructuralError("config: jobs must be >= 1");
  if (n_steps < 1) throw StructuralError("config: n_steps must be >= 1");
  if (!(mu_max >= 0.0) || !std::isfinite(mu_max)) throw StructuralError("config: mu_max must be finite and >= 0");
  optimizer.validate();
  for (const auto& c : constraints) {
    if (c.kind == ConstraintKind::Custom) throw StructuralError("config: custom constraints cannot be given in a config");
    if (c.mu_max && (!(*c.mu_max >= 0.0) || !std::isfinite(*c.mu_max))) {
      throw StructuralError("config: constraint mu_max must be finite and >= 0");
    }
  }
  std::set<std::string> labels;
  for (const auto& p : points) {
    if (!labels.insert(p.label).second) throw StructuralError("config: duplicate point label '" + p.label + "'");
    if (!fs::exists(p.fcidump)) throw StructuralError("config: FCIDUMP not found: " + p.fcidump.string());
  }
}

namespace {

template <typename T>
T take(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw StructuralError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw StructuralError("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw StructuralError("config: unknown key '" + key + "' in " + where);
    }
  }
}

}  // namespace

ScanConfig scan_config_from_json(const json& j, const fs::path& base_dir) {
  reject_unknown(j,
                 {"points", "method", "constraints", "mapping", "ms2", "depth", "optimizer", "schedule", "shots",
                  "repeats", "restarts", "seed", "jobs"},
                 "config");
  ScanConfig cfg;
  if (j.contains("points")) {
    for (const auto& p : j.at("points")) {
      reject_unknown(p, {"label", "bond_length", "fcidump"}, "point");
      GeometryPoint g;
      g.bond_length = take<double>(p, "bond_length", 0.0);
      g.label = take<std::string>(p, "label", "");
      if (g.label.empty()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", g.bond_length);
        g.label = buf;
      }
      const fs::path path = take<std::string>(p, "fcidump", "");
      if (path.empty()) throw StructuralError("config: point '" + g.label + "' has no fcidump");
      g.fcidump = path.is_absolute() || base_dir.empty() ? path : base_dir / path;
      cfg.points.push_back(std::move(g));
    }
  }
  cfg.method = method_from_string(take<std::string>(j, "method", to_string(cfg.method)));
  if (j.contains("constraints")) {
    for (const auto& c : j.at("constraints")) {
      reject_unknown(c, {"label", "target", "mu_max"}, "constraint");
      ConstraintSpec spec;
      spec.kind = constraint_kind_from_string(take<std::string>(c, "label", ""));
      if (!c.contains("target")) throw StructuralError("config: constraint without target");
      spec.target = take<double>(c, "target", 0.0);
      if (c.contains("mu_max") && !c.at("mu_max").is_null()) spec.mu_max = take<double>(c, "mu_max", 0.0);
      cfg.constraints.push_back(spec);
    }
  }
  cfg.mapping = mapping_from_string(take<std::string>(j, "mapping", to_string(cfg.mapping)));
  if (j.contains("ms2") && !j.at("ms2").is_null()) cfg.ms2 = take<int>(j, "ms2", 0);
  cfg.depth = take<int>(j, "depth", cfg.depth);
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    reject_unknown(o,
                   {"method", "max_iterations", "gradient_tolerance", "sweeps", "shuffle", "max_evaluations",
                    "fit_tolerance"},
                   "optimizer");
    auto& oc = cfg.optimizer;
    oc.method = optimizer_method_from_string(take<std::string>(o, "method", to_string(oc.method)));
    oc.max_iterations = take<int>(o, "max_iterations", oc.max_iterations);
    oc.gradient_tolerance = take<double>(o, "gradient_tolerance", oc.gradient_tolerance);
    oc.sweeps = take<int>(o, "sweeps", oc.sweeps);
    oc.shuffle = take<bool>(o, "shuffle", oc.shuffle);
    oc.max_evaluations = take<long>(o, "max_evaluations", oc.max_evaluations);
    oc.fit_tolerance = take<double>(o, "fit_tolerance", oc.fit_tolerance);
  }
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    reject_unknown(s, {"mu_max", "n_steps", "budget"}, "schedule");
    cfg.mu_max = take<double>(s, "mu_max", cfg.mu_max);
    cfg.n_steps = take<int>(s, "n_steps", cfg.n_steps);
    cfg.budget = budget_mode_from_string(take<std::string>(s, "budget", to_string(cfg.budget)));
  }
  cfg.shots = take<int>(j, "shots", cfg.shots);
  cfg.repeats = take<int>(j, "repeats", cfg.repeats);
  cfg.restarts = take<int>(j, "restarts", cfg.restarts);
  cfg.seed = take<std::uint64_t>(j, "seed", cfg.seed);
  cfg.jobs = take<int>(j, "jobs", cfg.jobs);
  return cfg;
}

ScanConfig load_scan_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
  return scan_config_from_json(j, path.parent_path());
}

json to_json(const ScanConfig& cfg) {
  json j;
  j["points"] = json::array();
  for (const auto& p : cfg.points) {
    j["points"].push_back({{"label", p.label}, {"bond_length", p.bond_length}, {"fcidump", p.fcidump.string()}});
  }
  j["method"] = to_string(cfg.method);
  j["constraints"] = json::array();
  for (const auto& c : cfg.constraints) {
    json cj = {{"label", to_string(c.kind)}, {"target", c.target}};
    if (c.mu_max) cj["mu_max"] = *c.mu_max;
    j["constraints"].push_back(cj);
  }
  j["mapping"] = to_string(cfg.mapping);
  j["ms2"] = cfg.ms2 ? json(*cfg.ms2) : json(nullptr);
  j["depth"] = cfg.depth;
  const auto& o = cfg.optimizer;
  j["optimizer"] = {{"method", to_string(o.method)},
                    {"max_iterations", o.max_iterations},
                    {"gradient_tolerance", o.gradient_tolerance},
                    {"sweeps", o.sweeps},
                    {"shuffle", o.shuffle},
                    {"max_evaluations", o.max_evaluations},
                    {"fit_tolerance", o.fit_tolerance}};
  j["schedule"] = {{"mu_max", cfg.mu_max}, {"n_steps", cfg.n_steps}, {"budget", to_string(cfg.budget)}};
  j["shots"] = cfg.shots;
  j["repeats"] = cfg.repeats;
  j["restarts"] = cfg.restarts;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  return j;
}

bool ScanReport::ok() const {
  return std::all_of(records.begin(), records.end(), [](const ScanRecord& r) { return r.ok(); });
}

std::pair<int, int> target_occupation(const FermionIntegrals& ints, const ScanConfig& cfg) {
  int n = ints.n_electrons();
  for (const auto& c : cfg.constraints) {
    if (c.kind != ConstraintKind::ParticleNumber) continue;
    const double r = std::round(c.target);
    if (std::abs(c.target - r) > 1e-9 || r < 0 || r > 2 * ints.n_spatial()) {
      throw StructuralError("particle-number target " + std::to_string(c.target) + " is not a valid electron count");
    }
    n = static_cast<int>(r);
  }
  int ms2 = ints.ms2();
  if (cfg.ms2) {
    ms2 = *cfg.ms2;
    if ((n + ms2) % 2 != 0) {
      throw StructuralError("ms2 = " + std::to_string(ms2) + " is incompatible with " + std::to_string(n) + " electrons");
    }
  } else if ((n + ms2) % 2 != 0) {
    // header MS2 belongs to the neutral file; pick the lowest |ms2| of the right parity
    ms2 = n % 2;
  }
  return {n, ms2};
}

PreparedPoint prepare_point(const GeometryPoint& point, const ScanConfig& cfg) {
  const FermionIntegrals ints = load_fcidump(point.fcidump);
  const int modes = 2 * ints.n_spatial();
  if (mapped_qubits(modes, cfg.mapping) < 1) {
    throw StructuralError(point.fcidump.string() + ": mapping " + to_string(cfg.mapping) + " leaves no qubits");
  }
  PreparedPoint out;
  std::tie(out.n_electrons, out.ms2) = target_occupation(ints, cfg);
  const auto sector = ReductionSector::from_occupation(out.n_electrons, out.ms2);
  out.hamiltonian = map_to_qubits(build_hamiltonian(ints), cfg.mapping, sector);
  out.number = map_to_qubits(number_operator(modes), cfg.mapping, sector);
  out.spin = map_to_qubits(total_spin_operator(ints.n_spatial()), cfg.mapping, sector);
  for (const auto& c : cfg.constraints) {
    const QubitOperator& op = c.kind == ConstraintKind::TotalSpin ? out.spin : out.number;
    out.constraints.push_back({op, c.target, c.kind});
    out.mu_max.push_back(c.mu_max.value_or(cfg.mu_max));
  }
  out.reference = constrained_ground_state(out.hamiltonian, out.constraints);
  if (!out.constraints.empty()) {
    std::vector<QubitOperator> ops;
    for (const auto& c : out.constraints) ops.push_back(c.op);
    const auto spec = exact_spectrum(out.hamiltonian, ops);
    for (std::size_t i = 0; i < out.constraints.size(); ++i) {
      try {
        out.mu_bound.emplace_back(mu_max_lower_bound(spec.eigenvalues(0), out.reference.energy,
                                                     spec.observable_values[0][i], out.constraints[i].target));
      } catch (const DegenerateConstraintError&) {
        out.mu_bound.emplace_back();
      }
    }
  }
  return out;
}

std::vector<std::string> mu_max_warnings(const std::string& label, const PreparedPoint& pp) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < pp.mu_bound.size(); ++i) {
    if (!pp.mu_bound[i] || pp.mu_max[i] >= std::max(0.0, *pp.mu_bound[i])) continue;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: %s mu_max %g is below the penalty bound %g", label.c_str(),
                  to_string(pp.constraints[i].kind).c_str(), pp.mu_max[i], *pp.mu_bound[i]);
    out.emplace_back(buf);
  }
  return out;
}

std::vector<double> random_start(int n_params, std::uint64_t seed) {
  constexpr double pi = 3.141592653589793;
  std::mt19937_64 rng(seed);
  std::vector<double> x(static_cast<std::size_t>(n_params));
  // explicit 53-bit mantissa draw: uniform_real_distribution differs between standard libraries
  for (auto& v : x) v = -pi + 2.0 * pi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  return x;
}

std::uint64_t record_seed(std::uint64_t master, std::size_t point, int repeat, Method method) {
  return derive_seed({master, point, static_cast<std::uint64_t>(repeat), static_cast<std::uint64_t>(method) + 1});
}

namespace {

constexpr std::uint64_t kStartTag = 0x7374617274;
constexpr std::uint64_t kRemeasureTag = 0x72656d;

struct Attempt {
  VqeResult result;
  double selection = 0.0;
  long evaluations = 0;
};

Attempt run_method(const ScanConfig& cfg, const PreparedPoint& pp, const Ansatz& ansatz, std::vector<double> x0,
                   const OptimizerConfig& opt, Sampling sampling) {
  Attempt a;
  switch (cfg.method) {
    case Method::Vqe:
      a.result = vqe_run(pp.hamiltonian, ansatz, std::move(x0), opt, sampling);
      a.selection = a.result.cost;
      a.evaluations = a.result.trace.evaluations;
      break;
    case Method::Cvqe:
      a.result = cvqe_run(pp.hamiltonian, pp.constraints, pp.mu_max, ansatz, std::move(x0), opt, sampling);
      a.selection = a.result.cost;
      a.evaluations = a.result.trace.evaluations;
      break;
    case Method::Spvqe: {
      const auto sp = spvqe_run(pp.hamiltonian, pp.constraints, PenaltySchedule(pp.mu_max, cfg.n_steps), ansatz,
                                std::move(x0), opt, cfg.budget, sampling);
      a.result = sp.best();
      a.selection = sp.steps[sp.best_index].selection_cost;
      a.evaluations = sp.evaluations();
      break;
    }
  }
  return a;
}

ScanRecord run_record(const ScanConfig& cfg, const GeometryPoint& gp, const PreparedPoint& pp, std::size_t point,
                      int repeat) {
  const auto t0 = std::chrono::steady_clock::now();
  ScanRecord rec;
  rec.label = gp.label;
  rec.bond_length = gp.bond_length;
  rec.method = cfg.method;
  rec.repeat = repeat;
  rec.seed = record_seed(cfg.seed, point, repeat, cfg.method);
  rec.shots = cfg.shots;
  rec.ns = cfg.method == Method::Spvqe ? cfg.n_steps : cfg.method == Method::Cvqe ? 1 : 0;
  rec.mu_max = cfg.method == Method::Vqe || pp.mu_max.empty() ? 0.0 : *std::max_element(pp.mu_max.begin(), pp.mu_max.end());
  rec.reference_energy = pp.reference.energy;

  const Ansatz ansatz = build_ansatz(pp.hamiltonian.n_qubits(), cfg.depth);
  Attempt best;
  long evaluations = 0;
  for (int j = 0; j < cfg.restarts; ++j) {
    // starting points ignore the method so cvqe and spvqe see the same ones
    auto x0 = random_start(ansatz.num_parameters(),
                           derive_seed({cfg.seed, point, static_cast<std::uint64_t>(repeat), kStartTag,
                                        static_cast<std::uint64_t>(j)}));
    const std::uint64_t seed = j == 0 ? rec.seed : derive_seed({rec.seed, static_cast<std::uint64_t>(j)});
    OptimizerConfig opt = cfg.optimizer;
    opt.seed = seed;
    if (cfg.shots > 0 && opt.method == OptimizerMethod::NFT) opt.fit_tolerance = std::numeric_limits<double>::infinity();
    Attempt a = run_method(cfg, pp, ansatz, std::move(x0), opt, {cfg.shots, seed});
    evaluations += a.evaluations;
    if (j == 0 || a.selection < best.selection) best = std::move(a);
  }

  const VqeResult& res = best.result;
  const Statevector state = apply_ansatz(ansatz, res.params);
  rec.cost = res.cost;
  rec.penalty = res.penalty;
  rec.energy = res.energy;
  if (cfg.shots > 0) {
    const auto est = final_remeasure(pp.hamiltonian, ansatz, res.params, cfg.shots, derive_seed({rec.seed, kRemeasureTag}));
    rec.energy = est.mean;
    rec.energy_stderr = est.std_error;
  }
  rec.spin_expval = expval(state, pp.spin);
  rec.number_expval = expval(state, pp.number);
  const auto err = observable_error(rec.energy, state, pp.reference, {pp.spin, pp.number});
  rec.energy_error = err.energy_error;
  rec.spin_error = err.spin_error;
  rec.number_error = err.number_error;
  for (const auto& c : pp.constraints) {
    rec.constraint_error = std::max(rec.constraint_error, std::abs(expval(state, c.op) - c.target));
  }
  rec.evaluations = evaluations;
  rec.params = res.params;
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

ScanReport run_scan(const ScanConfig& cfg) {
  cfg.validate();
  const std::size_t n_points = cfg.points.size();
  const auto n_repeats = static_cast<std::size_t>(cfg.repeats);

  std::vector<std::optional<PreparedPoint>> prepared(n_points);
  std::vector<std::string> point_errors(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    try {
      prepared[i] = prepare_point(cfg.points[i], cfg);
    } catch (const std::exception& e) {
      point_errors[i] = e.what();
    }
  }

  ScanReport report;
  if (cfg.method != Method::Vqe) {
    for (std::size_t i = 0; i < n_points; ++i) {
      if (!prepared[i]) continue;
      for (auto& w : mu_max_warnings(cfg.points[i].label, *prepared[i])) report.warnings.push_back(std::move(w));
    }
  }
  report.records.resize(n_points * n_repeats);
  const auto work = [&](std::size_t idx) {
    const std::size_t p = idx / n_repeats;
    const int r = static_cast<int>(idx % n_repeats);
    ScanRecord& rec = report.records[idx];
    if (prepared[p]) {
      try {
        rec = run_record(cfg, cfg.points[p], *prepared[p], p, r);
        return;
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
    } else {
      rec.error = point_errors[p];
    }
    rec.label = cfg.points[p].label;
    rec.bond_length = cfg.points[p].bond_length;
    rec.method = cfg.method;
    rec.repeat = r;
    rec.seed = record_seed(cfg.seed, p, r, cfg.method);
    rec.shots = cfg.shots;
    rec.energy = rec.cost = rec.penalty = std::numeric_limits<double>::quiet_NaN();
  };

  const std::size_t total = report.records.size();
  const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), total);
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
    return report;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) work(i);
    });
  }
  for (auto& t : pool) t.join();
  return report;
}

namespace {

void append(ScanReport& out, ScanReport&& part) {
  std::move(part.records.begin(), part.records.end(), std::back_inserter(out.records));
  for (auto& w : part.warnings) {
    if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) out.warnings.push_back(std::move(w));
  }
}

}  // namespace

ScanReport steps_sweep(const ScanConfig& cfg, const std::vector<int>& ns_values) {
  if (cfg.method != Method::Spvqe) throw StructuralError("steps_sweep: method must be spvqe");
  ScanReport out;
  for (int ns : ns_values) {
    ScanConfig c = cfg;
    c.n_steps = ns;
    auto part = run_scan(c);
    append(out, std::move(part));
  }
  return out;
}

ScanReport robustness_study(const ScanConfig& cfg, int n_starts) {
  if (n_starts < 2) throw StructuralError("robustness_study: n_starts must be >= 2");
  ScanReport out;
  for (Method m : {Method::Cvqe, Method::Spvqe}) {
    ScanConfig c = cfg;
    c.method = m;
    c.repeats = n_starts;
    c.budget = BudgetMode::Total;
    auto part = run_scan(c);
    append(out, std::move(part));
  }
  return out;
}

std::vector<ErrorSummary> summarize(const ScanReport& report) {
  std::vector<ErrorSummary> out;
  std::vector<std::vector<double>> energy_errors;
  std::map<std::tuple<std::string, int, int>, std::size_t> index;
  for (const auto& r : report.records) {
    if (!r.ok()) continue;
    const auto key = std::make_tuple(r.label, static_cast<int>(r.method), r.ns);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({r.label, r.method, r.ns});
      energy_errors.emplace_back();
    }
    auto& s = out[it->second];
    ++s.count;
    s.mean_energy_error += r.energy_error;
    s.mean_spin_error += r.spin_error;
    s.mean_number_error += r.number_error;
    s.mean_constraint_error += r.constraint_error;
    energy_errors[it->second].push_back(r.energy_error);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& s = out[i];
    const double n = static_cast<double>(s.count);
    s.mean_energy_error /= n;
    s.mean_spin_error /= n;
    s.mean_number_error /= n;
    s.mean_constraint_error /= n;
    if (s.count > 1) {
      double ss = 0.0;
      for (double e : energy_errors[i]) ss += (e - s.mean_energy_error) * (e - s.mean_energy_error);
      s.std_energy_error = std::sqrt(ss / (n - 1.0));
    }
  }
  return out;
}

namespace {

// non-finite values (failed records) become empty fields
std::string num(double v) {
  if (!std::isfinite(v)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string records_csv(const ScanReport& report) {
  std::ostringstream out;
  out << "label,bond_length_angstrom,method,repeat,seed,energy_hartree,cost,penalty,spin_expval,number_expval,"
         "energy_error,spin_error,number_error,evaluations,ns,mu_max,shots\n";
  for (const auto& r : report.records) {
    out << csv_field(r.label) << ',' << num(r.bond_length) << ',' << to_string(r.method) << ',' << r.repeat << ','
        << r.seed << ',' << num(r.energy) << ',' << num(r.cost) << ',' << num(r.penalty) << ',' << num(r.spin_expval)
        << ',' << num(r.number_expval) << ',' << num(r.energy_error) << ',' << num(r.spin_error) << ','
        << num(r.number_error) << ',' << r.evaluations << ',' << r.ns << ',' << num(r.mu_max) << ',' << r.shots
        << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<ErrorSummary>& summary) {
  std::ostringstream out;
  out << "label,method,ns,count,mean_energy_error,std_energy_error,mean_spin_error,mean_number_error,"
         "mean_constraint_error\n";
  for (const auto& s : summary) {
    out << csv_field(s.label) << ',' << to_string(s.method) << ',' << s.ns << ',' << s.count << ','
        << num(s.mean_energy_error) << ',' << num(s.std_energy_error) << ',' << num(s.mean_spin_error) << ','
        << num(s.mean_number_error) << ',' << num(s.mean_constraint_error) << '\n';
  }
  return out.str();
}

json to_json(const ScanReport& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({{"label", r.label},
                       {"bond_length_angstrom", r.bond_length},
                       {"method", to_string(r.method)},
                       {"repeat", r.repeat},
                       {"seed", r.seed},
                       {"energy_hartree", finite_or_null(r.energy)},
                       {"energy_stderr", r.energy_stderr},
                       {"cost", finite_or_null(r.cost)},
                       {"penalty", finite_or_null(r.penalty)},
                       {"spin_expval", r.spin_expval},
                       {"number_expval", r.number_expval},
                       {"reference_energy", r.reference_energy},
                       {"energy_error", r.energy_error},
                       {"spin_error", r.spin_error},
                       {"number_error", r.number_error},
                       {"constraint_error", r.constraint_error},
                       {"evaluations", r.evaluations},
                       {"ns", r.ns},
                       {"mu_max", r.mu_max},
                       {"shots", r.shots},
                       {"params", r.params},
                       {"wall_seconds", r.wall_seconds},
                       {"error", r.error.empty() ? json(nullptr) : json(r.error)}});
  }
  json summary = json::array();
  for (const auto& s : summarize(report)) {
    summary.push_back({{"label", s.label},
                       {"method", to_string(s.method)},
                       {"ns", s.ns},
                       {"count", s.count},
                       {"mean_energy_error", s.mean_energy_error},
                       {"std_energy_error", s.std_energy_error},
                       {"mean_spin_error", s.mean_spin_error},
                       {"mean_number_error", s.mean_number_error},
                       {"mean_constraint_error", s.mean_constraint_error}});
  }
  return {{"ok", report.ok()}, {"records", records}, {"summary", summary}, {"warnings", report.warnings}};
}

void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace spvqe
