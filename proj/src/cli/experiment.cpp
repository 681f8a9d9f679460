#include "diraclab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "diraclab/errors.hpp"
#include "diraclab/gauge.hpp"
#include "diraclab/nls.hpp"
#include "diraclab/serialization.hpp"

namespace diraclab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<ExperimentInfo> kCatalog = {
    {ExperimentKind::gauge_check, "gauge-check",
     "Integrate the gauge family and check unitarity, diagonalization of N(Q) and the block "
     "reduction of M(Q)."},
    {ExperimentKind::factorization_check, "factorization-check",
     "Compare M(-Q)M(Q)F with N(Q)N(Q)F on a smooth test field."},
    {ExperimentKind::jsymmetry_check, "jsymmetry-check",
     "Check the conjugation symmetry of M(Q) on test fields and on the assembled matrix."},
    {ExperimentKind::positivity_check, "positivity-check",
     "Smallest real part of the spectrum of the assembled M(-Q)M(Q)."},
    {ExperimentKind::spectrum, "spectrum",
     "Dense eigenvalues of an assembled operator, written to spectrum.csv."},
    {ExperimentKind::shooting, "shooting",
     "Discrete eigenvalues of a decaying scalar potential from zeros of a(z)."},
    {ExperimentKind::evolve, "evolve",
     "Split-step evolution of the matrix NLS equation with norm and symmetry diagnostics."},
    {ExperimentKind::isospectral, "isospectral",
     "Track the spectrum of M(Q(t)) along the NLS flow and report its drift."},
    {ExperimentKind::zero_curvature, "zero-curvature",
     "AKNS and zero-curvature residuals of a sampled space-time field at probe values of z."},
    {ExperimentKind::lax_check, "lax-check",
     "AKNS residuals and the Lax equation residual of a sampled space-time field."},
};

// ---------------------------------------------------------------- parsing

class ObjectReader {
 public:
  ObjectReader(const json& doc, std::string where) : doc_(doc), where_(std::move(where)) {
    if (!doc.is_object()) throw DomainError(where_ + ": expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return doc_.contains(key);
  }

  const json& at(const char* key) {
    if (!has(key)) throw DomainError(where_ + ": missing key '" + key + "'");
    return doc_.at(key);
  }

  template <typename T>
  T get(const char* key) {
    const json& v = at(key);
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      throw DomainError(where_ + ": key '" + key + "' has the wrong type");
    }
  }

  template <typename T>
  T get_or(const char* key, T fallback) {
    return has(key) ? get<T>(key) : fallback;
  }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) throw DomainError(where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& doc_;
  std::string where_;
  std::set<std::string> seen_;
};

Complex parse_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw DomainError(where + ": expected a number or [re, im]");
}

std::vector<double> parse_reals(const json& v, const std::string& where) {
  if (!v.is_array()) throw DomainError(where + ": expected an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw DomainError(where + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Reduction parse_reduction(const std::string& name, const std::string& where) {
  if (name == "focusing") return Reduction::focusing;
  if (name == "defocusing") return Reduction::defocusing;
  throw DomainError(where + ": expected 'focusing' or 'defocusing', got '" + name + "'");
}

const char* to_string(Reduction r) { return r == Reduction::focusing ? "focusing" : "defocusing"; }

ScalarProfile parse_profile(const json& doc, const std::string& where) {
  ObjectReader r(doc, where);
  ScalarProfile p;
  const auto kind = r.get<std::string>("kind");
  if (kind == "zero") {
    p.kind = ScalarProfile::Kind::zero;
  } else if (kind == "constant") {
    p.kind = ScalarProfile::Kind::constant;
  } else if (kind == "sech") {
    p.kind = ScalarProfile::Kind::sech;
  } else if (kind == "plane-wave") {
    p.kind = ScalarProfile::Kind::plane_wave;
  } else {
    throw DomainError(where + ": unknown profile kind '" + kind + "'");
  }
  if (r.has("amplitude")) p.amplitude = parse_complex(r.at("amplitude"), where);
  p.rate = r.get_or("rate", 1.0);
  p.wavenumber = r.get_or("wavenumber", 0.0);
  r.finish();
  return p;
}

PotentialSpec parse_potential(const json& doc, int m, std::uint64_t seed, fs::path& file,
                              const fs::path& base_dir) {
  ObjectReader r(doc, "potential");
  PotentialSpec spec;
  const auto shape = r.get<std::string>("shape");
  spec.allow_asymmetric = r.get_or("allow_asymmetric", false);
  if (shape == "zero") {
    spec.shape = ZeroShape{};
  } else if (shape == "constant") {
    const json& rows = r.at("value");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(m)) {
      throw DomainError("potential: constant value must have m rows");
    }
    CMatrix value(m, m);
    for (int i = 0; i < m; ++i) {
      if (!rows[i].is_array() || rows[i].size() != static_cast<std::size_t>(m)) {
        throw DomainError("potential: constant value must have m columns");
      }
      for (int j = 0; j < m; ++j) value(i, j) = parse_complex(rows[i][j], "potential.value");
    }
    spec.shape = ConstantShape{value};
  } else if (shape == "sech") {
    SechShape s;
    s.amplitudes = parse_reals(r.at("amplitudes"), "potential.amplitudes");
    if (r.has("rates")) s.rates = parse_reals(r.at("rates"), "potential.rates");
    s.center = r.get_or("center", 0.0);
    spec.shape = s;
  } else if (shape == "plane-wave") {
    PlaneWaveShape s;
    const json& amps = r.at("amplitudes");
    if (!amps.is_array()) throw DomainError("potential.amplitudes: expected an array");
    for (const auto& a : amps) s.amplitudes.push_back(parse_complex(a, "potential.amplitudes"));
    s.wavenumber = r.get<double>("wavenumber");
    spec.shape = s;
  } else if (shape == "random-bandlimited") {
    RandomBandlimitedShape s;
    s.max_mode = r.get<int>("max_mode");
    s.period = r.get<double>("period");
    s.seed = r.get_or<std::uint64_t>("seed", seed);
    s.amplitude = r.get_or("amplitude", 1.0);
    spec.shape = s;
  } else if (shape == "column") {
    ColumnShape s;
    const json& entries = r.at("entries");
    if (!entries.is_array()) throw DomainError("potential.entries: expected an array");
    for (const auto& e : entries) s.entries.push_back(parse_profile(e, "potential.entries"));
    spec.shape = s;
  } else if (shape == "file") {
    fs::path p = r.get<std::string>("path");
    file = p.is_absolute() ? p : base_dir / p;
  } else {
    throw DomainError("potential: unknown shape '" + shape + "'");
  }
  r.finish();
  return spec;
}

SearchBox parse_box(const json& doc) {
  ObjectReader r(doc, "spectral.search_box");
  SearchBox b;
  b.re_min = r.get<double>("re_min");
  b.re_max = r.get<double>("re_max");
  b.im_min = r.get<double>("im_min");
  b.im_max = r.get<double>("im_max");
  r.finish();
  if (!(b.re_min < b.re_max) || !(b.im_min < b.im_max) || !(b.im_min > 0.0)) {
    throw DomainError("spectral.search_box: must be a rectangle in the upper half plane");
  }
  return b;
}

Expression parse_expression(const std::string& name) {
  if (name == "M") return Expression::M;
  if (name == "M_neg") return Expression::M_neg;
  if (name == "N") return Expression::N;
  throw DomainError("spectral.expression: expected 'M', 'M_neg' or 'N'");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

// ------------------------------------------------------------ output files

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ComputationalError("cannot write " + path.string());
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

void write_residuals_csv(const fs::path& path, const std::vector<CheckRow>& checks) {
  std::ostringstream s;
  s << "name,value,tolerance,pass\n";
  for (const auto& c : checks) {
    s << c.name << ',' << format_double(c.value) << ',' << format_double(c.tolerance) << ','
      << (c.pass ? "true" : "false") << '\n';
  }
  write_text(path, s.str());
}

void write_spectrum(const fs::path& dir, const SpectrumSample& s, const std::string& stem) {
  std::ostringstream csv;
  write_spectrum_csv(csv, s);
  write_text(dir / (stem + ".csv"), csv.str());
  write_text(dir / (stem + ".json"), spectrum_metadata(s).dump(2) + "\n");
}

struct DiagnosticRow {
  double t;
  double l2_norm;
  double drift;  // NaN when not measured
};

void write_diagnostics(const fs::path& path, const std::vector<DiagnosticRow>& rows) {
  std::ostringstream s;
  s << "t,l2_norm,spectral_drift\n";
  for (const auto& r : rows) {
    s << format_double(r.t) << ',' << format_double(r.l2_norm) << ','
      << (std::isnan(r.drift) ? std::string("nan") : format_double(r.drift)) << '\n';
  }
  write_text(path, s.str());
}

std::string snapshot_name(std::size_t index) {
  std::ostringstream s;
  s << "snapshot_" << std::setw(4) << std::setfill('0') << index << ".json";
  return s.str();
}

// ------------------------------------------------------------ experiments

class Runner {
 public:
  explicit Runner(const ExperimentConfig& config) : config_(config) {}

  ExperimentOutcome run();

 private:
  double tol(const std::string& name) const { return config_.tolerances.at(name); }

  void check_at_most(const std::string& name, double value, const std::string& tol_name) {
    const double t = tol(tol_name);
    out_.checks.push_back({name, value, t, std::isfinite(value) && value <= t});
  }

  MatrixPotential potential() const;
  SpinorField field(std::uint64_t offset) const {
    return windowed_test_field(config_.grid, config_.m, config_.seed + offset);
  }

  void gauge_check();
  void factorization_check();
  void jsymmetry_check();
  void positivity_check();
  void spectrum();
  void shooting();
  void evolve_run();
  void isospectral();
  void space_time_checks(bool zero_curvature);

  SpaceTimeField space_time_field(const MatrixPotential& q0) const;

  const ExperimentConfig& config_;
  ExperimentOutcome out_;
};

MatrixPotential Runner::potential() const {
  if (!config_.potential_file.empty()) {
    std::ifstream in(config_.potential_file);
    if (!in) throw DomainError("cannot read potential file " + config_.potential_file.string());
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw DomainError(std::string("potential file: ") + e.what());
    }
    auto q = potential_from_json(doc);
    if (!(q.grid() == config_.grid) || q.m() != config_.m) {
      throw DomainError("potential file does not match the configured grid and m");
    }
    return q;
  }
  return sample_potential(config_.potential, config_.grid, config_.m);
}

void Runner::gauge_check() {
  const auto q = potential();
  const auto family = compute_gauge_family(q);
  check_at_most("unitarity", unitarity_deviation(family), "unitarity");
  check_at_most("determinant", determinant_deviation(family), "determinant");
  check_at_most("diagonalization", diagonalization_residual(q, field(0), config_.backend),
                "diagonalization");
  check_at_most("first_order_reduction",
                first_order_reduction_residual(q, field(1), config_.backend),
                "first_order_reduction");
  out_.scalars["anchor_index"] = family.anchor_index;
  write_text(config_.output_dir / "gauge_family.json",
             blocks_to_json(family.grid, family.m, family.samples).dump() + "\n");
}

void Runner::factorization_check() {
  const auto q = potential();
  check_at_most("factorization", factorization_residual(q, field(0), config_.backend),
                "factorization");
}

void Runner::jsymmetry_check() {
  const auto q = potential();
  out_.scalars["potential_asymmetry"] = q.asymmetry();
  check_at_most("jsymmetry", j_symmetry_residual(q, field(0), field(1), config_.backend),
                "jsymmetry");
  const Eigen::Index dim = static_cast<Eigen::Index>(q.size()) * 2 * q.m();
  if (dim <= kDenseDimensionCap) {
    const auto a = assemble_dense(q, Expression::M, config_.backend);
    check_at_most("j_matrix_identity", j_matrix_identity_residual(a), "j_matrix_identity");
  }
}

void Runner::positivity_check() {
  const auto q = potential();
  const auto report = positivity_report(q, config_.backend);
  const double norm = std::max(report.norm_estimate, std::numeric_limits<double>::min());
  out_.scalars["gap"] = report.gap;
  out_.scalars["norm_estimate"] = report.norm_estimate;
  out_.scalars["min_shifted_modulus"] = report.min_shifted_modulus;
  check_at_most("positivity", std::max(0.0, -report.gap) / norm, "positivity");
  check_at_most("kernel", std::max(0.0, 1.0 - report.min_shifted_modulus), "kernel");
}

// max over z of the distance from conj(z) to the nearest eigenvalue.
double conjugate_pairing_defect(const std::vector<Complex>& z) {
  double worst = 0.0;
  for (const auto& a : z) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : z) best = std::min(best, std::abs(std::conj(a) - b));
    worst = std::max(worst, best);
  }
  return worst;
}

void Runner::spectrum() {
  const auto q = potential();
  const auto a = assemble_dense(q, config_.spectral.expression, config_.backend,
                                !config_.grid.periodic());
  const auto s = dense_spectrum(a);
  out_.scalars["eigenvalue_count"] = s.eigenvalues.size();
  double max_im = 0.0;
  for (const auto& z : s.eigenvalues) max_im = std::max(max_im, z.imag());
  out_.scalars["max_imaginary_part"] = max_im;
  check_at_most("conjugate_pairing", conjugate_pairing_defect(s.eigenvalues),
                "conjugate_pairing");
  write_spectrum(config_.output_dir, s, "spectrum");
}

// Eigenvalue ladder of A sech(x): i(A - k - 1/2) for every positive term.
std::vector<Complex> sech_ladder(double a) {
  std::vector<Complex> out;
  for (int k = 0; a - k - 0.5 > 0.0; ++k) out.emplace_back(0.0, a - k - 0.5);
  return out;
}

void Runner::shooting() {
  const auto q = potential();
  const auto roots = shooting_discrete_eigenvalues(q, config_.spectral.search_box,
                                                   config_.spectral.grid_density);
  out_.scalars["root_count"] = roots.eigenvalues.size();
  out_.scalars["dropped_candidates"] = roots.dropped_candidates;
  write_spectrum(config_.output_dir, roots, "spectrum");

  const auto* sech = std::get_if<SechShape>(&config_.potential.shape);
  const bool unit_rate =
      sech && (sech->rates.empty() ? sech->amplitudes[0] == 1.0 : sech->rates[0] == 1.0);
  if (config_.potential_file.empty() && sech && config_.m == 1 && unit_rate) {
    SpectrumSample ladder;
    const auto& box = config_.spectral.search_box;
    for (const auto& z : sech_ladder(sech->amplitudes[0])) {
      if (z.imag() >= box.im_min && z.imag() <= box.im_max) ladder.eigenvalues.push_back(z);
    }
    const auto match = spectrum_matching_distance(roots, ladder, -1, [](Complex) { return true; });
    check_at_most("sech_pattern", match.distance, "sech_pattern");
  }
  if (config_.spectral.dense_crosscheck) {
    if (!config_.grid.periodic()) {
      throw DomainError("shooting: dense_crosscheck needs a periodic grid");
    }
    const auto dense = dense_spectrum(assemble_dense(q, Expression::M, config_.backend));
    double worst = 0.0;
    for (const auto& r : roots.eigenvalues) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& z : dense.eigenvalues) best = std::min(best, std::abs(z - r));
      worst = std::max(worst, best);
    }
    check_at_most("dense_agreement", worst, "dense_agreement");
  }
}

double sign_of(Reduction r) { return r == Reduction::focusing ? 1.0 : -1.0; }

// Closed-form solution of the configured initial potential when one exists:
// diagonal plane waves (either flow) and unit-rate solitons (focusing).
std::optional<std::function<CMatrix(double, double)>> exact_solution(const ExperimentConfig& c,
                                                                     Reduction flow,
                                                                     double phase_error,
                                                                     std::string* label) {
  if (!c.potential_file.empty()) return std::nullopt;
  const int m = c.m;
  if (std::holds_alternative<ZeroShape>(c.potential.shape)) {
    if (label) *label = "zero";
    return [m](double, double) { return CMatrix::Zero(m, m).eval(); };
  }
  if (const auto* p = std::get_if<PlaneWaveShape>(&c.potential.shape)) {
    const double s = sign_of(flow);
    const PlaneWaveShape w = *p;
    if (label) *label = "plane_wave";
    return [w, m, s, phase_error](double x, double t) {
      CMatrix q = CMatrix::Zero(m, m);
      for (int j = 0; j < m; ++j) {
        const double omega = 0.5 * w.wavenumber * w.wavenumber - s * std::norm(w.amplitudes[j]);
        q(j, j) = w.amplitudes[j] * std::exp(kI * (w.wavenumber * x - omega * t + phase_error * t));
      }
      return q;
    };
  }
  if (const auto* s = std::get_if<SechShape>(&c.potential.shape)) {
    const bool soliton = s->rates.empty() || s->rates == s->amplitudes;
    if (!soliton || flow != Reduction::focusing) return std::nullopt;
    const SechShape w = *s;
    if (label) *label = "soliton";
    return [w, m, phase_error](double x, double t) {
      CMatrix q = CMatrix::Zero(m, m);
      for (int j = 0; j < m; ++j) {
        const double a = w.amplitudes[j];
        q(j, j) = a / std::cosh(a * (x - w.center)) *
                  std::exp(kI * (0.5 * a * a * t + phase_error * t));
      }
      return q;
    };
  }
  return std::nullopt;
}

double relative_l2_drift(const std::vector<EvolutionState>& trajectory, int steps) {
  const double l0 = trajectory.front().l2_norm;
  double worst = 0.0;
  for (const auto& s : trajectory) worst = std::max(worst, std::abs(s.l2_norm - l0));
  const double rel = l0 > 0.0 ? worst / l0 : worst;
  return rel / std::max(1.0, steps / 1000.0);
}

void Runner::evolve_run() {
  const auto q0 = potential();
  const auto& e = config_.evolution;
  const auto result = evolve(q0, e.dt, e.steps, e.flow, e.snapshot_every);
  out_.scalars["flow"] = to_string(e.flow);
  out_.scalars["halted"] = result.halted;
  if (result.halted) out_.scalars["error"] = result.error;
  out_.checks.push_back({"finite", result.halted ? 1.0 : 0.0, 0.0, !result.halted});

  check_at_most("l2_drift", relative_l2_drift(result.trajectory, e.steps), "l2_drift");
  double defect = 0.0;
  for (const auto& s : result.trajectory) defect = std::max(defect, s.symmetry_defect);
  check_at_most("symmetry", defect, "symmetry");

  std::string label;
  if (const auto exact = exact_solution(config_, e.flow, 0.0, &label); exact && !result.halted) {
    const auto& last = result.trajectory.back();
    double err = 0.0;
    for (int k = 0; k < last.q.size(); ++k) {
      err = std::max(err, max_abs(last.q.sample(k) - (*exact)(config_.grid.point(k), last.t)));
    }
    out_.scalars["exact_solution"] = label;
    const std::string key = label + "_error";
    if (config_.tolerances.count(key)) check_at_most(key, err, key);
  }

  std::vector<DiagnosticRow> rows;
  for (const auto& s : result.trajectory) {
    rows.push_back({s.t, s.l2_norm, std::numeric_limits<double>::quiet_NaN()});
  }
  write_diagnostics(config_.output_dir / "diagnostics.csv", rows);
  for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
    write_text(config_.output_dir / snapshot_name(i),
               to_json(result.trajectory[i].q).dump() + "\n");
  }
}

void Runner::isospectral() {
  const auto q0 = potential();
  IsospectralityOptions o;
  o.dt = config_.evolution.dt;
  o.steps = config_.evolution.steps;
  o.snapshot_every = config_.evolution.snapshot_every;
  o.flow = config_.evolution.flow;
  o.backend = config_.backend;
  o.region_min_im = config_.spectral.region_min_im;
  o.top_k = config_.spectral.top_k;
  const auto report = isospectrality_experiment(q0, o);
  out_.scalars["flow"] = to_string(o.flow);
  out_.scalars["halted"] = report.halted;
  out_.scalars["empty"] = report.empty;
  out_.checks.push_back({"finite", report.halted ? 1.0 : 0.0, 0.0, !report.halted});
  check_at_most("spectral_drift", report.max_drift, "spectral_drift");

  std::vector<EvolutionState> states;
  std::vector<DiagnosticRow> rows;
  for (std::size_t i = 0; i < report.snapshots.size(); ++i) {
    const auto& s = report.snapshots[i];
    states.push_back(s.state);
    rows.push_back({s.state.t, s.state.l2_norm, s.matching.distance});
    write_text(config_.output_dir / snapshot_name(i), to_json(s.state.q).dump() + "\n");
  }
  check_at_most("l2_drift", relative_l2_drift(states, o.steps), "l2_drift");
  write_diagnostics(config_.output_dir / "diagnostics.csv", rows);
  if (!report.snapshots.empty()) {
    write_spectrum(config_.output_dir, report.snapshots.front().spectrum, "spectrum");
  }
}

SpaceTimeField Runner::space_time_field(const MatrixPotential& q0) const {
  const auto& st = config_.space_time;
  if (st.source == SpaceTimeParams::Source::exact) {
    const auto exact = exact_solution(config_, st.reduction, st.phase_speed_error, nullptr);
    if (!exact) {
      throw DomainError(
          "space_time: no closed-form solution for this potential; use source 'evolved'");
    }
    return sample_space_time(config_.grid, config_.m, 0.0, st.dt, st.slices, *exact);
  }
  const auto result = evolve(q0, st.dt, st.slices - 1, st.reduction, 1);
  if (result.halted) throw ComputationalError("space_time: evolution halted: " + result.error);
  std::vector<MatrixPotential> slices;
  for (const auto& s : result.trajectory) slices.push_back(s.q);
  return space_time_from_slices(slices, 0.0, st.dt);
}

std::string probe_name(Complex z) {
  std::ostringstream s;
  s << "zero_curvature[z=" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag())
    << "i]";
  return s.str();
}

void Runner::space_time_checks(bool zero_curvature) {
  const auto q0 = potential();
  const auto field_q = space_time_field(q0);
  const auto pair = reduce(config_.space_time.reduction, field_q);
  const auto akns = akns_residual(pair, config_.backend);
  check_at_most("akns_q", akns.q, "akns");
  check_at_most("akns_p", akns.p, "akns");
  if (zero_curvature) {
    for (const auto& z : config_.space_time.probes) {
      check_at_most(probe_name(z), zero_curvature_residual(pair, z, config_.backend),
                    "zero_curvature");
    }
  } else {
    check_at_most("lax", lax_equation_residual(pair, field(0), config_.backend), "lax");
  }
  write_text(config_.output_dir / "space_time.json", to_json(field_q).dump() + "\n");
}

ExperimentOutcome Runner::run() {
  switch (config_.kind) {
    case ExperimentKind::gauge_check:
      gauge_check();
      break;
    case ExperimentKind::factorization_check:
      factorization_check();
      break;
    case ExperimentKind::jsymmetry_check:
      jsymmetry_check();
      break;
    case ExperimentKind::positivity_check:
      positivity_check();
      break;
    case ExperimentKind::spectrum:
      spectrum();
      break;
    case ExperimentKind::shooting:
      shooting();
      break;
    case ExperimentKind::evolve:
      evolve_run();
      break;
    case ExperimentKind::isospectral:
      isospectral();
      break;
    case ExperimentKind::zero_curvature:
      space_time_checks(true);
      break;
    case ExperimentKind::lax_check:
      space_time_checks(false);
      break;
  }
  return std::move(out_);
}

json summary_document(const ExperimentConfig& config, const ExperimentOutcome& outcome) {
  json checks = json::array();
  for (const auto& c : outcome.checks) {
    checks.push_back(
        {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  json tolerances = json::object();
  for (const auto& [k, v] : config.tolerances) tolerances[k] = v;
  return {{"experiment", to_string(config.kind)},
          {"m", config.m},
          {"grid", grid_to_json(config.grid)},
          {"backend", to_string(config.backend.kind)},
          {"seed", config.seed},
          {"expect", config.expect_fail ? "fail" : "pass"},
          {"tolerances", std::move(tolerances)},
          {"checks", std::move(checks)},
          {"scalars", outcome.scalars},
          {"all_checks_pass", outcome.all_checks_pass()},
          {"meets_expectation", outcome.meets_expectation(config.expect_fail)}};
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() { return kCatalog; }

const char* to_string(ExperimentKind kind) {
  for (const auto& e : kCatalog) {
    if (e.kind == kind) return e.name;
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (const auto& e : kCatalog) {
    if (name == e.name) return e.kind;
  }
  throw DomainError("unknown experiment '" + name + "'");
}

void print_experiment_list(std::ostream& out) {
  for (const auto& e : kCatalog) out << e.name << "  " << e.description << '\n';
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> table = {
      {"unitarity", kUnitarityTolerance},
      {"determinant", 1e-10},
      {"diagonalization", 1e-6},
      {"first_order_reduction", 1e-6},
      {"factorization", 1e-8},
      {"jsymmetry", 1e-10},
      {"j_matrix_identity", 1e-12},
      {"positivity", kPositivityTolerance},
      {"kernel", 1e-8},
      {"conjugate_pairing", 1e-8},
      {"sech_pattern", 1e-5},
      {"dense_agreement", 2e-3},
      {"l2_drift", 1e-12},
      {"symmetry", 1e-12},
      {"plane_wave_error", 1e-6},
      {"soliton_error", 1e-5},
      {"zero_error", 1e-12},
      {"spectral_drift", 1e-3},
      {"akns", 1e-6},
      {"lax", 1e-5},
      {"zero_curvature", 1e-5},
  };
  return table;
}

ExperimentConfig parse_config(const json& doc, const fs::path& base_dir) {
  ObjectReader r(doc, "config");
  ExperimentConfig c;
  c.kind = experiment_kind_from_string(r.get<std::string>("experiment"));
  c.m = r.get<int>("m");
  if (c.m < 1) throw DomainError("config: m must be positive");
  c.grid = grid_from_json(r.at("grid"));
  {
    ObjectReader g(r.at("grid"), "grid");
    for (const char* key : {"x_min", "x_max", "n", "periodic"}) g.at(key);
    g.finish();
  }
  c.seed = r.get_or<std::uint64_t>("seed", 0);
  c.potential = parse_potential(r.at("potential"), c.m, c.seed, c.potential_file, base_dir);
  if (r.has("backend")) c.backend.kind = derivative_kind_from_string(r.get<std::string>("backend"));
  const fs::path out = r.get<std::string>("output_dir");
  c.output_dir = out.is_absolute() ? out : base_dir / out;

  const auto expect = r.get_or<std::string>("expect", "pass");
  if (expect != "pass" && expect != "fail") {
    throw DomainError("config: expect must be 'pass' or 'fail'");
  }
  c.expect_fail = expect == "fail";
  if (r.has("description")) r.get<std::string>("description");

  const bool needs_evolution =
      c.kind == ExperimentKind::evolve || c.kind == ExperimentKind::isospectral;
  if (needs_evolution || r.has("evolution")) {
    ObjectReader e(r.at("evolution"), "evolution");
    c.evolution.dt = e.get<double>("dt");
    c.evolution.steps = e.get<int>("steps");
    c.evolution.snapshot_every = e.get_or("snapshot_every", c.evolution.steps);
    if (e.has("flow")) c.evolution.flow = parse_reduction(e.get<std::string>("flow"), "evolution");
    e.finish();
    require_positive(c.evolution.dt, "evolution.dt");
    if (c.evolution.steps < 1) throw DomainError("evolution.steps must be positive");
    if (c.evolution.snapshot_every < 1) throw DomainError("evolution.snapshot_every must be positive");
  }

  if (c.kind == ExperimentKind::shooting && !r.has("spectral")) {
    throw DomainError("config: shooting needs a 'spectral' section with a search_box");
  }
  if (r.has("spectral")) {
    ObjectReader s(r.at("spectral"), "spectral");
    if (c.kind == ExperimentKind::shooting || s.has("search_box")) {
      c.spectral.search_box = parse_box(s.at("search_box"));
    }
    c.spectral.region_min_im = s.get_or("region_min_im", c.spectral.region_min_im);
    c.spectral.top_k = s.get_or("top_k", c.spectral.top_k);
    c.spectral.grid_density = s.get_or("grid_density", c.spectral.grid_density);
    if (s.has("expression")) c.spectral.expression = parse_expression(s.get<std::string>("expression"));
    c.spectral.dense_crosscheck = s.get_or("dense_crosscheck", false);
    s.finish();
    if (c.spectral.grid_density < 2) throw DomainError("spectral.grid_density must be at least 2");
  }

  const bool needs_space_time =
      c.kind == ExperimentKind::zero_curvature || c.kind == ExperimentKind::lax_check;
  if (needs_space_time || r.has("space_time")) {
    ObjectReader s(r.at("space_time"), "space_time");
    auto& st = c.space_time;
    const auto source = s.get_or<std::string>("source", "exact");
    if (source == "exact") {
      st.source = SpaceTimeParams::Source::exact;
    } else if (source == "evolved") {
      st.source = SpaceTimeParams::Source::evolved;
    } else {
      throw DomainError("space_time.source: expected 'exact' or 'evolved'");
    }
    st.dt = s.get<double>("dt");
    st.slices = s.get_or("slices", st.slices);
    if (s.has("reduction")) st.reduction = parse_reduction(s.get<std::string>("reduction"), "space_time");
    st.phase_speed_error = s.get_or("phase_speed_error", 0.0);
    if (s.has("probes")) {
      st.probes.clear();
      const json& probes = s.at("probes");
      if (!probes.is_array() || probes.empty()) {
        throw DomainError("space_time.probes: expected a non-empty array");
      }
      for (const auto& z : probes) st.probes.push_back(parse_complex(z, "space_time.probes"));
    }
    s.finish();
    require_positive(st.dt, "space_time.dt");
    if (st.slices < 3) throw DomainError("space_time.slices must be at least 3");
  }

  c.tolerances = default_tolerances();
  if (r.has("tolerances")) {
    const json& t = r.at("tolerances");
    if (!t.is_object()) throw DomainError("tolerances: expected an object");
    for (const auto& [key, value] : t.items()) {
      if (!c.tolerances.count(key)) throw DomainError("tolerances: unknown key '" + key + "'");
      if (!value.is_number()) throw DomainError("tolerances: '" + key + "' must be a number");
      c.tolerances[key] = value.get<double>();
      if (!(c.tolerances[key] >= 0.0)) throw DomainError("tolerances: '" + key + "' is negative");
    }
  }
  r.finish();

  // Shape parameters are checked against m here so that bad configs never
  // reach the output stage.
  if (c.potential_file.empty()) evaluate_potential(c.potential, c.grid.x_min(), c.m);
  const bool periodic_only =
      c.kind == ExperimentKind::positivity_check || c.kind == ExperimentKind::jsymmetry_check ||
      c.kind == ExperimentKind::evolve || c.kind == ExperimentKind::isospectral;
  if (periodic_only && !c.grid.periodic()) {
    throw DomainError(std::string(to_string(c.kind)) + " requires a periodic grid");
  }
  if (c.backend.kind == DerivativeKind::spectral && !c.grid.periodic() &&
      c.kind != ExperimentKind::shooting) {
    throw DomainError("the spectral backend requires a periodic grid");
  }
  if (c.kind == ExperimentKind::shooting && c.m != 1) {
    throw DomainError("shooting supports m = 1 only");
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path());
}

bool ExperimentOutcome::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

bool ExperimentOutcome::meets_expectation(bool expect_fail) const {
  return expect_fail ? !all_checks_pass() : all_checks_pass();
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw ComputationalError("cannot create " + config.output_dir.string());
  auto outcome = Runner(config).run();
  write_residuals_csv(config.output_dir / "residuals.csv", outcome.checks);
  write_text(config.output_dir / "summary.json",
             summary_document(config, outcome).dump(2) + "\n");
  return outcome;
}

int run_config_file(const fs::path& path, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = load_config(path);
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }
  try {
    const auto outcome = run_experiment(config);
    for (const auto& c : outcome.checks) {
      if (!c.pass) {
        err << "check " << c.name << " failed: " << c.value << " > " << c.tolerance << '\n';
      }
    }
    if (outcome.meets_expectation(config.expect_fail)) return kExitSuccess;
    if (config.expect_fail) err << "expected at least one check to fail\n";
    return kExitCheckFailed;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ComputationalError& e) {
    err << "computational error: " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    err << "computational error: " << e.what() << '\n';
    return kExitComputation;
  }
}

SpinorField windowed_test_field(const Grid& grid, int m, std::uint64_t seed, int max_mode) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const int w = 2 * m;
  const int modes = 2 * max_mode + 1;
  std::vector<Complex> coeff(static_cast<std::size_t>(w) * modes);
  for (auto& a : coeff) {
    const double re = normal(rng);
    const double im = normal(rng);
    a = Complex(re, im);
  }
  const double length = grid.length();
  const double center = 0.5 * (grid.x_min() + grid.x_max());
  CVector data(static_cast<Eigen::Index>(grid.size()) * w);
  for (int k = 0; k < grid.size(); ++k) {
    const double x = grid.point(k);
    const double window = std::pow(std::cos(std::numbers::pi * (x - center) / length), 32);
    for (int c = 0; c < w; ++c) {
      Complex sum = 0.0;
      for (int j = -max_mode; j <= max_mode; ++j) {
        sum += coeff[static_cast<std::size_t>(c) * modes + j + max_mode] *
               std::exp(kI * (2.0 * std::numbers::pi * j * (x - grid.x_min()) / length));
      }
      data[static_cast<Eigen::Index>(k) * w + c] = window * sum;
    }
  }
  return SpinorField(grid, m, std::move(data));
}

}  // namespace diraclab
