#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ethlab/dynamics.hpp"
#include "ethlab/entanglement.hpp"
#include "ethlab/error.hpp"
#include "ethlab/eth.hpp"
#include "ethlab/parallel.hpp"
#include "ethlab/rmt.hpp"
#include "ethlab/spectral.hpp"
#include "output.hpp"

#ifndef ETHLAB_VERSION
#define ETHLAB_VERSION "unknown"
#endif

namespace ethlab::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Non-finite doubles become null in JSON.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class Runner {
 public:
  Runner(const JobConfig& cfg, fs::path root, std::ostream* log)
      : cfg_(cfg), root_(std::move(root)), log_(log) {}

  RunManifest execute(const std::string& config_text);

 private:
  struct SectorJob {
    std::size_t model = 0;
    int k = 0;
  };
  struct SectorResult {
    std::vector<StageRecord> stages;
    std::optional<EthDiagonalReport> diag;
  };

  template <class Fn>
  StageRecord stage(std::string name, std::string scope, Fn&& fn);
  void emit(const fs::path& rel, std::string_view content);
  void emit_matrix(const fs::path& rel, const OperatorMatrix& m, const std::string& format);

  std::vector<double> all_sector_energies(const HcbParams& params);
  SectorResult run_sector(const ModelConfig& model, const HcbModel& hcb, int k,
                          const std::vector<double>* thermo_energies);
  std::vector<StageRecord> run_deutsch(const ModelConfig& model, const DeutschSpec& spec);
  InitialState initial_state(const HcbParams& post, const MomentumSector& sector) const;

  const JobConfig& cfg_;
  fs::path root_;
  std::ostream* log_;
  std::mutex mutex_;
  std::vector<std::string> written_;
};

template <class Fn>
StageRecord Runner::stage(std::string name, std::string scope, Fn&& fn) {
  StageRecord rec{std::move(name), std::move(scope), 0.0, "ok", {}};
  const auto start = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const std::exception& e) {
    rec.status = "failed";
    rec.error = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (log_) {
    std::lock_guard lock(mutex_);
    *log_ << fmt::format("[{}] {} {} ({:.3f} s){}\n", rec.status, rec.scope.empty() ? "job" : rec.scope, rec.name,
                         rec.seconds, rec.error.empty() ? "" : ": " + rec.error);
  }
  return rec;
}

void Runner::emit(const fs::path& rel, std::string_view content) {
  write_atomic(root_ / rel, content);
  std::lock_guard lock(mutex_);
  written_.push_back(rel.generic_string());
}

void Runner::emit_matrix(const fs::path& rel, const OperatorMatrix& m,
                         const std::string& format) {
  const auto target = root_ / rel;
  fs::create_directories(target.parent_path());
  auto tmp = target;
  tmp += ".tmp";
  if (format == "csv") {
    write_matrix_csv(tmp, m);
  } else {
    write_matrix_binary(tmp, m);
  }
  fs::rename(tmp, target);
  std::lock_guard lock(mutex_);
  written_.push_back(rel.generic_string());
}

std::vector<double> Runner::all_sector_energies(const HcbParams& params) {
  std::vector<RVector> parts(static_cast<std::size_t>(params.sites));
  parallel_for(parts.size(), cfg_.parallel, [&](std::size_t k) {
    const auto sector = MomentumSector::build(params.sites, params.particles, static_cast<int>(k));
    parts[k] = eigenvalues(build_hcb_hamiltonian(params, sector));
  });
  std::vector<double> all;
  for (const auto& p : parts) all.insert(all.end(), p.data(), p.data() + p.size());
  std::sort(all.begin(), all.end());
  return all;
}

InitialState Runner::initial_state(const HcbParams& post, const MomentumSector& sector) const {
  const auto& q = cfg_.quench;
  switch (q.initial) {
    case QuenchConfig::Initial::GroundState: {
      HcbParams pre = post;
      pre.t = q.t;
      pre.t_prime = q.t_prime;
      pre.V = q.V;
      pre.V_prime = q.V_prime;
      return initial::GroundState{pre};
    }
    case QuenchConfig::Initial::BasisState: {
      Bits bits = 0;
      for (int s : q.occupied) bits |= Bits{1} << s;
      return initial::BasisState{bits};
    }
    case QuenchConfig::Initial::Amplitudes: {
      std::ifstream is(q.amplitude_file);
      if (!is) throw InvalidSpec("cannot read amplitude file " + q.amplitude_file.string());
      std::vector<cplx> values;
      std::string line;
      while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double re = 0.0;
        double im = 0.0;
        if (!(ls >> re)) continue;  // header line
        ls >> im;
        values.emplace_back(re, im);
      }
      if (values.size() != sector.dim()) {
        throw DimensionMismatch(fmt::format("amplitude file has {} entries, sector dim is {}",
                                            values.size(), sector.dim()));
      }
      return initial::Amplitudes{Eigen::Map<CVector>(values.data(),
                                                     static_cast<Eigen::Index>(values.size()))};
    }
  }
  throw InvalidSpec("unknown initial state");
}

Runner::SectorResult Runner::run_sector(const ModelConfig& model, const HcbModel& hcb, int k,
                                        const std::vector<double>* thermo_energies) {
  SectorResult result;
  const std::string scope = fmt::format("{}/k{}", model.name, k);
  const fs::path dir = fs::path(model.name) / fmt::format("k{}", k);
  const auto& p = hcb.params;

  std::optional<MomentumSector> sector;
  std::optional<OperatorMatrix> h;
  std::optional<OperatorMatrix> o;
  std::optional<EigenSystem> es;

  const bool needs_o = cfg_.wants(Analysis::EthDiag) || cfg_.wants(Analysis::EthOffdiag) ||
                       cfg_.wants(Analysis::Quench) || cfg_.exports.observable != "none";
  auto& stages = result.stages;
  stages.push_back(stage("build", scope, [&] {
    sector = MomentumSector::build(p.sites, p.particles, k);
    h = build_hcb_hamiltonian(p, *sector);
    if (needs_o) o = build_observable(cfg_.observable, *sector);
    if (cfg_.exports.hamiltonian != "none") {
      emit_matrix(dir / (cfg_.exports.hamiltonian == "csv" ? "hamiltonian.csv" : "hamiltonian.bin"),
                  *h, cfg_.exports.hamiltonian);
    }
    if (cfg_.exports.observable != "none") {
      emit_matrix(dir / (cfg_.exports.observable == "csv" ? "observable.csv" : "observable.bin"),
                  *o, cfg_.exports.observable);
    }
  }));

  const bool needs_es = cfg_.wants(Analysis::Spectrum) || cfg_.wants(Analysis::Spacing) ||
                        cfg_.wants(Analysis::EthDiag) || cfg_.wants(Analysis::EthOffdiag) ||
                        cfg_.wants(Analysis::Quench) || cfg_.wants(Analysis::Entropy);
  auto guarded = [&](const char* name, bool wanted, bool ready, auto&& fn) {
    if (!wanted) return;
    if (!ready) {
      stages.push_back({name, scope, 0.0, "skipped", "an earlier stage failed"});
      return;
    }
    stages.push_back(stage(name, scope, fn));
  };

  guarded("diagonalize", needs_es, h.has_value(), [&] { es = diagonalize(*h); });

  guarded("spectrum", cfg_.wants(Analysis::Spectrum), es.has_value(), [&] {
    CsvWriter csv({"index", "energy"});
    for (std::size_t i = 0; i < es->dim(); ++i) {
      csv.cell(i).cell(es->energies[static_cast<Eigen::Index>(i)]);
      csv.end_row();
    }
    emit(dir / "spectrum.csv", csv.str());
  });

  guarded("spacing", cfg_.wants(Analysis::Spacing), es.has_value(), [&] {
    SpacingOptions opt;
    opt.bins = cfg_.spacing.bins;
    opt.trim_fraction = cfg_.spacing.trim_fraction;
    opt.degree = cfg_.spacing.degree;
    const std::span<const double> levels(es->energies.data(), es->dim());
    const auto rep = spacing_report(levels, opt);
    CsvWriter s({"s"});
    for (double v : rep.unfolded_spacings) {
      s.cell(v);
      s.end_row();
    }
    emit(dir / "spacings.csv", s.str());
    CsvWriter hist({"bin_center", "density", "wigner", "poisson"});
    const auto centers = rep.histogram.centers();
    for (std::size_t b = 0; b < centers.size(); ++b) {
      hist.cell(centers[b])
          .cell(rep.histogram.densities[b])
          .cell(rep.wigner_density_at_centers[b])
          .cell(rep.poisson_density_at_centers[b]);
      hist.end_row();
    }
    emit(dir / "spacing_hist.csv", hist.str());
    std::string txt;
    txt += "mean_r=" + format_double(rep.mean_r) + "\n";
    txt += "ratio_count=" + std::to_string(rep.r_count) + "\n";
    txt += "mean_spacing=" + format_double(rep.mean_spacing) + "\n";
    txt += "ks_wigner=" + format_double(rep.ks_wigner) + "\n";
    txt += "ks_poisson=" + format_double(rep.ks_poisson) + "\n";
    txt += "degenerate_levels=" + std::to_string(rep.degenerate_spacings) + "\n";
    emit(dir / "r_ratio.txt", txt);
  });

  guarded("eth_diag", cfg_.wants(Analysis::EthDiag), es.has_value() && o.has_value(), [&] {
    const auto pairs = eigenstate_expectations(*es, *o);
    auto rep = diagonal_fluctuations(pairs, cfg_.eth.diagonal);
    CsvWriter csv({"E_i", "O_ii", "window_id", "micro_avg", "delta"});
    for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
      csv.cell(rep.pairs[i].energy)
          .cell(rep.pairs[i].value)
          .cell(rep.window_id[i])
          .cell(rep.micro[i])
          .cell(rep.delta[i]);
      csv.end_row();
    }
    emit(dir / "eth_diag.csv", csv.str());
    CsvWriter win({"window_id", "energy_lo", "energy_hi", "energy_mean", "count", "micro_avg",
                   "delta_mean", "delta_variance", "log_count", "central"});
    for (const auto& w : rep.windows) {
      win.cell(w.id)
          .cell(w.energy_lo)
          .cell(w.energy_hi)
          .cell(w.energy_mean)
          .cell(w.count)
          .cell(w.micro_average)
          .cell(w.delta_mean)
          .cell(w.delta_variance)
          .cell(w.entropy)
          .cell(w.central ? 1 : 0);
      win.end_row();
    }
    emit(dir / "eth_diag_windows.csv", win.str());
    result.diag = std::move(rep);
  });

  guarded("eth_offdiag", cfg_.wants(Analysis::EthOffdiag), es.has_value() && o.has_value(), [&] {
    const auto window = central_energy_window(es->energies, cfg_.eth.offdiag_window_fraction);
    const auto rep = offdiagonal_statistics(*es, *o, window, cfg_.eth.omega);
    CsvWriter csv({"omega_bin_center", "mean_abs2", "pair_count", "f_estimate", "low_count"});
    const auto centers = rep.omega_centers();
    for (std::size_t b = 0; b < centers.size(); ++b) {
      csv.cell(centers[b])
          .cell(rep.mean_abs2[b])
          .cell(rep.pair_count[b])
          .cell(rep.f_estimate[b])
          .cell(rep.flagged[b] ? 1 : 0);
      csv.end_row();
    }
    emit(dir / "eth_offdiag.csv", csv.str());
  });

  guarded("quench", cfg_.wants(Analysis::Quench), es.has_value() && o.has_value(), [&] {
    const auto times = log_time_grid(cfg_.quench.t_min, cfg_.quench.t_max, cfg_.quench.points);
    const auto psi0 = prepare_state(initial_state(p, *sector), *sector);
    const auto c0 = expand_in_eigenbasis(psi0, *es);
    const auto o_eig = to_eigenbasis(*es, *o);
    const auto pairs = eigenstate_expectations(*es, *o);
    const QuenchOptions qopt;
    const auto curve = MicroCurve::per_state(diagonal_fluctuations(pairs, qopt.micro));
    const auto trace = quench_trace(*es, o_eig, c0, times, curve);
    CsvWriter csv({"t", "value", "running_avg"});
    double norm_drift = 0.0;
    double energy_drift = 0.0;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
      csv.cell(trace.times[i]).cell(trace.values[i]).cell(trace.running_average[i]);
      csv.end_row();
      norm_drift = std::max(norm_drift, std::abs(trace.norms[i] - 1.0));
      energy_drift = std::max(energy_drift, std::abs(trace.energies[i] - trace.initial_energy));
    }
    emit(dir / "quench.csv", csv.str());
    json summary;
    summary["diagonal_ensemble"] = number(trace.diagonal_ensemble_value);
    summary["eth_prediction"] = number(trace.eth_prediction_value);
    summary["diag_minus_eth"] = number(trace.diagonal_ensemble_value - trace.eth_prediction_value);
    summary["late_running_average"] = number(trace.running_average.back());
    summary["running_minus_diag"] =
        number(trace.running_average.back() - trace.diagonal_ensemble_value);
    summary["participation_ratio"] = number(trace.participation_ratio);
    summary["initial_energy"] = number(trace.initial_energy);
    summary["max_norm_drift"] = number(norm_drift);
    summary["max_energy_drift"] = number(energy_drift);
    summary["max_imaginary"] = number(trace.max_imaginary);
    emit(dir / "quench_summary.json", summary.dump(2) + "\n");
  });

  guarded("entropy", cfg_.wants(Analysis::Entropy), es.has_value(), [&] {
    std::vector<int> cuts = cfg_.entropy.cuts;
    if (cuts.empty()) cuts.push_back(std::min(p.sites / 2, kMaxSubsystemSites));
    std::vector<std::size_t> states;
    if (cfg_.entropy.states == "central") {
      const auto n = es->dim();
      const auto keep = static_cast<std::size_t>(std::llround(cfg_.entropy.central_fraction *
                                                              static_cast<double>(n)));
      const auto first = (n - std::min(keep, n)) / 2;
      for (std::size_t i = first; i < first + std::min(keep, n); ++i) states.push_back(i);
      if (states.empty()) throw InsufficientStates("no states in the central entropy window");
    }
    EntropyComparison comparison;
    if (cfg_.entropy.thermo_reference == "all_sectors") {
      comparison.energies = *thermo_energies;
    } else if (cfg_.entropy.thermo_reference == "sector") {
      comparison.energies.assign(es->energies.data(), es->energies.data() + es->dim());
    }
    const auto rows = eigenstate_entropy_scan(*es, *sector, cuts, comparison, states);
    CsvWriter csv({"state_index", "E", "L_A", "S_vn", "S_renyi2", "S_thermo_ref"});
    for (const auto& r : rows) {
      csv.cell(r.state_index).cell(r.energy).cell(r.cut).cell(r.s_vn).cell(r.s_renyi2).cell(
          r.s_thermo_ref);
      csv.end_row();
    }
    emit(dir / "entropy.csv", csv.str());
  });

  return result;
}

std::vector<StageRecord> Runner::run_deutsch(const ModelConfig& model, const DeutschSpec& spec) {
  std::vector<StageRecord> stages;
  if (!cfg_.wants(Analysis::Rmt)) return stages;
  const fs::path dir = model.name;
  stages.push_back(stage("rmt", model.name, [&] {
    DeutschModel m;
    m.h0 = spec.h0 == "poisson" ? poisson_levels(spec.n, cfg_.seed, spec.h0_spacing)
                                : equally_spaced_levels(spec.n, spec.h0_spacing);
    m.epsilon = spec.epsilon;
    m.band_beta = spec.band_beta;
    m.seed = cfg_.seed;
    m.realizations = spec.realizations;
    m.band_mode = spec.band_mode;
    m.validate();

    std::vector<double> o0(spec.n, 1.0);
    if (cfg_.rmt.observable == "linear") {
      for (std::size_t k = 0; k < spec.n; ++k) o0[k] = static_cast<double>(k) / spec.n;
    }
    const auto pred = expectation_prediction(m, o0, cfg_.parallel);

    CsvWriter prof({"offset", "mean_c2"});
    for (std::size_t i = 0; i < pred.profile.offsets.size(); ++i) {
      prof.cell(pred.profile.offsets[i]).cell(pred.profile.mean_c2[i]);
      prof.end_row();
    }
    emit(dir / "c2_profile.csv", prof.str());

    const auto keep = static_cast<std::size_t>(
        std::llround(cfg_.rmt.central_fraction * static_cast<double>(spec.n)));
    const auto first = (spec.n - std::min(keep, spec.n)) / 2;
    const auto last = first + std::min(keep, spec.n);
    CsvWriter exp({"i", "predicted", "direct", "sigma", "std_error"});
    double max_dev = 0.0;
    double max_z = 0.0;
    for (std::size_t i = first; i < last; ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      const double sigma = std::sqrt(pred.variance[e]);
      exp.cell(i).cell(pred.predicted[e]).cell(pred.direct[e]).cell(sigma).cell(
          pred.standard_error[e]);
      exp.end_row();
      const double dev = std::abs(pred.predicted[e] - pred.direct[e]);
      max_dev = std::max(max_dev, dev);
      if (pred.standard_error[e] > 0.0) max_z = std::max(max_z, dev / pred.standard_error[e]);
    }
    emit(dir / "rmt_expectation.csv", exp.str());

    // Level statistics of the perturbed spectrum, pooled over realizations.
    std::vector<double> spacings;
    double r_sum = 0.0;
    std::size_t r_count = 0;
    std::vector<SpacingReport> reports(spec.realizations);
    parallel_for(spec.realizations, cfg_.parallel, [&](std::size_t r) {
      const auto levels = sample_spectrum(m, r);
      SpacingOptions opt;
      opt.bins = cfg_.spacing.bins;
      opt.trim_fraction = cfg_.spacing.trim_fraction;
      opt.degree = cfg_.spacing.degree;
      reports[r] = spacing_report(std::span<const double>(levels.data(), spec.n), opt);
    });
    for (const auto& rep : reports) {
      spacings.insert(spacings.end(), rep.unfolded_spacings.begin(), rep.unfolded_spacings.end());
      r_sum += rep.mean_r * static_cast<double>(rep.r_count);
      r_count += rep.r_count;
    }
    CsvWriter sp({"s"});
    for (double s : spacings) {
      sp.cell(s);
      sp.end_row();
    }
    emit(dir / "rmt_spacings.csv", sp.str());

    json summary;
    summary["n"] = spec.n;
    summary["realizations"] = spec.realizations;
    summary["central_states"] = last - first;
    summary["max_abs_deviation"] = number(max_dev);
    summary["max_deviation_in_std_errors"] = number(max_z);
    summary["max_row_deviation"] = number(pred.profile.max_row_deviation);
    summary["offset_zero_mass"] = number(pred.profile.offset_zero_mass);
    summary["mean_r"] = number(r_count ? r_sum / static_cast<double>(r_count) : std::nan(""));
    summary["ks_wigner"] = number(ks_distance(spacings, wigner_cdf));
    summary["ks_poisson"] = number(ks_distance(spacings, poisson_cdf));
    emit(dir / "rmt_summary.json", summary.dump(2) + "\n");
  }));
  return stages;
}

RunManifest Runner::execute(const std::string& config_text) {
  RunManifest manifest;
  manifest.output_dir = root_;
  fs::create_directories(root_);

  const bool hcb_work = std::any_of(cfg_.analyses.begin(), cfg_.analyses.end(),
                                    [](Analysis a) { return a != Analysis::Rmt; }) ||
                        cfg_.exports.hamiltonian != "none" || cfg_.exports.observable != "none";

  // Reference spectra for the entropy comparison, one per model.
  std::map<std::size_t, std::vector<double>> thermo;
  std::vector<SectorJob> jobs;
  for (std::size_t m = 0; m < cfg_.models.size(); ++m) {
    const auto* hcb = std::get_if<HcbModel>(&cfg_.models[m].model);
    if (!hcb || !hcb_work) continue;
    if (cfg_.wants(Analysis::Entropy) && cfg_.entropy.thermo_reference == "all_sectors") {
      manifest.stages.push_back(stage("thermo_reference", cfg_.models[m].name, [&] {
        thermo[m] = all_sector_energies(hcb->params);
      }));
    }
    for (int k : hcb->sectors) jobs.push_back({m, k});
  }

  std::vector<SectorResult> results(jobs.size());
  parallel_for(jobs.size(), cfg_.parallel, [&](std::size_t j) {
    const auto& model = cfg_.models[jobs[j].model];
    const auto it = thermo.find(jobs[j].model);
    const std::vector<double>* energies = it == thermo.end() ? nullptr : &it->second;
    if (cfg_.wants(Analysis::Entropy) && cfg_.entropy.thermo_reference == "all_sectors" &&
        !energies) {
      static const std::vector<double> none;
      energies = &none;
    }
    results[j] = run_sector(model, std::get<HcbModel>(model.model), jobs[j].k, energies);
  });
  for (auto& r : results) {
    manifest.stages.insert(manifest.stages.end(), r.stages.begin(), r.stages.end());
  }

  if (cfg_.wants(Analysis::EthDiag) && !jobs.empty()) {
    manifest.stages.push_back(stage("fluct_scaling", "", [&] {
      CsvWriter csv({"model", "L", "N", "k", "variance", "count"});
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (!results[j].diag) continue;
        const auto& model = cfg_.models[jobs[j].model];
        const auto& p = std::get<HcbModel>(model.model).params;
        csv.cell(model.name)
            .cell(p.sites)
            .cell(p.particles)
            .cell(jobs[j].k)
            .cell(results[j].diag->central_variance)
            .cell(results[j].diag->central_count);
        csv.end_row();
      }
      emit("fluct_scaling.csv", csv.str());
    }));
  }

  for (const auto& model : cfg_.models) {
    if (const auto* d = std::get_if<DeutschSpec>(&model.model)) {
      auto st = run_deutsch(model, *d);
      manifest.stages.insert(manifest.stages.end(), st.begin(), st.end());
    }
  }

  std::sort(written_.begin(), written_.end());
  for (const auto& rel : written_) {
    const auto path = root_ / rel;
    manifest.files.push_back({rel, fs::file_size(path), sha256_file(path)});
  }

  json j;
  j["ethlab_version"] = ETHLAB_VERSION;
  j["eigen_version"] = fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                                   EIGEN_MINOR_VERSION);
  j["config_sha256"] = sha256_hex(config_text);
  j["config"] = config_text;
  j["seed"] = cfg_.seed;
  j["parallel"] = cfg_.parallel;
  j["status"] = manifest.failed() ? "failed" : "ok";
  auto& stages = j["stages"] = json::array();
  for (const auto& s : manifest.stages) {
    json e;
    e["name"] = s.name;
    e["scope"] = s.scope;
    e["status"] = s.status;
    e["seconds"] = s.seconds;
    if (!s.error.empty()) e["error"] = s.error;
    stages.push_back(std::move(e));
  }
  auto& files = j["files"] = json::array();
  for (const auto& f : manifest.files) {
    files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  }
  write_atomic(root_ / "manifest.json", j.dump(2) + "\n");
  return manifest;
}

}  // namespace

bool RunManifest::failed() const {
  return std::any_of(stages.begin(), stages.end(),
                     [](const StageRecord& s) { return s.status != "ok"; });
}

fs::path resolve_output_dir(const JobConfig& config, const std::optional<fs::path>& out,
                            const fs::path& config_path) {
  if (out) return *out;
  const char* env = std::getenv("ETHLAB_OUTPUT_ROOT");
  const fs::path env_root = env && *env ? fs::path(env) : fs::path();
  if (config.output_dir) {
    if (config.output_dir->is_absolute()) return *config.output_dir;
    return env_root.empty() ? *config.output_dir : env_root / *config.output_dir;
  }
  const auto stem = config_path.stem();
  return env_root.empty() ? fs::path("ethlab-out") / stem : env_root / stem;
}

RunManifest run(const JobConfig& config, const fs::path& output_dir,
                const std::string& config_text, std::ostream* log) {
  Runner runner(config, output_dir, log);
  return runner.execute(config_text);
}

}  // namespace ethlab::cli
