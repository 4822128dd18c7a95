#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ethlab/entanglement.hpp"

namespace ethlab::cli {
namespace {

constexpr std::pair<Analysis, const char*> kAnalysisNames[] = {
    {Analysis::Spectrum, "spectrum"}, {Analysis::Spacing, "spacing"},
    {Analysis::EthDiag, "eth_diag"},  {Analysis::EthOffdiag, "eth_offdiag"},
    {Analysis::Quench, "quench"},     {Analysis::Rmt, "rmt"},
    {Analysis::Entropy, "entropy"},
};

int line_of(const YAML::Node& node) {
  if (!node.IsDefined()) return 0;
  const auto mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

class Reader {
 public:
  std::vector<Diagnostic> diagnostics;

  void report(const YAML::Node& node, std::string field, std::string message) {
    diagnostics.push_back({line_of(node), std::move(field), std::move(message)});
  }

  // Unknown keys are errors.
  bool expect_map(const YAML::Node& node, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) {
      report(node, path, "expected a mapping");
      return false;
    }
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (std::none_of(allowed.begin(), allowed.end(),
                       [&](const char* a) { return key == a; })) {
        report(kv.first, path.empty() ? key : path + "." + key, "unknown key");
      }
    }
    return true;
  }

  template <class T>
  std::optional<T> scalar(const YAML::Node& parent, const char* key, const std::string& path) {
    const auto node = parent[key];
    if (!node.IsDefined() || node.IsNull()) return std::nullopt;
    const std::string field = path.empty() ? key : path + "." + key;
    if (!node.IsScalar()) {
      report(node, field, "expected a scalar");
      return std::nullopt;
    }
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      report(node, field, "cannot convert '" + node.Scalar() + "'");
      return std::nullopt;
    }
  }

  template <class T>
  void read(const YAML::Node& parent, const char* key, const std::string& path, T& out) {
    if (auto v = scalar<T>(parent, key, path)) out = *v;
  }

  template <class T>
  std::optional<std::vector<T>> list(const YAML::Node& parent, const char* key,
                                     const std::string& path) {
    const auto node = parent[key];
    if (!node.IsDefined() || node.IsNull()) return std::nullopt;
    const std::string field = path.empty() ? key : path + "." + key;
    if (!node.IsSequence()) {
      report(node, field, "expected a list");
      return std::nullopt;
    }
    std::vector<T> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
      try {
        out.push_back(node[i].as<T>());
      } catch (const YAML::Exception&) {
        report(node[i], field + "[" + std::to_string(i) + "]", "cannot convert entry");
      }
    }
    return out;
  }

  void require(bool ok, const YAML::Node& parent, const char* key, const std::string& path,
               const std::string& message) {
    if (ok) return;
    const auto node = parent[key];
    report(node.IsDefined() ? node : parent, path.empty() ? key : path + "." + key, message);
  }
};

bool finite(double v) { return std::isfinite(v); }

void parse_hcb(Reader& r, const YAML::Node& node, const std::string& path,
               const std::vector<int>& default_sectors, ModelConfig& out) {
  r.expect_map(node, path,
               {"name", "type", "L", "N", "t", "t_prime", "V", "V_prime", "sectors"});
  HcbModel m;
  m.params.sites = 0;
  m.params.particles = -1;
  const auto sites = r.scalar<int>(node, "L", path);
  const auto particles = r.scalar<int>(node, "N", path);
  if (!sites) r.report(node, path + ".L", "required");
  if (!particles) r.report(node, path + ".N", "required");
  r.read(node, "t", path, m.params.t);
  r.read(node, "t_prime", path, m.params.t_prime);
  r.read(node, "V", path, m.params.V);
  r.read(node, "V_prime", path, m.params.V_prime);
  const std::pair<const char*, double> couplings[] = {
      {"t", m.params.t}, {"t_prime", m.params.t_prime}, {"V", m.params.V}, {"V_prime", m.params.V_prime}};
  for (const auto& [key, v] : couplings) r.require(finite(v), node, key, path, "must be finite");
  bool lattice_ok = true;
  if (sites) {
    m.params.sites = *sites;
    if (*sites < 3 || *sites > kDefaultMaxSites) {
      r.require(false, node, "L", path,
                "L=" + std::to_string(*sites) + " outside [3, " +
                    std::to_string(kDefaultMaxSites) + "]");
      lattice_ok = false;
    }
  }
  if (particles) {
    m.params.particles = *particles;
    if (*particles < 0 || (sites && *particles > *sites)) {
      r.require(false, node, "N", path,
                "N=" + std::to_string(*particles) + " outside [0, L=" +
                    std::to_string(sites.value_or(0)) + "]");
      lattice_ok = false;
    }
  }
  m.sectors = r.list<int>(node, "sectors", path).value_or(default_sectors);
  if (m.sectors.empty()) r.report(node, path + ".sectors", "no momentum sectors given");
  if (sites && lattice_ok) {
    std::set<int> seen;
    for (int k : m.sectors) {
      if (k < 0 || k >= *sites) {
        r.report(node["sectors"].IsDefined() ? node["sectors"] : node, path + ".sectors",
                 "momentum k=" + std::to_string(k) + " outside [0, L=" + std::to_string(*sites) +
                     ")");
      } else if (!seen.insert(k).second) {
        r.report(node["sectors"], path + ".sectors", "duplicate momentum k=" + std::to_string(k));
      }
    }
  }
  out.model = m;
}

void parse_deutsch(Reader& r, const YAML::Node& node, const std::string& path,
                   ModelConfig& out) {
  r.expect_map(node, path,
               {"name", "type", "n", "epsilon", "band_beta", "realizations", "h0", "h0_spacing",
                "band_mode"});
  DeutschSpec d;
  if (auto n = r.scalar<long>(node, "n", path)) {
    r.require(*n >= 2, node, "n", path, "matrix dimension must be >= 2");
    d.n = static_cast<std::size_t>(std::max(0L, *n));
  }
  r.read(node, "epsilon", path, d.epsilon);
  r.require(d.epsilon >= 0.0 && finite(d.epsilon), node, "epsilon", path, "must be >= 0");
  r.read(node, "band_beta", path, d.band_beta);
  r.require(d.band_beta > 0.0 && finite(d.band_beta), node, "band_beta", path, "must be > 0");
  if (auto n = r.scalar<long>(node, "realizations", path)) {
    r.require(*n >= 1, node, "realizations", path, "must be >= 1");
    d.realizations = static_cast<std::size_t>(std::max(0L, *n));
  }
  r.read(node, "h0", path, d.h0);
  r.require(d.h0 == "equal" || d.h0 == "poisson", node, "h0", path,
            "must be 'equal' or 'poisson'");
  r.read(node, "h0_spacing", path, d.h0_spacing);
  r.require(d.h0_spacing > 0.0 && finite(d.h0_spacing), node, "h0_spacing", path, "must be > 0");
  std::string mode = "energy";
  r.read(node, "band_mode", path, mode);
  r.require(mode == "energy" || mode == "index", node, "band_mode", path,
            "must be 'energy' or 'index'");
  d.band_mode = mode == "index" ? BandMode::Index : BandMode::Energy;
  out.model = d;
}

void parse_model(Reader& r, const YAML::Node& node, const std::string& path,
                 const std::vector<int>& default_sectors, ModelConfig& out) {
  if (!node.IsMap()) {
    r.report(node, path, "expected a mapping");
    return;
  }
  std::string type = "hcb";
  r.read(node, "type", path, type);
  if (type == "hcb") {
    out.name = "hcb";
    r.read(node, "name", path, out.name);
    parse_hcb(r, node, path, default_sectors, out);
  } else if (type == "deutsch") {
    out.name = "deutsch";
    r.read(node, "name", path, out.name);
    parse_deutsch(r, node, path, out);
  } else {
    r.report(node["type"], path + ".type", "unknown model type '" + type + "'");
  }
  const bool name_ok =
      !out.name.empty() && std::all_of(out.name.begin(), out.name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
      });
  r.require(name_ok, node, "name", path, "names may only use letters, digits, '_' and '-'");
}

void parse_observable(Reader& r, const YAML::Node& node, JobConfig& cfg) {
  if (!node.IsDefined()) return;
  const std::string path = "observable";
  r.expect_map(node, path, {"kind", "i", "j", "q"});
  std::string kind = "density_product";
  r.read(node, "kind", path, kind);
  int i = 0;
  int j = 1;
  int q = 0;
  r.read(node, "i", path, i);
  r.read(node, "j", path, j);
  r.read(node, "q", path, q);
  if (kind == "density_product") {
    cfg.observable = observable::DensityProduct{i, j};
  } else if (kind == "occupancy") {
    cfg.observable = observable::Occupancy{i};
  } else if (kind == "nn_hop") {
    cfg.observable = observable::NearestNeighborHop{i};
  } else if (kind == "structure_factor") {
    cfg.observable = observable::StructureFactor{q};
  } else {
    r.report(node["kind"], "observable.kind", "unknown observable kind '" + kind + "'");
  }
}

void parse_sections(Reader& r, const YAML::Node& root, JobConfig& cfg) {
  if (const auto n = root["spacing"]; n.IsDefined()) {
    r.expect_map(n, "spacing", {"bins", "trim_fraction", "degree"});
    r.read(n, "bins", "spacing", cfg.spacing.bins);
    r.require(cfg.spacing.bins >= 1, n, "bins", "spacing", "must be >= 1");
    r.read(n, "trim_fraction", "spacing", cfg.spacing.trim_fraction);
    r.require(cfg.spacing.trim_fraction >= 0.0 && cfg.spacing.trim_fraction < 1.0, n,
              "trim_fraction", "spacing", "must lie in [0, 1)");
    r.read(n, "degree", "spacing", cfg.spacing.degree);
    r.require(cfg.spacing.degree >= 1, n, "degree", "spacing", "must be >= 1");
  }
  if (const auto n = root["eth"]; n.IsDefined()) {
    const std::string p = "eth";
    r.expect_map(n, p,
                 {"window", "window_count", "window_width", "edge_fraction", "min_states",
                  "central_fraction", "offdiag_window_fraction", "omega_bins", "omega_max",
                  "min_pairs"});
    auto& d = cfg.eth.diagonal;
    std::string mode = "count";
    r.read(n, "window", p, mode);
    r.require(mode == "count" || mode == "width", n, "window", p, "must be 'count' or 'width'");
    d.window.mode = mode == "width" ? MicroWindow::Mode::FixedWidth : MicroWindow::Mode::FixedCount;
    if (auto c = r.scalar<long>(n, "window_count", p)) {
      r.require(*c >= 1, n, "window_count", p, "must be >= 1");
      d.window.count = static_cast<std::size_t>(std::max(1L, *c));
    }
    r.read(n, "window_width", p, d.window.width);
    if (d.window.mode == MicroWindow::Mode::FixedWidth) {
      r.require(d.window.width > 0.0, n, "window_width", p, "must be > 0 for width windows");
    }
    r.read(n, "edge_fraction", p, d.edge_fraction);
    r.require(d.edge_fraction >= 0.0 && d.edge_fraction < 0.5, n, "edge_fraction", p,
              "must lie in [0, 0.5)");
    if (auto c = r.scalar<long>(n, "min_states", p)) {
      r.require(*c >= 1, n, "min_states", p, "must be >= 1");
      d.min_states = static_cast<std::size_t>(std::max(1L, *c));
    }
    r.read(n, "central_fraction", p, d.central_fraction);
    r.require(d.central_fraction > 0.0 && d.central_fraction <= 1.0, n, "central_fraction", p,
              "must lie in (0, 1]");
    r.read(n, "offdiag_window_fraction", p, cfg.eth.offdiag_window_fraction);
    r.require(cfg.eth.offdiag_window_fraction > 0.0 && cfg.eth.offdiag_window_fraction <= 1.0, n,
              "offdiag_window_fraction", p, "must lie in (0, 1]");
    if (auto c = r.scalar<long>(n, "omega_bins", p)) {
      r.require(*c >= 1, n, "omega_bins", p, "must be >= 1");
      cfg.eth.omega.count = static_cast<std::size_t>(std::max(1L, *c));
    }
    r.read(n, "omega_max", p, cfg.eth.omega.omega_max);
    r.require(cfg.eth.omega.omega_max >= 0.0, n, "omega_max", p, "must be >= 0");
    if (auto c = r.scalar<long>(n, "min_pairs", p)) {
      r.require(*c >= 0, n, "min_pairs", p, "must be >= 0");
      cfg.eth.omega.min_pairs = static_cast<std::size_t>(std::max(0L, *c));
    }
  }
  if (const auto n = root["quench"]; n.IsDefined()) {
    const std::string p = "quench";
    r.expect_map(n, p, {"initial", "time"});
    auto& q = cfg.quench;
    if (const auto init = n["initial"]; init.IsDefined()) {
      const std::string ip = "quench.initial";
      r.expect_map(init, ip, {"type", "t", "t_prime", "V", "V_prime", "occupied", "file"});
      std::string type = "ground_state";
      r.read(init, "type", ip, type);
      if (type == "ground_state") {
        q.initial = QuenchConfig::Initial::GroundState;
      } else if (type == "basis_state") {
        q.initial = QuenchConfig::Initial::BasisState;
      } else if (type == "amplitudes") {
        q.initial = QuenchConfig::Initial::Amplitudes;
      } else {
        r.report(init["type"], ip + ".type", "unknown initial state '" + type + "'");
      }
      r.read(init, "t", ip, q.t);
      r.read(init, "t_prime", ip, q.t_prime);
      r.read(init, "V", ip, q.V);
      r.read(init, "V_prime", ip, q.V_prime);
      q.occupied = r.list<int>(init, "occupied", ip).value_or(std::vector<int>{});
      std::string file;
      r.read(init, "file", ip, file);
      q.amplitude_file = file;
      if (q.initial == QuenchConfig::Initial::BasisState) {
        r.require(!q.occupied.empty(), init, "occupied", ip, "basis_state needs occupied sites");
      }
      if (q.initial == QuenchConfig::Initial::Amplitudes) {
        r.require(!file.empty(), init, "file", ip, "amplitudes needs a file");
      }
    }
    if (const auto time = n["time"]; time.IsDefined()) {
      const std::string tp = "quench.time";
      r.expect_map(time, tp, {"t_min", "t_max", "points"});
      r.read(time, "t_min", tp, q.t_min);
      r.read(time, "t_max", tp, q.t_max);
      if (auto c = r.scalar<long>(time, "points", tp)) {
        r.require(*c >= 1, time, "points", tp, "must be >= 1");
        q.points = static_cast<std::size_t>(std::max(1L, *c));
      }
      r.require(q.t_min > 0.0 && q.t_max >= q.t_min, time, "t_max", tp,
                "need 0 < t_min <= t_max");
    }
  }
  if (const auto n = root["entropy"]; n.IsDefined()) {
    const std::string p = "entropy";
    r.expect_map(n, p, {"cuts", "states", "central_fraction", "thermo_reference"});
    cfg.entropy.cuts = r.list<int>(n, "cuts", p).value_or(std::vector<int>{});
    r.read(n, "states", p, cfg.entropy.states);
    r.require(cfg.entropy.states == "central" || cfg.entropy.states == "all", n, "states", p,
              "must be 'central' or 'all'");
    r.read(n, "central_fraction", p, cfg.entropy.central_fraction);
    r.require(cfg.entropy.central_fraction > 0.0 && cfg.entropy.central_fraction <= 1.0, n,
              "central_fraction", p, "must lie in (0, 1]");
    r.read(n, "thermo_reference", p, cfg.entropy.thermo_reference);
    const auto& t = cfg.entropy.thermo_reference;
    r.require(t == "all_sectors" || t == "sector" || t == "none", n, "thermo_reference", p,
              "must be 'all_sectors', 'sector' or 'none'");
  }
  if (const auto n = root["rmt"]; n.IsDefined()) {
    r.expect_map(n, "rmt", {"observable", "central_fraction"});
    r.read(n, "observable", "rmt", cfg.rmt.observable);
    r.require(cfg.rmt.observable == "linear" || cfg.rmt.observable == "identity", n,
              "observable", "rmt", "must be 'linear' or 'identity'");
    r.read(n, "central_fraction", "rmt", cfg.rmt.central_fraction);
    r.require(cfg.rmt.central_fraction > 0.0 && cfg.rmt.central_fraction <= 1.0, n,
              "central_fraction", "rmt", "must lie in (0, 1]");
  }
  if (const auto n = root["export"]; n.IsDefined()) {
    r.expect_map(n, "export", {"hamiltonian", "observable"});
    r.read(n, "hamiltonian", "export", cfg.exports.hamiltonian);
    r.read(n, "observable", "export", cfg.exports.observable);
    for (const auto* key : {"hamiltonian", "observable"}) {
      const auto v = key == std::string("hamiltonian") ? cfg.exports.hamiltonian
                                                       : cfg.exports.observable;
      r.require(v == "none" || v == "csv" || v == "binary", n, key, "export",
                "must be 'none', 'csv' or 'binary'");
    }
  }
}

// Checks that depend on several sections at once.
void cross_validate(Reader& r, const YAML::Node& root, JobConfig& cfg) {
  for (std::size_t m = 0; m < cfg.models.size(); ++m) {
    const auto* hcb = std::get_if<HcbModel>(&cfg.models[m].model);
    if (!hcb) continue;
    const int sites = hcb->params.sites;
    const int particles = hcb->params.particles;
    if (sites < 3 || sites > kDefaultMaxSites || particles < 0 || particles > sites) continue;
    const std::string who = " for model '" + cfg.models[m].name + "'";
    if (const auto* d = std::get_if<observable::DensityProduct>(&cfg.observable)) {
      if (((d->j - d->i) % sites + sites) % sites == 0) {
        r.report(root["observable"], "observable",
                 "density_product sites coincide modulo L" + who + "; use occupancy");
      }
    }
    if (cfg.wants(Analysis::Quench) && cfg.quench.initial == QuenchConfig::Initial::BasisState) {
      std::set<int> sites_seen;
      for (int s : cfg.quench.occupied) {
        if (s < 0 || s >= sites) {
          r.report(root["quench"], "quench.initial.occupied",
                   "site " + std::to_string(s) + " outside [0, L)" + who);
        }
        sites_seen.insert(s);
      }
      if (static_cast<int>(sites_seen.size()) != particles) {
        r.report(root["quench"], "quench.initial.occupied",
                 "needs " + std::to_string(particles) + " distinct sites" + who);
      }
    }
    if (cfg.wants(Analysis::Entropy)) {
      for (int c : cfg.entropy.cuts) {
        if (c < 1 || c > sites - 1 || c > kMaxSubsystemSites) {
          r.report(root["entropy"], "entropy.cuts",
                   "cut " + std::to_string(c) + " outside [1, min(L-1, " +
                       std::to_string(kMaxSubsystemSites) + ")]" + who);
        }
      }
    }
  }
  const auto has_hcb = std::any_of(cfg.models.begin(), cfg.models.end(),
                                   [](const ModelConfig& m) { return m.is_hcb(); });
  const auto has_deutsch = std::any_of(cfg.models.begin(), cfg.models.end(),
                                       [](const ModelConfig& m) { return !m.is_hcb(); });
  for (const auto a : cfg.analyses) {
    const bool needs_deutsch = a == Analysis::Rmt;
    if (needs_deutsch ? !has_deutsch : !has_hcb) {
      r.report(root["analyses"], "analyses",
               std::string("analysis '") + to_string(a) + "' has no " +
                   (needs_deutsch ? "deutsch" : "hcb") + " model to run on");
    }
  }
}

}  // namespace

const char* to_string(Analysis a) {
  for (const auto& [value, name] : kAnalysisNames) {
    if (value == a) return name;
  }
  return "?";
}

std::optional<Analysis> parse_analysis(const std::string& name) {
  for (const auto& [value, n] : kAnalysisNames) {
    if (name == n) return value;
  }
  return std::nullopt;
}

bool JobConfig::wants(Analysis a) const {
  return std::find(analyses.begin(), analyses.end(), a) != analyses.end();
}

std::string Diagnostic::to_string() const {
  std::string out = line > 0 ? "line " + std::to_string(line) + ": " : std::string{};
  return out + field + ": " + message;
}

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  Reader r;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    result.diagnostics.push_back({e.mark.line >= 0 ? e.mark.line + 1 : 0, "<document>", e.msg});
    return result;
  }
  if (!root.IsMap()) {
    result.diagnostics.push_back({line_of(root), "<document>", "expected a mapping at top level"});
    return result;
  }
  auto& cfg = result.config;
  r.expect_map(root, "",
               {"model", "models", "sectors", "analyses", "observable", "spacing", "eth",
                "quench", "entropy", "rmt", "export", "seed", "output_dir", "parallel"});

  const auto default_sectors = r.list<int>(root, "sectors", "").value_or(std::vector<int>{1});
  if (root["model"].IsDefined() && root["models"].IsDefined()) {
    r.report(root["models"], "models", "give either 'model' or 'models', not both");
  }
  if (const auto n = root["model"]; n.IsDefined()) {
    ModelConfig m;
    parse_model(r, n, "model", default_sectors, m);
    cfg.models.push_back(std::move(m));
  } else if (const auto list = root["models"]; list.IsDefined()) {
    if (!list.IsSequence() || list.size() == 0) {
      r.report(list, "models", "expected a nonempty list");
    } else {
      std::set<std::string> names;
      for (std::size_t i = 0; i < list.size(); ++i) {
        ModelConfig m;
        const std::string path = "models[" + std::to_string(i) + "]";
        parse_model(r, list[i], path, default_sectors, m);
        if (!names.insert(m.name).second) {
          r.report(list[i], path + ".name", "duplicate model name '" + m.name + "'");
        }
        cfg.models.push_back(std::move(m));
      }
    }
  } else {
    r.report(root, "model", "required ('model' or 'models')");
  }

  if (auto names = r.list<std::string>(root, "analyses", "")) {
    for (const auto& name : *names) {
      const auto a = parse_analysis(name);
      if (!a) {
        r.report(root["analyses"], "analyses", "unknown analysis '" + name + "'");
      } else if (cfg.wants(*a)) {
        r.report(root["analyses"], "analyses", "duplicate analysis '" + name + "'");
      } else {
        cfg.analyses.push_back(*a);
      }
    }
  }

  parse_observable(r, root["observable"], cfg);
  parse_sections(r, root, cfg);

  if (auto seed = r.scalar<long long>(root, "seed", "")) {
    r.require(*seed >= 0, root, "seed", "", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(std::max(0LL, *seed));
  }
  if (auto dir = r.scalar<std::string>(root, "output_dir", "")) cfg.output_dir = *dir;
  if (auto p = r.scalar<int>(root, "parallel", "")) {
    r.require(*p >= 1, root, "parallel", "", "must be >= 1");
    cfg.parallel = static_cast<unsigned>(std::max(1, *p));
  }

  cross_validate(r, root, cfg);
  result.diagnostics = std::move(r.diagnostics);
  return result;
}

ParseResult load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    ParseResult result;
    result.diagnostics.push_back({0, "<file>", "cannot read " + path.string()});
    return result;
  }
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::vector<Diagnostic> validate(const std::string& text) {
  return parse_config(text).diagnostics;
}

}  // namespace ethlab::cli
