#include "qfichain/protocol.hpp"

#include "qfichain/beyond_sc.hpp"
#include "qfichain/gaussian_states.hpp"
#include "qfichain/oracle.hpp"
#include "qfichain/parallel.hpp"
#include "qfichain/semiclassics.hpp"
#include "qfichain/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

namespace qfi::protocol {

using nlohmann::json;
namespace sc = qfi::semiclassics;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) known = true;
    if (!known)
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

double parse_beta(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw ConfigError("beta strings must be \"inf\"");
  }
  if (!j.is_number()) throw ConfigError("beta must be a number or \"inf\"");
  const double b = j.get<double>();
  if (b < 0) throw ConfigError("beta must be nonnegative");
  return b;
}

std::vector<double> parse_times(const json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else if (j.is_object()) {
    expect_keys(j, "times", {"start", "stop", "count"});
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const int count = j.at("count").get<int>();
    if (count < 1) throw ConfigError("times.count must be >= 1");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? start
                               : start + (stop - start) * double(i) / double(count - 1));
  } else {
    throw ConfigError("times must be an array or {start, stop, count}");
  }
  if (!std::is_sorted(out.begin(), out.end()))
    throw ConfigError("time grid must be sorted");
  return out;
}

KickKind parse_kick_kind(const std::string& s) {
  if (s == "spin_flip_z") return KickKind::spin_flip_z;
  if (s == "majorana_odd") return KickKind::majorana_odd;
  if (s == "majorana_even") return KickKind::majorana_even;
  if (s == "sigma_x_string") return KickKind::sigma_x_string;
  throw ConfigError("unknown kick kind \"" + s + "\"");
}

std::string kick_kind_name(KickKind k) {
  switch (k) {
    case KickKind::spin_flip_z: return "spin_flip_z";
    case KickKind::majorana_odd: return "majorana_odd";
    case KickKind::majorana_even: return "majorana_even";
    case KickKind::sigma_x_string: return "sigma_x_string";
  }
  return "?";
}

Source parse_source(const std::string& s) {
  if (s == "simulation") return Source::simulation;
  if (s == "semiclassical") return Source::semiclassical;
  if (s == "beyond_sc") return Source::beyond_sc;
  if (s == "oracle") return Source::oracle;
  if (s == "asymptotic") return Source::asymptotic;
  throw ConfigError("unknown source \"" + s + "\"");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// <+|sigma^x|+> from the large-separation plateau of the two-point function.
double order_parameter_m0(const ChainModel& model) {
  if (!model.ferromagnetic()) return 0.0;
  static std::map<std::pair<double, double>, double> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(model.h, model.gamma);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const CorrelationMatrix g = ground_state_correlations(model, 48);
  const double plateau = two_point_x(g, 2, 45);
  const double m0 = std::sqrt(std::max(plateau, 0.0));
  cache.emplace(key, m0);
  return m0;
}
}  // namespace

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::equilibrium: return "equilibrium";
    case Protocol::single_kick: return "single_kick";
    case Protocol::kick_grid: return "kick_grid";
    case Protocol::kick_periodic: return "kick_periodic";
    case Protocol::global_quench: return "global_quench";
    case Protocol::beyond_sc: return "beyond_sc";
  }
  return "?";
}

std::string to_string(Source s) {
  switch (s) {
    case Source::simulation: return "simulation";
    case Source::semiclassical: return "semiclassical";
    case Source::beyond_sc: return "beyond_sc";
    case Source::oracle: return "oracle";
    case Source::asymptotic: return "asymptotic";
  }
  return "?";
}

ProtocolConfig ProtocolConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  expect_keys(j, "config",
              {"protocol", "model", "subsystem", "times", "beta", "initial_beta", "kick",
               "quench", "ratios", "measure", "sources", "pad", "output"});

  ProtocolConfig cfg;
  const std::string proto = j.at("protocol").get<std::string>();
  if (proto == "equilibrium") cfg.protocol = Protocol::equilibrium;
  else if (proto == "single_kick") cfg.protocol = Protocol::single_kick;
  else if (proto == "kick_grid") cfg.protocol = Protocol::kick_grid;
  else if (proto == "kick_periodic") cfg.protocol = Protocol::kick_periodic;
  else if (proto == "global_quench") cfg.protocol = Protocol::global_quench;
  else if (proto == "beyond_sc") cfg.protocol = Protocol::beyond_sc;
  else throw ConfigError("unknown protocol \"" + proto + "\"");

  if (j.contains("model")) {
    const auto& m = j.at("model");
    expect_keys(m, "model", {"h", "gamma"});
    cfg.model.h = m.at("h").get<double>();
    cfg.model.gamma = m.value("gamma", 1.0);
    if (!std::isfinite(cfg.model.h) || !std::isfinite(cfg.model.gamma))
      throw ConfigError("model parameters must be finite");
  }

  if (j.contains("subsystem")) {
    const auto& s = j.at("subsystem");
    expect_keys(s, "subsystem", {"half_width", "sizes"});
    if (s.contains("half_width")) {
      cfg.half_width = s.at("half_width").get<Eigen::Index>();
      if (*cfg.half_width < 1) throw ConfigError("half_width must be >= 1");
    }
    if (s.contains("sizes")) {
      for (const auto& v : s.at("sizes")) {
        cfg.sizes.push_back(v.get<Eigen::Index>());
        if (cfg.sizes.back() < 1) throw ConfigError("sizes must be >= 1");
      }
    }
  }

  if (j.contains("times")) cfg.times = parse_times(j.at("times"));
  if (j.contains("beta"))
    for (const auto& b : j.at("beta")) cfg.betas.push_back(parse_beta(b));
  if (j.contains("initial_beta")) cfg.initial_beta = parse_beta(j.at("initial_beta"));

  if (j.contains("kick")) {
    const auto& k = j.at("kick");
    expect_keys(k, "kick", {"kind", "period", "grid_spacing"});
    if (k.contains("kind")) cfg.kick_kind = parse_kick_kind(k.at("kind").get<std::string>());
    if (k.contains("period")) cfg.kick_period = k.at("period").get<double>();
    if (k.contains("grid_spacing"))
      cfg.grid_spacing = k.at("grid_spacing").get<Eigen::Index>();
  }

  if (j.contains("quench")) {
    const auto& q = j.at("quench");
    expect_keys(q, "quench", {"h0", "h", "gamma"});
    const double gamma = q.value("gamma", 1.0);
    cfg.quench.pre = ChainModel{q.at("h0").get<double>(), gamma};
    cfg.quench.post = ChainModel{q.at("h").get<double>(), gamma};
  }

  if (j.contains("ratios"))
    for (const auto& v : j.at("ratios")) cfg.ratios.push_back(v.get<double>());

  if (j.contains("measure")) {
    const auto& m = j.at("measure");
    expect_keys(m, "measure", {"beta_max", "beta_spacing", "fit_domains", "fit_window"});
    cfg.measure.beta_max = m.value("beta_max", cfg.measure.beta_max);
    cfg.measure.beta_spacing = m.value("beta_spacing", cfg.measure.beta_spacing);
    cfg.measure.fit_domains = m.value("fit_domains", cfg.measure.fit_domains);
    cfg.measure.fit_window = m.value("fit_window", cfg.measure.fit_window);
    if (cfg.measure.beta_max <= 0 || cfg.measure.beta_spacing <= 0 ||
        cfg.measure.fit_domains < 3)
      throw ConfigError("invalid measure configuration");
  }

  if (j.contains("sources")) {
    cfg.sources.clear();
    for (const auto& s : j.at("sources")) cfg.sources.push_back(parse_source(s.get<std::string>()));
    if (cfg.sources.empty()) throw ConfigError("sources must not be empty");
  }

  if (j.contains("pad")) {
    cfg.pad = j.at("pad").get<Eigen::Index>();
    if (cfg.pad < 1) throw ConfigError("pad must be >= 1");
  }
  if (j.contains("output")) cfg.output = j.at("output").get<std::string>();

  // per-protocol requirements
  switch (cfg.protocol) {
    case Protocol::equilibrium:
      if (cfg.betas.empty() || cfg.sizes.empty())
        throw ConfigError("equilibrium requires beta and subsystem.sizes");
      break;
    case Protocol::single_kick:
    case Protocol::kick_grid:
    case Protocol::kick_periodic:
      if (!cfg.half_width) throw ConfigError("kick protocols require subsystem.half_width");
      if (cfg.times.empty()) throw ConfigError("kick protocols require times");
      break;
    case Protocol::global_quench:
      if (cfg.sizes.empty() || cfg.times.empty())
        throw ConfigError("global_quench requires subsystem.sizes and times");
      break;
    case Protocol::beyond_sc:
      if (cfg.ratios.empty()) throw ConfigError("beyond_sc requires ratios");
      break;
  }
  return cfg;
}

ProtocolConfig ProtocolConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::string ProtocolConfig::canonical_json() const {
  json j;
  j["protocol"] = to_string(protocol);
  j["model"] = {{"h", model.h}, {"gamma", model.gamma}};
  if (half_width) j["subsystem"]["half_width"] = *half_width;
  if (!sizes.empty()) j["subsystem"]["sizes"] = sizes;
  if (!times.empty()) j["times"] = times;
  if (!betas.empty()) {
    json b = json::array();
    for (double v : betas) {
      if (std::isinf(v)) b.push_back("inf");
      else b.push_back(v);
    }
    j["beta"] = b;
  }
  if (std::isinf(initial_beta)) j["initial_beta"] = "inf";
  else j["initial_beta"] = initial_beta;
  j["kick"]["kind"] = kick_kind_name(kick_kind);
  if (kick_period) j["kick"]["period"] = *kick_period;
  if (grid_spacing) j["kick"]["grid_spacing"] = *grid_spacing;
  j["quench"] = {{"h0", quench.pre.h}, {"h", quench.post.h}, {"gamma", quench.post.gamma}};
  if (!ratios.empty()) j["ratios"] = ratios;
  j["measure"] = {{"beta_max", measure.beta_max},
                  {"beta_spacing", measure.beta_spacing},
                  {"fit_domains", measure.fit_domains},
                  {"fit_window", measure.fit_window}};
  json s = json::array();
  for (Source src : sources) s.push_back(to_string(src));
  j["sources"] = s;
  j["pad"] = pad;
  return j.dump();
}

std::string ProtocolConfig::config_hash() const {
  const std::string text = canonical_json();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

namespace {

bool wants(const ProtocolConfig& cfg, Source s) {
  return std::find(cfg.sources.begin(), cfg.sources.end(), s) != cfg.sources.end();
}

CsvRow simulation_row(const CorrelationMatrix& g, SiteRange a, double time,
                      const IntegrationConfig& mcfg, Eigen::Index offset) {
  const MeasureReport rep = measure_subsystem(g, a, mcfg);
  CsvRow row;
  row.time = time;
  row.subsystem_left = a.first - offset;
  row.subsystem_right = a.last - offset;
  row.variance = rep.variance;
  row.i_half = rep.i_half;
  row.i_third = rep.i_third;
  row.qfi_over4 = rep.qfi_over4;
  row.qfi_err = rep.qfi_err;
  row.chi = rep.chi;
  row.lower = rep.lower;
  row.upper = rep.upper;
  row.source = Source::simulation;
  return row;
}

std::vector<sc::SemiclassicalEvent> semiclassical_events(
    const std::vector<KickEvent>& kicks, double t, Eigen::Index center) {
  std::vector<sc::SemiclassicalEvent> events;
  for (const auto& kick : kicks) {
    if (kick.time >= t) continue;  // fires after (or at) the sample
    const double pos = double(kick.site - center);
    // a spin flip excites two walls, string kicks excite one
    const int walls = kick.kind == KickKind::spin_flip_z ? 2 : 1;
    for (int w = 0; w < walls; ++w) events.push_back({kick.time, pos});
  }
  return events;
}

/// Semiclassical surrogate for tr[rho_A O^2]/|A|^2 when no simulation row
/// is available: factorized two-point functions over the event frames.
double surrogate_tr_o2(const sc::ScalingFunction& m,
                       const std::vector<sc::SemiclassicalEvent>& events, double t,
                       double vmax, double m0, double r) {
  const double size = 2.0 * r + 1.0;
  double total = 0.0;
  for (double i = -r; i <= r; ++i)
    for (double j = -r; j <= r; ++j) {
      double tp = m0 * m0;
      for (const auto& ev : events) {
        const double dt = t - ev.time;
        const double mi = m((i - ev.position) / (vmax * dt));
        const double mj = m((j - ev.position) / (vmax * dt));
        tp *= 1.0 - std::abs(mj - mi);
      }
      total += i == j ? 1.0 : tp;
    }
  return total / (size * size);
}

std::vector<CsvRow> kick_rows(const ProtocolConfig& cfg, std::ostream& log) {
  const Eigen::Index r = *cfg.half_width;
  const Eigen::Index size = 2 * r + 1;
  const double horizon = cfg.times.back();
  const WindowSpec spec = window_for(cfg.model, size, horizon, cfg.pad);
  const Eigen::Index center = (spec.subsystem.first + spec.subsystem.last) / 2;

  KickSchedule schedule;
  schedule.horizon = horizon;
  switch (cfg.protocol) {
    case Protocol::single_kick:
      schedule.events.push_back({0.0, center, cfg.kick_kind});
      break;
    case Protocol::kick_grid: {
      const Eigen::Index spacing = cfg.grid_spacing.value_or(2 * r);
      if (spacing < 1) throw ConfigError("grid_spacing must be >= 1");
      std::vector<Eigen::Index> sites;
      for (Eigen::Index s = center % spacing; s < spec.n_sites; s += spacing)
        sites.push_back(s);
      for (Eigen::Index s : sites) schedule.events.push_back({0.0, s, cfg.kick_kind});
      break;
    }
    case Protocol::kick_periodic: {
      const double vmax = max_velocity(cfg.model);
      const double period = cfg.kick_period.value_or(double(r) / vmax);
      if (period <= 0) throw ConfigError("kick period must be positive");
      for (double t = 0.0; t <= horizon + 1e-12; t += period)
        schedule.events.push_back({std::min(t, horizon), center, cfg.kick_kind});
      break;
    }
    default: throw std::logic_error("kick_rows: not a kick protocol");
  }

  CorrelationMatrix g0 = std::isinf(cfg.initial_beta)
                             ? ground_state_correlations(cfg.model, spec.n_sites)
                             : thermal_correlations(cfg.model, cfg.initial_beta,
                                                    spec.n_sites);
  const ScheduleResult sched = run_schedule(g0, cfg.model, schedule, cfg.times);
  for (const auto& w : sched.warnings) log << "warning: " << w << "\n";

  const double vmax = max_velocity(cfg.model);
  const double m0 = order_parameter_m0(cfg.model);
  const sc::ScalingFunction profile = sc::ScalingFunction::ising();

  const bool want_sim = wants(cfg, Source::simulation);
  const bool want_sc = wants(cfg, Source::semiclassical);

  std::function<std::vector<CsvRow>(std::size_t)> task =
      [&](std::size_t idx) -> std::vector<CsvRow> {
    const double t = cfg.times[idx];
    std::vector<CsvRow> rows;
    double tr_o2 = std::nan("");
    if (want_sim) {
      CsvRow row = simulation_row(sched.samples[idx], spec.subsystem, t, cfg.measure, center);
      rows.push_back(row);
      tr_o2 = row.variance / double(size * size);
    }
    if (want_sc && t > 0.0) {
      const auto events = semiclassical_events(schedule.events, t, center);
      if (std::isnan(tr_o2))
        tr_o2 = surrogate_tr_o2(profile, events, t, vmax, m0, double(r));
      const double chi = sc::chi_multi_kick(profile, events, -double(r), double(r), t,
                                            vmax, m0, tr_o2);
      CsvRow row;
      row.time = t;
      row.subsystem_left = -r;
      row.subsystem_right = r;
      row.variance = tr_o2 * double(size * size);
      row.chi = chi;
      row.qfi_over4 = chi * double(size * size);
      row.source = Source::semiclassical;
      rows.push_back(row);
    }
    return rows;
  };
  const auto groups =
      parallel::map_indexed<std::vector<CsvRow>>(cfg.times.size(), task);
  std::vector<CsvRow> rows;
  for (const auto& g : groups) rows.insert(rows.end(), g.begin(), g.end());
  return rows;
}

std::vector<CsvRow> equilibrium_rows(const ProtocolConfig& cfg, std::ostream& log) {
  struct Item {
    double beta;
    Eigen::Index size;
  };
  std::vector<Item> items;
  for (double beta : cfg.betas)
    for (Eigen::Index size : cfg.sizes) items.push_back({beta, size});

  std::function<std::vector<CsvRow>(std::size_t)> task =
      [&](std::size_t idx) -> std::vector<CsvRow> {
    const auto [beta, size] = items[idx];
    std::vector<CsvRow> rows;
    if (wants(cfg, Source::simulation)) {
      const CorrelationMatrix g = thermal_correlations(cfg.model, beta, size);
      CsvRow row = simulation_row(g, SiteRange{0, size - 1}, beta, cfg.measure, 0);
      rows.push_back(row);
    }
    if (wants(cfg, Source::oracle)) {
      if (size <= 12) {
        const auto ham = oracle::build_hamiltonian(size, cfg.model.h, cfg.model.gamma);
        const auto rho = oracle::thermal_state(ham, beta);
        const auto obs = oracle::order_parameter_x(size, 0, size - 1);
        CsvRow row;
        row.time = beta;
        row.subsystem_left = 0;
        row.subsystem_right = size - 1;
        row.variance = oracle::variance_exact(rho, obs);
        row.i_half = oracle::wydi_exact(rho, obs, 0.5);
        row.i_third = oracle::wydi_exact(rho, obs, 1.0 / 3.0);
        row.qfi_over4 = oracle::qfi_exact(rho, obs);
        row.qfi_err = 0.0;
        row.chi = row.qfi_over4 / double(size * size);
        row.lower = row.i_half;
        row.upper = std::min(2.0 * row.i_half, 10.0 * row.i_half - 9.0 * row.i_third);
        row.source = Source::oracle;
        rows.push_back(row);
      }
    }
    return rows;
  };
  const auto groups = parallel::map_indexed<std::vector<CsvRow>>(items.size(), task);
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (wants(cfg, Source::oracle) && items[i].size > 12)
      log << "warning: oracle source skipped for |A| = " << items[i].size
          << " (exact diagonalization capped at 12 sites)\n";
    rows.insert(rows.end(), groups[i].begin(), groups[i].end());
  }
  return rows;
}

std::vector<CsvRow> quench_rows(const ProtocolConfig& cfg, std::ostream& log) {
  (void)log;
  struct Item {
    Eigen::Index size;
    double t;
  };
  std::vector<Item> items;
  for (Eigen::Index size : cfg.sizes)
    for (double t : cfg.times) items.push_back({size, t});

  const double vmax = max_velocity(cfg.quench.post);

  std::function<std::vector<CsvRow>(std::size_t)> task =
      [&](std::size_t idx) -> std::vector<CsvRow> {
    const auto [size, t] = items[idx];
    std::vector<CsvRow> rows;
    const Eigen::Index reach = static_cast<Eigen::Index>(std::ceil(vmax * t));
    const Eigen::Index window = size + 2 * reach + 2 * cfg.pad;
    const Eigen::Index first = (window - size) / 2;
    const SiteRange a{first, first + size - 1};
    const CorrelationMatrix g = quench_correlations(cfg.quench, t, window);

    if (wants(cfg, Source::simulation))
      rows.push_back(simulation_row(g, a, t, cfg.measure, first));

    if (wants(cfg, Source::semiclassical)) {
      // prediction fed by the exact equal-time two-point functions
      Eigen::MatrixXd table(size + 2, size + 2);
      for (Eigen::Index i = 0; i < size + 2; ++i)
        for (Eigen::Index j = i; j < size + 2; ++j) {
          table(i, j) = two_point_x(g, a.first - 1 + i, a.first - 1 + j);
          table(j, i) = table(i, j);
        }
      const double f4 = sc::quench_qfi_from_correlators(
          [&](Eigen::Index i, Eigen::Index j) {
            return table(i - (a.first - 1), j - (a.first - 1));
          },
          a.first, a.last);
      CsvRow row;
      row.time = t;
      row.subsystem_left = 0;
      row.subsystem_right = size - 1;
      row.qfi_over4 = f4;
      row.chi = f4 / double(size * size);
      row.source = Source::semiclassical;
      rows.push_back(row);
    }

    if (wants(cfg, Source::asymptotic) && t > 0.0) {
      CsvRow row;
      row.time = t;
      row.subsystem_left = 0;
      row.subsystem_right = size - 1;
      row.chi = sc::quench_chi_asymptotic(cfg.quench, double(size), t);
      row.qfi_over4 = row.chi * double(size * size);
      row.source = Source::asymptotic;
      rows.push_back(row);
    }
    return rows;
  };
  const auto groups = parallel::map_indexed<std::vector<CsvRow>>(items.size(), task);
  std::vector<CsvRow> rows;
  for (const auto& g : groups) rows.insert(rows.end(), g.begin(), g.end());
  return rows;
}

std::vector<CsvRow> beyond_sc_rows(const ProtocolConfig& cfg, std::ostream& log) {
  (void)log;
  const auto sector = beyond_sc::TwoParticleSector::from_model(cfg.model);
  const double t = 256.0;  // scaling limit: results depend on r/t only
  std::vector<CsvRow> rows;
  for (double ratio : cfg.ratios) {
    if (ratio <= 0) throw ConfigError("beyond_sc ratios must be positive");
    const double r = ratio * t;
    if (wants(cfg, Source::beyond_sc)) {
      CsvRow row;
      row.time = ratio;
      row.subsystem_left = -1;
      row.subsystem_right = 1;
      row.chi = beyond_sc::chi_one_particle(sector, t, -r, r);
      row.source = Source::beyond_sc;
      rows.push_back(row);
    }
    if (wants(cfg, Source::semiclassical)) {
      CsvRow row;
      row.time = ratio;
      row.subsystem_left = -1;
      row.subsystem_right = 1;
      row.chi = beyond_sc::chi_one_particle_semiclassical(sector, t, -r, r);
      row.source = Source::semiclassical;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

std::vector<CsvRow> compute_rows(const ProtocolConfig& cfg, std::ostream& log) {
  switch (cfg.protocol) {
    case Protocol::equilibrium: return equilibrium_rows(cfg, log);
    case Protocol::single_kick:
    case Protocol::kick_grid:
    case Protocol::kick_periodic: return kick_rows(cfg, log);
    case Protocol::global_quench: return quench_rows(cfg, log);
    case Protocol::beyond_sc: return beyond_sc_rows(cfg, log);
  }
  throw std::logic_error("unknown protocol");
}

std::string csv_header() {
  return "time,subsystem_left,subsystem_right,variance,I_half,I_third,qfi_over4,"
         "qfi_err,chi,lower,upper,source,config_hash,artifact_version";
}

void write_csv(const std::string& path, const std::vector<CsvRow>& rows,
               const ProtocolConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const bool with_axis =
      std::any_of(rows.begin(), rows.end(), [](const CsvRow& r) { return !r.axis_name.empty(); });
  out << "# qfi-csv v1\n";
  out << "# " << csv_header();
  if (with_axis) out << ",axis,axis_value";
  out << "\n";
  const std::string hash = config.config_hash();
  for (const auto& r : rows) {
    out << format_number(r.time) << ',' << r.subsystem_left << ',' << r.subsystem_right
        << ',' << format_number(r.variance) << ',' << format_number(r.i_half) << ','
        << format_number(r.i_third) << ',' << format_number(r.qfi_over4) << ','
        << format_number(r.qfi_err) << ',' << format_number(r.chi) << ','
        << format_number(r.lower) << ',' << format_number(r.upper) << ','
        << to_string(r.source) << ',' << hash << ',' << kVersion;
    if (with_axis) out << ',' << r.axis_name << ',' << format_number(r.axis_value);
    out << "\n";
  }
  if (!out) throw std::runtime_error("short write to " + path);
}

namespace {
std::string path_with_source(const std::string& base, Source s) {
  const std::string tag = "." + to_string(s);
  const std::size_t dot = base.find_last_of('.');
  if (dot == std::string::npos || base.find('/', dot) != std::string::npos)
    return base + tag + ".csv";
  return base.substr(0, dot) + tag + base.substr(dot);
}
}  // namespace

std::vector<std::string> run(const ProtocolConfig& config, std::ostream& log) {
  const std::vector<CsvRow> rows = compute_rows(config, log);
  std::vector<std::string> written;
  for (Source s : config.sources) {
    std::vector<CsvRow> filtered;
    for (const auto& r : rows)
      if (r.source == s) filtered.push_back(r);
    const std::string path = path_with_source(config.output, s);
    write_csv(path, filtered, config);
    written.push_back(path);
  }
  return written;
}

namespace {
void apply_axis(ProtocolConfig& cfg, const std::string& axis, double value) {
  if (axis == "model.h") cfg.model.h = value;
  else if (axis == "model.gamma") cfg.model.gamma = value;
  else if (axis == "quench.h") cfg.quench.post.h = value;
  else if (axis == "quench.h0") cfg.quench.pre.h = value;
  else if (axis == "kick.period") cfg.kick_period = value;
  else if (axis == "initial_beta") cfg.initial_beta = value;
  else if (axis == "subsystem.half_width")
    cfg.half_width = static_cast<Eigen::Index>(std::llround(value));
  else if (axis == "pad") cfg.pad = static_cast<Eigen::Index>(std::llround(value));
  else throw ConfigError("unknown sweep axis \"" + axis + "\"");
}
}  // namespace

std::vector<std::string> sweep(const ProtocolConfig& base, const std::string& axis,
                               const std::vector<double>& values, std::ostream& log) {
  if (values.empty()) throw ConfigError("sweep requires a nonempty value list");
  std::map<Source, std::vector<CsvRow>> merged;
  for (double v : values) {
    ProtocolConfig cfg = base;
    apply_axis(cfg, axis, v);
    for (CsvRow row : compute_rows(cfg, log)) {
      row.axis_name = axis;
      row.axis_value = v;
      merged[row.source].push_back(row);
    }
  }
  std::vector<std::string> written;
  for (Source s : base.sources) {
    const std::string path = path_with_source(base.output, s);
    write_csv(path, merged[s], base);
    written.push_back(path);
  }
  return written;
}

bool validate(bool quick, std::ostream& out) {
  using std::abs;
  bool all_pass = true;
  auto report = [&](const std::string& name, double dev, double tol) {
    const bool pass = dev < tol;
    all_pass = all_pass && pass;
    out << (pass ? "PASS" : "FAIL") << "  " << name << ": max deviation " << dev
        << " (tolerance " << tol << ")\n";
  };

  const std::vector<Eigen::Index> lengths = quick ? std::vector<Eigen::Index>{6}
                                                  : std::vector<Eigen::Index>{4, 6, 8};
  const std::vector<double> fields = quick ? std::vector<double>{0.5}
                                           : std::vector<double>{0.3, 0.5, 1.2};

  {  // skew information, Gaussian Pfaffian formula vs exact eigen-sum
    double dev = 0.0;
    for (Eigen::Index L : lengths)
      for (double h : fields)
        for (double beta : {2.0, kInf}) {
          const auto ham = oracle::build_hamiltonian(L, h, 1.0);
          const auto rho = oracle::thermal_state(ham, beta);
          std::vector<Eigen::Index> sites;
          for (Eigen::Index j = 0; j < L / 2; ++j) sites.push_back(j);
          const auto rho_a = oracle::reduce(rho, sites);
          const auto obs = oracle::order_parameter_x(L / 2, 0, L / 2 - 1);
          const CorrelationMatrix g = thermal_correlations_finite(ChainModel{h, 1.0}, beta, L);
          for (std::complex<double> alpha :
               {std::complex<double>(1.0 / 3.0, 0.0), std::complex<double>(0.5, 0.0),
                std::complex<double>(0.5, 0.7)}) {
            const double gaussian = wydi(g, SiteRange{0, L / 2 - 1}, alpha);
            const double exact = oracle::wydi_exact(rho_a, obs, alpha);
            dev = std::max(dev, abs(gaussian - exact));
          }
        }
    report("skew information (Gaussian vs exact)", dev, 1e-8);
  }

  {  // QFI identity estimate vs exact eigen-sum
    double dev = 0.0;
    for (Eigen::Index L : lengths)
      for (double h : fields) {
        const auto ham = oracle::build_hamiltonian(L, h, 1.0);
        const auto rho = oracle::thermal_state(ham, 2.0);
        std::vector<Eigen::Index> sites;
        for (Eigen::Index j = 0; j < L / 2; ++j) sites.push_back(j);
        const auto rho_a = oracle::reduce(rho, sites);
        const auto obs = oracle::order_parameter_x(L / 2, 0, L / 2 - 1);
        const double exact = oracle::qfi_exact(rho_a, obs);
        const CorrelationMatrix g = thermal_correlations_finite(ChainModel{h, 1.0}, 2.0, L);
        const auto est = qfi_estimate(g, SiteRange{0, L / 2 - 1});
        dev = std::max(dev, abs(est.value - exact) / std::max(abs(exact), 1e-12));
      }
    report("QFI identity estimate (relative)", dev, 1e-4);
  }

  {  // kick + evolution pipeline vs exact propagation
    const Eigen::Index L = 8;
    const ChainModel m{0.5, 1.0};
    const auto ham = oracle::build_hamiltonian(L, m.h, m.gamma);
    auto rho = oracle::thermal_state(ham, kInf);
    rho = oracle::apply_unitary(rho, oracle::pauli_at(L, 4, 'z'));
    rho = oracle::evolve_exact(rho, ham, 2.0);
    CorrelationMatrix g = thermal_correlations_finite(m, kInf, L);
    g = apply_spin_flip(g, 4);
    Evolver ev(m, L);
    g = ev.evolve(g, 2.0);
    const double dev =
        (g.data() - oracle::correlations_of(rho).data()).cwiseAbs().maxCoeff();
    report("kick/evolve pipeline vs exact propagation", dev, 1e-7);
  }

  {  // bound sandwich on random Gaussian states
    std::mt19937 rng(2024);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uni(0.0, 0.95);
    double violation = 0.0;
    const int trials = quick ? 10 : 25;
    for (int trial = 0; trial < trials; ++trial) {
      const Eigen::Index n = 3 + (trial % 3);
      const Eigen::Index dim = 2 * n;
      Eigen::MatrixXd seed(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) seed(i, j) = gauss(rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
      Eigen::MatrixXd q = qr.householderQ();
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
      for (Eigen::Index mm = 0; mm < n; ++mm) {
        const double lambda = uni(rng);
        t(2 * mm, 2 * mm + 1) = lambda;
        t(2 * mm + 1, 2 * mm) = -lambda;
      }
      CorrelationMatrix g(std::complex<double>(0, -1) *
                          (q * t * q.transpose()).cast<std::complex<double>>());
      const auto b = qfi_bounds(g, SiteRange{0, n - 1});
      const auto rho = oracle::gaussian_to_dense(g);
      const auto obs = oracle::order_parameter_x(n, 0, n - 1);
      const double f4 = oracle::qfi_exact(rho, obs);
      violation = std::max(violation, b.lower - f4);
      violation = std::max(violation, f4 - b.upper_2i);
      violation = std::max(violation, f4 - b.upper_mixed);
      violation = std::max(violation, b.lower_rho2 - b.lower);
    }
    report("bound sandwich violations", std::max(violation, 0.0), 1e-10);
  }

  return all_pass;
}

}  // namespace qfi::protocol
