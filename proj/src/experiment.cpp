#include "obsim/experiment.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

namespace obsim {

namespace {

constexpr std::array<std::pair<ExperimentKind, const char *>, 8> kKinds{{
    {ExperimentKind::session, "session"},
    {ExperimentKind::derive_h, "derive-h"},
    {ExperimentKind::born, "born"},
    {ExperimentKind::surprise, "surprise"},
    {ExperimentKind::substitution, "substitution"},
    {ExperimentKind::reversal, "reversal"},
    {ExperimentKind::doubleslit_pattern, "doubleslit-pattern"},
    {ExperimentKind::doubleslit_sample, "doubleslit-sample"},
}};

template <class T> T get_or(const Json &p, const char *key, T fallback) {
  if (!p.contains(key)) {
    return fallback;
  }
  try {
    return p.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("parameter \"") + key + "\": " + e.what());
  }
}

LandauerCoefficient coefficient_from(const std::string &name) {
  if (name == "0.7") {
    return LandauerCoefficient::point_seven;
  }
  if (name == "ln2") {
    return LandauerCoefficient::ln2;
  }
  throw ConfigError("coefficient must be \"0.7\" or \"ln2\", got \"" + name + "\"");
}

// Expands {"generate": {...}} into an explicit object list.
Json expand_world(const Json &world, const MeterStick &stick) {
  if (!world.is_object()) {
    throw ConfigError("\"world\" must be an object");
  }
  if (!world.contains("generate")) {
    return world;
  }
  const Json &g = world.at("generate");
  const auto n = get_or<std::int64_t>(g, "matching", 1);
  const auto m = get_or<std::int64_t>(g, "non_matching", 1);
  const double match_w = get_or<double>(g, "matching_width_m", stick.target_width_m);
  const double other_w = get_or<double>(g, "non_matching_width_m", 2.0 * stick.target_width_m);
  if (n < 0 || m < 0) {
    throw ConfigError("generate: counts must be non-negative");
  }
  Json objects = Json::array();
  for (std::int64_t i = 0; i < n + m; ++i) {
    objects.push_back({{"id", i}, {"width_m", i < n ? match_w : other_w}});
  }
  Json out = {{"objects", std::move(objects)}};
  if (world.contains("schedule")) {
    out["schedule"] = world.at("schedule");
  }
  return out;
}

// Everything a world-driven experiment needs, with defaults resolved.
struct SessionSetup {
  Json resolved;
  MeterStick stick;
  WorldDocument world;
  double temperature_K;
  double delta_t_s;
  std::int64_t ticks;
  LandauerCoefficient coefficient;
};

SessionSetup resolve_session(const Json &p, std::optional<std::uint64_t> seed,
                             std::int64_t default_ticks) {
  MeterStick stick = stick_from_json(p.value("detector", Json::object()));
  if (!p.contains("world")) {
    throw ConfigError("missing \"world\"");
  }
  Json world = expand_world(p.at("world"), stick);
  Json schedule = world.value("schedule", Json{{"kind", "cyclic"}});
  const auto resolved_seed =
      seed ? *seed : get_or<std::uint64_t>(p, "seed", get_or<std::uint64_t>(schedule, "seed", 0));
  schedule["seed"] = resolved_seed;
  world["schedule"] = std::move(schedule);

  WorldDocument doc = world_from_json(world, stick);
  const auto temperature = get_or<double>(p, "temperature_K", 310.0);
  const auto delta_t = get_or<double>(p, "delta_t_s", 2e-13);
  const auto ticks = get_or<std::int64_t>(p, "ticks", default_ticks);
  const auto coefficient = get_or<std::string>(p, "coefficient", "0.7");

  Json resolved = p;
  resolved["seed"] = resolved_seed;
  resolved["detector"] = stick_to_json(stick);
  resolved["world"] = world_to_json(doc.spec, doc.schedule);
  resolved["temperature_K"] = temperature;
  resolved["delta_t_s"] = delta_t;
  resolved["ticks"] = ticks;
  resolved["coefficient"] = coefficient;
  return {std::move(resolved), stick, std::move(doc), temperature, delta_t, ticks,
          coefficient_from(coefficient)};
}

Session simulate(const SessionSetup &s) {
  return run_session(s.world.spec, s.world.schedule, s.stick, s.temperature_K, s.delta_t_s,
                     s.ticks, s.coefficient);
}

Json gods_eye(const WorldSpec &spec) {
  const double total = static_cast<double>(spec.size());
  return {{"n_matching", spec.matching()},
          {"m_non_matching", spec.non_matching()},
          {"p1", static_cast<double>(spec.matching()) / total}};
}

ExperimentResult run_session_kind(const Json &p, std::optional<std::uint64_t> seed) {
  auto setup = resolve_session(p, seed, 1000);
  const Session s = simulate(setup);
  ExperimentResult r;
  r.report = {{"kind", "session"},
              {"config", setup.resolved},
              {"gods_eye", gods_eye(setup.world.spec)},
              {"ledger", ledger_to_json(s.ledger, s.clock.delta_t_s)},
              {"ticks", s.clock.ticks}};
  r.artifacts.push_back({".stream.jsonl", stream_to_jsonl(s.stream)});
  return r;
}

ExperimentResult run_derive_h(const Json &p) {
  const auto temperature = get_or<double>(p, "temperature_K", 310.0);
  const auto delta_t = get_or<double>(p, "delta_t_s", 2e-13);
  const auto coefficient = get_or<std::string>(p, "coefficient", "0.7");
  const double h = action_quantum(temperature, delta_t, coefficient_from(coefficient));
  Json resolved = p;
  resolved["temperature_K"] = temperature;
  resolved["delta_t_s"] = delta_t;
  resolved["coefficient"] = coefficient;
  ExperimentResult r;
  r.report = {{"kind", "derive-h"},
              {"config", resolved},
              {"kT_J", kBoltzmann * temperature},
              {"action_quantum_Js", h},
              {"planck_Js", kPlanck},
              {"ratio_to_planck", h / kPlanck}};
  return r;
}

ExperimentResult run_born(const Json &p, std::optional<std::uint64_t> seed) {
  auto setup = resolve_session(p, seed, 100000);
  const double coverage = get_or<double>(p, "band_coverage", 0.997);
  setup.resolved["band_coverage"] = coverage;
  const Session s = simulate(setup);
  const BornEstimate est = born_estimate(s.stream);
  const auto amps = infer_amplitudes(est);
  const auto &spec = setup.world.spec;
  const double p1 = static_cast<double>(spec.matching()) / static_cast<double>(spec.size());
  const auto band = stats::binomial_central_band(est.total(), p1, coverage);
  const auto ones = est.counts[1];
  ExperimentResult r;
  r.report = {{"kind", "born"},
              {"config", setup.resolved},
              {"gods_eye", gods_eye(spec)},
              {"estimate", born_to_json(est)},
              {"inferred_alphas", std::vector<double>{amps[0], amps[1]}},
              {"binomial_band", {{"coverage", coverage}, {"lo", band.lo}, {"hi", band.hi}}},
              {"ones_within_band", ones >= band.lo && ones <= band.hi}};
  return r;
}

ExperimentResult run_surprise(const Json &p, std::optional<std::uint64_t> seed) {
  std::vector<int> prefix;
  Json resolved = p;
  if (p.contains("prefix")) {
    prefix = get_or<std::vector<int>>(p, "prefix", {});
  } else {
    Json sp = p;
    sp["ticks"] = get_or<std::int64_t>(p, "prefix_length", 100);
    auto setup = resolve_session(sp, seed, 100);
    resolved = setup.resolved;
    prefix = simulate(setup).stream.bits();
  }
  const auto pair = surprise_pair(prefix);
  const auto n = prefix.size();
  const auto a = pair.a.run(n + 1);
  const auto b = pair.b.run(n + 1);
  std::size_t agree = 0;
  while (agree < a.size() && a[agree] == b[agree]) {
    ++agree;
  }
  ExperimentResult r;
  r.report = {{"kind", "surprise"},
              {"config", resolved},
              {"prefix_length", n},
              {"agreeing_outputs", agree},
              {"a", to_json(pair.a)},
              {"b", to_json(pair.b)}};
  return r;
}

ExperimentResult run_substitution(const Json &p, std::optional<std::uint64_t> seed) {
  auto setup = resolve_session(p, seed, 1000);
  const Session s = simulate(setup);
  const auto pair = substitution_pair(s.stream, setup.world.spec);
  const bool replay_equal = replay(pair.state_change, setup.stick) == s.stream &&
                            replay(pair.substitution, setup.stick) == s.stream;
  std::int64_t differing = 0;
  for (std::size_t i = 0; i < pair.state_change.size(); ++i) {
    differing += pair.state_change[i].id != pair.substitution[i].id;
  }
  ExperimentResult r;
  r.report = {{"kind", "substitution"},
              {"config", setup.resolved},
              {"ticks", s.stream.size()},
              {"replay_equal", replay_equal},
              {"identity_differences", differing}};
  r.artifacts.push_back({".state_change.jsonl", history_to_jsonl(pair.state_change)});
  r.artifacts.push_back({".substitution.jsonl", history_to_jsonl(pair.substitution)});
  return r;
}

ExperimentResult run_reversal(const Json &p, std::optional<std::uint64_t> seed) {
  auto setup = resolve_session(p, seed, 100000);
  const Session s = simulate(setup);
  const auto c = reversal_counts(s.stream);
  bool identities = c.unigram_forward == c.unigram_reverse;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      identities = identities && c.bigram_reverse[2 * a + b] == c.bigram_forward[2 * b + a];
    }
  }
  ExperimentResult r;
  r.report = {{"kind", "reversal"},
              {"config", setup.resolved},
              {"counts", reversal_to_json(c)},
              {"identities_hold", identities}};
  return r;
}

doubleslit::SlitConfig resolve_slits(const Json &p) {
  return apply_slit_patch(doubleslit::SlitConfig{}, p.value("slits", Json::object()));
}

ExperimentResult run_pattern(const Json &p) {
  const auto cfg = resolve_slits(p);
  Json resolved = p;
  resolved["slits"] = to_json(cfg);
  const doubleslit::PatternTable table(cfg);
  ExperimentResult r;
  r.report = {{"kind", "doubleslit-pattern"},
              {"config", resolved},
              {"grid_points", table.x().size()},
              {"integral", table.integral()},
              {"source", to_json(doubleslit::source_representation(cfg))}};
  if (cfg.coherent_two_slit()) {
    const auto m = doubleslit::measure_fringes(cfg);
    r.report["fringe_spacing_m"] = doubleslit::fringe_spacing(cfg);
    r.report["measured"] = {{"bright_spacing_m", m.bright_spacing_m},
                            {"dark_spacing_m", m.dark_spacing_m},
                            {"first_raw_maximum_m", m.first_raw_maximum_m}};
  }
  r.artifacts.push_back({".pattern.csv", pattern_csv(table)});
  return r;
}

ExperimentResult run_sample(const Json &p, std::optional<std::uint64_t> seed) {
  const auto cfg = resolve_slits(p);
  const auto resolved_seed = seed ? *seed : get_or<std::uint64_t>(p, "seed", 0);
  const auto count = get_or<std::size_t>(p, "count", 100000);
  const auto bins = get_or<std::size_t>(p, "bins", 64);
  Json resolved = p;
  resolved["slits"] = to_json(cfg);
  resolved["seed"] = resolved_seed;
  resolved["count"] = count;
  resolved["bins"] = bins;
  const auto events = doubleslit::sample_events(cfg, count, resolved_seed);
  ExperimentResult r;
  r.report = {{"kind", "doubleslit-sample"},
              {"config", resolved},
              {"count", events.size()},
              {"source", to_json(doubleslit::source_representation(cfg))}};
  if (!events.empty()) {
    const doubleslit::PatternTable table(cfg);
    std::vector<double> xs;
    xs.reserve(events.size());
    for (const auto &e : events) {
      xs.push_back(e.x_m);
    }
    r.report["ks_distance"] =
        stats::ks_distance(xs, [&](double x) { return table.cdf(x); });
    if (events.size() >= doubleslit::kMinVisibilityEvents && bins >= 16) {
      r.report["visibility"] = doubleslit::visibility(events, cfg, bins);
    }
  }
  r.artifacts.push_back({".events.jsonl", events_to_jsonl(events)});
  return r;
}

} // namespace

ExperimentKind parse_kind(const std::string &name) {
  for (const auto &[kind, label] : kKinds) {
    if (name == label) {
      return kind;
    }
  }
  throw ConfigError("unknown experiment kind \"" + name + "\"");
}

const char *to_string(ExperimentKind kind) noexcept {
  for (const auto &[k, label] : kKinds) {
    if (k == kind) {
      return label;
    }
  }
  return "session";
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
  const Json &p = config.params;
  if (!p.is_object()) {
    throw ConfigError("experiment configuration must be a JSON object");
  }
  if (p.contains("kind") && p.at("kind") != to_string(config.kind)) {
    throw ConfigError("configuration is for kind " + p.at("kind").dump() + ", not \"" +
                      to_string(config.kind) + "\"");
  }
  ExperimentResult r;
  switch (config.kind) {
  case ExperimentKind::session: r = run_session_kind(p, config.seed); break;
  case ExperimentKind::derive_h: r = run_derive_h(p); break;
  case ExperimentKind::born: r = run_born(p, config.seed); break;
  case ExperimentKind::surprise: r = run_surprise(p, config.seed); break;
  case ExperimentKind::substitution: r = run_substitution(p, config.seed); break;
  case ExperimentKind::reversal: r = run_reversal(p, config.seed); break;
  case ExperimentKind::doubleslit_pattern: r = run_pattern(p); break;
  case ExperimentKind::doubleslit_sample: r = run_sample(p, config.seed); break;
  }
  r.report["config"]["kind"] = to_string(config.kind);
  return r;
}

std::string artifact_stem(const std::string &report_path) {
  constexpr std::string_view ext = ".json";
  if (report_path.size() > ext.size() &&
      report_path.compare(report_path.size() - ext.size(), ext.size(), ext) == 0) {
    return report_path.substr(0, report_path.size() - ext.size());
  }
  return report_path;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out << contents;
  if (!out.flush()) {
    throw IoError("write failed for " + path);
  }
}

int run(const ExperimentConfig &config, std::ostream &stdout_stream, std::ostream &stderr_stream) {
  try {
    auto result = run_experiment(config);
    if (config.out) {
      const auto stem = artifact_stem(*config.out);
      Json files = Json::array();
      for (const auto &a : result.artifacts) {
        const auto path = stem + a.suffix;
        write_file(path, a.contents);
        files.push_back(path.substr(path.find_last_of('/') + 1));
      }
      result.report["artifacts"] = std::move(files);
      write_file(*config.out, result.report.dump(2) + "\n");
    } else {
      stdout_stream << result.report.dump(2) << "\n";
    }
    return exit_code::ok;
  } catch (const ConfigError &e) {
    stderr_stream << "config error: " << e.what() << "\n";
    return exit_code::config;
  } catch (const ContractViolation &e) {
    stderr_stream << "contract violation: " << e.what() << "\n";
    return exit_code::contract;
  } catch (const DomainError &e) {
    stderr_stream << "domain error: " << e.what() << "\n";
    return exit_code::domain;
  } catch (const IoError &e) {
    stderr_stream << "i/o error: " << e.what() << "\n";
    return exit_code::io;
  }
}

} // namespace obsim
