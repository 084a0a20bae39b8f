#include "obsim/serialization.hpp"

#include <charconv>
#include <sstream>

namespace obsim {

namespace {

template <class T> T required(const Json &doc, const char *key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ConfigError(std::string("missing field \"") + key + "\"");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("field \"") + key + "\": " + e.what());
  }
}

template <class T> T optional(const Json &doc, const char *key, T fallback) {
  if (!doc.is_object() || !doc.contains(key)) {
    return fallback;
  }
  return required<T>(doc, key);
}

Json parse_line(std::string_view line) {
  try {
    return Json::parse(line);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("malformed JSON line: ") + e.what());
  }
}

} // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

MeterStick stick_from_json(const Json &doc) {
  MeterStick stick;
  stick.target_width_m = optional(doc, "target_width_m", stick.target_width_m);
  stick.tolerance_m = optional(doc, "tolerance_m", stick.tolerance_m);
  stick.validate();
  return stick;
}

Json stick_to_json(const MeterStick &stick) {
  return {{"target_width_m", stick.target_width_m}, {"tolerance_m", stick.tolerance_m}};
}

WorldDocument world_from_json(const Json &doc, const MeterStick &stick) {
  if (!doc.is_object() || !doc.contains("objects") || !doc.at("objects").is_array()) {
    throw ConfigError("world document needs an \"objects\" array");
  }
  std::vector<WorldObject> objects;
  for (const auto &o : doc.at("objects")) {
    objects.push_back({required<int>(o, "id"), required<double>(o, "width_m")});
  }
  PresentationSchedule schedule;
  if (doc.contains("schedule")) {
    const auto &s = doc.at("schedule");
    const auto kind = optional<std::string>(s, "kind", "cyclic");
    if (kind == "cyclic") {
      schedule.kind = ScheduleKind::cyclic;
    } else if (kind == "seeded-uniform") {
      schedule.kind = ScheduleKind::seeded_uniform;
    } else {
      throw ConfigError("unknown schedule kind \"" + kind + "\"");
    }
    schedule.seed = optional<std::uint64_t>(s, "seed", 0);
    schedule.epoch_permutation =
        optional<std::vector<std::size_t>>(s, "permutation", std::vector<std::size_t>{});
  }
  WorldSpec spec(std::move(objects), stick);
  schedule.validate(spec.size());
  return {std::move(spec), std::move(schedule)};
}

Json world_to_json(const WorldSpec &spec, const PresentationSchedule &schedule) {
  Json objects = Json::array();
  for (const auto &o : spec.objects()) {
    objects.push_back({{"id", o.id}, {"width_m", o.width_m}});
  }
  Json s = {{"kind", schedule.kind == ScheduleKind::cyclic ? "cyclic" : "seeded-uniform"},
            {"seed", schedule.seed}};
  if (schedule.kind == ScheduleKind::cyclic) {
    s["permutation"] = schedule.epoch_permutation;
  }
  return {{"objects", std::move(objects)}, {"schedule", std::move(s)}};
}

std::string stream_to_jsonl(const OutcomeStream &stream) {
  std::string out;
  out.reserve(stream.size() * 20);
  for (const auto &r : stream.records()) {
    out += "{\"tick\":";
    out += std::to_string(r.tick);
    out += ",\"bit\":";
    out += r.bit ? '1' : '0';
    out += "}\n";
  }
  return out;
}

OutcomeStream stream_from_jsonl(std::string_view text) {
  OutcomeStream stream;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    const Json rec = parse_line(line);
    stream.append(required<std::int64_t>(rec, "tick"), required<int>(rec, "bit"));
  }
  return stream;
}

Json ledger_to_json(const EnergyLedger &ledger, double delta_t_s) {
  return {{"temperature_K", ledger.temperature()},
          {"coefficient", coefficient_value(ledger.coefficient())},
          {"bits", ledger.bits_recorded()},
          {"joules", ledger.free_energy()},
          {"delta_t_s", delta_t_s},
          {"action_quantum_Js", action_quantum(ledger.temperature(), delta_t_s,
                                               ledger.coefficient())}};
}

Json to_json(const QuantumDescription &q) {
  return {{"d", q.d}, {"alphas", q.alphas}, {"omegas", q.omegas}, {"thetas", q.thetas}};
}

QuantumDescription quantum_description_from_json(const Json &doc) {
  QuantumDescription q;
  q.d = required<int>(doc, "d");
  q.alphas = required<std::vector<double>>(doc, "alphas");
  q.omegas = optional(doc, "omegas", std::vector<double>(static_cast<std::size_t>(q.d), 0.0));
  q.thetas = optional(doc, "thetas", std::vector<double>(static_cast<std::size_t>(q.d), 0.0));
  const auto d = static_cast<std::size_t>(q.d);
  if (q.d < 2 || q.alphas.size() != d || q.omegas.size() != d || q.thetas.size() != d) {
    throw ConfigError("quantum description: d >= 2 and every array of length d required");
  }
  return q;
}

Json matrix_to_json(const CMatrix<double> &m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json born_to_json(const BornEstimate &est) {
  Json wilson = Json::array();
  for (const auto &w : est.wilson95) {
    wilson.push_back({w.lo, w.hi});
  }
  return {{"counts", est.counts},
          {"frequencies", est.frequencies},
          {"wilson95", std::move(wilson)},
          {"laplace_smoothed", est.smoothed}};
}

Json to_json(const MooreBox &box) {
  return {{"states", box.states()}, {"initial", box.initial}, {"delta", box.delta},
          {"out", box.out}};
}

MooreBox moore_box_from_json(const Json &doc) {
  MooreBox box;
  box.initial = required<std::size_t>(doc, "initial");
  box.delta = required<std::vector<std::size_t>>(doc, "delta");
  box.out = required<std::vector<int>>(doc, "out");
  if (required<std::size_t>(doc, "states") != box.delta.size()) {
    throw ConfigError("MooreBox: \"states\" disagrees with the transition table");
  }
  try {
    box.validate();
  } catch (const ContractViolation &e) {
    throw ConfigError(e.what());
  }
  return box;
}

std::string history_to_jsonl(const GodsEyeHistory &history) {
  std::string out;
  for (const auto &p : history) {
    out += Json{{"tick", p.tick}, {"id", p.id}, {"width_m", p.width_m}}.dump();
    out += '\n';
  }
  return out;
}

Json reversal_to_json(const ReversalCounts &c) {
  auto bigrams = [](const std::array<std::int64_t, 4> &b) {
    return Json{{"00", b[0]}, {"01", b[1]}, {"10", b[2]}, {"11", b[3]}};
  };
  return {{"unigram_forward", c.unigram_forward},
          {"unigram_reverse", c.unigram_reverse},
          {"bigram_forward", bigrams(c.bigram_forward)},
          {"bigram_reverse", bigrams(c.bigram_reverse)}};
}

Json to_json(const doubleslit::SlitConfig &cfg) {
  return {{"slit_width_m", cfg.slit_width_m},
          {"separation_m", cfg.separation_m},
          {"wavelength_m", cfg.wavelength_m},
          {"screen_distance_m", cfg.screen_distance_m},
          {"left_open", cfg.left_open},
          {"right_open", cfg.right_open},
          {"which_path", cfg.which_path},
          {"rate_per_s", cfg.rate_per_s},
          {"screen_halfwidth_m", cfg.screen_halfwidth_m}};
}

doubleslit::SlitConfig apply_slit_patch(const doubleslit::SlitConfig &base, const Json &patch) {
  if (!patch.is_object()) {
    throw ConfigError("slit configuration must be a JSON object");
  }
  doubleslit::SlitConfig cfg = base;
  for (const auto &[key, value] : patch.items()) {
    if (key == "slit_width_m") {
      cfg.slit_width_m = required<double>(patch, "slit_width_m");
    } else if (key == "separation_m") {
      cfg.separation_m = required<double>(patch, "separation_m");
    } else if (key == "wavelength_m") {
      cfg.wavelength_m = required<double>(patch, "wavelength_m");
    } else if (key == "screen_distance_m") {
      cfg.screen_distance_m = required<double>(patch, "screen_distance_m");
    } else if (key == "left_open") {
      cfg.left_open = required<bool>(patch, "left_open");
    } else if (key == "right_open") {
      cfg.right_open = required<bool>(patch, "right_open");
    } else if (key == "which_path") {
      cfg.which_path = required<bool>(patch, "which_path");
    } else if (key == "rate_per_s") {
      cfg.rate_per_s = required<double>(patch, "rate_per_s");
    } else if (key == "screen_halfwidth_m") {
      cfg.screen_halfwidth_m = required<double>(patch, "screen_halfwidth_m");
    } else {
      throw ConfigError("unknown slit configuration field \"" + key + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

Json event_to_json(const doubleslit::DetectionEvent &e) {
  return {{"tick", e.tick}, {"x_m", e.x_m}, {"y_m", e.y_m}};
}

std::string events_to_jsonl(std::span<const doubleslit::DetectionEvent> events) {
  std::string out;
  for (const auto &e : events) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::string pattern_csv(const doubleslit::PatternTable &table) {
  std::string out = "x_m,intensity\n";
  out.reserve(table.x().size() * 48);
  for (std::size_t i = 0; i < table.x().size(); ++i) {
    out += format_double(table.x()[i]);
    out += ',';
    out += format_double(table.intensity()[i]);
    out += '\n';
  }
  return out;
}

Json to_json(const doubleslit::SourceRepresentation &src) {
  return {{"mode", doubleslit::to_string(src.mode)}, {"state", src.state},
          {"system", src.system}};
}

} // namespace obsim
