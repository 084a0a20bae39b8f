#pragma once

// JSON, JSON Lines and CSV encodings of the simulator's values.

#include <string>
#include <string_view>

#include <json.hpp>

#include "obsim/ambiguity.hpp"
#include "obsim/doubleslit.hpp"
#include "obsim/observer.hpp"
#include "obsim/theorybuilder.hpp"
#include "obsim/worldmodel.hpp"

namespace obsim {

using Json = nlohmann::ordered_json;

/// A world document: objects plus the presentation schedule.
struct WorldDocument {
  WorldSpec spec;
  PresentationSchedule schedule;
};

WorldDocument world_from_json(const Json &doc, const MeterStick &stick = {});
Json world_to_json(const WorldSpec &spec, const PresentationSchedule &schedule);

MeterStick stick_from_json(const Json &doc);
Json stick_to_json(const MeterStick &stick);

std::string stream_to_jsonl(const OutcomeStream &stream);
OutcomeStream stream_from_jsonl(std::string_view text);

Json ledger_to_json(const EnergyLedger &ledger, double delta_t_s);

Json to_json(const QuantumDescription &q);
QuantumDescription quantum_description_from_json(const Json &doc);
/// Nested rows of [re, im] pairs.
Json matrix_to_json(const CMatrix<double> &m);
Json born_to_json(const BornEstimate &est);

Json to_json(const MooreBox &box);
MooreBox moore_box_from_json(const Json &doc);
std::string history_to_jsonl(const GodsEyeHistory &history);
Json reversal_to_json(const ReversalCounts &counts);

Json to_json(const doubleslit::SlitConfig &cfg);
/// Applies the fields present in `patch` on top of `base` and validates.
doubleslit::SlitConfig apply_slit_patch(const doubleslit::SlitConfig &base, const Json &patch);
Json event_to_json(const doubleslit::DetectionEvent &e);
std::string events_to_jsonl(std::span<const doubleslit::DetectionEvent> events);
/// "x_m,intensity" rows over the tabulation grid.
std::string pattern_csv(const doubleslit::PatternTable &table);
Json to_json(const doubleslit::SourceRepresentation &src);

/// Shortest round-trip decimal form, as used in every emitted file.
std::string format_double(double v);

} // namespace obsim
