#include "gazemetry/serialize.hpp"

#include "gazemetry/errors.hpp"
#include "gazemetry/version.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gazemetry {

std::string fmt_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::string fmt_shortest(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

double round_to(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

namespace {

Json vec3_json(const std::optional<Vec3>& v) {
    if (!v) {
        return nullptr;
    }
    return Json::array({round_to(v->x(), 3), round_to(v->y(), 3), round_to(v->z(), 3)});
}

Json per_eye_json(const PerEye<std::optional<Vec3>>& v) {
    return Json{{"left", vec3_json(v.left)}, {"right", vec3_json(v.right)}};
}

EventKind parse_kind(const std::string& kind) {
    if (kind == "fixation") return EventKind::Fixation;
    if (kind == "saccade") return EventKind::Saccade;
    if (kind == "invalid") return EventKind::Invalid;
    throw FormatError("unknown event kind '" + kind + "'");
}

std::string dump(const Json& json) {
    return json.dump(2) + "\n";
}

}  // namespace

Json events_to_json(const std::vector<EventGroup>& groups) {
    Json out = Json::array();
    for (const EventGroup& group : groups) {
        out.push_back(Json{{"kind", to_string(group.kind)},
                           {"start_ms", round_to(group.start_ms, 2)},
                           {"end_ms", round_to(group.end_ms, 2)},
                           {"duration_ms", round_to(group.duration_ms, 2)},
                           {"sample_count", group.sample_count},
                           {"mean_gaze3d", per_eye_json(group.mean_gaze3d)},
                           {"mean_eye3d", per_eye_json(group.mean_eye3d)}});
    }
    return out;
}

std::string events_to_json_string(const std::vector<EventGroup>& groups) {
    return dump(events_to_json(groups));
}

std::vector<TruthEvent> parse_event_list(std::string_view json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("event list is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw FormatError("event list must be a JSON array");
    }
    std::vector<TruthEvent> events;
    events.reserve(doc.size());
    double last_start = -1.0;
    for (const Json& item : doc) {
        if (!item.is_object() || !item.contains("kind") || !item.contains("start_ms") ||
            !item.contains("end_ms")) {
            throw FormatError("event objects need kind, start_ms and end_ms");
        }
        TruthEvent event;
        event.kind = parse_kind(item.at("kind").get<std::string>());
        event.start_ms = item.at("start_ms").get<double>();
        event.end_ms = item.at("end_ms").get<double>();
        if (!(std::isfinite(event.start_ms) && std::isfinite(event.end_ms)) ||
            event.end_ms < event.start_ms) {
            throw FormatError("event boundaries must be finite with end >= start");
        }
        if (event.start_ms < last_start) {
            throw FormatError("event list must be ordered by start time");
        }
        last_start = event.start_ms;
        events.push_back(event);
    }
    return events;
}

Json truth_to_json(const GroundTruth& truth) {
    Json out = Json::array();
    for (const TruthEvent& event : truth.events) {
        out.push_back(Json{{"kind", to_string(event.kind)},
                           {"start_ms", round_to(event.start_ms, 2)},
                           {"end_ms", round_to(event.end_ms, 2)},
                           {"duration_ms", round_to(event.end_ms - event.start_ms, 2)}});
    }
    return out;
}

std::string truth_to_json_string(const GroundTruth& truth) {
    return dump(truth_to_json(truth));
}

namespace {

Json person_json(const PersonMetrics& m, double threshold, bool merging) {
    return Json{{"participant_id", m.participant_id},
                {"threshold", threshold},
                {"merging", merging},
                {"fixation_number", m.fixation_number},
                {"mean_fixation_duration_ms", round_to(m.mean_fixation_duration_ms, 2)},
                {"gri", round_to(m.gri, 3)},
                {"total_fixation_duration_ms", round_to(m.total_fixation_duration_ms, 2)},
                {"recording_duration_ms", round_to(m.recording_duration_ms, 2)}};
}

void append_person_csv(std::string& out, const PersonMetrics& m, double threshold,
                       bool merging) {
    out += m.participant_id;
    out += ',';
    out += fmt_shortest(threshold);
    out += ',';
    out += merging ? "true" : "false";
    out += ',';
    out += std::to_string(m.fixation_number);
    out += ',';
    out += fmt_fixed(m.mean_fixation_duration_ms, 2);
    out += ',';
    out += fmt_fixed(m.gri, 3);
    out += ',';
    out += fmt_fixed(m.total_fixation_duration_ms, 2);
    out += ',';
    out += fmt_fixed(m.recording_duration_ms, 2);
    out += '\n';
}

}  // namespace

std::string metrics_to_csv(const std::vector<PersonMetrics>& metrics,
                           const IvtConfig& config) {
    std::string out{kMetricsCsvHeader};
    out += '\n';
    for (const PersonMetrics& m : metrics) {
        append_person_csv(out, m, config.velocity_threshold_deg_s, config.merging_enabled);
    }
    return out;
}

Json metrics_to_json(const std::vector<PersonMetrics>& metrics, const IvtConfig& config) {
    Json out = Json::array();
    for (const PersonMetrics& m : metrics) {
        out.push_back(person_json(m, config.velocity_threshold_deg_s, config.merging_enabled));
    }
    return out;
}

namespace {

std::string label_for(const std::vector<GroupAssignment>& assignments,
                      const std::string& participant_id) {
    for (const GroupAssignment& a : assignments) {
        if (a.participant_id == participant_id) {
            return a.group_label;
        }
    }
    return "";
}

}  // namespace

std::string sweep_to_csv(const SweepTable& table,
                         const std::vector<GroupAssignment>& assignments) {
    std::string out{kSweepCsvHeader};
    out += '\n';
    for (const SweepCell& cell : table.cells) {
        out += cell.participant_id;
        out += ',';
        out += label_for(assignments, cell.participant_id);
        out += ',';
        out += fmt_shortest(cell.threshold_deg_s);
        out += ',';
        out += cell.merging ? "true" : "false";
        out += ',';
        if (cell.metrics) {
            out += std::to_string(cell.metrics->fixation_number);
            out += ',';
            out += fmt_fixed(cell.metrics->mean_fixation_duration_ms, 2);
            out += ',';
            out += fmt_fixed(cell.metrics->gri, 3);
        } else {
            out += "0,NA,NA";  // zero fixations: GRI undefined here
        }
        out += '\n';
    }
    if (!assignments.empty()) {
        for (double threshold : table.thresholds) {
            for (bool merging : table.merge_settings) {
                for (const GroupMetrics& g :
                     group_contrast(table, assignments, threshold, merging)) {
                    out += ',';
                    out += g.group_label;
                    out += ',';
                    out += fmt_shortest(threshold);
                    out += ',';
                    out += merging ? "true" : "false";
                    out += ',';
                    out += fmt_fixed(g.mean_fixation_number, 2);
                    out += ',';
                    out += fmt_fixed(g.mean_fixation_duration_ms, 2);
                    out += ',';
                    out += fmt_fixed(g.gri, 3);
                    out += '\n';
                }
            }
        }
    }
    return out;
}

Json sweep_to_json(const SweepTable& table,
                   const std::vector<GroupAssignment>& assignments) {
    Json thresholds = Json::array();
    for (double t : table.thresholds) {
        thresholds.push_back(Json{{"value", t}, {"named_default", is_named_default(t)}});
    }

    Json cells = Json::array();
    for (const SweepCell& cell : table.cells) {
        Json entry{{"participant_id", cell.participant_id},
                   {"group_label", label_for(assignments, cell.participant_id)},
                   {"threshold", cell.threshold_deg_s},
                   {"merging", cell.merging}};
        if (cell.metrics) {
            entry["fixation_number"] = cell.metrics->fixation_number;
            entry["mean_fixation_duration_ms"] =
                round_to(cell.metrics->mean_fixation_duration_ms, 2);
            entry["gri"] = round_to(cell.metrics->gri, 3);
            entry["total_fixation_duration_ms"] =
                round_to(cell.metrics->total_fixation_duration_ms, 2);
            entry["recording_duration_ms"] = round_to(cell.metrics->recording_duration_ms, 2);
            entry["zero_fixations"] = false;
        } else {
            entry["fixation_number"] = 0;
            entry["mean_fixation_duration_ms"] = nullptr;
            entry["gri"] = nullptr;
            entry["total_fixation_duration_ms"] = nullptr;
            entry["recording_duration_ms"] = nullptr;
            entry["zero_fixations"] = true;
        }
        cells.push_back(std::move(entry));
    }

    Json ranks = Json::array();
    for (double threshold : table.thresholds) {
        for (bool merging : table.merge_settings) {
            ranks.push_back(Json{{"threshold", threshold},
                                 {"merging", merging},
                                 {"ascending_gri", rank_order(table, threshold, merging)}});
        }
    }

    Json out{{"tool_version", kVersion},
             {"thresholds", std::move(thresholds)},
             {"merge_settings", table.merge_settings},
             {"participants", table.participant_ids},
             {"cells", std::move(cells)},
             {"rank_order", std::move(ranks)}};

    if (!assignments.empty()) {
        Json groups = Json::array();
        for (double threshold : table.thresholds) {
            for (bool merging : table.merge_settings) {
                for (const GroupMetrics& g :
                     group_contrast(table, assignments, threshold, merging)) {
                    groups.push_back(
                        Json{{"group_label", g.group_label},
                             {"threshold", threshold},
                             {"merging", merging},
                             {"mean_fixation_number", round_to(g.mean_fixation_number, 2)},
                             {"mean_fixation_duration_ms",
                              round_to(g.mean_fixation_duration_ms, 2)},
                             {"gri", round_to(g.gri, 3)},
                             {"member_count", g.member_count}});
                }
            }
        }
        out["groups"] = std::move(groups);
    }
    return out;
}

Scenario parse_scenario(std::string_view json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_array() || doc.empty()) {
        throw FormatError("scenario must be a non-empty JSON array of events");
    }

    auto vec3_of = [](const Json& item, const char* key) -> Vec3 {
        if (!item.contains(key) || !item.at(key).is_array() || item.at(key).size() != 3) {
            throw FormatError(std::string("scenario event needs a 3-element '") + key +
                              "' array");
        }
        const Json& arr = item.at(key);
        return Vec3(arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>());
    };
    auto duration_of = [](const Json& item) -> double {
        if (!item.contains("duration_ms")) {
            throw FormatError("scenario event needs duration_ms");
        }
        return item.at("duration_ms").get<double>();
    };

    Scenario scenario;
    scenario.reserve(doc.size());
    for (const Json& item : doc) {
        if (!item.is_object() || !item.contains("kind")) {
            throw FormatError("scenario events must be objects with a 'kind'");
        }
        const std::string kind = item.at("kind").get<std::string>();
        if (kind == "fixation") {
            scenario.push_back(FixationSpec{vec3_of(item, "target"), duration_of(item)});
        } else if (kind == "saccade") {
            scenario.push_back(
                SaccadeSpec{vec3_of(item, "from"), vec3_of(item, "to"), duration_of(item)});
        } else if (kind == "dropout") {
            DropoutSpec drop;
            drop.duration_ms = duration_of(item);
            const std::string eyes = item.value("eyes", "both");
            if (eyes == "both") {
                drop.eyes = DropoutEyes::Both;
            } else if (eyes == "left") {
                drop.eyes = DropoutEyes::Left;
            } else if (eyes == "right") {
                drop.eyes = DropoutEyes::Right;
            } else {
                throw FormatError("dropout 'eyes' must be left, right or both");
            }
            scenario.push_back(drop);
        } else {
            throw FormatError("unknown scenario event kind '" + kind + "'");
        }
    }
    return scenario;
}

namespace {

Json kind_score_json(const KindScore& score) {
    return Json{{"truth_count", score.truth_count},
                {"detected_count", score.detected_count},
                {"matched", score.matched},
                {"precision", round_to(score.precision, 3)},
                {"recall", round_to(score.recall, 3)}};
}

}  // namespace

Json scores_to_json(const DetectionScores& scores) {
    return Json{{"fixation", kind_score_json(scores.fixation)},
                {"saccade", kind_score_json(scores.saccade)},
                {"invalid", kind_score_json(scores.invalid)},
                {"agreement_fraction", round_to(scores.agreement_fraction, 4)}};
}

Json summary_to_json(const Recording& recording, const RecordingSummary& summary,
                     const std::vector<ValidationIssue>& issues) {
    Json issue_list = Json::array();
    for (const ValidationIssue& issue : issues) {
        issue_list.push_back(
            Json{{"code", issue.code}, {"message", issue.message}, {"value", issue.value}});
    }
    return Json{{"participant_id", recording.participant_id},
                {"sample_count", summary.sample_count},
                {"first_timestamp_ms", round_to(summary.first_timestamp_ms, 2)},
                {"last_timestamp_ms", round_to(summary.last_timestamp_ms, 2)},
                {"invalid_fraction", round_to(summary.invalid_fraction, 4)},
                {"longest_invalid_run", summary.longest_invalid_run},
                {"median_interval_ms", round_to(summary.median_interval_ms, 3)},
                {"effective_rate_hz", round_to(summary.effective_rate_hz, 2)},
                {"nominal_rate_hz", recording.sample_rate_hz},
                {"issues", std::move(issue_list)}};
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

Json manifest_to_json(const RunManifest& manifest,
                      const std::vector<std::uint64_t>& input_digests) {
    Json inputs = Json::array();
    for (std::size_t i = 0; i < manifest.inputs.size(); ++i) {
        char digest[32] = "";
        if (i < input_digests.size()) {
            std::snprintf(digest, sizeof(digest), "%016llx",
                          static_cast<unsigned long long>(input_digests[i]));
        }
        inputs.push_back(Json{{"path", manifest.inputs[i].generic_string()},
                              {"fnv1a64", digest}});
    }
    return Json{{"tool", kToolName},
                {"tool_version", kVersion},
                {"command", manifest.command},
                {"inputs", std::move(inputs)},
                {"config", manifest.config},
                {"outputs", manifest.outputs}};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot read '" + path.generic_string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot write '" + path.generic_string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw FormatError("failed writing '" + path.generic_string() + "'");
    }
}

}  // namespace gazemetry
