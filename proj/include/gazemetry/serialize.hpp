#pragma once

#include "gazemetry/events.hpp"
#include "gazemetry/metrics.hpp"
#include "gazemetry/recording.hpp"
#include "gazemetry/sweep.hpp"
#include "gazemetry/synth.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gazemetry {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Number formatting. All textual output is locale-independent: GRI values
// carry 3 decimals, durations and other milliseconds 2, raw trace data full
// round-trip precision.
// ---------------------------------------------------------------------------

std::string fmt_fixed(double value, int decimals);
std::string fmt_shortest(double value);
double round_to(double value, int decimals);

// ---------------------------------------------------------------------------
// Event lists
// ---------------------------------------------------------------------------

Json events_to_json(const std::vector<EventGroup>& groups);
std::string events_to_json_string(const std::vector<EventGroup>& groups);

/// Read the (kind, start, end) triples back from an event-list JSON document
/// (either pipeline output or a ground-truth file). Throws FormatError.
std::vector<TruthEvent> parse_event_list(std::string_view json_text);

Json truth_to_json(const GroundTruth& truth);
std::string truth_to_json_string(const GroundTruth& truth);

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

inline constexpr std::string_view kMetricsCsvHeader =
    "participant_id,threshold,merging,fixation_number,mean_fixation_duration_ms,"
    "gri,total_fixation_duration_ms,recording_duration_ms";

std::string metrics_to_csv(const std::vector<PersonMetrics>& metrics,
                           const IvtConfig& config);
Json metrics_to_json(const std::vector<PersonMetrics>& metrics, const IvtConfig& config);

// ---------------------------------------------------------------------------
// Sweep tables
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSweepCsvHeader =
    "participant_id,group_label,threshold_deg_s,merging,fixation_number,"
    "mean_fixation_duration_ms,gri";

/// Per-cell rows; when assignments are given, the group_label column is
/// filled and one group-mean row per (group, threshold, merging) is appended
/// with an empty participant_id.
std::string sweep_to_csv(const SweepTable& table,
                         const std::vector<GroupAssignment>& assignments);

/// JSON mirror: thresholds with their named_default flag, all cells, rank
/// orders per grid point, and group contrasts when assignments are given.
Json sweep_to_json(const SweepTable& table,
                   const std::vector<GroupAssignment>& assignments);

// ---------------------------------------------------------------------------
// Scenarios and scores
// ---------------------------------------------------------------------------

/// Scenario file: a JSON array of event objects, e.g.
///   {"kind":"fixation","target":[0,0,600],"duration_ms":500}
///   {"kind":"saccade","from":[0,0,600],"to":[105,0,600],"duration_ms":100}
///   {"kind":"dropout","duration_ms":80,"eyes":"both"}
Scenario parse_scenario(std::string_view json_text);

Json scores_to_json(const DetectionScores& scores);

Json summary_to_json(const Recording& recording, const RecordingSummary& summary,
                     const std::vector<ValidationIssue>& issues);

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

/// Reproducibility record written alongside every output: the command, the
/// resolved configuration, tool version, and a content digest per input.
/// Contains no timestamp, so reruns produce byte-identical manifests.
struct RunManifest {
    std::string command;
    std::vector<std::filesystem::path> inputs;
    Json config;
    std::vector<std::string> outputs;
};

std::uint64_t fnv1a64(std::string_view data);

Json manifest_to_json(const RunManifest& manifest,
                      const std::vector<std::uint64_t>& input_digests);

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace gazemetry
