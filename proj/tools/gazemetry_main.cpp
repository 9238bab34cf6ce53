// gazemetry: classify mobile eye-tracker gaze streams into fixations and
// saccades with a velocity-threshold filter, compute per-person and group
// metrics (fixation number, mean fixation duration, GRI), and sweep the
// velocity threshold to expose how configuration choices move the results.
//
// Commands: analyze, sweep, synth, score, validate. Every run that writes
// files also writes a manifest.json recording the full resolved
// configuration, so no result can be reported without it.

#include "gazemetry/errors.hpp"
#include "gazemetry/events.hpp"
#include "gazemetry/gaze_tsv.hpp"
#include "gazemetry/metrics.hpp"
#include "gazemetry/recording.hpp"
#include "gazemetry/serialize.hpp"
#include "gazemetry/sweep.hpp"
#include "gazemetry/synth.hpp"
#include "gazemetry/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gazemetry;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct InputOptions {
    std::vector<std::string> inputs;
    std::string input_dir;
};

struct CommonOptions {
    double window_ms = 1'200'000.0;  // first 20 minutes; 0 disables windowing
    double max_gap_ms = 75.0;
    double max_gap_deg = 0.5;
    std::string format = "csv";
    std::string out_dir = ".";
};

void add_input_flags(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--input", in.inputs, "Gaze-TSV input file (repeatable)");
    cmd->add_option("--input-dir", in.input_dir, "Directory of .tsv inputs (sorted by name)");
}

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--window-ms", opt.window_ms,
                    "Analyze only the first N ms of each recording; 0 keeps everything")
        ->capture_default_str();
    cmd->add_option("--max-gap-ms", opt.max_gap_ms,
                    "Merging: max time between fixation groups")
        ->capture_default_str();
    cmd->add_option("--max-gap-deg", opt.max_gap_deg,
                    "Merging: max visual angle between fixation groups")
        ->capture_default_str();
    cmd->add_option("--format", opt.format, "Output format: csv or json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
}

std::vector<fs::path> resolve_inputs(const InputOptions& in) {
    std::vector<fs::path> paths;
    for (const std::string& p : in.inputs) {
        paths.emplace_back(p);
    }
    if (!in.input_dir.empty()) {
        if (!fs::is_directory(in.input_dir)) {
            throw FormatError("'" + in.input_dir + "' is not a directory");
        }
        std::vector<fs::path> found;
        for (const auto& entry : fs::directory_iterator(in.input_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".tsv") {
                found.push_back(entry.path());
            }
        }
        std::sort(found.begin(), found.end());
        paths.insert(paths.end(), found.begin(), found.end());
    }
    if (paths.empty()) {
        throw ConfigError("no inputs: pass --input and/or --input-dir");
    }
    return paths;
}

struct LoadedInput {
    fs::path path;
    std::uint64_t digest = 0;
    Recording recording;
};

/// Read, digest and parse every input; participant id = file stem. Windowing
/// is applied here when enabled.
std::vector<LoadedInput> load_recordings(const std::vector<fs::path>& paths,
                                         double window_ms) {
    std::vector<LoadedInput> loaded;
    loaded.reserve(paths.size());
    for (const fs::path& path : paths) {
        LoadedInput item;
        item.path = path;
        const std::string text = read_file(path);
        item.digest = fnv1a64(text);
        try {
            item.recording = parse_recording(text, path.stem().string());
        } catch (const Error& e) {
            throw FormatError(path.generic_string() + ": " + e.what());
        }
        if (window_ms > 0.0) {
            item.recording = window(item.recording, 0.0, window_ms);
        }
        loaded.push_back(std::move(item));
    }
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        for (std::size_t j = i + 1; j < loaded.size(); ++j) {
            if (loaded[i].recording.participant_id == loaded[j].recording.participant_id) {
                throw FormatError("duplicate participant id '" +
                                  loaded[i].recording.participant_id + "'");
            }
        }
    }
    return loaded;
}

void write_manifest(const CommonOptions& opt, RunManifest manifest,
                    const std::vector<LoadedInput>& inputs) {
    std::vector<std::uint64_t> digests;
    for (const LoadedInput& input : inputs) {
        manifest.inputs.push_back(input.path);
        digests.push_back(input.digest);
    }
    const fs::path path = fs::path(opt.out_dir) / "manifest.json";
    write_file(path, manifest_to_json(manifest, digests).dump(2) + "\n");
}

Json config_json(const IvtConfig& config, double window_ms) {
    return Json{{"velocity_threshold_deg_s", config.velocity_threshold_deg_s},
                {"merging_enabled", config.merging_enabled},
                {"max_time_betw_fixations_ms", config.max_time_betw_fixations_ms},
                {"max_angle_betw_fixations_deg", config.max_angle_betw_fixations_deg},
                {"window_ms", window_ms}};
}

/// "a:b:s" -> {a, a+s, ..., <=b}. The end is included when the step lands on it.
std::vector<double> parse_threshold_range(const std::string& range) {
    const std::size_t c1 = range.find(':');
    const std::size_t c2 = (c1 == std::string::npos) ? std::string::npos
                                                     : range.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw ConfigError("--thresholds expects start:end:step");
    }
    double start = 0, end = 0, step = 0;
    try {
        start = std::stod(range.substr(0, c1));
        end = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
        step = std::stod(range.substr(c2 + 1));
    } catch (const std::exception&) {
        throw ConfigError("--thresholds expects numeric start:end:step");
    }
    if (!(start > 0.0) || !(step > 0.0) || end < start) {
        throw ConfigError("--thresholds needs start > 0, step > 0, end >= start");
    }
    std::vector<double> values;
    for (int i = 0;; ++i) {
        const double v = start + step * i;
        if (v > end + 1e-9) {
            break;
        }
        values.push_back(v);
    }
    return values;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int run_analyze(const InputOptions& in, const CommonOptions& opt, double threshold,
                bool merging, bool write_events) {
    IvtConfig config;
    config.velocity_threshold_deg_s = threshold;
    config.merging_enabled = merging;
    config.max_time_betw_fixations_ms = opt.max_gap_ms;
    config.max_angle_betw_fixations_deg = opt.max_gap_deg;
    validate_config(config);

    const auto inputs = load_recordings(resolve_inputs(in), opt.window_ms);
    fs::create_directories(opt.out_dir);

    std::vector<PersonMetrics> metrics;
    std::vector<std::string> outputs;
    for (const LoadedInput& input : inputs) {
        const std::vector<EventGroup> groups = segment(input.recording, config);
        metrics.push_back(person_metrics(groups, input.recording.participant_id,
                                         input.recording.span_ms()));
        if (write_events) {
            const std::string name = "events_" + input.recording.participant_id + ".json";
            write_file(fs::path(opt.out_dir) / name, events_to_json_string(groups));
            outputs.push_back(name);
        }
    }
    std::sort(metrics.begin(), metrics.end(),
              [](const PersonMetrics& a, const PersonMetrics& b) {
                  return a.participant_id < b.participant_id;
              });

    const std::string metrics_name = opt.format == "json" ? "metrics.json" : "metrics.csv";
    if (opt.format == "json") {
        write_file(fs::path(opt.out_dir) / metrics_name,
                   metrics_to_json(metrics, config).dump(2) + "\n");
    } else {
        write_file(fs::path(opt.out_dir) / metrics_name, metrics_to_csv(metrics, config));
    }
    outputs.insert(outputs.begin(), metrics_name);

    RunManifest manifest;
    manifest.command = "analyze";
    manifest.config = config_json(config, opt.window_ms);
    manifest.outputs = outputs;
    write_manifest(opt, std::move(manifest), inputs);

    for (const PersonMetrics& m : metrics) {
        std::cout << m.participant_id << ": fixations " << m.fixation_number
                  << ", mean duration " << fmt_fixed(m.mean_fixation_duration_ms, 2)
                  << " ms, GRI " << fmt_fixed(m.gri, 3) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int run_sweep_cmd(const InputOptions& in, const CommonOptions& opt,
                  const std::string& thresholds_range, int merge_count, int no_merge_count,
                  const std::string& groups_path) {
    if (merge_count > 0 && no_merge_count > 0) {
        throw ConfigError("--merge and --no-merge are mutually exclusive");
    }
    std::vector<bool> merge_settings;
    if (merge_count > 0) {
        merge_settings = {true};
    } else if (no_merge_count > 0) {
        merge_settings = {false};
    } else {
        merge_settings = {false, true};  // the full experiment runs both
    }
    const std::vector<double> thresholds = parse_threshold_range(thresholds_range);

    IvtConfig base;
    base.max_time_betw_fixations_ms = opt.max_gap_ms;
    base.max_angle_betw_fixations_deg = opt.max_gap_deg;

    const auto inputs = load_recordings(resolve_inputs(in), opt.window_ms);

    std::vector<GroupAssignment> assignments;
    std::optional<std::uint64_t> groups_digest;
    if (!groups_path.empty()) {
        const std::string text = read_file(groups_path);
        groups_digest = fnv1a64(text);
        assignments = parse_group_assignments(text);
    }

    std::vector<Recording> recordings;
    recordings.reserve(inputs.size());
    for (const LoadedInput& input : inputs) {
        recordings.push_back(input.recording);
    }
    const SweepTable table = run_sweep(recordings, thresholds, merge_settings, base);
    if (!assignments.empty()) {
        // Surfaces missing assignments before anything is written.
        group_contrast(table, assignments, table.thresholds.front(),
                       table.merge_settings.front());
    }

    fs::create_directories(opt.out_dir);
    const std::string sweep_name = opt.format == "json" ? "sweep.json" : "sweep.csv";
    if (opt.format == "json") {
        write_file(fs::path(opt.out_dir) / sweep_name,
                   sweep_to_json(table, assignments).dump(2) + "\n");
    } else {
        write_file(fs::path(opt.out_dir) / sweep_name, sweep_to_csv(table, assignments));
    }

    RunManifest manifest;
    manifest.command = "sweep";
    manifest.config = Json{{"thresholds", table.thresholds},
                           {"merge_settings", table.merge_settings},
                           {"max_time_betw_fixations_ms", base.max_time_betw_fixations_ms},
                           {"max_angle_betw_fixations_deg", base.max_angle_betw_fixations_deg},
                           {"window_ms", opt.window_ms},
                           {"groups_file", groups_path}};
    manifest.outputs = {sweep_name};
    std::vector<LoadedInput> manifest_inputs = inputs;
    if (groups_digest) {
        LoadedInput groups_input;
        groups_input.path = groups_path;
        groups_input.digest = *groups_digest;
        manifest_inputs.push_back(std::move(groups_input));
    }
    write_manifest(opt, std::move(manifest), manifest_inputs);

    std::cout << "sweep: " << table.participant_ids.size() << " participants x "
              << table.thresholds.size() << " thresholds x " << table.merge_settings.size()
              << " merge settings = " << table.cells.size() << " cells\n";
    return 0;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int run_synth(const CommonOptions& opt, const std::string& script_path, double rate_hz,
              double interocular_mm, double distance_mm, double noise_deg,
              std::uint64_t seed, const std::string& name) {
    const std::string script_text = read_file(script_path);
    const Scenario scenario = parse_scenario(script_text);

    EyeGeometry geometry;
    geometry.interocular_mm = interocular_mm;
    geometry.viewing_distance_mm = distance_mm;
    const SyntheticTrace trace = generate_trace(scenario, rate_hz, geometry, noise_deg,
                                                seed, name);

    fs::create_directories(opt.out_dir);
    const std::string trace_name = name + ".tsv";
    const std::string truth_name = name + "_truth.json";
    write_file(fs::path(opt.out_dir) / trace_name, serialize_recording(trace.recording));
    write_file(fs::path(opt.out_dir) / truth_name, truth_to_json_string(trace.truth));

    RunManifest manifest;
    manifest.command = "synth";
    manifest.inputs.push_back(script_path);
    manifest.config = Json{{"rate_hz", rate_hz},
                           {"interocular_mm", interocular_mm},
                           {"viewing_distance_mm", distance_mm},
                           {"noise_deg", noise_deg},
                           {"seed", seed}};
    manifest.outputs = {trace_name, truth_name};
    const fs::path manifest_path = fs::path(opt.out_dir) / "manifest.json";
    write_file(manifest_path,
               manifest_to_json(manifest, {fnv1a64(script_text)}).dump(2) + "\n");

    std::cout << "synth: " << trace.recording.samples.size() << " samples, "
              << trace.truth.events.size() << " truth events -> " << trace_name << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

int run_score(const CommonOptions& opt, const std::string& detected_path,
              const std::string& truth_path, double tol_ms, bool have_out) {
    const std::string detected_text = read_file(detected_path);
    const std::string truth_text = read_file(truth_path);
    const std::vector<TruthEvent> detected = parse_event_list(detected_text);
    GroundTruth truth;
    truth.events = parse_event_list(truth_text);

    const DetectionScores scores = score_detection(detected, truth, tol_ms);
    const std::string report = scores_to_json(scores).dump(2) + "\n";
    std::cout << report;

    if (have_out) {
        fs::create_directories(opt.out_dir);
        write_file(fs::path(opt.out_dir) / "score.json", report);
        RunManifest manifest;
        manifest.command = "score";
        manifest.inputs = {detected_path, truth_path};
        manifest.config = Json{{"boundary_tolerance_ms", tol_ms}};
        manifest.outputs = {"score.json"};
        write_file(fs::path(opt.out_dir) / "manifest.json",
                   manifest_to_json(manifest, {fnv1a64(detected_text), fnv1a64(truth_text)})
                           .dump(2) +
                       "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int run_validate(const InputOptions& in, const CommonOptions& opt, double nominal_rate_hz) {
    const auto paths = resolve_inputs(in);
    Json reports = Json::array();
    for (const fs::path& path : paths) {
        Recording recording;
        try {
            recording = parse_recording(read_file(path), path.stem().string(),
                                        nominal_rate_hz);
        } catch (const Error& e) {
            throw FormatError(path.generic_string() + ": " + e.what());
        }
        const RecordingSummary summary = summarize(recording);
        const std::vector<ValidationIssue> issues = validate(recording);
        if (opt.format == "json") {
            reports.push_back(summary_to_json(recording, summary, issues));
        } else {
            std::cout << recording.participant_id << ": " << summary.sample_count
                      << " samples, span " << fmt_fixed(summary.last_timestamp_ms, 2)
                      << " ms, effective rate " << fmt_fixed(summary.effective_rate_hz, 2)
                      << " Hz\n";
            if (issues.empty()) {
                std::cout << "  no issues\n";
            }
            for (const ValidationIssue& issue : issues) {
                std::cout << "  [" << issue.code << "] " << issue.message << "\n";
            }
        }
    }
    if (opt.format == "json") {
        std::cout << reports.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"I-VT gaze event classification, GRI metrics and threshold sweeps"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    // analyze
    InputOptions analyze_in;
    CommonOptions analyze_opt;
    double analyze_threshold = 30.0;  // stock fixation-filter setting
    bool analyze_events = false;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Classify events at one velocity threshold and write metrics");
    add_input_flags(analyze, analyze_in);
    add_common_flags(analyze, analyze_opt);
    analyze->add_option("--threshold", analyze_threshold, "Velocity threshold in deg/s")
        ->capture_default_str();
    auto* analyze_merge = analyze->add_flag("--merge", "Enable fixation merging");
    auto* analyze_no_merge =
        analyze->add_flag("--no-merge", "Disable fixation merging (default)");
    analyze->add_flag("--events", analyze_events, "Also write per-participant event lists");

    // sweep
    InputOptions sweep_in;
    CommonOptions sweep_opt;
    std::string thresholds_range = "10:150:10";
    std::string groups_path;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Run the pipeline across a velocity-threshold grid");
    add_input_flags(sweep, sweep_in);
    add_common_flags(sweep, sweep_opt);
    sweep->add_option("--thresholds", thresholds_range,
                      "Threshold range start:end:step in deg/s (end included when the step lands on it)")
        ->capture_default_str();
    auto* sweep_merge = sweep->add_flag("--merge", "Sweep with merging only");
    auto* sweep_no_merge = sweep->add_flag("--no-merge", "Sweep without merging only");
    sweep->add_option("--groups", groups_path,
                      "participant_id,group_label CSV enabling group contrasts");

    // synth
    CommonOptions synth_opt;
    std::string script_path;
    std::string synth_name = "trace";
    double rate_hz = 100.0;
    double interocular_mm = 65.0;
    double distance_mm = 600.0;
    double noise_deg = 0.0;
    std::uint64_t seed = 0;
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic Gaze-TSV trace with ground truth");
    synth->add_option("--script", script_path, "Scenario JSON file")->required();
    synth->add_option("--rate-hz", rate_hz, "Sample rate")->capture_default_str();
    synth->add_option("--interocular-mm", interocular_mm, "Eye separation")
        ->capture_default_str();
    synth->add_option("--distance-mm", distance_mm, "Nominal viewing distance")
        ->capture_default_str();
    synth->add_option("--noise-deg", noise_deg, "Angular noise std during fixations")
        ->capture_default_str();
    synth->add_option("--seed", seed, "RNG seed (runs are reproducible per seed)")
        ->required();
    synth->add_option("--name", synth_name, "Basename for the trace files")
        ->capture_default_str();
    synth->add_option("--out", synth_opt.out_dir, "Output directory")
        ->capture_default_str();

    // score
    CommonOptions score_opt;
    std::string detected_path;
    std::string truth_path;
    double tol_ms = 10.0;
    CLI::App* score = app.add_subcommand(
        "score", "Score a detected event list against ground truth");
    score->add_option("--detected", detected_path, "Detected event-list JSON")->required();
    score->add_option("--truth", truth_path, "Ground-truth event-list JSON")->required();
    score->add_option("--tol-ms", tol_ms, "Boundary tolerance (one sample interval)")
        ->capture_default_str();
    auto* score_out = score->add_option("--out", score_opt.out_dir,
                                        "Also write score.json + manifest here");

    // validate
    InputOptions validate_in;
    CommonOptions validate_opt;
    double nominal_rate_hz = 100.0;
    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "Report data-quality diagnostics for Gaze-TSV inputs");
    add_input_flags(validate_cmd, validate_in);
    validate_cmd->add_option("--format", validate_opt.format, "text or json output")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    validate_cmd->add_option("--rate-hz", nominal_rate_hz,
                             "Nominal sample rate for the rate-mismatch check")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (analyze->parsed()) {
            if (analyze_merge->count() > 0 && analyze_no_merge->count() > 0) {
                throw ConfigError("--merge and --no-merge are mutually exclusive");
            }
            return run_analyze(analyze_in, analyze_opt, analyze_threshold,
                               analyze_merge->count() > 0, analyze_events);
        }
        if (sweep->parsed()) {
            return run_sweep_cmd(sweep_in, sweep_opt, thresholds_range,
                                 static_cast<int>(sweep_merge->count()),
                                 static_cast<int>(sweep_no_merge->count()), groups_path);
        }
        if (synth->parsed()) {
            return run_synth(synth_opt, script_path, rate_hz, interocular_mm, distance_mm,
                             noise_deg, seed, synth_name);
        }
        if (score->parsed()) {
            return run_score(score_opt, detected_path, truth_path, tol_ms,
                             score_out->count() > 0);
        }
        if (validate_cmd->parsed()) {
            return run_validate(validate_in, validate_opt, nominal_rate_hz);
        }
    } catch (const Error& e) {
        std::cerr << kToolName << ": " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << kToolName << ": " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
