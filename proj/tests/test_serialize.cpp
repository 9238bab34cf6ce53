#include "gazemetry/serialize.hpp"

#include "gazemetry/errors.hpp"

#include <doctest.h>

using namespace gazemetry;

namespace {

EventGroup group(EventKind kind, double start, double end, std::size_t samples) {
    EventGroup g;
    g.kind = kind;
    g.start_ms = start;
    g.end_ms = end;
    g.duration_ms = end - start;
    g.sample_count = samples;
    g.mean_gaze3d.left = Vec3(1.23456, -2.0, 600.0);
    g.mean_eye3d.left = Vec3(-32.5, 0.0, 0.0);
    g.eye_sample_count.left = samples;
    return g;
}

PersonMetrics metrics(const std::string& id) {
    PersonMetrics m;
    m.participant_id = id;
    m.fixation_number = 3;
    m.mean_fixation_duration_ms = 200.0;
    m.gri = 200.0 / 3.0;
    m.total_fixation_duration_ms = 600.0;
    m.recording_duration_ms = 1234.5678;
    return m;
}

}  // namespace

TEST_CASE("number formatting is fixed and locale-free") {
    CHECK(fmt_fixed(66.6666666, 3) == "66.667");
    CHECK(fmt_fixed(0.0469, 3) == "0.047");
    CHECK(fmt_fixed(1234.5678, 2) == "1234.57");
    CHECK(fmt_shortest(30.0) == "30");
    CHECK(fmt_shortest(0.5) == "0.5");
    CHECK(round_to(66.6666666, 3) == 66.667);
    CHECK(round_to(0.1234, 2) == 0.12);
}

TEST_CASE("event list JSON carries the documented fields") {
    const std::vector<EventGroup> groups = {group(EventKind::Fixation, 5.0, 105.25, 10),
                                            group(EventKind::Saccade, 105.25, 125.0, 2)};
    const Json json = events_to_json(groups);
    REQUIRE(json.size() == 2);
    CHECK(json[0]["kind"] == "fixation");
    CHECK(json[0]["start_ms"] == 5.0);
    CHECK(json[0]["end_ms"] == 105.25);
    CHECK(json[0]["duration_ms"] == 100.25);
    CHECK(json[0]["sample_count"] == 10);
    CHECK(json[0]["mean_gaze3d"]["left"][0] == 1.235);  // 3 decimals
    CHECK(json[0]["mean_gaze3d"]["right"].is_null());
    CHECK(json[1]["kind"] == "saccade");

    const auto events = parse_event_list(events_to_json_string(groups));
    REQUIRE(events.size() == 2);
    CHECK(events[0].kind == EventKind::Fixation);
    CHECK(events[0].start_ms == 5.0);
    CHECK(events[1].end_ms == 125.0);
}

TEST_CASE("event list parsing rejects malformed documents") {
    CHECK_THROWS_AS(parse_event_list("not json"), FormatError);
    CHECK_THROWS_AS(parse_event_list("{}"), FormatError);
    CHECK_THROWS_AS(parse_event_list(R"([{"kind":"fixation"}])"), FormatError);
    CHECK_THROWS_AS(parse_event_list(R"([{"kind":"blink","start_ms":0,"end_ms":1}])"),
                    FormatError);
    CHECK_THROWS_AS(parse_event_list(R"([{"kind":"fixation","start_ms":5,"end_ms":1}])"),
                    FormatError);
    // out of order
    CHECK_THROWS_AS(parse_event_list(R"([{"kind":"fixation","start_ms":100,"end_ms":200},
                                         {"kind":"saccade","start_ms":0,"end_ms":100}])"),
                    FormatError);
}

TEST_CASE("ground truth round-trips through JSON") {
    GroundTruth truth;
    truth.events = {{EventKind::Fixation, 0.0, 300.0}, {EventKind::Invalid, 300.0, 380.0}};
    const auto events = parse_event_list(truth_to_json_string(truth));
    REQUIRE(events.size() == 2);
    CHECK(events[1].kind == EventKind::Invalid);
    CHECK(events[1].start_ms == 300.0);
}

TEST_CASE("metrics CSV formatting") {
    IvtConfig cfg;
    cfg.velocity_threshold_deg_s = 30.0;
    cfg.merging_enabled = false;
    const std::string csv = metrics_to_csv({metrics("p1")}, cfg);
    CHECK(csv ==
          "participant_id,threshold,merging,fixation_number,mean_fixation_duration_ms,"
          "gri,total_fixation_duration_ms,recording_duration_ms\n"
          "p1,30,false,3,200.00,66.667,600.00,1234.57\n");

    const Json json = metrics_to_json({metrics("p1")}, cfg);
    CHECK(json[0]["gri"] == 66.667);
    CHECK(json[0]["threshold"] == 30.0);
}

TEST_CASE("sweep serialization: markers, group rows and named defaults") {
    SweepTable table;
    table.participant_ids = {"p1", "p2"};
    table.thresholds = {30.0, 100.0};
    table.merge_settings = {false};
    for (const char* id : {"p1", "p2"}) {
        for (double t : table.thresholds) {
            SweepCell cell;
            cell.participant_id = id;
            cell.threshold_deg_s = t;
            cell.merging = false;
            if (std::string(id) == "p2" && t == 30.0) {
                // undefined-GRI cell stays explicit
            } else {
                PersonMetrics m = metrics(id);
                cell.metrics = m;
            }
            table.cells.push_back(cell);
        }
    }

    SUBCASE("CSV with no groups") {
        const std::string csv = sweep_to_csv(table, {});
        CHECK(csv.find("participant_id,group_label,threshold_deg_s,merging,"
                       "fixation_number,mean_fixation_duration_ms,gri\n") == 0);
        CHECK(csv.find("p2,,30,false,0,NA,NA\n") != std::string::npos);
        CHECK(csv.find("p1,,30,false,3,200.00,66.667\n") != std::string::npos);
    }
    SUBCASE("JSON mirror flags named defaults and undefined cells") {
        const Json json = sweep_to_json(table, {});
        CHECK(json["thresholds"][0]["value"] == 30.0);
        CHECK(json["thresholds"][0]["named_default"] == true);
        CHECK(json["thresholds"][1]["named_default"] == true);
        bool found_undefined = false;
        for (const auto& cell : json["cells"]) {
            if (cell["participant_id"] == "p2" && cell["threshold"] == 30.0) {
                CHECK(cell["zero_fixations"] == true);
                CHECK(cell["gri"].is_null());
                found_undefined = true;
            }
        }
        CHECK(found_undefined);
        CHECK(json["rank_order"].is_array());
    }
    SUBCASE("group rows appended when assignments are given") {
        // p2's undefined cell would leave 'solo' empty at threshold 30, which
        // is an error; use the fully defined threshold only.
        SweepTable defined;
        defined.participant_ids = table.participant_ids;
        defined.thresholds = {100.0};
        defined.merge_settings = {false};
        for (const SweepCell& cell : table.cells) {
            if (cell.threshold_deg_s == 100.0) {
                defined.cells.push_back(cell);
            }
        }
        const std::vector<GroupAssignment> assignments = {{"p1", "expert"},
                                                          {"p2", "novice"}};
        const std::string csv = sweep_to_csv(defined, assignments);
        CHECK(csv.find("p1,expert,100,false") != std::string::npos);
        CHECK(csv.find(",expert,100,false,3.00,200.00,66.667\n") != std::string::npos);
        CHECK(csv.find(",novice,100,false,3.00,200.00,66.667\n") != std::string::npos);

        const Json json = sweep_to_json(defined, assignments);
        REQUIRE(json.contains("groups"));
        CHECK(json["groups"].size() == 2);
        CHECK(json["groups"][0]["group_label"] == "expert");
        CHECK(json["groups"][0]["member_count"] == 1);
    }
}

TEST_CASE("scenario JSON parsing") {
    const char* text = R"([
        {"kind":"fixation","target":[0,0,600],"duration_ms":500},
        {"kind":"saccade","from":[0,0,600],"to":[105,0,600],"duration_ms":100},
        {"kind":"dropout","duration_ms":80,"eyes":"both"},
        {"kind":"dropout","duration_ms":40,"eyes":"left"}
    ])";
    const Scenario scenario = parse_scenario(text);
    REQUIRE(scenario.size() == 4);
    CHECK(std::holds_alternative<FixationSpec>(scenario[0]));
    CHECK(std::get<FixationSpec>(scenario[0]).target == Vec3(0, 0, 600));
    CHECK(std::get<SaccadeSpec>(scenario[1]).to == Vec3(105, 0, 600));
    CHECK(std::get<DropoutSpec>(scenario[2]).eyes == DropoutEyes::Both);
    CHECK(std::get<DropoutSpec>(scenario[3]).eyes == DropoutEyes::Left);

    CHECK_THROWS_AS(parse_scenario("[]"), FormatError);
    CHECK_THROWS_AS(parse_scenario("{}"), FormatError);
    CHECK_THROWS_AS(parse_scenario(R"([{"kind":"unknown","duration_ms":1}])"), FormatError);
    CHECK_THROWS_AS(parse_scenario(R"([{"kind":"fixation","duration_ms":1}])"), FormatError);
    CHECK_THROWS_AS(
        parse_scenario(R"([{"kind":"dropout","duration_ms":1,"eyes":"sideways"}])"),
        FormatError);
}

TEST_CASE("manifest digests and determinism") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);

    RunManifest manifest;
    manifest.command = "analyze";
    manifest.inputs = {"a.tsv", "b.tsv"};
    manifest.config = Json{{"velocity_threshold_deg_s", 30.0}};
    manifest.outputs = {"metrics.csv"};
    const Json a = manifest_to_json(manifest, {1, 2});
    const Json b = manifest_to_json(manifest, {1, 2});
    CHECK(a.dump() == b.dump());
    CHECK(a["tool"] == "gazemetry");
    CHECK(a["inputs"][0]["path"] == "a.tsv");
    CHECK(a["inputs"][0]["fnv1a64"] == "0000000000000001");
    CHECK(a["command"] == "analyze");
}

TEST_CASE("detection scores serialize with rounded fractions") {
    DetectionScores scores;
    scores.fixation.truth_count = 2;
    scores.fixation.detected_count = 2;
    scores.fixation.matched = 1;
    scores.fixation.precision = 0.5;
    scores.fixation.recall = 0.5;
    scores.agreement_fraction = 0.87654;
    const Json json = scores_to_json(scores);
    CHECK(json["fixation"]["precision"] == 0.5);
    CHECK(json["agreement_fraction"] == 0.8765);
}
