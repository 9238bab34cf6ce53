#include "gazemetry/serialize.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

// End-to-end checks against the real binary (path injected by the build).
namespace fs = std::filesystem;

namespace {

const char* kScenario = R"([
    {"kind":"fixation","target":[0,0,600],"duration_ms":600},
    {"kind":"saccade","from":[0,0,600],"to":[105,0,600],"duration_ms":100},
    {"kind":"fixation","target":[105,0,600],"duration_ms":600},
    {"kind":"dropout","duration_ms":80,"eyes":"both"},
    {"kind":"fixation","target":[105,0,600],"duration_ms":600}
])";

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("gazemetry_test_" + name);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(GAZEMETRY_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) { return gazemetry::read_file(p); }

void spit(const fs::path& p, const std::string& content) {
    gazemetry::write_file(p, content);
}

}  // namespace

TEST_CASE("synth -> analyze -> score workflow") {
    TempDir dir("workflow");
    spit(dir.path / "scenario.json", kScenario);

    // synth writes trace + truth + manifest
    REQUIRE(run("synth --script " + (dir.path / "scenario.json").string() +
                " --seed 7 --out " + (dir.path / "s").string()) == 0);
    CHECK(fs::exists(dir.path / "s" / "trace.tsv"));
    CHECK(fs::exists(dir.path / "s" / "trace_truth.json"));
    CHECK(fs::exists(dir.path / "s" / "manifest.json"));

    // identical rerun is byte-identical (data and manifest)
    REQUIRE(run("synth --script " + (dir.path / "scenario.json").string() +
                " --seed 7 --out " + (dir.path / "s2").string()) == 0);
    CHECK(slurp(dir.path / "s" / "trace.tsv") == slurp(dir.path / "s2" / "trace.tsv"));
    CHECK(slurp(dir.path / "s" / "trace_truth.json") ==
          slurp(dir.path / "s2" / "trace_truth.json"));

    // analyze with events
    REQUIRE(run("analyze --input " + (dir.path / "s" / "trace.tsv").string() +
                " --threshold 30 --no-merge --window-ms 0 --events --out " +
                (dir.path / "a").string()) == 0);
    CHECK(fs::exists(dir.path / "a" / "metrics.csv"));
    CHECK(fs::exists(dir.path / "a" / "events_trace.json"));
    CHECK(fs::exists(dir.path / "a" / "manifest.json"));
    const std::string metrics_csv = slurp(dir.path / "a" / "metrics.csv");
    CHECK(metrics_csv.find("trace,30,false,3,") != std::string::npos);

    REQUIRE(run("analyze --input " + (dir.path / "s" / "trace.tsv").string() +
                " --threshold 30 --no-merge --window-ms 0 --events --out " +
                (dir.path / "a2").string()) == 0);
    CHECK(slurp(dir.path / "a" / "metrics.csv") == slurp(dir.path / "a2" / "metrics.csv"));
    CHECK(slurp(dir.path / "a" / "events_trace.json") ==
          slurp(dir.path / "a2" / "events_trace.json"));
    CHECK(slurp(dir.path / "a" / "manifest.json") ==
          slurp(dir.path / "a2" / "manifest.json"));

    // detected events against ground truth: a clean scenario scores perfectly
    REQUIRE(run("score --detected " + (dir.path / "a" / "events_trace.json").string() +
                " --truth " + (dir.path / "s" / "trace_truth.json").string() +
                " --tol-ms 10 --out " + (dir.path / "sc").string()) == 0);
    const std::string score_json = slurp(dir.path / "sc" / "score.json");
    CHECK(score_json.find("\"precision\": 1.0") != std::string::npos);
    CHECK(score_json.find("\"recall\": 1.0") != std::string::npos);

    // validate runs cleanly on the synthetic trace
    CHECK(run("validate --input " + (dir.path / "s" / "trace.tsv").string()) == 0);
}

TEST_CASE("exit codes: 1 for usage/config, 2 for data") {
    TempDir dir("exitcodes");
    spit(dir.path / "scenario.json", kScenario);
    REQUIRE(run("synth --script " + (dir.path / "scenario.json").string() +
                " --seed 1 --out " + (dir.path / "s").string()) == 0);
    const std::string trace = (dir.path / "s" / "trace.tsv").string();

    CHECK(run("analyze --input " + trace + " --threshold 0 --window-ms 0 --out " +
              (dir.path / "x").string()) == 1);
    CHECK(run("analyze --input " + trace + " --no-such-flag") == 1);
    CHECK(run("nonsense-subcommand") == 1);
    CHECK(run("analyze --out " + (dir.path / "x").string()) == 1);  // no inputs

    spit(dir.path / "garbage.tsv", "not\ta\theader\n");
    CHECK(run("analyze --input " + (dir.path / "garbage.tsv").string() +
              " --window-ms 0 --out " + (dir.path / "x").string()) == 2);
    CHECK(run("analyze --input " + (dir.path / "missing.tsv").string() +
              " --window-ms 0 --out " + (dir.path / "x").string()) == 2);

    // synth requires a seed
    CHECK(run("synth --script " + (dir.path / "scenario.json").string() + " --out " +
              (dir.path / "y").string()) == 1);

    // score on an empty JSON array input is a data error
    spit(dir.path / "bad.json", "{}");
    CHECK(run("score --detected " + (dir.path / "bad.json").string() + " --truth " +
              (dir.path / "bad.json").string()) == 2);
}

TEST_CASE("sweep grid, groups and determinism") {
    TempDir dir("sweep");
    spit(dir.path / "scenario.json", kScenario);
    REQUIRE(run("synth --script " + (dir.path / "scenario.json").string() +
                " --seed 11 --name p1 --out " + dir.path.string()) == 0);
    REQUIRE(run("synth --script " + (dir.path / "scenario.json").string() +
                " --seed 12 --noise-deg 0.2 --name p2 --out " + dir.path.string()) == 0);

    spit(dir.path / "groups.csv", "participant_id,group_label\np1,expert\np2,novice\n");

    const std::string inputs = " --input " + (dir.path / "p1.tsv").string() +
                               " --input " + (dir.path / "p2.tsv").string();
    REQUIRE(run("sweep" + inputs + " --window-ms 0 --groups " +
                (dir.path / "groups.csv").string() + " --out " +
                (dir.path / "out").string()) == 0);
    const std::string csv = slurp(dir.path / "out" / "sweep.csv");
    // 2 participants x 15 thresholds x 2 merge settings + 2 groups x 15 x 2 + header
    std::size_t lines = 0;
    for (char c : csv) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 1 + 60 + 60);
    CHECK(csv.find("p1,expert,10,false,") != std::string::npos);
    CHECK(csv.find(",expert,10,false,") != std::string::npos);

    REQUIRE(run("sweep" + inputs + " --window-ms 0 --groups " +
                (dir.path / "groups.csv").string() + " --out " +
                (dir.path / "out2").string()) == 0);
    CHECK(slurp(dir.path / "out" / "sweep.csv") == slurp(dir.path / "out2" / "sweep.csv"));
    CHECK(slurp(dir.path / "out" / "manifest.json") ==
          slurp(dir.path / "out2" / "manifest.json"));

    // single-threshold sweep mirrors analyze
    REQUIRE(run("sweep" + inputs + " --window-ms 0 --thresholds 30:30:10 --no-merge --out " +
                (dir.path / "single").string()) == 0);
    const std::string single = slurp(dir.path / "single" / "sweep.csv");
    lines = 0;
    for (char c : single) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 1 + 2);

    // JSON mirror
    REQUIRE(run("sweep" + inputs + " --window-ms 0 --format json --out " +
                (dir.path / "json").string()) == 0);
    const std::string json_text = slurp(dir.path / "json" / "sweep.json");
    CHECK(json_text.find("\"named_default\": true") != std::string::npos);

    // missing assignment is a data error
    spit(dir.path / "incomplete.csv", "participant_id,group_label\np1,expert\n");
    CHECK(run("sweep" + inputs + " --window-ms 0 --groups " +
              (dir.path / "incomplete.csv").string() + " --out " +
              (dir.path / "bad").string()) == 2);

    // malformed range spec is a usage error
    CHECK(run("sweep" + inputs + " --thresholds nope --out " +
              (dir.path / "bad2").string()) == 1);
}

TEST_CASE("windowing default trims long recordings") {
    TempDir dir("windowing");
    // 25 minutes of alternating fixations (one per second)
    std::string scenario = "[";
    for (int i = 0; i < 1500; ++i) {
        if (i) scenario += ",";
        scenario += R"({"kind":"fixation","target":[0,0,600],"duration_ms":1000})";
    }
    scenario += "]";
    spit(dir.path / "long.json", scenario);
    REQUIRE(run("synth --script " + (dir.path / "long.json").string() +
                " --rate-hz 10 --seed 3 --name long --out " + dir.path.string()) == 0);

    // default window keeps the first 20 minutes
    REQUIRE(run("analyze --input " + (dir.path / "long.tsv").string() + " --out " +
                (dir.path / "w").string()) == 0);
    const std::string csv = slurp(dir.path / "w" / "metrics.csv");
    // recording_duration_ms is the analyzed span: 1,200,000 minus one sample
    CHECK(csv.find("1199900.00") != std::string::npos);
}
