#include "gazemetry/recording.hpp"

#include "gazemetry/errors.hpp"

#include <doctest.h>

using namespace gazemetry;

namespace {

GazeSample valid_sample(double t) {
    GazeSample s;
    s.timestamp_ms = t;
    s.left.valid = true;
    s.left.eye_position = Vec3(-32.5, 0, 0);
    s.left.gaze_position = Vec3(0, 0, 600);
    s.right.valid = true;
    s.right.eye_position = Vec3(32.5, 0, 0);
    s.right.gaze_position = Vec3(0, 0, 600);
    return s;
}

GazeSample invalid_sample(double t) {
    GazeSample s;
    s.timestamp_ms = t;
    return s;
}

Recording uniform_recording(std::size_t n, double spacing_ms, double rate_hz = 100.0) {
    Recording rec;
    rec.participant_id = "p";
    rec.sample_rate_hz = rate_hz;
    for (std::size_t i = 0; i < n; ++i) {
        rec.samples.push_back(valid_sample(static_cast<double>(i) * spacing_ms));
    }
    return rec;
}

}  // namespace

TEST_CASE("window keeps [start, start+duration)") {
    // 24 minutes at one sample per 60 s
    Recording rec = uniform_recording(25, 60'000.0);
    const Recording first20 = window(rec, 0.0, 1'200'000.0);
    CHECK(first20.samples.size() == 20);  // t = 0 .. 1,140,000
    CHECK(first20.participant_id == "p");
    CHECK(first20.samples.back().timestamp_ms < 1'200'000.0);

    SUBCASE("window covering everything is the identity") {
        const Recording all = window(rec, 0.0, 1e12);
        CHECK(all.samples.size() == rec.samples.size());
    }
    SUBCASE("windowing is idempotent") {
        const Recording again = window(first20, 0.0, 1'200'000.0);
        CHECK(again.samples.size() == first20.samples.size());
        for (std::size_t i = 0; i < again.samples.size(); ++i) {
            CHECK(again.samples[i].timestamp_ms == first20.samples[i].timestamp_ms);
        }
    }
    SUBCASE("start beyond the last timestamp is insufficient data") {
        CHECK_THROWS_AS(window(rec, 2'000'000.0, 1'000.0), InsufficientDataError);
    }
    SUBCASE("non-positive duration is a config error") {
        CHECK_THROWS_AS(window(rec, 0.0, 0.0), ConfigError);
        CHECK_THROWS_AS(window(rec, 0.0, -5.0), ConfigError);
    }
    SUBCASE("half-open: a sample exactly at start+duration is excluded") {
        const Recording w = window(rec, 0.0, 60'000.0 * 2);
        CHECK(w.samples.size() == 2);  // t=0 and t=60000; t=120000 excluded
    }
}

TEST_CASE("validate: clean uniform recording has no issues") {
    const Recording rec = uniform_recording(100, 10.0);
    CHECK(validate(rec).empty());
}

TEST_CASE("validate: reports both-eyes-invalid fraction") {
    Recording rec;
    rec.participant_id = "p";
    for (int i = 0; i < 100; ++i) {
        if (i >= 40 && i < 50) {
            rec.samples.push_back(invalid_sample(i * 10.0));
        } else {
            rec.samples.push_back(valid_sample(i * 10.0));
        }
    }
    const auto issues = validate(rec);
    bool found_fraction = false;
    bool found_run = false;
    for (const auto& issue : issues) {
        if (issue.code == "invalid_fraction") {
            found_fraction = true;
            CHECK(issue.message == "invalid fraction 0.10");
            CHECK(issue.value == doctest::Approx(0.10));
        }
        if (issue.code == "longest_invalid_run") {
            found_run = true;
            CHECK(issue.value == 10.0);
        }
    }
    CHECK(found_fraction);
    CHECK(found_run);

    // diagnostics never mutate the recording
    CHECK(rec.samples.size() == 100);
    CHECK(summarize(rec).invalid_fraction == doctest::Approx(0.10));
}

TEST_CASE("validate: one valid eye is not 'both invalid'") {
    Recording rec;
    rec.participant_id = "p";
    for (int i = 0; i < 10; ++i) {
        GazeSample s = valid_sample(i * 10.0);
        s.left = EyeSample{};  // right still valid
        rec.samples.push_back(s);
    }
    CHECK(summarize(rec).invalid_fraction == 0.0);
}

TEST_CASE("validate: rate mismatch against the nominal rate") {
    // nominal 100 Hz but actual spacing 20 ms -> effective 50 Hz
    const Recording rec = uniform_recording(100, 20.0, 100.0);
    const auto issues = validate(rec);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == "rate_mismatch");
    CHECK(issues[0].value == doctest::Approx(50.0));
    CHECK(issues[0].message.find("20.00 ms") != std::string::npos);

    const RecordingSummary summary = summarize(rec);
    CHECK(summary.median_interval_ms == doctest::Approx(20.0));
    CHECK(summary.effective_rate_hz == doctest::Approx(50.0));
}

TEST_CASE("summarize: median interval on a constructed mixed trace") {
    // intervals: 10, 10, 10, 40 -> sorted {10,10,10,40}, median = 10
    Recording rec;
    rec.participant_id = "p";
    for (double t : {0.0, 10.0, 20.0, 30.0, 70.0}) {
        rec.samples.push_back(valid_sample(t));
    }
    CHECK(summarize(rec).median_interval_ms == doctest::Approx(10.0));
    CHECK(validate(rec).empty());  // median matches nominal despite the gap
}
