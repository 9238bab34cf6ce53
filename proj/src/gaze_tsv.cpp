#include "gazemetry/gaze_tsv.hpp"

#include "gazemetry/errors.hpp"
#include "gazemetry/geometry.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <system_error>

namespace gazemetry {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return fields;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

[[noreturn]] void fail_field(std::size_t line_no, std::string_view field,
                             std::string_view column) {
    throw FormatError("line " + std::to_string(line_no) + ": field '" +
                      std::string(field) + "' in column " + std::string(column) +
                      " is not a finite number");
}

/// Strict finite-double parse of a whole field; empty fields return nullopt.
std::optional<double> parse_field(std::string_view field, std::size_t line_no,
                                  std::string_view column) {
    if (field.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
        fail_field(line_no, field, column);
    }
    return value;
}

/// Six eye columns -> EyeSample. Any empty column marks the eye invalid;
/// non-empty columns must still parse. A gaze point that coincides with the
/// eye position (no gaze direction) also invalidates the eye.
EyeSample parse_eye(const std::vector<std::string_view>& fields, std::size_t base,
                    std::size_t line_no, const char* side) {
    static constexpr const char* kSuffix[6] = {"_eye_x_mm", "_eye_y_mm", "_eye_z_mm",
                                               "_gaze_x_mm", "_gaze_y_mm", "_gaze_z_mm"};
    std::optional<double> values[6];
    bool any_empty = false;
    for (std::size_t i = 0; i < 6; ++i) {
        values[i] = parse_field(fields[base + i], line_no, std::string(side) + kSuffix[i]);
        any_empty = any_empty || !values[i].has_value();
    }
    EyeSample eye;
    if (any_empty) {
        return eye;  // invalid, positions zeroed
    }
    eye.eye_position = Vec3(*values[0], *values[1], *values[2]);
    eye.gaze_position = Vec3(*values[3], *values[4], *values[5]);
    eye.valid = (eye.gaze_position - eye.eye_position).norm() >= kMinGazeVectorMm;
    if (!eye.valid) {
        eye.eye_position = Vec3::Zero();
        eye.gaze_position = Vec3::Zero();
    }
    return eye;
}

}  // namespace

Recording parse_recording(std::string_view text, std::string participant_id,
                          double nominal_rate_hz) {
    Recording recording;
    recording.participant_id = std::move(participant_id);
    recording.sample_rate_hz = nominal_rate_hz;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    double last_timestamp = 0.0;

    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        line = strip_cr(line);
        ++line_no;

        if (!header_seen) {
            if (line != kGazeTsvHeader) {
                throw FormatError("line 1: malformed Gaze-TSV header");
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) {
            if (pos > text.size()) {
                break;  // trailing newline at end of file
            }
            throw FormatError("line " + std::to_string(line_no) + ": blank line");
        }

        const auto fields = split(line, '\t');
        if (fields.size() != 15) {
            throw FormatError("line " + std::to_string(line_no) + ": expected 15 fields, got " +
                              std::to_string(fields.size()));
        }

        GazeSample sample;
        const auto ts = parse_field(fields[0], line_no, "timestamp_ms");
        if (!ts) {
            throw FormatError("line " + std::to_string(line_no) + ": empty timestamp");
        }
        if (*ts < 0.0) {
            throw FormatError("line " + std::to_string(line_no) + ": negative timestamp");
        }
        if (!recording.samples.empty() && !(*ts > last_timestamp)) {
            std::ostringstream msg;
            msg << "line " << line_no << ": timestamp " << *ts
                << " does not increase past " << last_timestamp;
            throw OrderingError(msg.str());
        }
        sample.timestamp_ms = *ts;
        last_timestamp = *ts;

        sample.left = parse_eye(fields, 1, line_no, "left");
        sample.right = parse_eye(fields, 7, line_no, "right");

        const auto g2x = parse_field(fields[13], line_no, "gaze2d_x");
        const auto g2y = parse_field(fields[14], line_no, "gaze2d_y");
        if (g2x.has_value() != g2y.has_value()) {
            throw FormatError("line " + std::to_string(line_no) +
                              ": gaze2d needs both coordinates or neither");
        }
        if (g2x) {
            sample.gaze2d = Vec2(*g2x, *g2y);
        }

        recording.samples.push_back(sample);
    }

    if (!header_seen) {
        throw FormatError("line 1: malformed Gaze-TSV header");
    }
    return recording;
}

namespace {

void append_number(std::string& out, double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    out.append(buf, ptr);
}

void append_eye(std::string& out, const EyeSample& eye) {
    if (!eye.valid) {
        out.append("\t\t\t\t\t\t");
        return;
    }
    for (int i = 0; i < 3; ++i) {
        out.push_back('\t');
        append_number(out, eye.eye_position[i]);
    }
    for (int i = 0; i < 3; ++i) {
        out.push_back('\t');
        append_number(out, eye.gaze_position[i]);
    }
}

}  // namespace

std::string serialize_recording(const Recording& recording) {
    std::string out;
    out.reserve(64 * (recording.samples.size() + 1));
    out.append(kGazeTsvHeader);
    out.push_back('\n');
    for (const GazeSample& sample : recording.samples) {
        append_number(out, sample.timestamp_ms);
        append_eye(out, sample.left);
        append_eye(out, sample.right);
        if (sample.gaze2d) {
            out.push_back('\t');
            append_number(out, sample.gaze2d->x());
            out.push_back('\t');
            append_number(out, sample.gaze2d->y());
        } else {
            out.append("\t\t");
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<GroupAssignment> parse_group_assignments(std::string_view csv_text) {
    std::vector<GroupAssignment> assignments;
    std::set<std::string, std::less<>> seen;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos <= csv_text.size()) {
        const std::size_t eol = csv_text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? csv_text.substr(pos)
                                    : csv_text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? csv_text.size() + 1 : eol + 1;
        line = strip_cr(line);
        ++line_no;

        if (!header_seen) {
            if (line != "participant_id,group_label") {
                throw FormatError("line 1: group file must start with "
                                  "'participant_id,group_label'");
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) {
            if (pos > csv_text.size()) {
                break;
            }
            throw FormatError("line " + std::to_string(line_no) + ": blank line");
        }

        const auto fields = split(line, ',');
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            throw FormatError("line " + std::to_string(line_no) +
                              ": expected 'participant_id,group_label'");
        }
        if (!seen.insert(std::string(fields[0])).second) {
            throw FormatError("line " + std::to_string(line_no) + ": duplicate participant '" +
                              std::string(fields[0]) + "'");
        }
        assignments.push_back({std::string(fields[0]), std::string(fields[1])});
    }
    if (!header_seen) {
        throw FormatError("line 1: group file must start with 'participant_id,group_label'");
    }
    return assignments;
}

std::string serialize_group_assignments(const std::vector<GroupAssignment>& assignments) {
    std::string out = "participant_id,group_label\n";
    for (const auto& a : assignments) {
        out += a.participant_id + "," + a.group_label + "\n";
    }
    return out;
}

}  // namespace gazemetry
