#pragma once

#include "gazemetry/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace gazemetry {

// Gaze-TSV interchange format: UTF-8, first line is this exact header, then
// one tab-separated data row per raw sample. An empty string in any of an
// eye's six columns marks that eye invalid at that row; the two gaze2d
// columns may both be empty. Decimal point '.', no thousands separators.
inline constexpr std::string_view kGazeTsvHeader =
    "timestamp_ms\t"
    "left_eye_x_mm\tleft_eye_y_mm\tleft_eye_z_mm\t"
    "left_gaze_x_mm\tleft_gaze_y_mm\tleft_gaze_z_mm\t"
    "right_eye_x_mm\tright_eye_y_mm\tright_eye_z_mm\t"
    "right_gaze_x_mm\tright_gaze_y_mm\tright_gaze_z_mm\t"
    "gaze2d_x\tgaze2d_y";

/// Parse Gaze-TSV content into a Recording.
///
/// Line numbers in error messages are 1-based and count the header line.
/// Throws FormatError for a bad header, field count, or non-numeric field,
/// and OrderingError for non-increasing timestamps. An eye whose gaze point
/// coincides with its eye position (zero-length gaze vector) is marked
/// invalid rather than rejected.
Recording parse_recording(std::string_view text, std::string participant_id,
                          double nominal_rate_hz = 100.0);

/// Serialize a Recording back to Gaze-TSV. Numbers are written with shortest
/// round-trip precision, so parse(serialize(parse(x))) == parse(x).
std::string serialize_recording(const Recording& recording);

/// Parse a group-assignment CSV (`participant_id,group_label`, header
/// required). Duplicate participant ids are a FormatError.
std::vector<GroupAssignment> parse_group_assignments(std::string_view csv_text);

std::string serialize_group_assignments(const std::vector<GroupAssignment>& assignments);

}  // namespace gazemetry
