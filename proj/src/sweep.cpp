#include "gazemetry/sweep.hpp"

#include "gazemetry/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace gazemetry {

std::vector<double> default_thresholds() {
    std::vector<double> thresholds;
    for (int t = 10; t <= 150; t += 10) {
        thresholds.push_back(static_cast<double>(t));
    }
    return thresholds;
}

bool is_named_default(double threshold_deg_s) {
    return threshold_deg_s == 30.0 || threshold_deg_s == 100.0;
}

const SweepCell* SweepTable::find(const std::string& participant_id,
                                  double threshold_deg_s, bool merging) const {
    for (const SweepCell& cell : cells) {
        if (cell.participant_id == participant_id &&
            cell.threshold_deg_s == threshold_deg_s && cell.merging == merging) {
            return &cell;
        }
    }
    return nullptr;
}

SweepTable run_sweep(const std::vector<Recording>& recordings,
                     std::vector<double> thresholds, std::vector<bool> merge_settings,
                     const IvtConfig& base_config) {
    if (recordings.empty()) {
        throw InsufficientDataError("sweep needs at least one recording");
    }
    if (thresholds.empty()) {
        throw ConfigError("sweep needs at least one threshold");
    }
    for (double t : thresholds) {
        if (!(std::isfinite(t) && t > 0.0)) {
            throw ConfigError("sweep thresholds must be finite and > 0");
        }
    }
    if (merge_settings.empty()) {
        throw ConfigError("sweep needs at least one merge setting");
    }

    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    // Normalize to false-before-true.
    const bool has_off = std::find(merge_settings.begin(), merge_settings.end(), false) !=
                         merge_settings.end();
    const bool has_on = std::find(merge_settings.begin(), merge_settings.end(), true) !=
                        merge_settings.end();
    merge_settings.clear();
    if (has_off) merge_settings.push_back(false);
    if (has_on) merge_settings.push_back(true);

    // Deterministic participant order regardless of input order.
    std::vector<const Recording*> ordered;
    ordered.reserve(recordings.size());
    for (const Recording& r : recordings) {
        ordered.push_back(&r);
    }
    std::sort(ordered.begin(), ordered.end(), [](const Recording* a, const Recording* b) {
        return a->participant_id < b->participant_id;
    });
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (ordered[i]->participant_id == ordered[i - 1]->participant_id) {
            throw FormatError("duplicate participant id '" + ordered[i]->participant_id + "'");
        }
    }

    SweepTable table;
    table.thresholds = thresholds;
    table.merge_settings = merge_settings;
    table.cells.reserve(ordered.size() * thresholds.size() * merge_settings.size());

    for (const Recording* recording : ordered) {
        table.participant_ids.push_back(recording->participant_id);
        // One velocity stream per recording, re-labeled per threshold.
        const std::vector<MidpointSample> stream = velocity_stream(*recording);
        const double duration_ms = recording->span_ms();

        for (double threshold : thresholds) {
            const std::vector<EventKind> labels = label_stream(stream, threshold);
            const std::vector<EventGroup> unmerged = group_events(stream, labels);

            for (bool merging : merge_settings) {
                IvtConfig config = base_config;
                config.velocity_threshold_deg_s = threshold;
                config.merging_enabled = merging;
                validate_config(config);

                const std::vector<EventGroup>* groups = &unmerged;
                std::vector<EventGroup> merged;
                if (merging) {
                    merged = merge_fixations(unmerged, config);
                    groups = &merged;
                }

                SweepCell cell;
                cell.participant_id = recording->participant_id;
                cell.threshold_deg_s = threshold;
                cell.merging = merging;
                try {
                    cell.metrics =
                        person_metrics(*groups, recording->participant_id, duration_ms);
                } catch (const ZeroFixationError&) {
                    cell.metrics.reset();  // explicit undefined-GRI marker
                }
                table.cells.push_back(std::move(cell));
            }
        }
    }
    return table;
}

namespace {

void require_grid_point(const SweepTable& table, double threshold_deg_s, bool merging) {
    if (std::find(table.thresholds.begin(), table.thresholds.end(), threshold_deg_s) ==
        table.thresholds.end()) {
        std::ostringstream msg;
        msg << "threshold " << threshold_deg_s << " not in sweep table";
        throw LookupError(msg.str());
    }
    if (std::find(table.merge_settings.begin(), table.merge_settings.end(), merging) ==
        table.merge_settings.end()) {
        throw LookupError(std::string("merge setting '") + (merging ? "on" : "off") +
                          "' not in sweep table");
    }
}

}  // namespace

std::vector<std::string> rank_order(const SweepTable& table, double threshold_deg_s,
                                    bool merging) {
    require_grid_point(table, threshold_deg_s, merging);
    std::vector<std::pair<double, std::string>> ranked;
    for (const SweepCell& cell : table.cells) {
        if (cell.threshold_deg_s == threshold_deg_s && cell.merging == merging &&
            cell.metrics) {
            ranked.emplace_back(cell.metrics->gri, cell.participant_id);
        }
    }
    std::sort(ranked.begin(), ranked.end());  // GRI ascending, id breaks ties
    std::vector<std::string> order;
    order.reserve(ranked.size());
    for (auto& [gri, id] : ranked) {
        order.push_back(std::move(id));
    }
    return order;
}

std::vector<GroupMetrics> group_contrast(const SweepTable& table,
                                         const std::vector<GroupAssignment>& assignments,
                                         double threshold_deg_s, bool merging) {
    require_grid_point(table, threshold_deg_s, merging);

    std::map<std::string, std::string> label_by_id;
    for (const GroupAssignment& a : assignments) {
        label_by_id[a.participant_id] = a.group_label;
    }
    for (const std::string& id : table.participant_ids) {
        if (label_by_id.find(id) == label_by_id.end()) {
            throw AssignmentError("participant '" + id + "' has no group assignment");
        }
    }

    std::map<std::string, std::vector<PersonMetrics>> members;  // ordered by label
    for (const SweepCell& cell : table.cells) {
        if (cell.threshold_deg_s == threshold_deg_s && cell.merging == merging) {
            if (cell.metrics) {
                members[label_by_id[cell.participant_id]].push_back(*cell.metrics);
            } else {
                members[label_by_id[cell.participant_id]];  // keep the group visible
            }
        }
    }

    std::vector<GroupMetrics> contrasts;
    contrasts.reserve(members.size());
    for (const auto& [label, list] : members) {
        contrasts.push_back(group_metrics(list, label));
    }
    return contrasts;
}

}  // namespace gazemetry
