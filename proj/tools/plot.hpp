#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vabench/metrics.hpp"

namespace vabench::app {

/// Test site x metric panel lattice; inside each panel one bar group per
/// training site, one colored bar per algorithm. Uses rows whose replicate
/// equals `replicate` (0 for the unresampled design, -1 for replicate means).
std::string render_grid_svg(const std::vector<MetricsRow>& rows, int replicate,
                            const std::string& title, const std::string& manifest_ref);

/// Stacked variance-proportion bars, one panel per experiment and one bar per
/// metric (per metric and test site for per-test-site documents).
std::string render_variance_svg(const std::vector<nlohmann::json>& decompose_docs, bool per_test_site,
                                const std::string& manifest_ref);

/// ANOVA p-value of the training-site effect against the Friedman p-value,
/// one point per (experiment, metric, test site).
std::string render_pvalue_svg(const std::vector<nlohmann::json>& decompose_docs,
                              const std::string& manifest_ref);

}  // namespace vabench::app
