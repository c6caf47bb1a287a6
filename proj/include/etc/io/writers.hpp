#pragma once

#include "etc/analysis/analysis.hpp"
#include "etc/sim/scenario.hpp"
#include "etc/sim/simulator.hpp"
#include "etc/triggering/certificate.hpp"

#include <optional>
#include <string>

namespace etc::io {

/// Header then one row per logged instant; 12 significant digits, LF endings.
std::string write_csv(const sim::SimulationResult& result);

/// `key: value` lines for every IssCertificate field.
std::string certificate_lines(const trig::IssCertificate& cert);
std::string trigger_table(const std::string& prefix, const analysis::TriggerStats& stats);

struct RunReport {
    std::string scenario;
    std::optional<trig::IssCertificate> certificate;
    std::string certificate_error;  // when the certificate could not be built
    analysis::TriggerStats stats;
    analysis::ConvergenceReport convergence;
};

std::string write_report(const RunReport& r);

std::string write_compare_report(const std::string& scenario, const analysis::TriggerStats& event_stats,
                                 const analysis::TriggerStats& periodic_stats, double delta,
                                 const analysis::ConvergenceReport& event_conv,
                                 const analysis::ConvergenceReport& periodic_conv);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws IoError.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace etc::io
