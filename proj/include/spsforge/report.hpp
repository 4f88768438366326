#pragma once

#include <string>

#include "spsforge/document.hpp"
#include "spsforge/search.hpp"

namespace spsforge {

inline constexpr int kReportSchemaVersion = 1;

Json order_to_json(const FiniteOrder& order);
Json enumeration_stats_json(const EnumerationStats& stats);

/// Wall time is only included on request so reports stay byte-stable.
Json search_report_json(const SearchReport& report, bool include_timing = false);
Json verification_report_json(const VerificationReport& report);

/// Counts, join-irreducible congruences as partitions, and optionally the
/// ji order covers and the colour palette of every 4-cell.
std::string congruence_report_text(const PlanarDiagram& diagram, bool ji_order, bool colors);

}  // namespace spsforge
