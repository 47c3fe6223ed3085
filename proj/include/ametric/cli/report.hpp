#pragma once

#include <nlohmann/json.hpp>

#include "ametric/core.hpp"
#include "ametric/solver.hpp"
#include "ametric/zamfirescu.hpp"

namespace ametric::cli {

using ordered_json = nlohmann::ordered_json;

/// Finite doubles as numbers; infinities as "inf"/"-inf"; NaN as null.
ordered_json number_json(double v);
ordered_json point_json(const Point& p);

/// At most `max_violations` violations are listed; n_violations carries the total.
ordered_json to_json(const CheckReport& report, std::size_t max_violations = 20);
ordered_json to_json(const BranchConstants& bc);
ordered_json to_json(const ZamfirescuCertificate& cert);
ordered_json trace_summary(const PicardTrace& trace);
ordered_json to_json(const CauchyReport& report);

}  // namespace ametric::cli
